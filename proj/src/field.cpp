#include "embedfield/field.hpp"

#include <algorithm>

namespace embedfield {

std::string to_string(const Shape& shape) {
  return "(" + std::to_string(shape.elements) + ", " + std::to_string(shape.components) + ")";
}

FieldBuffer::FieldBuffer(std::size_t elements, std::size_t components, double fill)
    : elements_(elements), components_(components), data_(elements * components, fill) {
  if (components == 0) throw ShapeMismatch("FieldBuffer: component count must be positive");
}

FieldBuffer::FieldBuffer(std::size_t elements, std::size_t components, std::vector<double> data)
    : elements_(elements), components_(components), data_(std::move(data)) {
  if (components == 0) throw ShapeMismatch("FieldBuffer: component count must be positive");
  if (data_.size() != elements * components) {
    throw ShapeMismatch("FieldBuffer: " + std::to_string(data_.size()) +
                        " values cannot fill shape " + to_string({elements, components}));
  }
}

FieldBuffer FieldBuffer::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t c = n == 0 ? 1 : rows.begin()->size();
  std::vector<double> flat;
  flat.reserve(n * c);
  for (const auto& r : rows) {
    if (r.size() != c) throw ShapeMismatch("FieldBuffer::from_rows: ragged rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return FieldBuffer(n, c, std::move(flat));
}

// Copies and moves never carry pins: a pin belongs to the storage a lease
// points at, not to the value.
FieldBuffer::FieldBuffer(const FieldBuffer& other)
    : elements_(other.elements_), components_(other.components_), data_(other.data_) {}

FieldBuffer& FieldBuffer::operator=(const FieldBuffer& other) {
  if (this != &other) {
    require_unpinned("copy-assign");
    elements_ = other.elements_;
    components_ = other.components_;
    data_ = other.data_;
  }
  return *this;
}

FieldBuffer::FieldBuffer(FieldBuffer&& other) noexcept
    : elements_(other.elements_), components_(other.components_), data_(std::move(other.data_)) {
  other.elements_ = 0;
  other.data_.clear();
}

FieldBuffer& FieldBuffer::operator=(FieldBuffer&& other) {
  if (this != &other) {
    require_unpinned("move-assign");
    elements_ = other.elements_;
    components_ = other.components_;
    data_ = std::move(other.data_);
    other.elements_ = 0;
    other.data_.clear();
  }
  return *this;
}

void FieldBuffer::resize(std::size_t elements, std::size_t components) {
  require_unpinned("resize");
  if (components == 0) throw ShapeMismatch("FieldBuffer: component count must be positive");
  elements_ = elements;
  components_ = components;
  data_.assign(elements * components, 0.0);
}

void FieldBuffer::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

void FieldBuffer::unpin() const {
  if (pins_ == 0) throw std::logic_error("FieldBuffer::unpin: buffer is not pinned");
  --pins_;
}

void FieldBuffer::require_unpinned(const char* what) const {
  if (pins_ > 0) {
    throw std::logic_error(std::string("FieldBuffer: cannot ") + what +
                           " while the buffer is published by reference");
  }
}

void require_components(const FieldBuffer& field, std::size_t components, const char* op) {
  if (field.components() != components) {
    throw ShapeMismatch(std::string(op) + ": expected " + std::to_string(components) +
                        " components, got " + std::to_string(field.components()));
  }
}

}  // namespace embedfield
