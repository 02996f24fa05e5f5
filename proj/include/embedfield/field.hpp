#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace embedfield {

/// Raised by field operations when buffer shapes disagree with a contract.
class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// (n_elements, n_components) of a field.
struct Shape {
  std::size_t elements = 0;
  std::size_t components = 1;

  std::size_t size() const { return elements * components; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& shape);

/// Component slots of a packed symmetric 3x3 tensor: [xx, yy, zz, xy, yz, zx].
/// Diagonal terms come first so a trace is the sum of slots 0..2.
namespace symm {
inline constexpr std::size_t xx = 0;
inline constexpr std::size_t yy = 1;
inline constexpr std::size_t zz = 2;
inline constexpr std::size_t xy = 3;
inline constexpr std::size_t yz = 4;
inline constexpr std::size_t zx = 5;
inline constexpr std::size_t size = 6;
}  // namespace symm

/// Contiguous row-major field of 64-bit floats. Element i, component j lives
/// at flat index i * components + j.
///
/// A buffer can be pinned while its address is published to foreign code.
/// Pinned buffers refuse every operation that could reallocate storage, and
/// must not be moved or destroyed until unpinned.
class FieldBuffer {
 public:
  FieldBuffer() = default;
  FieldBuffer(std::size_t elements, std::size_t components, double fill = 0.0);
  FieldBuffer(std::size_t elements, std::size_t components, std::vector<double> data);

  /// Builds an n x c buffer from nested rows; all rows must have equal length.
  static FieldBuffer from_rows(std::initializer_list<std::initializer_list<double>> rows);

  FieldBuffer(const FieldBuffer& other);
  FieldBuffer& operator=(const FieldBuffer& other);
  FieldBuffer(FieldBuffer&& other) noexcept;
  FieldBuffer& operator=(FieldBuffer&& other);
  ~FieldBuffer() = default;

  Shape shape() const { return {elements_, components_}; }
  std::size_t elements() const { return elements_; }
  std::size_t components() const { return components_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t element, std::size_t component) {
    return data_[element * components_ + component];
  }
  double operator()(std::size_t element, std::size_t component) const {
    return data_[element * components_ + component];
  }
  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  std::span<double> row(std::size_t element) {
    return {data_.data() + element * components_, components_};
  }
  std::span<const double> row(std::size_t element) const {
    return {data_.data() + element * components_, components_};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  /// Reshapes and zero-fills. Throws std::logic_error while pinned.
  void resize(std::size_t elements, std::size_t components);
  void fill(double value);

  void pin() const { ++pins_; }
  void unpin() const;
  bool pinned() const { return pins_ > 0; }

  friend bool operator==(const FieldBuffer& a, const FieldBuffer& b) {
    return a.elements_ == b.elements_ && a.components_ == b.components_ && a.data_ == b.data_;
  }

 private:
  void require_unpinned(const char* what) const;

  std::size_t elements_ = 0;
  std::size_t components_ = 1;
  std::vector<double> data_;
  mutable std::size_t pins_ = 0;
};

/// Throws ShapeMismatch unless field has exactly `components` per element.
void require_components(const FieldBuffer& field, std::size_t components, const char* op);

}  // namespace embedfield
