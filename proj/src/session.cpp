#include "embedfield/session.hpp"

#include <pybind11/embed.h>
#include <pybind11/numpy.h>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "embedfield/guest_sources.hpp"

namespace py = pybind11;

namespace embedfield {

std::string_view to_string(GuestErrorKind kind) {
  switch (kind) {
    case GuestErrorKind::InitFailure: return "InitFailure";
    case GuestErrorKind::ScriptNotFound: return "ScriptNotFound";
    case GuestErrorKind::SyntaxError: return "SyntaxError";
    case GuestErrorKind::RuntimeError: return "RuntimeError";
    case GuestErrorKind::NameMissing: return "NameMissing";
    case GuestErrorKind::ShapeMismatch: return "ShapeMismatch";
    case GuestErrorKind::TypeMismatch: return "TypeMismatch";
  }
  return "?";
}

GuestError::GuestError(GuestErrorKind kind, std::string message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      message_(message.empty() ? std::string(to_string(kind)) : std::move(message)) {}

std::string_view to_string(TransferStrategy strategy) {
  switch (strategy) {
    case TransferStrategy::PerElementCopy: return "per-element";
    case TransferStrategy::WholeFieldCopy: return "whole-field";
    case TransferStrategy::ByReference: return "by-ref";
  }
  return "?";
}

std::optional<TransferStrategy> parse_strategy(std::string_view text) {
  for (auto s : kAllStrategies) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

ScriptSource ScriptSource::file(std::filesystem::path path) {
  ScriptSource s;
  s.is_file_ = true;
  s.label_ = path.string();
  s.path_ = std::move(path);
  return s;
}

ScriptSource ScriptSource::text(std::string code, std::string label) {
  ScriptSource s;
  s.code_ = std::move(code);
  s.label_ = std::move(label);
  return s;
}

namespace {

struct LeaseRecord {
  std::string name;
  const FieldBuffer* buffer = nullptr;
};

struct BridgeState {
  bool interpreter_owned = false;
  std::thread::id interpreter_thread;
  bool live = false;
  std::uint64_t generation = 0;
  std::thread::id owner;
  py::object scope;
  py::object compile;
  py::object exec;
  std::map<std::uint64_t, LeaseRecord> leases;
  std::uint64_t next_lease = 1;
  CopyCounters counters;
};

// Intentionally leaked: it holds Python references that must be dropped
// before the interpreter is finalized, which happens from atexit.
BridgeState& state() {
  static auto* s = new BridgeState;
  return *s;
}

void finalize_at_exit() {
  auto& st = state();
  if (!st.interpreter_owned || !Py_IsInitialized()) return;
  if (st.interpreter_thread != std::this_thread::get_id()) return;
  st.leases.clear();
  st.scope = py::object();
  st.compile = py::object();
  st.exec = py::object();
  // Not py::finalize_interpreter(): it reaches into pybind11 statics that
  // static destruction has already torn down by the time atexit runs.
  Py_FinalizeEx();
  st.interpreter_owned = false;
}

std::string format_guest_error(py::error_already_set& e) {
  try {
    py::object lines = py::module_::import("traceback")
                           .attr("format_exception")(e.type(), e.value(), e.trace());
    std::string text = py::str("").attr("join")(lines).cast<std::string>();
    while (!text.empty() && text.back() == '\n') text.pop_back();
    if (!text.empty()) return text;
  } catch (...) {
  }
  std::string fallback = e.what();
  return fallback.empty() ? "guest raised an exception" : fallback;
}

[[noreturn]] void rethrow_guest(py::error_already_set& e, GuestErrorKind kind,
                                bool syntax_is_distinct = false) {
  if (syntax_is_distinct && e.matches(PyExc_SyntaxError)) kind = GuestErrorKind::SyntaxError;
  throw GuestError(kind, format_guest_error(e));
}

// Any guest exception becomes a GuestError of the given kind.
template <typename F>
auto guarded(GuestErrorKind kind, F&& body) {
  try {
    return body();
  } catch (py::error_already_set& e) {
    rethrow_guest(e, kind);
  } catch (const py::cast_error& e) {
    throw GuestError(GuestErrorKind::TypeMismatch, e.what());
  }
}

constexpr std::array<std::string_view, 35> kKeywords = {
    "False", "None",   "True",    "and",      "as",       "assert", "async",  "await",    "break",
    "class", "continue", "def",   "del",      "elif",     "else",   "except", "finally",  "for",
    "from",  "global", "if",      "import",   "in",       "is",     "lambda", "nonlocal", "not",
    "or",    "pass",   "raise",   "return",   "try",      "while",  "with",   "yield"};

void require_identifier(std::string_view name) {
  auto head = [](char c) { return c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
  const bool ok = !name.empty() && head(name.front()) &&
                  std::all_of(name.begin() + 1, name.end(), tail) &&
                  std::find(kKeywords.begin(), kKeywords.end(), name) == kKeywords.end();
  if (!ok) {
    throw GuestError(GuestErrorKind::RuntimeError,
                     "'" + std::string(name) + "' is not a valid guest identifier");
  }
}

py::str key(std::string_view name) { return py::str(name.data(), name.size()); }

bool is_internal(const std::string& name) {
  return name.rfind(guest::kInternalPrefix, 0) == 0 ||
         (name.size() > 4 && name.rfind("__", 0) == 0 &&
          name.compare(name.size() - 2, 2, "__") == 0);
}

void purge_scope(BridgeState& st) {
  py::dict scope = st.scope;
  std::vector<std::string> doomed;
  for (auto item : scope) {
    auto name = py::cast<std::string>(item.first);
    if (!(name.size() > 4 && name.rfind("__", 0) == 0 &&
          name.compare(name.size() - 2, 2, "__") == 0)) {
      doomed.push_back(std::move(name));
    }
  }
  for (const auto& name : doomed) PyDict_DelItemString(scope.ptr(), name.c_str());
  py::module_::import("gc").attr("collect")();
}

void run_code(BridgeState& st, const std::string& code, const std::string& label) {
  py::object compiled = st.compile(py::str(code), py::str(label), py::str("exec"));
  st.exec(compiled, st.scope);
}

py::object lookup(BridgeState& st, std::string_view name) {
  PyObject* found = PyDict_GetItemWithError(st.scope.ptr(), key(name).ptr());
  if (found == nullptr) {
    if (PyErr_Occurred()) throw py::error_already_set();
    throw GuestError(GuestErrorKind::NameMissing,
                     "guest scope has no name '" + std::string(name) + "'");
  }
  return py::reinterpret_borrow<py::object>(found);
}

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

DoubleArray as_double_array(const py::object& obj, std::string_view name) {
  auto arr = DoubleArray::ensure(obj);
  if (!arr) {
    PyErr_Clear();
    throw GuestError(GuestErrorKind::TypeMismatch, "guest value '" + std::string(name) +
                                                       "' is not a numeric array");
  }
  return arr;
}

}  // namespace

// ---------------------------------------------------------------------------
// RefLease

RefLease::RefLease(RefLease&& other) noexcept
    : id_(std::exchange(other.id_, 0)),
      generation_(other.generation_),
      name_(std::move(other.name_)),
      address_(other.address_),
      shape_(other.shape_) {}

RefLease& RefLease::operator=(RefLease&& other) noexcept {
  if (this != &other) {
    if (active()) {
      try {
        release();
      } catch (...) {
      }
    }
    id_ = std::exchange(other.id_, 0);
    generation_ = other.generation_;
    name_ = std::move(other.name_);
    address_ = other.address_;
    shape_ = other.shape_;
  }
  return *this;
}

RefLease::~RefLease() {
  if (active()) {
    try {
      release();
    } catch (...) {
    }
  }
}

bool RefLease::active() const {
  const auto& st = state();
  return id_ != 0 && st.live && st.generation == generation_ && st.leases.count(id_) != 0;
}

void RefLease::release() {
  auto& st = state();
  if (!active()) {
    throw GuestError(GuestErrorKind::RuntimeError,
                     "lease '" + name_ + "' is not active (already released?)");
  }
  if (st.owner != std::this_thread::get_id()) {
    throw GuestError(GuestErrorKind::RuntimeError, "lease released from a non-owner thread");
  }
  auto it = st.leases.find(id_);
  py::dict scope = st.scope;
  for (const std::string& n : {name_, name_ + "_address", name_ + "_shape"}) {
    if (PyDict_DelItemString(scope.ptr(), n.c_str()) != 0) PyErr_Clear();
  }
  it->second.buffer->unpin();
  st.leases.erase(it);
}

// ---------------------------------------------------------------------------
// Session lifecycle

Session Session::open() {
  auto& st = state();
  if (st.live) {
    throw GuestError(GuestErrorKind::RuntimeError,
                     "a guest session is already open in this process");
  }
  if (!Py_IsInitialized()) {
    try {
      py::initialize_interpreter();
    } catch (const std::exception& e) {
      throw GuestError(GuestErrorKind::InitFailure, e.what());
    }
    st.interpreter_owned = true;
    st.interpreter_thread = std::this_thread::get_id();
    std::atexit(finalize_at_exit);
  } else if (!st.interpreter_owned) {
    throw GuestError(GuestErrorKind::InitFailure,
                     "a Python interpreter is already running and is not owned by this bridge");
  }
  if (st.interpreter_thread != std::this_thread::get_id()) {
    throw GuestError(GuestErrorKind::InitFailure,
                     "the guest interpreter is bound to the thread that first opened it");
  }

  try {
    py::module_ builtins = py::module_::import("builtins");
    st.compile = builtins.attr("compile");
    st.exec = builtins.attr("exec");
    st.scope = py::module_::import("__main__").attr("__dict__");
    run_code(st, std::string(guest::kViewPreamble), "<embedfield-preamble>");
  } catch (py::error_already_set& e) {
    throw GuestError(GuestErrorKind::InitFailure, format_guest_error(e));
  }

  st.live = true;
  st.owner = std::this_thread::get_id();
  st.counters = {};
  return Session(++st.generation);
}

Session::Session(Session&& other) noexcept : generation_(std::exchange(other.generation_, 0)) {}

Session& Session::operator=(Session&& other) noexcept {
  if (this != &other) {
    shutdown();
    generation_ = std::exchange(other.generation_, 0);
  }
  return *this;
}

Session::~Session() { shutdown(); }

void Session::shutdown() noexcept {
  if (!live()) return;
  auto& st = state();
  if (st.owner != std::this_thread::get_id()) return;
  try {
    for (auto& [id, rec] : st.leases) {
      py::dict scope = st.scope;
      for (const std::string& n : {rec.name, rec.name + "_address", rec.name + "_shape"}) {
        if (PyDict_DelItemString(scope.ptr(), n.c_str()) != 0) PyErr_Clear();
      }
      rec.buffer->unpin();
    }
    st.leases.clear();
    close();
  } catch (...) {
  }
}

bool Session::live() const {
  const auto& st = state();
  return generation_ != 0 && st.live && st.generation == generation_;
}

void Session::require_usable(const char* op) const {
  const auto& st = state();
  if (!live()) {
    throw GuestError(GuestErrorKind::RuntimeError,
                     std::string(op) + ": session is closed or was never opened");
  }
  if (st.owner != std::this_thread::get_id()) {
    throw GuestError(GuestErrorKind::RuntimeError,
                     std::string(op) + ": sessions may only be used from the thread that opened them");
  }
}

void Session::close() {
  require_usable("close_session");
  auto& st = state();
  if (!st.leases.empty()) {
    throw GuestError(GuestErrorKind::RuntimeError,
                     "close_session: " + std::to_string(st.leases.size()) +
                         " by-reference lease(s) still active");
  }
  guarded(GuestErrorKind::RuntimeError, [&] { purge_scope(st); });
  st.live = false;
  generation_ = 0;
}

// ---------------------------------------------------------------------------
// Code execution

void Session::load_script(const ScriptSource& source) {
  require_usable("load_script");
  auto& st = state();
  std::string code;
  if (source.is_file()) {
    std::ifstream in(source.path(), std::ios::binary);
    if (!in || std::filesystem::is_directory(source.path())) {
      throw GuestError(GuestErrorKind::ScriptNotFound,
                       "script not found: " + source.path().string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    code = buf.str();
  } else {
    code = source.code();
  }
  try {
    run_code(st, code, source.label());
  } catch (py::error_already_set& e) {
    rethrow_guest(e, GuestErrorKind::RuntimeError, /*syntax_is_distinct=*/true);
  }
}

void Session::exec(std::string_view statement) {
  require_usable("exec_statement");
  auto& st = state();
  guarded(GuestErrorKind::RuntimeError, [&] {
    py::exec(py::str(statement.data(), statement.size()), st.scope);
  });
}

// ---------------------------------------------------------------------------
// Scalars

void Session::set_scalar(std::string_view name, double value) {
  require_usable("set_scalar");
  require_identifier(name);
  auto& st = state();
  guarded(GuestErrorKind::RuntimeError, [&] {
    if (PyDict_SetItem(st.scope.ptr(), key(name).ptr(), py::float_(value).ptr()) != 0) {
      throw py::error_already_set();
    }
  });
}

double Session::get_scalar(std::string_view name) {
  require_usable("get_scalar");
  auto& st = state();
  return guarded(GuestErrorKind::RuntimeError, [&] {
    py::object obj = lookup(st, name);
    if (PyUnicode_Check(obj.ptr()) || PyBytes_Check(obj.ptr()) || !PyNumber_Check(obj.ptr())) {
      throw GuestError(GuestErrorKind::TypeMismatch,
                       "guest value '" + std::string(name) + "' is not numeric");
    }
    const double v = PyFloat_AsDouble(obj.ptr());
    if (v == -1.0 && PyErr_Occurred()) {
      PyErr_Clear();
      throw GuestError(GuestErrorKind::TypeMismatch, "guest value '" + std::string(name) +
                                                         "' cannot be read as a float");
    }
    return v;
  });
}

bool Session::has_name(std::string_view name) {
  require_usable("has_name");
  auto& st = state();
  return guarded(GuestErrorKind::RuntimeError, [&] {
    return PyDict_Contains(st.scope.ptr(), key(name).ptr()) == 1;
  });
}

std::vector<std::string> Session::user_names() {
  require_usable("user_names");
  auto& st = state();
  std::vector<std::string> names;
  guarded(GuestErrorKind::RuntimeError, [&] {
    for (auto item : py::dict(st.scope)) {
      auto n = py::cast<std::string>(item.first);
      if (!is_internal(n)) names.push_back(std::move(n));
    }
  });
  std::sort(names.begin(), names.end());
  return names;
}

// ---------------------------------------------------------------------------
// Copy transfers

void Session::put_field_copy(std::string_view name, const FieldBuffer& field) {
  require_usable("put_field_copy");
  require_identifier(name);
  auto& st = state();
  guarded(GuestErrorKind::RuntimeError, [&] {
    const auto n = static_cast<py::ssize_t>(field.elements());
    const auto c = static_cast<py::ssize_t>(field.components());
    py::array_t<double> arr = field.components() == 1 ? py::array_t<double>({n})
                                                        : py::array_t<double>({n, c});
    const std::size_t bytes = field.size() * sizeof(double);
    if (bytes != 0) std::memcpy(arr.mutable_data(), field.data(), bytes);
    if (PyDict_SetItem(st.scope.ptr(), key(name).ptr(), arr.ptr()) != 0) {
      throw py::error_already_set();
    }
    ++st.counters.field_puts;
    st.counters.bytes_to_guest += bytes;
  });
}

FieldBuffer Session::get_field_copy(std::string_view name, Shape expected) {
  require_usable("get_field_copy");
  auto& st = state();
  return guarded(GuestErrorKind::RuntimeError, [&] {
    DoubleArray arr = as_double_array(lookup(st, name), name);
    const auto n = static_cast<py::ssize_t>(expected.elements);
    const auto c = static_cast<py::ssize_t>(expected.components);
    const bool matches =
        (arr.ndim() == 2 && arr.shape(0) == n && arr.shape(1) == c) ||
        (arr.ndim() == 1 && expected.components == 1 && arr.shape(0) == n);
    if (!matches) {
      std::string got = "(";
      for (py::ssize_t d = 0; d < arr.ndim(); ++d) {
        got += (d ? ", " : "") + std::to_string(arr.shape(d));
      }
      if (arr.ndim() == 1) got += ",";
      got += ")";
      throw GuestError(GuestErrorKind::ShapeMismatch, "guest array '" + std::string(name) +
                                                          "' has shape " + got + ", expected " +
                                                          to_string(expected));
    }
    FieldBuffer out(expected.elements, expected.components);
    const std::size_t bytes = out.size() * sizeof(double);
    if (bytes != 0) std::memcpy(out.data(), arr.data(), bytes);
    ++st.counters.field_gets;
    st.counters.bytes_from_guest += bytes;
    return out;
  });
}

void Session::put_element(std::string_view name, const FieldBuffer& field, std::size_t index) {
  require_usable("put_element");
  require_identifier(name);
  if (index >= field.elements()) {
    throw GuestError(GuestErrorKind::ShapeMismatch,
                     "put_element: index " + std::to_string(index) + " out of range for " +
                         std::to_string(field.elements()) + " elements");
  }
  auto& st = state();
  guarded(GuestErrorKind::RuntimeError, [&] {
    const auto row = field.row(index);
    py::object value;
    if (row.size() == 1) {
      value = py::float_(row[0]);
    } else {
      py::array_t<double> arr(static_cast<py::ssize_t>(row.size()));
      std::memcpy(arr.mutable_data(), row.data(), row.size_bytes());
      value = std::move(arr);
    }
    if (PyDict_SetItem(st.scope.ptr(), key(name).ptr(), value.ptr()) != 0) {
      throw py::error_already_set();
    }
    ++st.counters.element_puts;
    st.counters.bytes_to_guest += row.size_bytes();
  });
}

std::vector<double> Session::get_element(std::string_view name, std::size_t components) {
  require_usable("get_element");
  auto& st = state();
  return guarded(GuestErrorKind::RuntimeError, [&] {
    py::object obj = lookup(st, name);
    std::vector<double> out;
    if (components == 1 && (PyFloat_Check(obj.ptr()) || PyLong_Check(obj.ptr()))) {
      out.push_back(PyFloat_AsDouble(obj.ptr()));
      if (PyErr_Occurred()) throw py::error_already_set();
    } else {
      DoubleArray arr = as_double_array(obj, name);
      if (static_cast<std::size_t>(arr.size()) != components) {
        throw GuestError(GuestErrorKind::ShapeMismatch,
                         "guest element '" + std::string(name) + "' has " +
                             std::to_string(arr.size()) + " values, expected " +
                             std::to_string(components));
      }
      out.assign(arr.data(), arr.data() + arr.size());
    }
    ++st.counters.element_gets;
    st.counters.bytes_from_guest += out.size() * sizeof(double);
    return out;
  });
}

// ---------------------------------------------------------------------------
// By-reference publication

RefLease Session::publish_by_ref(std::string_view name, FieldBuffer& field) {
  return publish(name, field, true);
}

RefLease Session::publish_by_ref(std::string_view name, const FieldBuffer& field) {
  return publish(name, field, false);
}

RefLease Session::publish(std::string_view name, const FieldBuffer& field, bool writable) {
  require_usable("publish_field_by_ref");
  require_identifier(name);
  auto& st = state();
  const std::string base(name);
  const auto address = reinterpret_cast<std::uintptr_t>(field.data());
  if (address % alignof(double) != 0) {
    throw GuestError(GuestErrorKind::RuntimeError, "publish_field_by_ref: buffer is misaligned");
  }
  const Shape shape = field.shape();

  try {
    py::dict scope = st.scope;
    scope[key(base + "_address")] = py::int_(static_cast<std::size_t>(address));
    scope[key(base + "_shape")] = py::make_tuple(shape.elements, shape.components);
    const std::string stmt = base + " = " + std::string(guest::kViewHelper) + "(" + base +
                             "_address, " + base + "_shape" + (writable ? ")" : ", False)");
    py::exec(py::str(stmt), st.scope);
  } catch (py::error_already_set& e) {
    std::string message = format_guest_error(e);
    for (const std::string& n : {base, base + "_address", base + "_shape"}) {
      if (PyDict_DelItemString(st.scope.ptr(), n.c_str()) != 0) PyErr_Clear();
    }
    throw GuestError(GuestErrorKind::RuntimeError, std::move(message));
  }

  field.pin();
  const std::uint64_t id = st.next_lease++;
  st.leases.emplace(id, LeaseRecord{base, &field});
  return RefLease(id, generation_, base, address, shape);
}

std::size_t Session::active_leases() const {
  return live() ? state().leases.size() : 0;
}

const CopyCounters& Session::counters() const { return state().counters; }

void Session::reset_counters() { state().counters = {}; }

}  // namespace embedfield
