#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "embedfield/field.hpp"

namespace embedfield {

enum class GuestErrorKind {
  InitFailure,
  ScriptNotFound,
  SyntaxError,
  RuntimeError,
  NameMissing,
  ShapeMismatch,
  TypeMismatch,
};

std::string_view to_string(GuestErrorKind kind);

/// Any failure crossing the host/guest boundary. Guest exceptions arrive
/// here with the formatted guest traceback as the message.
class GuestError : public std::runtime_error {
 public:
  GuestError(GuestErrorKind kind, std::string message);
  GuestErrorKind kind() const { return kind_; }
  const std::string& message() const { return message_; }

 private:
  GuestErrorKind kind_;
  std::string message_;
};

enum class TransferStrategy { PerElementCopy, WholeFieldCopy, ByReference };

/// "per-element", "whole-field", "by-ref".
std::string_view to_string(TransferStrategy strategy);
std::optional<TransferStrategy> parse_strategy(std::string_view text);
inline constexpr TransferStrategy kAllStrategies[] = {
    TransferStrategy::PerElementCopy, TransferStrategy::WholeFieldCopy, TransferStrategy::ByReference};

/// Guest code, either inline text or a file on disk.
class ScriptSource {
 public:
  static ScriptSource file(std::filesystem::path path);
  static ScriptSource text(std::string code, std::string label = "<inline>");

  bool is_file() const { return is_file_; }
  const std::filesystem::path& path() const { return path_; }
  const std::string& code() const { return code_; }
  const std::string& label() const { return label_; }

 private:
  bool is_file_ = false;
  std::filesystem::path path_;
  std::string code_;
  std::string label_;
};

/// Tallies of every value copied across the boundary by the copy paths.
/// Reference publication never touches these.
struct CopyCounters {
  std::size_t field_puts = 0;
  std::size_t field_gets = 0;
  std::size_t element_puts = 0;
  std::size_t element_gets = 0;
  std::size_t bytes_to_guest = 0;
  std::size_t bytes_from_guest = 0;
};

class Session;

/// A host buffer published into the guest scope by address.
///
/// While active, the guest holds `<name>` as an array view over the host
/// storage plus `<name>_address` and `<name>_shape`, and the buffer is pinned.
/// Releasing deletes those names and unpins. Reading a stale view after
/// release is undefined; the host never does so.
class RefLease {
 public:
  static constexpr std::size_t element_width = sizeof(double);

  RefLease(RefLease&& other) noexcept;
  RefLease& operator=(RefLease&& other) noexcept;
  RefLease(const RefLease&) = delete;
  RefLease& operator=(const RefLease&) = delete;
  /// Releases silently if still active.
  ~RefLease();

  const std::string& guest_name() const { return name_; }
  std::uintptr_t address() const { return address_; }
  Shape shape() const { return shape_; }
  bool active() const;

  /// Throws GuestError(RuntimeError) if the lease was already released.
  void release();

 private:
  friend class Session;
  RefLease(std::uint64_t id, std::uint64_t generation, std::string name, std::uintptr_t address,
           Shape shape)
      : id_(id), generation_(generation), name_(std::move(name)), address_(address), shape_(shape) {}

  std::uint64_t id_ = 0;
  std::uint64_t generation_ = 0;
  std::string name_;
  std::uintptr_t address_ = 0;
  Shape shape_;
};

/// Handle to the one embedded guest interpreter and its global scope.
///
/// At most one Session is live per process, and every call must come from
/// the thread that opened it; calls from any other thread are rejected.
/// Closing purges the guest scope. The interpreter itself stays resident
/// until process exit because compiled guest extensions cannot survive
/// re-initialisation.
class Session {
 public:
  /// Throws GuestError(RuntimeError) if a session is already live and
  /// GuestError(InitFailure) if the guest runtime cannot start.
  static Session open();

  Session(Session&& other) noexcept;
  Session& operator=(Session&& other) noexcept;
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;
  /// Releases outstanding leases and closes, swallowing errors.
  ~Session();

  /// Throws GuestError(RuntimeError) while any lease is active.
  void close();
  bool live() const;

  /// Executes a whole script in the global scope so its top-level
  /// definitions become visible to later calls.
  void load_script(const ScriptSource& source);
  void exec(std::string_view statement);

  void set_scalar(std::string_view name, double value);
  double get_scalar(std::string_view name);
  bool has_name(std::string_view name);
  /// Scope names other than dunders and bridge internals.
  std::vector<std::string> user_names();

  /// Copies a field into a fresh guest array: 1-D of length n when it has one
  /// component, otherwise 2-D (n, c).
  void put_field_copy(std::string_view name, const FieldBuffer& field);
  /// Copies a guest array back. Accepts (n,) or (n, 1) for one component.
  FieldBuffer get_field_copy(std::string_view name, Shape expected);

  /// Copies one element: a float when the field has one component, a
  /// length-c array otherwise.
  void put_element(std::string_view name, const FieldBuffer& field, std::size_t index);
  std::vector<double> get_element(std::string_view name, std::size_t components);

  /// Publishes `field` by address. The buffer must stay alive and unmoved
  /// until the returned lease is released. Guest writes through the view land
  /// directly in the host buffer.
  RefLease publish_by_ref(std::string_view name, FieldBuffer& field);
  /// Same, but the guest view is read-only.
  RefLease publish_by_ref(std::string_view name, const FieldBuffer& field);
  std::size_t active_leases() const;

  const CopyCounters& counters() const;
  void reset_counters();

 private:
  explicit Session(std::uint64_t generation) : generation_(generation) {}
  void require_usable(const char* op) const;
  void shutdown() noexcept;
  RefLease publish(std::string_view name, const FieldBuffer& field, bool writable);

  std::uint64_t generation_ = 0;
};

}  // namespace embedfield
