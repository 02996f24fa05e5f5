#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "embedfield/constitutive.hpp"
#include "embedfield/field.hpp"
#include "embedfield/heat.hpp"
#include "embedfield/norms.hpp"
#include "embedfield/scripted_law.hpp"
#include "embedfield/session.hpp"

namespace embedfield {

struct BenchSpec {
  std::vector<LawKind> laws = {LawKind::ScriptedAnalytic, LawKind::ScriptedArrayNN};
  std::vector<TransferStrategy> strategies = {std::begin(kAllStrategies), std::end(kAllStrategies)};
  std::vector<std::size_t> sizes = {1000, 400000};
  std::size_t repeats = 3;
  std::size_t warmup = 1;
  std::optional<std::filesystem::path> analytic_script;
  std::optional<std::filesystem::path> nn_script;
  /// Where the NN weight JSON is written; a temp path when unset.
  std::optional<std::filesystem::path> weights_path;
  std::uint64_t seed = 42;
  double timeout_s = 300.0;
  StrainRange range = StrainRange::symmetric(kDefaultStrainHalfWidth);
  double youngs_modulus = 200e9;
  double poisson_ratio = 0.3;

  /// Throws std::invalid_argument on repeats < 3, warmup < 1, empty sets,
  /// zero sizes or a non-positive timeout.
  void validate() const;
};

enum class RowStatus { ok, failed, timeout };

struct BenchRow {
  std::string case_name = "stress";
  std::string law;
  std::string strategy;  // "-" for the native row
  std::size_t size = 0;
  RowStatus status = RowStatus::ok;
  double time_s = 0.0;  // median
  double ratio = 0.0;   // time_s / native time_s at the same size
  ErrorNorms norms;
  std::string note;  // guest error text for failed rows

  bool operator==(const BenchRow&) const = default;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  /// One-off costs kept out of the timed region (session open, script and
  /// weight loading), in seconds.
  std::vector<std::pair<std::string, double>> startup;

  const BenchRow* find(std::string_view law, std::string_view strategy, std::size_t size) const;
};

/// Times native Hooke and every (law, strategy) pair per size, median of
/// `repeats` after `warmup`. A guest error or timeout marks that row and the
/// run continues.
BenchReport cmd_stress_bench(const BenchSpec& spec, Session& session);
BenchReport cmd_stress_bench(const BenchSpec& spec);

double median(std::vector<double> samples);

enum class ReportFormat { csv, markdown };
std::optional<ReportFormat> parse_report_format(std::string_view text);

/// Columns: case, law, strategy, size, time_s, ratio, l2_mean, linf. Rows
/// that did not complete carry their status in time_s and nan elsewhere.
void emit_report(std::ostream& out, const BenchReport& report, ReportFormat format);
void emit_report(const std::filesystem::path& path, const BenchReport& report, ReportFormat format);
std::vector<BenchRow> read_report_csv(std::istream& in);

struct HeatSpec {
  std::size_t nx = 20;
  std::size_t ny = 20;
  double lx = 0.1;
  double ly = 0.1;
  double diffusivity = 4e-5;
  double dt = 0.005;
  double tol = 1e-8;
  std::size_t max_iters = 1'000'000;
  std::array<double, 4> bc = {273.0, 273.0, 273.0, 373.0};  // Patch order
  TransferStrategy strategy = TransferStrategy::ByReference;
  std::optional<std::filesystem::path> script;
  bool run_scripted = true;

  HeatConfig config() const;
};

struct HeatResult {
  SolveReport native;
  std::optional<SolveReport> scripted;
  std::optional<ErrorNorms> norms;  // scripted vs native
  double centre = 0.0;
  bool converged() const { return native.converged && (!scripted || scripted->converged); }
};

/// Runs the native solve and, if asked, the scripted one. When `out` is set
/// writes T fields, residual histories and centre lines there.
HeatResult cmd_heat(const HeatSpec& spec, Session* session,
                    const std::optional<std::filesystem::path>& out = std::nullopt);

struct BcDemoSpec {
  std::size_t n = 20;
  double length = 0.1;
  Patch patch = Patch::top;
  std::vector<double> times = {0.5, 1.0};
  std::optional<std::filesystem::path> script;
};

struct BcSample {
  double time = 0.0;
  /// Rows of (x, guest u_x, host u_x, guest - host).
  FieldBuffer samples;
  double max_diff = 0.0;
};

std::vector<BcSample> cmd_bc_demo(const BcDemoSpec& spec, Session& session,
                                  const std::optional<std::filesystem::path>& out = std::nullopt);

}  // namespace embedfield
