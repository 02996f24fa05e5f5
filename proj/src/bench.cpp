#include "embedfield/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "embedfield/field_io.hpp"
#include "embedfield/guest_sources.hpp"
#include "embedfield/heat_scripted.hpp"
#include "embedfield/nn_weights.hpp"

namespace embedfield {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::ok: return "ok";
    case RowStatus::failed: return "failed";
    case RowStatus::timeout: return "timeout";
  }
  return "?";
}

std::optional<ScriptSource> as_source(const std::optional<fs::path>& p) {
  if (!p) return std::nullopt;
  return ScriptSource::file(*p);
}

}  // namespace

void BenchSpec::validate() const {
  if (repeats < 3) throw std::invalid_argument("bench: repeats must be >= 3");
  if (warmup < 1) throw std::invalid_argument("bench: warmup must be >= 1");
  if (laws.empty() || strategies.empty() || sizes.empty()) {
    throw std::invalid_argument("bench: empty law, strategy or size set");
  }
  if (std::find(sizes.begin(), sizes.end(), 0u) != sizes.end()) {
    throw std::invalid_argument("bench: sizes must be positive");
  }
  if (!(timeout_s > 0)) throw std::invalid_argument("bench: timeout must be positive");
  range.validate();
  lame_from_engineering(youngs_modulus, poisson_ratio);
}

const BenchRow* BenchReport::find(std::string_view law, std::string_view strategy,
                                  std::size_t size) const {
  for (const auto& r : rows) {
    if (r.law == law && r.strategy == strategy && r.size == size) return &r;
  }
  return nullptr;
}

double median(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("median of no samples");
  std::sort(samples.begin(), samples.end());
  const std::size_t m = samples.size() / 2;
  return samples.size() % 2 ? samples[m] : 0.5 * (samples[m - 1] + samples[m]);
}

BenchReport cmd_stress_bench(const BenchSpec& spec, Session& session) {
  spec.validate();
  BenchReport report;
  const LameParams lame = lame_from_engineering(spec.youngs_modulus, spec.poisson_ratio);
  const WeightBundle weights = build_exact_nn_weights(lame, spec.range);
  const fs::path weights_path =
      spec.weights_path.value_or(fs::temp_directory_path() / "embedfield_nn_weights.json");

  std::vector<LawKind> scripted;
  for (auto law : spec.laws) {
    if (law != LawKind::NativeHooke) scripted.push_back(law);
  }

  auto install = [&](LawKind law) {
    if (law == LawKind::ScriptedAnalytic) {
      install_analytic_law(session, lame, as_source(spec.analytic_script));
    } else {
      install_nn_law(session, weights, weights_path, as_source(spec.nn_script));
    }
  };

  std::vector<bool> load_recorded(3, false);

  for (std::size_t size : spec.sizes) {
    const FieldBuffer strain = synth_strain_field(size, spec.seed, spec.range);

    FieldBuffer native;
    std::vector<double> native_times;
    for (std::size_t k = 0; k < spec.warmup + spec.repeats; ++k) {
      const auto t0 = Clock::now();
      native = hooke_native(strain, lame);
      if (k >= spec.warmup) native_times.push_back(seconds_since(t0));
    }
    BenchRow native_row;
    native_row.law = std::string(to_string(LawKind::NativeHooke));
    native_row.strategy = "-";
    native_row.size = size;
    native_row.time_s = median(native_times);
    native_row.ratio = native_row.time_s / native_row.time_s;
    report.rows.push_back(native_row);

    for (LawKind law : scripted) {
      const auto law_index = static_cast<std::size_t>(law);
      std::string install_error;
      try {
        const auto t0 = Clock::now();
        install(law);
        if (!load_recorded[law_index]) {
          report.startup.emplace_back(std::string(to_string(law)) + "_load", seconds_since(t0));
          load_recorded[law_index] = true;
        }
      } catch (const std::exception& e) {
        install_error = e.what();
      }

      for (TransferStrategy strategy : spec.strategies) {
        BenchRow row;
        row.law = std::string(to_string(law));
        row.strategy = std::string(to_string(strategy));
        row.size = size;
        if (!install_error.empty()) {
          row.status = RowStatus::failed;
          row.note = install_error;
        } else {
          const auto deadline =
              Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                 std::chrono::duration<double>(spec.timeout_s));
          std::vector<double> times;
          FieldBuffer stress;
          try {
            for (std::size_t k = 0; k < spec.warmup + spec.repeats; ++k) {
              const auto t0 = Clock::now();
              stress = scripted_stress(session, strain, strategy, deadline);
              if (k >= spec.warmup) times.push_back(seconds_since(t0));
              if (Clock::now() > deadline && k + 1 < spec.warmup + spec.repeats) {
                throw Timeout("row exceeded its time budget");
              }
            }
            row.time_s = median(times);
            row.ratio = row.time_s / native_row.time_s;
            row.norms = error_norms(stress, native);
          } catch (const Timeout& e) {
            row.status = RowStatus::timeout;
            row.note = e.what();
          } catch (const GuestError& e) {
            row.status = RowStatus::failed;
            row.note = e.message();
          }
        }
        if (row.status != RowStatus::ok) {
          row.time_s = row.ratio = kNaN;
          row.norms = {kNaN, kNaN};
        }
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

BenchReport cmd_stress_bench(const BenchSpec& spec) {
  spec.validate();
  const auto t0 = Clock::now();
  Session session = Session::open();
  const double open_s = seconds_since(t0);
  BenchReport report = cmd_stress_bench(spec, session);
  report.startup.insert(report.startup.begin(), {"session_open", open_s});
  return report;
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "markdown" || text == "md") return ReportFormat::markdown;
  return std::nullopt;
}

namespace {

constexpr const char* kColumns[] = {"case", "law", "strategy", "size", "time_s", "ratio", "l2_mean", "linf"};

std::vector<std::string> cells(const BenchRow& r) {
  const bool ok = r.status == RowStatus::ok;
  return {r.case_name,
          r.law,
          r.strategy,
          std::to_string(r.size),
          ok ? format_double(r.time_s) : std::string(to_string(r.status)),
          ok ? format_double(r.ratio) : "nan",
          ok ? format_double(r.norms.l2_mean) : "nan",
          ok ? format_double(r.norms.linf) : "nan"};
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  if (s == "nan") return kNaN;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("report csv: bad number '" + s + "'");
  return v;
}

}  // namespace

void emit_report(std::ostream& out, const BenchReport& report, ReportFormat format) {
  if (report.rows.empty()) throw std::invalid_argument("emit_report: empty report");
  if (format == ReportFormat::csv) {
    for (std::size_t k = 0; k < std::size(kColumns); ++k) out << (k ? "," : "") << kColumns[k];
    out << '\n';
    for (const auto& r : report.rows) {
      const auto c = cells(r);
      for (std::size_t k = 0; k < c.size(); ++k) out << (k ? "," : "") << c[k];
      out << '\n';
    }
    return;
  }
  out << '|';
  for (auto* col : kColumns) out << ' ' << col << " |";
  out << "\n|";
  for (std::size_t k = 0; k < std::size(kColumns); ++k) out << "---|";
  out << '\n';
  for (const auto& r : report.rows) {
    out << '|';
    for (const auto& c : cells(r)) out << ' ' << c << " |";
    out << '\n';
  }
}

void emit_report(const fs::path& path, const BenchReport& report, ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_report: cannot open " + path.string());
  emit_report(out, report, format);
  if (!out) throw std::runtime_error("emit_report: write failed for " + path.string());
}

std::vector<BenchRow> read_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("report csv: missing header");
  const auto header = split_csv(line);
  if (header.size() != std::size(kColumns) ||
      !std::equal(header.begin(), header.end(), std::begin(kColumns))) {
    throw std::runtime_error("report csv: unexpected header '" + line + "'");
  }
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split_csv(line);
    if (c.size() != std::size(kColumns)) {
      throw std::runtime_error("report csv: bad row '" + line + "'");
    }
    BenchRow r;
    r.case_name = c[0];
    r.law = c[1];
    r.strategy = c[2];
    r.size = std::stoull(c[3]);
    if (c[4] == "failed" || c[4] == "timeout") {
      r.status = c[4] == "failed" ? RowStatus::failed : RowStatus::timeout;
      r.time_s = r.ratio = kNaN;
      r.norms = {kNaN, kNaN};
    } else {
      r.time_s = parse_number(c[4]);
      r.ratio = parse_number(c[5]);
      r.norms = {parse_number(c[6]), parse_number(c[7])};
    }
    rows.push_back(r);
  }
  return rows;
}

HeatConfig HeatSpec::config() const {
  const StructuredGrid grid = make_grid(nx, ny, lx, ly);
  HeatConfig cfg = make_heat_config(grid, bc[0], bc[1], bc[2], bc[3]);
  cfg.diffusivity = diffusivity;
  cfg.dt = dt;
  cfg.tol = tol;
  cfg.max_iters = max_iters;
  cfg.validate();
  return cfg;
}

namespace {

void write_history(const fs::path& path, const std::vector<double>& history) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "iteration,residual\n";
  for (std::size_t k = 0; k < history.size(); ++k) {
    out << k + 1 << ',' << format_double(history[k]) << '\n';
  }
}

void write_solve(const fs::path& dir, const std::string& tag, const SolveReport& r,
                 const StructuredGrid& grid) {
  write_field_csv(dir / ("T_" + tag + ".csv"), r.T);
  write_history(dir / ("residual_" + tag + ".csv"), r.residual_history);
  write_field_csv(dir / ("centreline_" + tag + ".csv"), centre_line(r.T, grid));
}

}  // namespace

HeatResult cmd_heat(const HeatSpec& spec, Session* session, const std::optional<fs::path>& out) {
  const HeatConfig cfg = spec.config();
  HeatResult result;
  result.native = solve_steady(cfg);
  result.centre = centre_value(result.native.T, cfg.grid);

  if (spec.run_scripted) {
    if (!session) throw std::invalid_argument("cmd_heat: scripted run needs a session");
    session->load_script(spec.script ? ScriptSource::file(*spec.script)
                                     : ScriptSource::text(std::string(guest::kHeatStep), "<heat-step>"));
    result.scripted = solve_steady(cfg, make_scripted_step(*session, spec.strategy));
    result.norms = error_norms(result.scripted->T, result.native.T);
  }

  if (out) {
    fs::create_directories(*out);
    write_solve(*out, "native", result.native, cfg.grid);
    if (result.scripted) write_solve(*out, "scripted", *result.scripted, cfg.grid);
    std::ofstream summary(*out / "heat_summary.csv");
    summary << "run,iterations,converged,final_residual,centre\n";
    auto line = [&](const char* tag, const SolveReport& r) {
      summary << tag << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
              << format_double(r.residual_history.empty() ? kNaN : r.residual_history.back()) << ','
              << format_double(centre_value(r.T, cfg.grid)) << '\n';
    };
    line("native", result.native);
    if (result.scripted) line("scripted", *result.scripted);
    if (result.norms) {
      summary << "# scripted_vs_native l2_mean=" << format_double(result.norms->l2_mean)
              << " linf=" << format_double(result.norms->linf) << '\n';
    }
  }
  return result;
}

std::vector<BcSample> cmd_bc_demo(const BcDemoSpec& spec, Session& session,
                                  const std::optional<fs::path>& out) {
  const StructuredGrid grid = make_grid(spec.n, spec.n, spec.length, spec.length);
  const FieldBuffer& faces = grid.patch_faces(spec.patch);
  session.load_script(spec.script ? ScriptSource::file(*spec.script)
                                  : ScriptSource::text(std::string(guest::kWallProfile), "<wall-profile>"));
  if (out) fs::create_directories(*out);

  std::vector<BcSample> result;
  for (double t : spec.times) {
    const FieldBuffer u = eval_scripted_profile(session, faces, t);
    BcSample s;
    s.time = t;
    s.samples = FieldBuffer(faces.elements(), 4);
    for (std::size_t k = 0; k < faces.elements(); ++k) {
      const double x = faces(k, 0);
      const double host = wall_velocity(x, t);
      s.samples(k, 0) = x;
      s.samples(k, 1) = u(k, 0);
      s.samples(k, 2) = host;
      s.samples(k, 3) = u(k, 0) - host;
      s.max_diff = std::max(s.max_diff, std::abs(s.samples(k, 3)));
    }
    if (out) {
      std::ofstream f(*out / ("bc_t" + format_double(t) + ".csv"));
      if (!f) throw std::runtime_error("bc-demo: cannot write under " + out->string());
      f << "x,u_guest,u_host,diff\n";
      for (std::size_t k = 0; k < s.samples.elements(); ++k) {
        f << format_double(s.samples(k, 0)) << ',' << format_double(s.samples(k, 1)) << ','
          << format_double(s.samples(k, 2)) << ',' << format_double(s.samples(k, 3)) << '\n';
      }
    }
    result.push_back(std::move(s));
  }
  return result;
}

}  // namespace embedfield
