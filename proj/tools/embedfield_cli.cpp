// embedfield: strategy benchmark, scripted heat solve and boundary-profile demo.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "embedfield/bench.hpp"
#include "embedfield/field_io.hpp"

namespace fs = std::filesystem;
using namespace embedfield;

namespace {

enum Exit { kOk = 0, kNotConverged = 2, kGuestFailure = 3, kBadConfig = 4 };

struct CommonOpts {
  std::vector<std::string> strategies;
  std::string out;
  std::string format = "csv";
};

std::vector<TransferStrategy> parse_strategies(const std::vector<std::string>& names) {
  std::vector<TransferStrategy> out;
  for (const auto& n : names) {
    auto s = parse_strategy(n);
    if (!s) throw std::invalid_argument("unknown strategy '" + n + "'");
    out.push_back(*s);
  }
  return out;
}

std::optional<fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

int run_stress(const CommonOpts& common, BenchSpec spec, const std::vector<std::string>& laws,
               const std::string& script, const std::string& nn_script) {
  if (!common.strategies.empty()) spec.strategies = parse_strategies(common.strategies);
  if (!laws.empty()) {
    spec.laws.clear();
    for (const auto& l : laws) {
      auto law = parse_law(l);
      if (!law) throw std::invalid_argument("unknown law '" + l + "'");
      spec.laws.push_back(*law);
    }
  }
  spec.analytic_script = opt_path(script);
  spec.nn_script = opt_path(nn_script);
  const auto format = parse_report_format(common.format);
  if (!format) throw std::invalid_argument("unknown format '" + common.format + "'");
  const auto out = opt_path(common.out);
  if (out) {
    fs::create_directories(*out);
    spec.weights_path = *out / "nn_weights.json";
  }

  const BenchReport report = cmd_stress_bench(spec);
  emit_report(std::cout, report, *format);
  for (const auto& [what, secs] : report.startup) {
    std::cerr << "startup " << what << ": " << format_double(secs) << " s\n";
  }
  bool any_failed = false;
  for (const auto& r : report.rows) {
    if (r.status == RowStatus::failed) {
      any_failed = true;
      std::cerr << "row " << r.law << "/" << r.strategy << "/" << r.size << " failed: " << r.note
                << '\n';
    }
  }
  if (out) {
    emit_report(*out / (*format == ReportFormat::csv ? "stress_bench.csv" : "stress_bench.md"),
                report, *format);
    std::ofstream startup(*out / "startup.csv");
    startup << "what,seconds\n";
    for (const auto& [what, secs] : report.startup) startup << what << ',' << format_double(secs) << '\n';
  }
  return any_failed ? kGuestFailure : kOk;
}

int run_heat(const CommonOpts& common, HeatSpec spec, const std::vector<std::string>& bcs,
             const std::string& script, bool native_only) {
  for (const auto& item : bcs) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--bc expects <patch>=<K>, got '" + item + "'");
    const auto patch = parse_patch(item.substr(0, eq));
    if (!patch) throw std::invalid_argument("unknown patch in '" + item + "'");
    spec.bc[static_cast<int>(*patch)] = std::stod(item.substr(eq + 1));
  }
  if (common.strategies.size() > 1) throw std::invalid_argument("heat takes a single --strategy");
  if (!common.strategies.empty()) spec.strategy = parse_strategies(common.strategies).front();
  spec.script = opt_path(script);
  spec.run_scripted = !native_only;
  spec.config();  // validate before paying for interpreter start-up

  std::optional<Session> session;
  if (spec.run_scripted) session.emplace(Session::open());
  const HeatResult r = cmd_heat(spec, session ? &*session : nullptr, opt_path(common.out));

  auto show = [](const char* tag, const SolveReport& s) {
    std::cout << tag << ": iterations=" << s.iterations << " converged=" << (s.converged ? "yes" : "no")
              << " residual="
              << format_double(s.residual_history.empty() ? 0.0 : s.residual_history.back()) << '\n';
  };
  show("native", r.native);
  if (r.scripted) show("scripted", *r.scripted);
  std::cout << "centre=" << format_double(r.centre) << '\n';
  if (r.norms) {
    std::cout << "scripted_vs_native l2_mean=" << format_double(r.norms->l2_mean)
              << " linf=" << format_double(r.norms->linf) << '\n';
  }
  return r.converged() ? kOk : kNotConverged;
}

int run_bc(const CommonOpts& common, BcDemoSpec spec, const std::string& patch, const std::string& script) {
  const auto p = parse_patch(patch);
  if (!p) throw std::invalid_argument("unknown patch '" + patch + "'");
  spec.patch = *p;
  spec.script = opt_path(script);
  if (spec.n == 0 || !(spec.length > 0)) throw std::invalid_argument("bc-demo: bad grid");

  Session session = Session::open();
  const auto samples = cmd_bc_demo(spec, session, opt_path(common.out));
  std::cout << "time,max_abs_diff\n";
  for (const auto& s : samples) std::cout << format_double(s.time) << ',' << format_double(s.max_diff) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embedded-script field evaluation: benchmarks and demonstrators"};
  app.require_subcommand(1);

  CommonOpts common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--strategy", common.strategies, "per-element, whole-field or by-ref")
        ->delimiter(',');
    sub->add_option("--out", common.out, "Directory for CSV artifacts");
    sub->add_option("--format", common.format, "Report format: csv or markdown");
  };

  // stress-bench
  BenchSpec bench;
  std::vector<std::string> laws;
  std::string law_script, nn_script;
  auto* stress = app.add_subcommand("stress-bench", "Time scripted constitutive laws per transfer strategy");
  add_common(stress);
  stress->add_option("--law", laws, "analytic, nn (default both)")->delimiter(',');
  stress->add_option("--script", law_script, "Analytic-law script (default: built-in)");
  stress->add_option("--nn-script", nn_script, "Array-NN script (default: built-in)");
  stress->add_option("--size", bench.sizes, "Element counts")->delimiter(',');
  stress->add_option("--repeats", bench.repeats, "Timed repeats (>= 3)");
  stress->add_option("--warmup", bench.warmup, "Untimed warm-up runs (>= 1)");
  stress->add_option("--seed", bench.seed, "Strain generator seed");
  stress->add_option("--timeout", bench.timeout_s, "Per-row budget in seconds");

  // heat
  HeatSpec heat;
  std::vector<std::string> bcs;
  std::string heat_script;
  bool native_only = false;
  auto* heat_cmd = app.add_subcommand("heat", "Steady heat conduction, native vs scripted sweep");
  add_common(heat_cmd);
  heat_cmd->add_option("--script", heat_script, "Heat-step script (default: built-in)");
  heat_cmd->add_option("--nx", heat.nx);
  heat_cmd->add_option("--ny", heat.ny);
  heat_cmd->add_option("--lx", heat.lx, "m");
  heat_cmd->add_option("--ly", heat.ly, "m");
  heat_cmd->add_option("--dt", heat.dt, "s");
  heat_cmd->add_option("--diffusivity", heat.diffusivity, "m^2/s");
  heat_cmd->add_option("--tol", heat.tol, "K");
  heat_cmd->add_option("--max-iters", heat.max_iters);
  heat_cmd->add_option("--bc", bcs, "<left|bottom|right|top>=<K>");
  heat_cmd->add_flag("--native-only", native_only, "Skip the scripted solve");

  // bc-demo
  BcDemoSpec bc;
  std::string patch = "top", bc_script;
  auto* bc_cmd = app.add_subcommand("bc-demo", "Evaluate a scripted wall profile against the host formula");
  add_common(bc_cmd);
  bc_cmd->add_option("--script", bc_script, "Profile script (default: built-in)");
  bc_cmd->add_option("--times", bc.times, "Times in s")->delimiter(',');
  bc_cmd->add_option("--n", bc.n, "Cells per side");
  bc_cmd->add_option("--length", bc.length, "Side length in m");
  bc_cmd->add_option("--patch", patch);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  try {
    if (*stress) return run_stress(common, bench, laws, law_script, nn_script);
    if (*heat_cmd) return run_heat(common, heat, bcs, heat_script, native_only);
    if (*bc_cmd) return run_bc(common, bc, patch, bc_script);
  } catch (const GuestError& e) {
    std::cerr << "guest error (" << to_string(e.kind()) << "): " << e.message() << '\n';
    return kGuestFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadConfig;
  }
  return kOk;
}
