#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "embedfield/bench.hpp"
#include "embedfield/field_io.hpp"

using namespace embedfield;
namespace fs = std::filesystem;

namespace {

BenchSpec small_spec() {
  BenchSpec spec;
  spec.sizes = {200};
  spec.repeats = 3;
  spec.warmup = 1;
  spec.weights_path = fs::temp_directory_path() / "embedfield_bench_weights.json";
  return spec;
}

}  // namespace

TEST(Bench, SpecValidation) {
  BenchSpec spec = small_spec();
  spec.repeats = 2;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = small_spec();
  spec.warmup = 0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = small_spec();
  spec.sizes = {0};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(Bench, Median) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
  EXPECT_THROW(median({}), std::invalid_argument);
}

TEST(Bench, StressBenchRowsAndDeterminism) {
  Session session = Session::open();
  const BenchSpec spec = small_spec();
  const BenchReport a = cmd_stress_bench(spec, session);
  const BenchReport b = cmd_stress_bench(spec, session);
  ASSERT_EQ(a.rows.size(), 1u + 2u * 3u);

  const BenchRow* native = a.find("native", "-", 200);
  ASSERT_NE(native, nullptr);
  EXPECT_EQ(native->ratio, 1.0);
  EXPECT_EQ(native->norms.linf, 0.0);

  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    const BenchRow& r = a.rows[k];
    EXPECT_EQ(r.status, RowStatus::ok) << r.law << "/" << r.strategy << ": " << r.note;
    EXPECT_EQ(r.case_name, "stress");
    EXPECT_GT(r.time_s, 0.0);
    EXPECT_DOUBLE_EQ(r.ratio, r.time_s / native->time_s);
    EXPECT_LT(r.norms.linf, 1e-9 * 1e9);
    // everything but timing is reproducible
    EXPECT_EQ(r.law, b.rows[k].law);
    EXPECT_EQ(r.strategy, b.rows[k].strategy);
    EXPECT_EQ(r.norms, b.rows[k].norms);
  }
}

TEST(Bench, FailedRowDoesNotAbortRun) {
  Session session = Session::open();
  BenchSpec spec = small_spec();
  spec.laws = {LawKind::ScriptedAnalytic};
  spec.analytic_script = "/nonexistent/law.py";
  const BenchReport r = cmd_stress_bench(spec, session);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_EQ(r.rows[0].status, RowStatus::ok);
  for (std::size_t k = 1; k < 4; ++k) {
    EXPECT_EQ(r.rows[k].status, RowStatus::failed);
    EXPECT_NE(r.rows[k].note.find("not found"), std::string::npos);
  }
}

TEST(Bench, TimeoutRowIsRecorded) {
  Session session = Session::open();
  BenchSpec spec = small_spec();
  spec.laws = {LawKind::ScriptedAnalytic};
  spec.strategies = {TransferStrategy::PerElementCopy, TransferStrategy::WholeFieldCopy};
  spec.sizes = {20000};
  spec.timeout_s = 0.05;
  const BenchReport r = cmd_stress_bench(spec, session);
  EXPECT_EQ(r.find("analytic", "per-element", 20000)->status, RowStatus::timeout);
  EXPECT_EQ(r.find("analytic", "whole-field", 20000)->status, RowStatus::ok);
}

TEST(Report, CsvRoundTrip) {
  BenchReport report;
  BenchRow native{"stress", "native", "-", 1000, RowStatus::ok, 0.0012345678901234567, 1.0, {0, 0}, ""};
  BenchRow scripted{"stress", "analytic", "by-ref", 1000, RowStatus::ok, 0.0025, 0.1 / 3.0, {1e-8, 3e-7}, ""};
  BenchRow slow{"stress", "nn", "per-element", 1000, RowStatus::timeout, 0, 0, {}, "late"};
  report.rows = {native, scripted, slow};

  std::stringstream ss;
  emit_report(ss, report, ReportFormat::csv);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "case,law,strategy,size,time_s,ratio,l2_mean,linf");
  const auto rows = read_report_csv(ss);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], native);
  EXPECT_EQ(rows[1], scripted);
  EXPECT_EQ(rows[2].status, RowStatus::timeout);
  EXPECT_TRUE(std::isnan(rows[2].time_s));
  EXPECT_EQ(rows[0].ratio, 1.0);
}

TEST(Report, MarkdownHasHeaderAndOneLinePerRow) {
  BenchReport report;
  report.rows.resize(4);
  std::stringstream ss;
  emit_report(ss, report, ReportFormat::markdown);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(ss, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 2u + 4u);
  EXPECT_EQ(lines[0], "| case | law | strategy | size | time_s | ratio | l2_mean | linf |");
  EXPECT_EQ(lines[1], "|---|---|---|---|---|---|---|---|");
}

TEST(Report, EmptyReportAndBadPath) {
  std::stringstream ss;
  EXPECT_THROW(emit_report(ss, BenchReport{}, ReportFormat::csv), std::invalid_argument);
  BenchReport one;
  one.rows.resize(1);
  try {
    emit_report(fs::path("/nonexistent/dir/report.csv"), one, ReportFormat::csv);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/report.csv"), std::string::npos);
  }
}

TEST(HeatCommand, SquarePlateNativeAndScriptedAgree) {
  Session session = Session::open();
  HeatSpec spec;
  spec.dt = 0.15625;  // gamma 0.25 keeps the scripted solve short
  const auto out = fs::temp_directory_path() / "embedfield_heat_cmd";
  fs::remove_all(out);
  const HeatResult r = cmd_heat(spec, &session, out);
  ASSERT_TRUE(r.converged());
  EXPECT_NEAR(r.centre, 298.0, 5.0);
  ASSERT_TRUE(r.norms);
  EXPECT_LT(r.norms->linf, 1e-9);
  EXPECT_EQ(read_field_csv(out / "T_native.csv"), r.native.T);
  EXPECT_TRUE(fs::exists(out / "residual_scripted.csv"));
  EXPECT_TRUE(fs::exists(out / "centreline_native.csv"));
  fs::remove_all(out);
}

TEST(HeatCommand, IterationCapFlagsNonConvergence) {
  HeatSpec spec;
  spec.max_iters = 1;
  spec.run_scripted = false;
  const HeatResult r = cmd_heat(spec, nullptr);
  EXPECT_FALSE(r.converged());
}

TEST(BcDemo, GuestMatchesHostFormula) {
  Session session = Session::open();
  BcDemoSpec spec;
  spec.times = {0.5, 1.0, 2.5};
  const auto samples = cmd_bc_demo(spec, session);
  ASSERT_EQ(samples.size(), 3u);
  EXPECT_LT(samples[0].max_diff, 1e-12);
  for (std::size_t k = 0; k < samples[1].samples.elements(); ++k) {
    EXPECT_NEAR(samples[1].samples(k, 1), 0.0, 1e-15);
  }
  for (std::size_t k = 0; k < samples[0].samples.elements(); ++k) {
    EXPECT_NEAR(samples[2].samples(k, 1), samples[0].samples(k, 1), 1e-12);
  }
}
