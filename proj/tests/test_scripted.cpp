#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "embedfield/constitutive.hpp"
#include "embedfield/guest_sources.hpp"
#include "embedfield/heat_scripted.hpp"
#include "embedfield/norms.hpp"
#include "embedfield/scripted_law.hpp"

using namespace embedfield;

namespace {

class ScriptedTest : public ::testing::Test {
 protected:
  void SetUp() override { session.emplace(Session::open()); }
  void TearDown() override { session.reset(); }
  Session& s() { return *session; }
  std::optional<Session> session;
};

const LameParams kSteel = lame_from_engineering(200e9, 0.3);

std::string strategy_name(const ::testing::TestParamInfo<TransferStrategy>& info) {
  std::string n(to_string(info.param));
  for (auto& ch : n) {
    if (ch == '-') ch = '_';
  }
  return n;
}

class PerStrategy : public ScriptedTest, public ::testing::WithParamInterface<TransferStrategy> {};

}  // namespace

TEST_P(PerStrategy, HeatSweepMatchesNativeBitForBit) {
  s().load_script(ScriptSource::text(std::string(guest::kHeatStep)));
  HeatConfig cfg = make_heat_config(make_grid(8, 8, 0.08, 0.08), 273, 273, 273, 373);
  FieldBuffer native(64, 1, 290.0), scripted(64, 1, 290.0);
  seed_boundary_cells(native, cfg.grid, cfg.bc);
  seed_boundary_cells(scripted, cfg.grid, cfg.bc);
  for (int k = 0; k < 5; ++k) {
    native_fd_step(native, 0.2, cfg.grid);
    scripted_fd_step(s(), scripted, 0.2, GetParam());
  }
  EXPECT_EQ(scripted, native);
}

TEST_P(PerStrategy, AnalyticLawMatchesHooke) {
  install_analytic_law(s(), kSteel);
  const FieldBuffer eps = synth_strain_field(1000, 42);
  const FieldBuffer native = hooke_native(eps, kSteel);
  const FieldBuffer stress = scripted_stress(s(), eps, GetParam());
  EXPECT_LE(error_norms(stress, native).linf, 1e-12 * max_abs(native));
  EXPECT_EQ(s().active_leases(), 0u);
}

TEST_P(PerStrategy, ArrayNnLawMatchesHooke) {
  const auto path = std::filesystem::temp_directory_path() / "embedfield_scripted_nn.json";
  install_nn_law(s(), build_exact_nn_weights(kSteel, StrainRange::symmetric(kDefaultStrainHalfWidth)),
                 path);
  const FieldBuffer eps = synth_strain_field(1000, 42);
  const FieldBuffer native = hooke_native(eps, kSteel);
  const FieldBuffer stress = scripted_stress(s(), eps, GetParam());
  std::filesystem::remove(path);
  EXPECT_LE(error_norms(stress, native).linf, 1e-9 * max_abs(native));
}

TEST_P(PerStrategy, ZeroStrainGivesZeroStress) {
  install_analytic_law(s(), kSteel);
  const FieldBuffer stress = scripted_stress(s(), FieldBuffer(5, 6), GetParam());
  for (double v : stress.values()) EXPECT_EQ(v, 0.0);
}

INSTANTIATE_TEST_SUITE_P(Strategies, PerStrategy, ::testing::ValuesIn(kAllStrategies), strategy_name);

TEST_F(ScriptedTest, ScriptedHeatSolveConverges) {
  s().load_script(ScriptSource::text(std::string(guest::kHeatStep)));
  HeatConfig cfg = make_heat_config(make_grid(10, 10, 0.1, 0.1), 273, 273, 273, 373);
  cfg.dt = 0.0625;  // gamma 0.25
  const SolveReport native = solve_steady(cfg);
  const SolveReport scripted = solve_steady(cfg, make_scripted_step(s(), TransferStrategy::ByReference));
  ASSERT_TRUE(native.converged && scripted.converged);
  EXPECT_EQ(scripted.iterations, native.iterations);
  EXPECT_LT(error_norms(scripted.T, native.T).linf, 1e-9);
}

TEST_F(ScriptedTest, HotPerimeterPullsCentreToMean) {
  // 3x3, perimeter mean 400, centre 0, gamma 0.25: 0.25 * 1600 = 400
  s().load_script(ScriptSource::text(std::string(guest::kHeatStep)));
  FieldBuffer T(9, 1, 400.0);
  T[4] = 0.0;
  scripted_fd_step(s(), T, 0.25, TransferStrategy::ByReference);
  EXPECT_EQ(T[4], 400.0);
  FieldBuffer same(9, 1, 400.0);
  same[4] = 0.0;
  scripted_fd_step(s(), same, 0.0, TransferStrategy::WholeFieldCopy);
  EXPECT_EQ(same[4], 0.0);
}

TEST_F(ScriptedTest, HeatStepLeavesUniformFieldAlone) {
  s().load_script(ScriptSource::text(std::string(guest::kHeatStep)));
  FieldBuffer T(25, 1, 300.0);
  scripted_fd_step(s(), T, 0.25, TransferStrategy::WholeFieldCopy);
  for (double v : T.values()) EXPECT_EQ(v, 300.0);
}

TEST_F(ScriptedTest, HeatStepRejectsNonSquareField) {
  s().load_script(ScriptSource::text(std::string(guest::kHeatStep)));
  FieldBuffer T(10, 1);
  try {
    scripted_fd_step(s(), T, 0.1, TransferStrategy::ByReference);
    FAIL();
  } catch (const GuestError& e) {
    EXPECT_EQ(e.kind(), GuestErrorKind::RuntimeError);
    EXPECT_NE(e.message().find("square"), std::string::npos);
  }
  EXPECT_FALSE(T.pinned());
  EXPECT_EQ(s().active_leases(), 0u);
}

TEST_F(ScriptedTest, WrongReturnShapeIsShapeMismatch) {
  s().load_script(ScriptSource::text("def predict(strain):\n    return strain[:, :3]\n"));
  try {
    scripted_stress(s(), FieldBuffer(4, 6), TransferStrategy::WholeFieldCopy);
    FAIL();
  } catch (const GuestError& e) {
    EXPECT_EQ(e.kind(), GuestErrorKind::ShapeMismatch);
  }
}

TEST_F(ScriptedTest, MissingLawIsGuestError) {
  EXPECT_THROW(scripted_stress(s(), FieldBuffer(4, 6), TransferStrategy::WholeFieldCopy), GuestError);
}

TEST_F(ScriptedTest, ExpiredDeadlineTimesOut) {
  install_analytic_law(s(), kSteel);
  const auto past = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  EXPECT_THROW(scripted_stress(s(), FieldBuffer(10, 6), TransferStrategy::PerElementCopy, past), Timeout);
}

TEST_F(ScriptedTest, NnWeightFileMissingIsGuestError) {
  s().load_script(ScriptSource::text(std::string(guest::kArrayNnLaw)));
  EXPECT_THROW(s().exec("load_weights('/nonexistent/w.json')"), GuestError);
}

TEST_F(ScriptedTest, WallProfileHandValues) {
  s().load_script(ScriptSource::text(std::string(guest::kWallProfile)));
  const auto grid = make_grid(4, 4, 0.1, 0.1);
  const FieldBuffer& top = grid.patch_faces(Patch::top);

  // sin(pi/2) sin(40 pi 0.0125) = sin(pi/2) = 1
  const FieldBuffer u = eval_scripted_profile(s(), top, 0.5);
  ASSERT_EQ(u.shape(), top.shape());
  EXPECT_NEAR(u(0, 0), 1.0, 1e-12);
  for (std::size_t k = 0; k < u.elements(); ++k) {
    EXPECT_NEAR(u(k, 0), wall_velocity(top(k, 0), 0.5), 1e-12);
    EXPECT_EQ(u(k, 1), 0.0);
    EXPECT_EQ(u(k, 2), 0.0);
  }

  const FieldBuffer at0 = eval_scripted_profile(s(), top, 0.0);
  const FieldBuffer at1 = eval_scripted_profile(s(), top, 1.0);
  for (double v : at0.values()) EXPECT_EQ(v, 0.0);
  for (double v : at1.values()) EXPECT_NEAR(v, 0.0, 1e-15);

  // x = 0.025 is a node of sin(40 pi x)
  const FieldBuffer node = eval_scripted_profile(s(), FieldBuffer::from_rows({{0.025, 0.1, 0}}), 0.5);
  EXPECT_NEAR(node(0, 0), 0.0, 1e-14);

  const FieldBuffer later = eval_scripted_profile(s(), top, 2.5);
  for (std::size_t k = 0; k < u.size(); ++k) EXPECT_NEAR(later[k], u[k], 1e-12);
}

TEST(LawNames, RoundTrip) {
  for (auto law : {LawKind::NativeHooke, LawKind::ScriptedAnalytic, LawKind::ScriptedArrayNN}) {
    EXPECT_EQ(parse_law(to_string(law)), law);
  }
  EXPECT_FALSE(parse_law("keras"));
}
