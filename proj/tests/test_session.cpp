#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "embedfield/session.hpp"

using namespace embedfield;

namespace {

class SessionTest : public ::testing::Test {
 protected:
  void SetUp() override { session.emplace(Session::open()); }
  void TearDown() override { session.reset(); }
  Session& s() { return *session; }
  std::optional<Session> session;
};

template <typename F>
GuestErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const GuestError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a GuestError";
  return GuestErrorKind::InitFailure;
}

// get_scalar reads names, not expressions.
double eval(Session& session, const std::string& expr) {
  session.exec("probe = " + expr);
  return session.get_scalar("probe");
}

FieldBuffer random_field(std::mt19937_64& rng, std::size_t max_n = 40) {
  std::uniform_int_distribution<std::size_t> n_dist(0, max_n), c_dist(1, 9);
  std::uniform_real_distribution<double> v(-1e6, 1e6);
  FieldBuffer f(n_dist(rng), c_dist(rng));
  for (auto& x : f.values()) x = v(rng);
  return f;
}

}  // namespace

TEST_F(SessionTest, SecondOpenRejected) {
  EXPECT_EQ(kind_of([] { Session::open(); }), GuestErrorKind::RuntimeError);
  EXPECT_TRUE(s().live());
}

TEST_F(SessionTest, UseAfterCloseRejected) {
  s().set_scalar("x", 1.0);
  s().close();
  EXPECT_FALSE(s().live());
  EXPECT_EQ(kind_of([&] { s().exec("pass"); }), GuestErrorKind::RuntimeError);
  EXPECT_EQ(kind_of([&] { s().get_scalar("x"); }), GuestErrorKind::RuntimeError);
  EXPECT_EQ(kind_of([&] { s().close(); }), GuestErrorKind::RuntimeError);
}

TEST_F(SessionTest, ReopenStartsWithCleanScope) {
  s().set_scalar("leftover", 3.0);
  s().close();
  session.emplace(Session::open());
  EXPECT_FALSE(s().has_name("leftover"));
  EXPECT_TRUE(s().user_names().empty());
  // the view helper survives a reopen
  FieldBuffer f(2, 2, 1.0);
  RefLease lease = s().publish_by_ref("f", f);
  EXPECT_EQ(eval(s(), "float(f.sum())"), 4.0);
}

TEST_F(SessionTest, MovedFromHandleIsDead) {
  Session other = std::move(*session);
  EXPECT_TRUE(other.live());
  EXPECT_FALSE(s().live());
  EXPECT_EQ(kind_of([&] { s().exec("pass"); }), GuestErrorKind::RuntimeError);
  other.set_scalar("y", 2.0);
  EXPECT_EQ(other.get_scalar("y"), 2.0);
}

TEST_F(SessionTest, GuestExceptionSurfacesWithTraceback) {
  try {
    s().exec("raise ValueError('boom')");
    FAIL();
  } catch (const GuestError& e) {
    EXPECT_EQ(e.kind(), GuestErrorKind::RuntimeError);
    EXPECT_NE(e.message().find("ValueError"), std::string::npos);
    EXPECT_NE(e.message().find("boom"), std::string::npos);
  }
  s().exec("z = 1 + 1");
  EXPECT_EQ(s().get_scalar("z"), 2.0);
}

TEST_F(SessionTest, ScriptErrorsAreClassified) {
  EXPECT_EQ(kind_of([&] { s().load_script(ScriptSource::file("/nonexistent/script.py")); }),
            GuestErrorKind::ScriptNotFound);
  EXPECT_EQ(kind_of([&] { s().load_script(ScriptSource::text("def f(:\n  pass\n")); }),
            GuestErrorKind::SyntaxError);
  EXPECT_EQ(kind_of([&] { s().load_script(ScriptSource::text("1 / 0\n")); }),
            GuestErrorKind::RuntimeError);
}

TEST_F(SessionTest, ScriptFileDefinitionsPersist) {
  const auto path = std::filesystem::temp_directory_path() / "embedfield_test_script.py";
  std::ofstream(path) << "def twice(v):\n    return 2 * v\n";
  s().load_script(ScriptSource::file(path));
  std::filesystem::remove(path);
  s().exec("r = twice(21.5)");
  EXPECT_EQ(s().get_scalar("r"), 43.0);
}

TEST_F(SessionTest, Scalars) {
  s().set_scalar("gamma", 0.008);
  EXPECT_EQ(s().get_scalar("gamma"), 0.008);
  s().exec("k = 7");
  EXPECT_EQ(s().get_scalar("k"), 7.0);
  s().exec("label = 'abc'");
  EXPECT_EQ(kind_of([&] { s().get_scalar("label"); }), GuestErrorKind::TypeMismatch);
  EXPECT_EQ(kind_of([&] { s().get_scalar("nope"); }), GuestErrorKind::NameMissing);
  EXPECT_EQ(kind_of([&] { s().set_scalar("not valid", 1.0); }), GuestErrorKind::RuntimeError);
  EXPECT_EQ(kind_of([&] { s().set_scalar("lambda", 1.0); }), GuestErrorKind::RuntimeError);
}

TEST_F(SessionTest, UserNamesHideInternals) {
  s().set_scalar("a", 1.0);
  s().exec("import math");
  const auto names = s().user_names();
  EXPECT_EQ(names, (std::vector<std::string>{"a", "math"}));
}

TEST_F(SessionTest, CopyRoundTripOnRandomBuffers) {
  std::mt19937_64 rng(1234);
  for (int k = 0; k < 1000; ++k) {
    const FieldBuffer f = random_field(rng);
    s().put_field_copy("f", f);
    ASSERT_EQ(s().get_field_copy("f", f.shape()), f) << "iteration " << k;
  }
}

TEST_F(SessionTest, OneComponentFieldsAreFlat) {
  const FieldBuffer f = FieldBuffer::from_rows({{1}, {2}, {3}});
  s().put_field_copy("T", f);
  EXPECT_EQ(eval(s(), "T.ndim"), 1.0);
  s().exec("T2 = T.reshape(3, 1)");
  EXPECT_EQ(s().get_field_copy("T2", f.shape()), f);
}

TEST_F(SessionTest, GetCopyShapeAndTypeChecks) {
  s().put_field_copy("f", FieldBuffer(4, 6));
  EXPECT_EQ(kind_of([&] { s().get_field_copy("f", {4, 3}); }), GuestErrorKind::ShapeMismatch);
  EXPECT_EQ(kind_of([&] { s().get_field_copy("f", {5, 6}); }), GuestErrorKind::ShapeMismatch);
  EXPECT_EQ(kind_of([&] { s().get_field_copy("missing", {4, 6}); }), GuestErrorKind::NameMissing);
  s().exec("bad = 'text'");
  EXPECT_EQ(kind_of([&] { s().get_field_copy("bad", {4, 6}); }), GuestErrorKind::TypeMismatch);
}

TEST_F(SessionTest, ElementTransfer) {
  const FieldBuffer f = FieldBuffer::from_rows({{1, 2, 3}, {4, 5, 6}});
  s().put_element("e", f, 1);
  EXPECT_EQ(s().get_element("e", 3), (std::vector<double>{4, 5, 6}));
  EXPECT_EQ(kind_of([&] { s().put_element("e", f, 2); }), GuestErrorKind::ShapeMismatch);
  EXPECT_EQ(kind_of([&] { s().get_element("e", 2); }), GuestErrorKind::ShapeMismatch);

  const FieldBuffer t = FieldBuffer::from_rows({{7}, {8}});
  s().put_element("t", t, 1);
  EXPECT_EQ(s().get_scalar("t"), 8.0);
  EXPECT_EQ(s().get_element("t", 1), (std::vector<double>{8}));
}

TEST_F(SessionTest, CopyCountersTrackCopiesOnly) {
  FieldBuffer f(10, 6, 1.0);
  s().reset_counters();
  s().put_field_copy("f", f);
  s().get_field_copy("f", f.shape());
  s().put_element("e", f, 0);
  EXPECT_EQ(s().counters().field_puts, 1u);
  EXPECT_EQ(s().counters().field_gets, 1u);
  EXPECT_EQ(s().counters().element_puts, 1u);
  EXPECT_EQ(s().counters().bytes_to_guest, (60 + 6) * sizeof(double));
  const CopyCounters before = s().counters();
  {
    RefLease lease = s().publish_by_ref("g", f);
    s().exec("g[0, 0] = 5.0");
  }
  EXPECT_EQ(s().counters().bytes_to_guest, before.bytes_to_guest);
  EXPECT_EQ(s().counters().field_puts, before.field_puts);
}

TEST_F(SessionTest, ByRefMutationVisibility) {
  std::mt19937_64 rng(77);
  FieldBuffer f(500, 6);
  RefLease lease = s().publish_by_ref("x", f);
  EXPECT_EQ(lease.address(), reinterpret_cast<std::uintptr_t>(f.data()));
  EXPECT_EQ(s().get_scalar("x_address"), static_cast<double>(lease.address()));
  EXPECT_EQ(eval(s(), "x.shape[0]"), 500.0);
  EXPECT_EQ(eval(s(), "x.shape[1]"), 6.0);

  std::uniform_int_distribution<std::size_t> flat(0, f.size() - 1);
  std::uniform_real_distribution<double> val(-1e3, 1e3);
  for (int k = 0; k < 100; ++k) {
    const std::size_t idx = flat(rng);
    const double v = val(rng);
    s().set_scalar("v", v);
    s().exec("x.reshape(-1)[" + std::to_string(idx) + "] = v");
    ASSERT_EQ(f[idx], v) << "guest write " << k;
    const double w = val(rng);
    f[idx] = w;
    ASSERT_EQ(eval(s(), "float(x.reshape(-1)[" + std::to_string(idx) + "])"), w);
  }
  double host_sum = 0.0;
  for (double v : f.values()) host_sum += v;
  EXPECT_NEAR(eval(s(), "float(x.sum())"), host_sum, 1e-9 * (1.0 + std::abs(host_sum)));
}

TEST_F(SessionTest, ConstPublishIsReadOnly) {
  const FieldBuffer f(3, 6, 2.0);
  RefLease lease = s().publish_by_ref("ro", f);
  EXPECT_EQ(eval(s(), "float(ro.sum())"), 36.0);
  EXPECT_EQ(kind_of([&] { s().exec("ro[0, 0] = 1.0"); }), GuestErrorKind::RuntimeError);
  EXPECT_EQ(f(0, 0), 2.0);
}

TEST_F(SessionTest, LeaseLifecycle) {
  FieldBuffer f(4, 1, 1.0);
  RefLease lease = s().publish_by_ref("T", f);
  EXPECT_TRUE(lease.active());
  EXPECT_TRUE(f.pinned());
  EXPECT_EQ(s().active_leases(), 1u);
  EXPECT_THROW(f.resize(8, 1), std::logic_error);
  EXPECT_EQ(eval(s(), "T.ndim"), 1.0);
  EXPECT_EQ(kind_of([&] { s().close(); }), GuestErrorKind::RuntimeError);

  lease.release();
  EXPECT_FALSE(lease.active());
  EXPECT_FALSE(f.pinned());
  EXPECT_FALSE(s().has_name("T"));
  EXPECT_FALSE(s().has_name("T_address"));
  EXPECT_EQ(kind_of([&] { lease.release(); }), GuestErrorKind::RuntimeError);
  EXPECT_NO_THROW(s().close());
}

TEST_F(SessionTest, LeaseDestructorReleases) {
  FieldBuffer f(4, 6);
  { RefLease lease = s().publish_by_ref("tmp", f); }
  EXPECT_FALSE(f.pinned());
  EXPECT_EQ(s().active_leases(), 0u);
}

TEST_F(SessionTest, EmptyFieldByRef) {
  FieldBuffer f(0, 6);
  RefLease lease = s().publish_by_ref("e", f);
  EXPECT_EQ(eval(s(), "e.shape[0]"), 0.0);
}

TEST_F(SessionTest, CrossThreadCallsRejected) {
  GuestErrorKind seen = GuestErrorKind::InitFailure;
  bool threw = false;
  std::thread t([&] {
    try {
      s().exec("pass");
    } catch (const GuestError& e) {
      threw = true;
      seen = e.kind();
    }
  });
  t.join();
  EXPECT_TRUE(threw);
  EXPECT_EQ(seen, GuestErrorKind::RuntimeError);
  EXPECT_NO_THROW(s().exec("pass"));
}

TEST(TransferStrategyNames, RoundTrip) {
  for (auto s : kAllStrategies) EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_EQ(to_string(TransferStrategy::ByReference), "by-ref");
  EXPECT_FALSE(parse_strategy("zero-copy"));
}
