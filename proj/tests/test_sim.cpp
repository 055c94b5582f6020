#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "uwoc/sim.hpp"

using namespace uwoc;
using namespace uwoc::sim;
using vehicle::Vec3;

namespace {

std::vector<RunRow> rows_from(const std::vector<bool>& inside, double dt = 1.0) {
  std::vector<RunRow> rows(inside.size());
  for (std::size_t i = 0; i < inside.size(); ++i) {
    rows[i].t = static_cast<double>(i) * dt;
    rows[i].inside_cone = inside[i];
  }
  return rows;
}

Scenario short_scenario(double duration) {
  Scenario s;
  s.duration = duration;
  return s;
}

const RunRecord& nominal_pd() {
  static const RunRecord rec = run(Scenario{}, CommTarget{});
  return rec;
}

}  // namespace

TEST(Disturbance, HalfOpenWindow) {
  const std::optional<DisturbanceSpec> spec = DisturbanceSpec{};
  EXPECT_EQ(disturbance_wrench(30.5, spec).tau, Vec3(350, 350, 350));
  EXPECT_EQ(disturbance_wrench(30.0, spec).tau, Vec3(350, 350, 350));
  EXPECT_TRUE(disturbance_wrench(29.999, spec).tau.isZero(0));
  EXPECT_TRUE(disturbance_wrench(31.0, spec).tau.isZero(0));
  EXPECT_TRUE(disturbance_wrench(30.5, std::nullopt).tau.isZero(0));
}

TEST(Disturbance, PulseCoversTwoHundredSteps) {
  const std::optional<DisturbanceSpec> spec = DisturbanceSpec{};
  int active = 0;
  for (int k = 0; k <= 30000; ++k) {
    if (!disturbance_wrench(k * 0.005, spec).tau.isZero(0)) ++active;
  }
  EXPECT_EQ(active, 200);
}

TEST(Noise, ZeroSigmaIsExactlyZero) {
  Xoshiro256 rng(9);
  NoiseSpec spec{0.0, 0.0, 0.0, 9};
  for (int i = 0; i < 100; ++i) {
    const Perturbation p = measurement_noise(rng, spec);
    EXPECT_TRUE(p.eta.isZero(0));
    EXPECT_TRUE(p.nu.isZero(0));
  }
}

TEST(Noise, SeededStreamRepeats) {
  Xoshiro256 a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    differs |= x != c.normal();
  }
  EXPECT_TRUE(differs);
}

TEST(Noise, SampleMeanAndVariance) {
  Xoshiro256 rng(1);
  const int n = 1000000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_LE(std::abs(sum / n), 4.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(Rng, UniformRange) {
  Xoshiro256 rng(5);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, SplitMixReferenceValue) {
  // First output of SplitMix64 seeded with 0 (published test vector).
  std::uint64_t state = 0;
  EXPECT_EQ(splitmix64(state), 0xe220a8397b1dcdafull);
}

TEST(Scenario, Validation) {
  Scenario s;
  EXPECT_NO_THROW(validate(s));
  s.dt = 0.007;
  EXPECT_THROW(validate(s), std::invalid_argument);
  s = Scenario{};
  s.depth = 0.0;
  EXPECT_THROW(validate(s), std::invalid_argument);
  s = Scenario{};
  s.duration = -1.0;
  EXPECT_THROW(validate(s), std::invalid_argument);
}

TEST(Run, RowCountAndInitialDistance) {
  const RunRecord& rec = nominal_pd();
  EXPECT_EQ(rec.rows.size(), 30001u);
  EXPECT_NEAR(rec.rows.front().distance, std::sqrt(50.0 + 3.8157 * 3.8157), 1e-12);
  EXPECT_NEAR(rec.rows.front().distance, 8.03, 0.02);
  EXPECT_DOUBLE_EQ(rec.rows.back().t, 150.0);
}

TEST(Run, SingleStepRun) {
  const RunRecord rec = run(short_scenario(0.005), {});
  EXPECT_EQ(rec.rows.size(), 2u);
  EXPECT_FALSE(rec.metrics.established());
  EXPECT_FALSE(rec.metrics.rmse_x.has_value());
}

TEST(Run, GeometryFloor) {
  for (const RunRow& row : nominal_pd().rows) {
    EXPECT_GE(row.distance, 3.8157 - 1e-12);
    const double horizontal = std::hypot(row.state.eta[0] - row.eta_ref[0],
                                         row.state.eta[1] - row.eta_ref[1]);
    EXPECT_NEAR(row.distance, std::hypot(horizontal, 3.8157), 1e-12);
  }
}

TEST(Run, InsideImpliesMinimumRate) {
  for (const RunRow& row : nominal_pd().rows) {
    if (row.inside_cone) {
      EXPECT_GE(row.bit_rate, 1e7 * (1 - 1e-6));
    }
  }
}

TEST(Run, MetricsRecomputable) {
  const RunRecord& rec = nominal_pd();
  EXPECT_EQ(compute_metrics(rec.rows, Scenario{}), rec.metrics);
}

TEST(Run, SeedDeterminism) {
  Scenario s;
  s.duration = 40.0;
  s.disturbance = DisturbanceSpec{};
  s.noise = NoiseSpec{};
  const RunRecord a = run(s, {});
  const RunRecord b = run(s, {});
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].state.eta, b.rows[i].state.eta);
    EXPECT_EQ(a.rows[i].tau.tau, b.rows[i].tau.tau);
  }
  s.noise->seed = 2;
  const RunRecord c = run(s, {});
  EXPECT_NE(a.rows.back().state.eta, c.rows.back().state.eta);
}

TEST(Run, NoiseOnlyReachesPlantThroughController) {
  Scenario quiet;
  quiet.duration = 5.0;
  quiet.controller.kind = ControllerKind::kNone;
  quiet.disturbance = DisturbanceSpec{1.0, 1.0, {Vec3(100, -50, 20)}};
  Scenario noisy = quiet;
  noisy.noise = NoiseSpec{0.5, 0.1, 0.5, 7};
  const RunRecord a = run(quiet, {});
  const RunRecord b = run(noisy, {});
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].state.eta, b.rows[i].state.eta);
    EXPECT_EQ(a.rows[i].state.nu, b.rows[i].state.nu);
  }
}

TEST(Run, PdAndUnitExponentNlpdIdentical) {
  Scenario pd;
  pd.duration = 20.0;
  Scenario nl = pd;
  nl.controller.kind = ControllerKind::kNlpd;
  nl.controller.nlpd = control::GainSchedule::constant(300, 250);
  for (auto& axis : nl.controller.nlpd.axes) axis.position.b = 0.3;
  const RunRecord a = run(pd, {});
  const RunRecord b = run(nl, {});
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].state.eta, b.rows[i].state.eta);
  }
}

TEST(Run, DivergenceCarriesTimestamp) {
  Scenario s;
  s.duration = 2.0;
  s.disturbance = DisturbanceSpec{1.0, 0.5, {Vec3(1e308, 1e308, 0)}};
  try {
    run(s, {});
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.time(), 1.0);
    EXPECT_LE(e.time(), 1.5);
    EXPECT_NE(std::string(e.what()).find("t="), std::string::npos);
  }
}

TEST(Metrics, ArrivalTime) {
  EXPECT_EQ(cone_arrival_time(rows_from({true, false, true})), 0.0);
  EXPECT_EQ(cone_arrival_time(rows_from({false, false, true, true})), 2.0);
  EXPECT_FALSE(cone_arrival_time(rows_from({false, false})).has_value());
}

TEST(Metrics, EstablishedTime) {
  EXPECT_EQ(communication_established_time(rows_from({false, true, true, true})), 1.0);
  EXPECT_EQ(communication_established_time(rows_from({false, true, false, true, true})), 3.0);
  EXPECT_FALSE(communication_established_time(rows_from({true, true, false})).has_value());
}

TEST(Metrics, EstablishedTimeIgnoresDisturbanceExcursion) {
  const auto rows = rows_from({false, true, true, true, false, false, true, true});
  EXPECT_EQ(communication_established_time(rows, 3.0), 1.0);
  EXPECT_EQ(communication_established_time(rows), 6.0);
}

TEST(Metrics, RestoringTime) {
  const auto rows = rows_from({false, true, true, true, false, false, true, true});
  EXPECT_EQ(restoring_time(rows, 3.0), 2.0);
  EXPECT_FALSE(restoring_time(rows_from({false, true, true, true}), 2.0).has_value());
  EXPECT_TRUE(std::isinf(*restoring_time(rows_from({true, true, false, false}), 1.0)));
}

TEST(Metrics, Rmse) {
  auto rows = rows_from({true, true, true, true});
  EXPECT_EQ(rmse(rows, Component::kX, {0.0, 3.0}), 0.0);
  for (auto& row : rows) row.eta_ref[0] = 0.5;
  EXPECT_DOUBLE_EQ(rmse(rows, Component::kX, {0.0, 3.0}), 0.5);
  EXPECT_DOUBLE_EQ(rmse(rows, Component::kX, {1.0, 2.0}), 0.5);
  EXPECT_THROW(rmse(rows, Component::kX, {10.0, 20.0}), std::invalid_argument);
}

TEST(Metrics, RmseWrapsYaw) {
  auto rows = rows_from({true, true});
  for (auto& row : rows) {
    row.eta_ref[2] = 3.1;
    row.state.eta[2] = -3.1;
  }
  EXPECT_NEAR(rmse(rows, Component::kRho, {0.0, 1.0}), 2 * std::numbers::pi - 6.2, 1e-12);
}

TEST(Metrics, NominalPdWindowStartsAtEstablishment) {
  const RunMetrics& m = nominal_pd().metrics;
  ASSERT_TRUE(m.established());
  ASSERT_TRUE(m.rmse_window.has_value());
  EXPECT_EQ(m.rmse_window->first, *m.established_time);
  EXPECT_DOUBLE_EQ(m.rmse_window->second, 150.0);
  EXPECT_EQ(*m.arrival_time, *m.established_time);
  EXPECT_FALSE(m.restoring_time.has_value());
}

TEST(ControllerKind, StringRoundTrip) {
  for (auto k : {ControllerKind::kPd, ControllerKind::kNlpd, ControllerKind::kNone}) {
    EXPECT_EQ(controller_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(controller_kind_from_string("pid"), std::invalid_argument);
}
