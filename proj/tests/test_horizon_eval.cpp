#include <gtest/gtest.h>

#include <random>

#include "echelon/horizon_eval.hpp"
#include "oracle/equation_totals.hpp"
#include "support.hpp"

using namespace echelon;

TEST(Evaluate, ZeroVectorSimple) {
  const auto cfg = builtin_scenario("simple");
  const Environment env(cfg);
  const DecisionVector dv{std::vector<double>(decision_dim(cfg), 0.0)};
  const auto r = evaluate(dv, env, sample_trace(cfg, 0));
  EXPECT_NEAR(r.objectives.profit, -14730.0, 1e-6);
  EXPECT_EQ(r.violation, 0.0);
  EXPECT_TRUE(r.feasible);
}

TEST(Evaluate, OverdrawnManufacturerIsInfeasible) {
  const auto cfg = builtin_scenario("simple");
  const Environment env(cfg);
  DecisionVector dv{std::vector<double>(decision_dim(cfg), 0.0)};
  // period 0: route 2->4 gene asks for 1000; executed as Cap = 200
  dv.genes[2 + 2] = 1000.0;
  const auto r = evaluate(dv, env, sample_trace(cfg, 0));
  EXPECT_TRUE(r.feasible);  // 200 < 380 on hand
  const auto repaired = repair_bounds(dv, cfg);
  EXPECT_EQ(repaired.genes[4], 200.0);
  // Drain node 2 over two periods: 2 * 200 > 380.
  dv.genes[8 + 2 + 2] = 200.0;
  const auto r2 = evaluate(dv, env, sample_trace(cfg, 0));
  EXPECT_FALSE(r2.feasible);
  EXPECT_GT(r2.violation, 0.0);
}

TEST(Evaluate, LengthMismatch) {
  const auto cfg = builtin_scenario("simple");
  const Environment env(cfg);
  EXPECT_THROW(evaluate(DecisionVector{std::vector<double>(799, 0.0)}, env, sample_trace(cfg, 0)), std::invalid_argument);
}

TEST(Evaluate, AveragesOverTraces) {
  const auto cfg = builtin_scenario("moderate");
  const Environment env(cfg);
  std::mt19937_64 gen(1);
  const auto dv = testing_support::random_dv(cfg, gen, 0.2);
  const std::vector<DemandTrace> traces{sample_trace(cfg, 1), sample_trace(cfg, 2)};
  const auto a = evaluate(dv, env, traces[0]);
  const auto b = evaluate(dv, env, traces[1]);
  const auto both = evaluate(dv, env, std::span<const DemandTrace>(traces));
  EXPECT_DOUBLE_EQ(both.objectives.profit, 0.5 * (a.objectives.profit + b.objectives.profit));
  EXPECT_DOUBLE_EQ(both.violation, 0.5 * (a.violation + b.violation));
}

class EvalEquivalence : public ::testing::TestWithParam<const char*> {};

TEST_P(EvalEquivalence, MatchesRolloutAndEquations) {
  const auto cfg = builtin_scenario(GetParam());
  const Environment env(cfg);
  const auto trace = sample_trace(cfg, 21);
  std::mt19937_64 gen(5);
  const std::size_t dim = action_dim(cfg);
  for (int i = 0; i < 10; ++i) {
    const auto dv = testing_support::random_dv(cfg, gen, i % 2 ? 1.0 : 0.1);
    const auto r = evaluate(dv, env, trace);
    const auto ep = rollout(
        env, trace,
        [&](const std::vector<double>&, int t) {
          const auto* p = dv.genes.data() + static_cast<std::size_t>(t) * dim;
          return ActionVector::from_flat({p, dim}, cfg.echelons.manufacturers.size());
        },
        1.0);
    EXPECT_EQ(r.objectives, ep.totals);
    EXPECT_EQ(r.violation, ep.violation);
    const auto direct = oracle::equation_totals(cfg, ep.log);
    EXPECT_TRUE(oracle::close(r.objectives.profit, direct.profit, 1e-9));
    EXPECT_TRUE(oracle::close(-r.objectives.neg_emission, direct.emission, 1e-9));
    EXPECT_TRUE(oracle::close(-r.objectives.neg_sl_inequality, direct.sl_inequality, 1e-9));
  }
}

INSTANTIATE_TEST_SUITE_P(Builtins, EvalEquivalence, ::testing::Values("simple", "moderate", "complex"));

TEST(RepairBounds, Clamps) {
  const auto cfg = builtin_scenario("simple");
  const auto b = gene_bounds(cfg);
  EXPECT_EQ(b.upper[0], 200.0);  // one supplier times Cap
  EXPECT_EQ(b.upper[2], 200.0);
  DecisionVector dv{std::vector<double>(decision_dim(cfg), 50.0)};
  EXPECT_EQ(repair_bounds(dv, cfg), dv);
  dv.genes[0] = -3.0;
  dv.genes[3] = 250.0;
  const auto fixed = repair_bounds(dv, cfg);
  EXPECT_EQ(fixed.genes[0], 0.0);
  EXPECT_EQ(fixed.genes[3], 200.0);
  EXPECT_EQ(fixed.genes[4], 50.0);
}
