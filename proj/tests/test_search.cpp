#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support/test_util.hpp"
#include "wordeq/oracle.hpp"
#include "wordeq/proof_tree.hpp"
#include "wordeq/search.hpp"

using namespace wordeq;
using wordeq::testing::make_problem;

namespace {

/// A model whose heads ignore their input: every split point of arity n gets
/// softmax(logits[n]).
ModelWeights constant_model(const std::map<std::size_t, std::vector<float>>& logits) {
  ModelWeights w;
  w.m = 2;
  w.steps = 1;
  for (auto& e : w.type_embeddings) e = {1.0f, -1.0f};
  w.gcn.push_back({2, 2, {1, 0, 0, 1}, {0, 0}});
  for (const auto& [arity, l] : logits) {
    DenseLayer<float> head{(arity + 1) * 2, arity, std::vector<float>((arity + 1) * 2 * arity, 0.0f), l};
    w.heads[arity] = {head};
  }
  w.validate();
  return w;
}

SearchConfig config(Backtrack bt, Ordering o, std::uint64_t seed = 0) {
  SearchConfig cfg;
  cfg.backtrack = bt;
  cfg.ordering = o;
  cfg.seed = seed;
  cfg.timeout_seconds = 30;
  return cfg;
}

}  // namespace

TEST(Solve, IntroductionEquationSat) {
  const Problem p = make_problem("Xab = YaZ");
  const auto r = solve(p, config(Backtrack::BT1, Ordering::Fixed));
  ASSERT_EQ(r.status, Status::Sat);
  EXPECT_TRUE(check_assignment(p.formula, r.witness));
  EXPECT_GT(r.stats.splits, 0u);
}

TEST(Solve, LetterClashUnsat) {
  const Problem p = make_problem("a = b");
  for (auto bt : {Backtrack::BT1, Backtrack::BT2, Backtrack::BT3})
    for (auto o : {Ordering::Fixed, Ordering::Random}) {
      const auto r = solve(p, config(bt, o));
      EXPECT_EQ(r.status, Status::Unsat);
      EXPECT_EQ(r.stats.splits, 1u);
    }
}

TEST(Solve, TrueIsSatAtOnce) {
  Problem p;
  const auto r = solve(p, config(Backtrack::BT2, Ordering::Fixed));
  EXPECT_EQ(r.status, Status::Sat);
  EXPECT_TRUE(r.witness.empty());
}

TEST(Solve, AllChildrenUnsat) {
  // R7 on Xa = b: X = ε gives a = b, X = bX' gives X'a = ε.
  const Problem p = make_problem("Xa = b");
  const auto r = solve(p, config(Backtrack::BT1, Ordering::Fixed));
  EXPECT_EQ(r.status, Status::Unsat);
}

TEST(Solve, FigureEpsilonBranchFirst) {
  const Problem p = make_problem("XbY = bXXZ");
  const auto r = solve(p, config(Backtrack::BT1, Ordering::Fixed));
  ASSERT_EQ(r.status, Status::Sat);
  EXPECT_LE(r.stats.max_depth, 4);
  EXPECT_TRUE(check_assignment(p.formula, r.witness));
}

TEST(Solve, FigureReversedOrderDoesNotTerminate) {
  const Problem p = make_problem("XbY = bXXZ");
  auto cfg = config(Backtrack::BT1, Ordering::FixedReversed);
  cfg.node_budget = 10000;
  const auto r = solve(p, cfg);
  EXPECT_EQ(r.status, Status::Unknown);
  EXPECT_EQ(r.stats.nodes, 10000u);
}

TEST(Solve, TimeoutGivesUnknown) {
  const Problem p = make_problem("XbY = bXXZ");
  auto cfg = config(Backtrack::BT1, Ordering::FixedReversed);
  cfg.timeout_seconds = 0.05;
  EXPECT_EQ(solve(p, cfg).status, Status::Unknown);
}

TEST(Solve, Bt2RescuesReversedOrder) {
  // The budget cuts the runaway right branch, after which the ε-branch wins.
  const Problem p = make_problem("XbY = bXXZ");
  auto cfg = config(Backtrack::BT2, Ordering::FixedReversed);
  cfg.l_bt2 = 10;
  cfg.l_bt2_step = 5;
  const auto r = solve(p, cfg);
  ASSERT_EQ(r.status, Status::Sat);
  EXPECT_TRUE(check_assignment(p.formula, r.witness));
}

TEST(Solve, Bt3RoundsIncrease) {
  // The only solution X = aaaaaaa takes seven R7 prefix steps, so early rounds are cut.
  const Problem p = make_problem("Xb = aaaaaaab");
  auto cfg = config(Backtrack::BT3, Ordering::FixedReversed);
  cfg.l_bt3 = 3;
  const auto r = solve(p, cfg);
  ASSERT_EQ(r.status, Status::Sat);
  EXPECT_TRUE(check_assignment(p.formula, r.witness));
  ASSERT_GE(r.stats.round_limits.size(), 2u);
  for (std::size_t i = 1; i < r.stats.round_limits.size(); ++i) {
    EXPECT_GT(r.stats.round_limits[i], r.stats.round_limits[i - 1]);
    EXPECT_EQ(r.stats.round_limits[i] - r.stats.round_limits[i - 1], 3);
  }
}

TEST(Solve, Bt3FullyExploredUnsatStops) {
  const Problem p = make_problem("Xa = b");
  auto cfg = config(Backtrack::BT3, Ordering::Fixed);
  const auto r = solve(p, cfg);
  EXPECT_EQ(r.status, Status::Unsat);
  EXPECT_EQ(r.stats.round_limits.size(), 1u);
}

TEST(Solve, UnknownThenSatChildIsSat) {
  // Under BT3 with limit 2 the right child is cut (UNKNOWN) and the left one is SAT.
  const Problem p = make_problem("XbY = bXXZ");
  for (auto o : {Ordering::Fixed, Ordering::FixedReversed}) {
    auto cfg = config(Backtrack::BT3, o);
    cfg.l_bt3 = 2;
    EXPECT_EQ(solve(p, cfg).status, Status::Sat);
  }
}

TEST(Solve, Deterministic) {
  const Problem p = make_problem("XaYb = bYaX & XY = YX");
  for (auto o : {Ordering::Fixed, Ordering::Random}) {
    auto cfg = config(Backtrack::BT3, o, 42);
    cfg.node_budget = 5000;
    std::ostringstream t1, t2;
    const auto a = solve(p, cfg, &t1);
    const auto b = solve(p, cfg, &t2);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.stats.splits, b.stats.splits);
    EXPECT_EQ(a.stats.nodes, b.stats.nodes);
    EXPECT_EQ(a.stats.max_depth, b.stats.max_depth);
    EXPECT_EQ(a.witness, b.witness);
    EXPECT_EQ(t1.str(), t2.str());
  }
}

TEST(Solve, TraceFormat) {
  const Problem p = make_problem("XbY = bXXZ");
  std::ostringstream trace;
  solve(p, config(Backtrack::BT1, Ordering::Fixed), &trace);
  std::istringstream lines(trace.str());
  std::string first;
  std::getline(lines, first);
  EXPECT_EQ(first, "1 R7 -> 2 branches");
}

TEST(Solve, ModelRequired) {
  const Problem p = make_problem("Xab = YaZ");
  EXPECT_THROW(solve(p, config(Backtrack::BT1, Ordering::Gnn), static_cast<const ModelWeights*>(nullptr)), ModelError);
  auto cfg = config(Backtrack::BT1, Ordering::GnnFixed);
  cfg.model_path = "/nonexistent/weights.json";
  EXPECT_THROW(solve(p, cfg), ParseError);
}

TEST(Solve, InvalidConfigRejected) {
  const Problem p = make_problem("a = a");
  auto cfg = config(Backtrack::BT2, Ordering::Fixed);
  cfg.l_bt2_step = 0;
  EXPECT_THROW(solve(p, cfg), std::invalid_argument);
  cfg = config(Backtrack::BT3, Ordering::Fixed);
  cfg.l_bt3 = -1;
  EXPECT_THROW(solve(p, cfg), std::invalid_argument);
}

TEST(OrderBranches, Basics) {
  Problem p = make_problem("Xab = YaZ");
  const auto app = apply_rule(p.formula, p.symbols);
  Rng rng(0);
  EXPECT_EQ(order_branches(p.formula, app, Ordering::Fixed, rng, nullptr, GraphVariant::G1),
            (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(order_branches(p.formula, app, Ordering::FixedReversed, rng, nullptr, GraphVariant::G1),
            (std::vector<std::size_t>{2, 1, 0}));

  Problem q = make_problem("ab = aY");
  const auto single = apply_rule(q.formula, q.symbols);
  // No model is supplied, so this would throw if the model were consulted.
  EXPECT_EQ(order_branches(q.formula, single, Ordering::Gnn, rng, nullptr, GraphVariant::G1),
            (std::vector<std::size_t>{0}));
}

TEST(OrderBranches, GnnSortsByScore) {
  const ModelWeights w = constant_model({{2, {std::log(0.3f), std::log(0.7f)}}, {3, {0.0f, 2.0f, 1.0f}}});
  Problem p = make_problem("XbY = bXXZ");
  const auto app = apply_rule(p.formula, p.symbols);
  const auto scores = score_branches(p.formula, {&app.branches[0].formula(), &app.branches[1].formula()},
                                     GraphVariant::G5, w);
  EXPECT_NEAR(scores[0], 0.3, 1e-6);
  EXPECT_NEAR(scores[1], 0.7, 1e-6);
  Rng rng(0);
  EXPECT_EQ(order_branches(p.formula, app, Ordering::Gnn, rng, &w, GraphVariant::G5), (std::vector<std::size_t>{1, 0}));

  Problem q = make_problem("Xab = YaZ");
  const auto app3 = apply_rule(q.formula, q.symbols);
  EXPECT_EQ(order_branches(q.formula, app3, Ordering::Gnn, rng, &w, GraphVariant::G2),
            (std::vector<std::size_t>{1, 2, 0}));
}

TEST(OrderBranches, GnnTiesStayStable) {
  const ModelWeights w = constant_model({{2, {0.0f, 0.0f}}});
  Problem p = make_problem("XbY = bXXZ");
  const auto app = apply_rule(p.formula, p.symbols);
  Rng rng(0);
  EXPECT_EQ(order_branches(p.formula, app, Ordering::Gnn, rng, &w, GraphVariant::G3), (std::vector<std::size_t>{0, 1}));
}

TEST(OrderBranches, MixedStrategiesUseBothSources) {
  const ModelWeights w = constant_model({{3, {0.0f, 2.0f, 1.0f}}});
  Problem p = make_problem("Xab = YaZ");
  const auto app = apply_rule(p.formula, p.symbols);
  Rng rng(123);
  std::map<std::vector<std::size_t>, int> s2, s3, random;
  for (int i = 0; i < 600; ++i) {
    ++s2[order_branches(p.formula, app, Ordering::GnnFixed, rng, &w, GraphVariant::G1)];
    ++s3[order_branches(p.formula, app, Ordering::GnnRandom, rng, &w, GraphVariant::G1)];
    ++random[order_branches(p.formula, app, Ordering::Random, rng, nullptr, GraphVariant::G1)];
  }
  const std::vector<std::size_t> model_order{1, 2, 0}, fixed{0, 1, 2};
  EXPECT_EQ(s2.size(), 2u);
  EXPECT_NEAR(s2[model_order], 300, 60);
  EXPECT_NEAR(s2[fixed], 300, 60);
  // S3: half model order, the other half spread over all six permutations.
  EXPECT_EQ(s3.size(), 6u);
  EXPECT_NEAR(s3[model_order], 300 + 50, 60);
  EXPECT_EQ(random.size(), 6u);
  for (const auto& [perm, n] : random) EXPECT_NEAR(n, 100, 40);
}

TEST(Solve, WitnessesCheckAndUnsatAgreesWithOracle) {
  Rng rng(77);
  int sat = 0, unsat = 0;
  for (int i = 0; i < 150; ++i) {
    const Problem p = wordeq::testing::random_problem(rng, {.letters = 2, .variables = 3, .max_side = 5, .max_equations = 2});
    auto cfg = config(Backtrack::BT3, Ordering::Fixed);
    cfg.node_budget = 20000;
    const auto r = solve(p, cfg);
    if (r.status == Status::Sat) {
      ++sat;
      EXPECT_TRUE(check_assignment(p.formula, r.witness)) << wordeq::testing::show(p);
    } else if (r.status == Status::Unsat) {
      ++unsat;
      EXPECT_FALSE(brute_force_solve(p.formula, 3).has_value()) << wordeq::testing::show(p);
    }
  }
  EXPECT_GT(sat, 30);
  EXPECT_GT(unsat, 10);
}

TEST(Solve, StatusIsOrderingInvariantOnFiniteTrees) {
  const ModelWeights w = random_weights<float>(4, 2, 8, 5);
  Rng rng(13);
  int finite = 0;
  for (int i = 0; i < 200 && finite < 40; ++i) {
    Problem p = wordeq::testing::random_problem(rng, {.letters = 2, .variables = 2, .max_side = 4, .max_equations = 2});
    SymbolTable scratch = p.symbols;
    const ProofTree t = build_proof_tree(p.formula, scratch, {.depth_limit = 40, .node_cap = 2000});
    bool complete = true;
    for (const auto& n : t.nodes()) complete &= n.label != Status::Unknown;
    if (!complete) continue;
    ++finite;
    std::optional<Status> seen;
    for (auto o : {Ordering::Fixed, Ordering::Random, Ordering::Gnn, Ordering::FixedReversed}) {
      const auto r = solve(p, config(Backtrack::BT1, o, 9), &w);
      if (!seen) seen = r.status;
      EXPECT_EQ(r.status, *seen) << wordeq::testing::show(p);
      EXPECT_EQ(r.status, t.status(0));
    }
  }
  EXPECT_GE(finite, 20);
}

TEST(Solve, StatsJson) {
  const Problem p = make_problem("Xab = YaZ");
  const auto j = stats_to_json(solve(p, config(Backtrack::BT2, Ordering::Fixed)));
  EXPECT_EQ(j["status"], "SAT");
  for (const char* key : {"splits", "nodes", "maxDepth", "wallMillis"}) EXPECT_TRUE(j.contains(key)) << key;
}
