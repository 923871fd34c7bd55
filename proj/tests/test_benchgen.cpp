#include <gtest/gtest.h>

#include "support/test_util.hpp"
#include "wordeq/benchgen.hpp"
#include "wordeq/oracle.hpp"
#include "wordeq/problem_io.hpp"

using namespace wordeq;

TEST(Benchmark1, WitnessAlwaysChecks) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.max_len = 1 + static_cast<int>(seed % 12);
    cfg.rounds = static_cast<int>(seed % 4);
    cfg.letters = 1 + static_cast<int>(seed % 3);
    const auto g = gen_benchmark1(cfg);
    ASSERT_TRUE(g.witness);
    ASSERT_EQ(g.problem.formula.equations.size(), 1u);
    EXPECT_TRUE(check_assignment(g.problem.formula, *g.witness)) << print_problem(g.problem);
    const auto& e = g.problem.formula.equations[0];
    EXPECT_GE(e.lhs.size() + e.rhs.size(), 1u);
  }
}

TEST(Benchmark1, NoRoundsGivesIdentity) {
  GenConfig cfg;
  cfg.rounds = 0;
  cfg.seed = 3;
  const auto g = gen_benchmark1(cfg);
  EXPECT_TRUE(g.witness->empty());
  const auto& e = g.problem.formula.equations[0];
  EXPECT_EQ(e.lhs, e.rhs);
  EXPECT_GE(e.lhs.size(), 1u);
  EXPECT_LE(e.lhs.size(), 8u);
}

TEST(Benchmark1, Deterministic) {
  GenConfig cfg;
  cfg.seed = 42;
  cfg.max_len = 8;
  cfg.rounds = 2;
  const auto a = gen_benchmark1(cfg), b = gen_benchmark1(cfg);
  EXPECT_EQ(print_problem(a.problem), print_problem(b.problem));
  EXPECT_EQ(print_assignment(*a.witness, a.problem.symbols), print_assignment(*b.witness, b.problem.symbols));
}

TEST(Benchmark1, ShapeRespectsParameters) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.max_len = 6;
    cfg.rounds = 3;
    cfg.variables = 4;
    const auto g = gen_benchmark1(cfg);
    EXPECT_LE(g.problem.symbols.variable_count(), 4u);
    // Replacements only shrink or keep letter counts; the base string has at most k letters a side.
    for (const auto* side : {&g.problem.formula.equations[0].lhs, &g.problem.formula.equations[0].rhs})
      EXPECT_LE(std::count_if(side->begin(), side->end(), [](Term t) { return t.is_letter(); }), 6);
  }
}

TEST(Benchmark2, ChainInstances) {
  Problem p1;
  p1.formula.equations.push_back(chain_equation(1, p1.symbols));
  EXPECT_EQ(wordeq::testing::show(p1), "X1aX1 = aX1baa");
  Problem p2;
  p2.formula.equations.push_back(chain_equation(2, p2.symbols));
  EXPECT_EQ(wordeq::testing::show(p2), "X2aX2bX1 = aX2X1X1baa");
  Problem p4;
  p4.formula.equations.push_back(chain_equation(4, p4.symbols));
  EXPECT_EQ(wordeq::testing::show(p4), "X4aX4bX3bX2bX1 = aX4X3X3bX2X2bX1X1baa");
}

TEST(Benchmark2, SingleTrailingBaa) {
  for (int n = 1; n <= 8; ++n) {
    Problem p;
    p.formula.equations.push_back(chain_equation(n, p.symbols));
    const std::string rhs = format_word(p.formula.equations[0].rhs, p.symbols);
    EXPECT_EQ(rhs.substr(rhs.size() - 3), "baa");
    EXPECT_EQ(rhs.find("baa"), rhs.size() - 3) << rhs;
    EXPECT_EQ(p.symbols.variable_count(), static_cast<std::size_t>(n));
  }
}

TEST(Benchmark2, DeterministicAndKeepsChainVariables) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.chain_length = 3;
    cfg.letters = 2;
    const Problem p = gen_benchmark2(cfg);
    const Problem again = gen_benchmark2(cfg);
    EXPECT_EQ(print_problem(p), print_problem(again));
    // The X-variables keep their positions; lengths grow by the inserted sides.
    const auto& e = p.formula.equations[0];
    const auto xs = std::count_if(e.lhs.begin(), e.lhs.end(), [&](Term t) {
      return t.is_variable() && p.symbols.variable_name(t.id)[0] == 'X';
    });
    EXPECT_EQ(xs, 4);  // X3 a X3 b X2 b X1
  }
}

TEST(Benchmark3, StructureAndOracle) {
  int sat = 0, unsat = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.conjuncts = 2;
    cfg.max_len = 3;
    cfg.variables = 3;
    cfg.rounds = 2;
    const Problem p = gen_benchmark3(cfg);
    ASSERT_EQ(p.formula.equations.size(), 2u);
    EXPECT_LE(p.symbols.variable_count(), 3u);
    EXPECT_EQ(print_problem(p), print_problem(gen_benchmark3(cfg)));
    if (brute_force_solve(p.formula, 3)) {
      ++sat;
    } else {
      ++unsat;
    }
  }
  EXPECT_GT(sat + unsat, 0);
  EXPECT_GT(unsat, 0);
}

TEST(Benchmark3, NeedsTwoConjuncts) {
  GenConfig cfg;
  cfg.conjuncts = 1;
  EXPECT_THROW(gen_benchmark3(cfg), std::invalid_argument);
}

TEST(GenConfig, Validation) {
  GenConfig cfg;
  cfg.max_len = 0;
  EXPECT_THROW(gen_benchmark1(cfg), std::invalid_argument);
  cfg = {};
  cfg.chain_length = 0;
  EXPECT_THROW(gen_benchmark2(cfg), std::invalid_argument);
}
