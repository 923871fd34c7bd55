#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wordeq/random.hpp"
#include "wordeq/terms.hpp"

namespace wordeq {

struct GenConfig {
  std::uint64_t seed = 0;
  int letters = 2;      ///< alphabet size |C|, letters a, b, c, ...
  int variables = 10;   ///< variable pool size |V|
  int max_len = 8;      ///< k
  int rounds = 2;       ///< replacement rounds r
  int conjuncts = 2;    ///< Benchmark 3
  int chain_length = 2; ///< n, Benchmark 2

  void validate() const {
    if (letters < 1 || letters > 26) throw std::invalid_argument("letters must be in [1, 26]");
    if (variables < 1) throw std::invalid_argument("variable pool must be non-empty");
    if (max_len < 1) throw std::invalid_argument("k must be at least 1");
    if (rounds < 0) throw std::invalid_argument("rounds must be non-negative");
    if (conjuncts < 1) throw std::invalid_argument("conjunct count must be positive");
    if (chain_length < 1) throw std::invalid_argument("n must be at least 1");
  }
};

struct GeneratedProblem {
  Problem problem;
  /// Present for Benchmark 1.
  std::optional<Assignment> witness;
};

namespace detail {

inline void declare_alphabet(SymbolTable& syms, int letters) {
  for (int i = 0; i < letters; ++i) syms.intern_letter(std::string(1, static_cast<char>('a' + i)));
}

/// One `s = s` equation with `rounds` segment replacements. Variables are
/// drawn in order from the pool `<prefix>1 .. <prefix><pool>`; the witness
/// gives each its share of the segment it replaced.
inline std::pair<Equation, Assignment> benchmark1_equation(Rng& rng, SymbolTable& syms, const GenConfig& cfg,
                                                           const std::string& prefix) {
  const auto len = 1 + uniform_below(rng, static_cast<std::uint64_t>(cfg.max_len));
  Word s;
  for (std::uint64_t i = 0; i < len; ++i) {
    const auto letter = uniform_below(rng, static_cast<std::uint64_t>(cfg.letters));
    s.push_back(Term::letter(*syms.find_letter(std::string(1, static_cast<char>('a' + letter)))));
  }
  Equation e{s, s};
  Assignment witness;
  int next_var = 0;

  for (int round = 0; round < cfg.rounds && next_var < cfg.variables; ++round) {
    // Letter-only segments [begin, end) of one side.
    auto segments = [](const Word& w) {
      std::vector<std::pair<std::size_t, std::size_t>> out;
      for (std::size_t b = 0; b < w.size(); ++b)
        for (std::size_t end = b + 1; end <= w.size() && w[end - 1].is_letter(); ++end) out.emplace_back(b, end);
      return out;
    };
    const bool first_lhs = coin_flip(rng);
    Word* side = first_lhs ? &e.lhs : &e.rhs;
    auto segs = segments(*side);
    if (segs.empty()) {
      side = first_lhs ? &e.rhs : &e.lhs;
      segs = segments(*side);
    }
    if (segs.empty()) break;
    const auto [begin, end] = segs[uniform_below(rng, segs.size())];

    const int wanted = 1 + static_cast<int>(uniform_below(rng, 5));
    const int count = std::min(wanted, cfg.variables - next_var);
    const std::size_t seg_len = end - begin;
    std::vector<std::size_t> cuts;
    for (int i = 0; i + 1 < count; ++i) cuts.push_back(uniform_below(rng, seg_len + 1));
    std::sort(cuts.begin(), cuts.end());
    cuts.insert(cuts.begin(), 0);
    cuts.push_back(seg_len);

    Word vars;
    for (int i = 0; i < count; ++i) {
      const auto id = syms.intern_variable(prefix + std::to_string(++next_var));
      vars.push_back(Term::variable(id));
      witness[id] = Word(side->begin() + static_cast<std::ptrdiff_t>(begin + cuts[i]),
                         side->begin() + static_cast<std::ptrdiff_t>(begin + cuts[i + 1]));
    }
    side->erase(side->begin() + static_cast<std::ptrdiff_t>(begin), side->begin() + static_cast<std::ptrdiff_t>(end));
    side->insert(side->begin() + static_cast<std::ptrdiff_t>(begin), vars.begin(), vars.end());
  }
  return {std::move(e), std::move(witness)};
}

}  // namespace detail

/// Benchmark 1: a random letter string s with 1 <= |s| <= k, the equation
/// s = s, then `rounds` replacements of a letter segment on a random side by
/// 1-5 fresh variables. Satisfiable by construction; the witness proves it.
inline GeneratedProblem gen_benchmark1(const GenConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  GeneratedProblem out;
  detail::declare_alphabet(out.problem.symbols, cfg.letters);
  auto [eq, witness] = detail::benchmark1_equation(rng, out.problem.symbols, cfg, "X");
  out.problem.formula.equations.push_back(std::move(eq));
  out.witness = std::move(witness);
  return out;
}

/// X_n a X_n b X_{n-1} b ... b X_1 = a X_n X_{n-1} X_{n-1} b ... b X_1 X_1 b a a
inline Equation chain_equation(int n, SymbolTable& syms) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  const Term a = Term::letter(syms.intern_letter("a"));
  const Term b = Term::letter(syms.intern_letter("b"));
  std::vector<Term> x(static_cast<std::size_t>(n) + 1);
  for (int i = n; i >= 1; --i) x[static_cast<std::size_t>(i)] = Term::variable(syms.intern_variable("X" + std::to_string(i)));
  auto X = [&](int i) { return x[static_cast<std::size_t>(i)]; };

  Equation e;
  e.lhs = {X(n), a, X(n)};
  for (int i = n - 1; i >= 1; --i) {
    e.lhs.push_back(b);
    e.lhs.push_back(X(i));
  }
  e.rhs = {a, X(n)};
  for (int i = n - 1; i >= 1; --i) {
    if (i != n - 1) e.rhs.push_back(b);
    e.rhs.push_back(X(i));
    e.rhs.push_back(X(i));
  }
  e.rhs.insert(e.rhs.end(), {b, a, a});
  return e;
}

/// Benchmark 2: the chain equation with every `b` independently replaced by
/// the left or right side of a Benchmark-1 equation over variables Y1, Y2, ...
inline Problem gen_benchmark2(const GenConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  Problem p;
  detail::declare_alphabet(p.symbols, std::max(cfg.letters, 2));
  const Equation base = chain_equation(cfg.chain_length, p.symbols);
  const Equation inner = detail::benchmark1_equation(rng, p.symbols, cfg, "Y").first;
  const Term b = Term::letter(*p.symbols.find_letter("b"));

  auto replace = [&](const Word& w) {
    Word out;
    for (const Term& t : w) {
      if (t == b) {
        const Word& with = coin_flip(rng) ? inner.lhs : inner.rhs;
        out.insert(out.end(), with.begin(), with.end());
      } else {
        out.push_back(t);
      }
    }
    return out;
  };
  Equation e;
  e.lhs = replace(base.lhs);
  e.rhs = replace(base.rhs);
  p.formula.equations.push_back(std::move(e));
  return p;
}

/// Benchmark 3: `conjuncts` Benchmark-1 equations drawn from one shared
/// variable pool. No joint witness is claimed.
inline Problem gen_benchmark3(const GenConfig& cfg) {
  cfg.validate();
  if (cfg.conjuncts < 2) throw std::invalid_argument("Benchmark 3 needs at least two conjuncts");
  Rng rng(cfg.seed);
  Problem p;
  detail::declare_alphabet(p.symbols, cfg.letters);
  for (int i = 0; i < cfg.conjuncts; ++i) {
    auto eq = detail::benchmark1_equation(rng, p.symbols, cfg, "X").first;
    p.formula.equations.push_back(std::move(eq));
  }
  return p;
}

}  // namespace wordeq
