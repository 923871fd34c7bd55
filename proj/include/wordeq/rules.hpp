#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wordeq/oracle.hpp"
#include "wordeq/terms.hpp"

namespace wordeq {

enum class BaseRule : std::uint8_t { R1 = 1, R2, R3, R4, R5, R6, R7, R8, R9 };

/// Rule name plus orientation. Only R3, R4 and R7 have mirrored forms; the
/// direct forms are `X·u = ε`, `a·u = ε` and `X·u = a·v`.
struct RuleId {
  BaseRule base = BaseRule::R1;
  bool mirrored = false;

  friend bool operator==(const RuleId&, const RuleId&) = default;
};

inline std::string to_string(RuleId r) {
  std::string s = "R" + std::to_string(static_cast<int>(r.base));
  if (r.mirrored) s += "/mirrored";
  return s;
}

/// Rules whose single conclusion is a SAT/UNSAT verdict.
inline bool is_verdict_rule(RuleId r) {
  return r.base == BaseRule::R1 || r.base == BaseRule::R4 || r.base == BaseRule::R6;
}

struct Branch {
  /// Formula, or Status::Sat / Status::Unsat for terminal branches.
  std::variant<Formula, Status> conclusion;
  Substitution cond;
  std::vector<std::uint32_t> fresh_variables;

  bool is_terminal() const { return std::holds_alternative<Status>(conclusion); }
  Status verdict() const { return std::get<Status>(conclusion); }
  const Formula& formula() const { return std::get<Formula>(conclusion); }
};

/// Branches are in presentation order; reordering happens on index permutations.
struct RuleApplication {
  RuleId rule;
  std::vector<Branch> branches;
};

/// Case analysis on the leftmost equation. Total: every formula matches exactly one rule.
inline RuleId match_rule(const Formula& phi) {
  if (phi.is_true()) return {BaseRule::R1};
  const Equation& e = phi.equations.front();
  const bool l_empty = e.lhs.empty(), r_empty = e.rhs.empty();
  if (l_empty && r_empty) return {BaseRule::R2};
  if (r_empty) return {e.lhs.front().is_variable() ? BaseRule::R3 : BaseRule::R4, false};
  if (l_empty) return {e.rhs.front().is_variable() ? BaseRule::R3 : BaseRule::R4, true};
  const Term l = e.lhs.front(), r = e.rhs.front();
  if (l.is_letter() && r.is_letter()) return {l == r ? BaseRule::R5 : BaseRule::R6};
  if (l.is_variable() && r.is_letter()) return {BaseRule::R7, false};
  if (l.is_letter() && r.is_variable()) return {BaseRule::R7, true};
  return {l == r ? BaseRule::R9 : BaseRule::R8};
}

namespace detail {

inline Word tail(const Word& w) { return Word(w.begin() + 1, w.end()); }

inline Word prepend(Term t, const Word& w) {
  Word out;
  out.reserve(w.size() + 1);
  out.push_back(t);
  out.insert(out.end(), w.begin(), w.end());
  return out;
}

/// (first ∧ rest)[s]
inline Formula conclude(Equation first, const Formula& phi, const Substitution& s) {
  Formula out;
  out.equations.reserve(phi.equations.size());
  out.equations.push_back(std::move(first));
  out.equations.insert(out.equations.end(), phi.equations.begin() + 1, phi.equations.end());
  return apply_substitution(out, s);
}

inline Formula rest_of(const Formula& phi) {
  return Formula{std::vector<Equation>(phi.equations.begin() + 1, phi.equations.end())};
}

inline Branch terminal(Status s) { return Branch{s, {}, {}}; }

}  // namespace detail

/// Applies the unique matching rule to the leftmost equation. Fresh variables
/// are allocated in `symbols`.
inline RuleApplication apply_rule(const Formula& phi, SymbolTable& symbols) {
  using detail::conclude;
  using detail::prepend;
  using detail::tail;

  const RuleId rule = match_rule(phi);
  RuleApplication app{rule, {}};
  switch (rule.base) {
    case BaseRule::R1:
      app.branches.push_back(detail::terminal(Status::Sat));
      break;
    case BaseRule::R2:
      app.branches.push_back({detail::rest_of(phi), {}, {}});
      break;
    case BaseRule::R3: {
      const Equation& e = phi.equations.front();
      const Word& side = rule.mirrored ? e.rhs : e.lhs;
      Substitution s{{side.front().id, Word{}}};
      Equation first = rule.mirrored ? Equation{Word{}, tail(side)} : Equation{tail(side), Word{}};
      app.branches.push_back({conclude(std::move(first), phi, s), s, {}});
      break;
    }
    case BaseRule::R4:
    case BaseRule::R6:
      app.branches.push_back(detail::terminal(Status::Unsat));
      break;
    case BaseRule::R5:
    case BaseRule::R9: {
      const Equation& e = phi.equations.front();
      app.branches.push_back({conclude({tail(e.lhs), tail(e.rhs)}, phi, {}), {}, {}});
      break;
    }
    case BaseRule::R7: {
      // Normalised to X·u = a·v; mirrored conclusions swap the sides back.
      const Equation& e = phi.equations.front();
      const Word& var_side = rule.mirrored ? e.rhs : e.lhs;
      const Word& letter_side = rule.mirrored ? e.lhs : e.rhs;
      const Term x = var_side.front();
      const Term a = letter_side.front();
      auto oriented = [&](Word var_part, Word letter_part) {
        return rule.mirrored ? Equation{std::move(letter_part), std::move(var_part)}
                             : Equation{std::move(var_part), std::move(letter_part)};
      };

      Substitution erase{{x.id, Word{}}};
      app.branches.push_back({conclude(oriented(tail(var_side), letter_side), phi, erase), erase, {}});

      const Term fresh = Term::variable(symbols.fresh_variable(x.id));
      Substitution extend{{x.id, Word{a, fresh}}};
      app.branches.push_back(
          {conclude(oriented(prepend(fresh, tail(var_side)), tail(letter_side)), phi, extend), extend, {fresh.id}});
      break;
    }
    case BaseRule::R8: {
      const Equation& e = phi.equations.front();
      const Term x = e.lhs.front(), y = e.rhs.front();
      const Word u = tail(e.lhs), v = tail(e.rhs);

      Substitution same{{x.id, Word{y}}};
      app.branches.push_back({conclude({u, v}, phi, same), same, {}});

      const Term x_fresh = Term::variable(symbols.fresh_variable(x.id));
      Substitution x_longer{{x.id, Word{y, x_fresh}}};
      app.branches.push_back({conclude({prepend(x_fresh, u), v}, phi, x_longer), x_longer, {x_fresh.id}});

      const Term y_fresh = Term::variable(symbols.fresh_variable(y.id));
      Substitution y_longer{{y.id, Word{x, y_fresh}}};
      app.branches.push_back({conclude({u, prepend(y_fresh, v)}, phi, y_longer), y_longer, {y_fresh.id}});
      break;
    }
  }
  return app;
}

namespace detail {

inline bool branch_sat(const Branch& b, int bound, const OracleOptions& opts) {
  if (b.is_terminal()) return b.verdict() == Status::Sat;
  return brute_force_solve(b.formula(), bound, opts).has_value();
}

}  // namespace detail

/// Bounded oracle check of soundness and local completeness for one rule
/// application.
///
/// Soundness: if the premise has a solution with values of length <= bound,
/// some conclusion has one with length <= bound + 1.
///
/// Local completeness: if a conclusion has a solution within `bound`, the
/// premise is satisfiable. This holds if the oracle finds a premise solution
/// within bound + 1, or if the conclusion's solution extended through the
/// branch condition satisfies the premise. The extension is needed because
/// R8's prefix branches can double value lengths.
inline bool check_rule_soundness(const Formula& premise, const RuleApplication& app, int bound,
                                 OracleOptions opts = {}) {
  if (!opts.alphabet) opts.alphabet = letters_of(premise);
  const auto premise_vars = variables_of(premise);

  if (brute_force_solve(premise, bound, opts)) {
    bool any = false;
    for (const auto& b : app.branches)
      if (detail::branch_sat(b, bound + 1, opts)) {
        any = true;
        break;
      }
    if (!any) return false;
  }

  std::optional<bool> premise_wide;
  for (const auto& b : app.branches) {
    if (b.is_terminal()) {
      if (b.verdict() == Status::Sat && !brute_force_solve(premise, bound + 1, opts)) return false;
      continue;
    }
    auto witness = brute_force_solve(b.formula(), bound, opts);
    if (!witness) continue;
    std::vector<Substitution> chain{b.cond, *witness};
    if (check_assignment(premise, compose_witness(chain, premise_vars))) continue;
    if (!premise_wide) premise_wide = brute_force_solve(premise, bound + 1, opts).has_value();
    if (!*premise_wide) return false;
  }
  return true;
}

/// Line of the rule-application trace: `<node-id> <RuleId> -> <n> branches`.
inline std::string format_trace_line(std::uint64_t node_id, const RuleApplication& app) {
  return std::to_string(node_id) + " " + to_string(app.rule) + " -> " + std::to_string(app.branches.size()) +
         " branches";
}

}  // namespace wordeq
