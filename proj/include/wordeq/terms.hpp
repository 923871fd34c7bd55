#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wordeq/errors.hpp"

namespace wordeq {

enum class TermKind : std::uint8_t { Variable, Letter };

/// A variable or a letter. Ids are indices into the matching SymbolTable namespace.
struct Term {
  TermKind kind = TermKind::Letter;
  std::uint32_t id = 0;

  static constexpr Term variable(std::uint32_t id) { return {TermKind::Variable, id}; }
  static constexpr Term letter(std::uint32_t id) { return {TermKind::Letter, id}; }

  constexpr bool is_variable() const { return kind == TermKind::Variable; }
  constexpr bool is_letter() const { return kind == TermKind::Letter; }

  friend constexpr auto operator<=>(const Term&, const Term&) = default;
};

/// Empty word is epsilon.
using Word = std::vector<Term>;

struct Equation {
  Word lhs;
  Word rhs;

  friend bool operator==(const Equation&, const Equation&) = default;
};

/// Ordered conjunction; the empty conjunction is `true`.
struct Formula {
  std::vector<Equation> equations;

  bool is_true() const { return equations.empty(); }
  std::size_t symbol_count() const {
    std::size_t n = 0;
    for (const auto& e : equations) n += e.lhs.size() + e.rhs.size();
    return n;
  }

  friend bool operator==(const Formula&, const Formula&) = default;
};

enum class Status : std::uint8_t { Sat, Unsat, Unknown };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::Sat: return "SAT";
    case Status::Unsat: return "UNSAT";
    case Status::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

/// Variable id -> image. Rule conditions bind at most one variable.
using Substitution = std::map<std::uint32_t, Word>;

/// Variable id -> letter-only word.
using Assignment = std::map<std::uint32_t, Word>;

/// The separator letter `#` always has letter id 0.
inline constexpr std::uint32_t kSeparatorLetter = 0;

class SymbolTable {
 public:
  SymbolTable() {
    letters_.emplace_back("#");
    letter_ids_.emplace("#", kSeparatorLetter);
  }

  std::uint32_t intern_variable(std::string_view name) { return intern(name, variables_, variable_ids_); }
  std::uint32_t intern_letter(std::string_view name) { return intern(name, letters_, letter_ids_); }

  std::optional<std::uint32_t> find_variable(std::string_view name) const { return find(name, variable_ids_); }
  std::optional<std::uint32_t> find_letter(std::string_view name) const { return find(name, letter_ids_); }

  const std::string& variable_name(std::uint32_t id) const { return variables_.at(id); }
  const std::string& letter_name(std::uint32_t id) const { return letters_.at(id); }
  const std::string& name(Term t) const { return t.is_variable() ? variable_name(t.id) : letter_name(t.id); }

  std::size_t variable_count() const { return variables_.size(); }
  /// Includes the separator.
  std::size_t letter_count() const { return letters_.size(); }

  /// Creates a variable named `<root>'`, or `<root>'<k>` when that name is taken,
  /// where root is `base`'s name up to its first prime.
  std::uint32_t fresh_variable(std::uint32_t base) {
    const std::string& base_name = variables_.at(base);
    std::string root = base_name.substr(0, base_name.find('\''));
    std::string candidate = root + "'";
    while (variable_ids_.count(candidate) != 0) candidate = root + "'" + std::to_string(++fresh_counter_);
    return intern_variable(candidate);
  }

 private:
  using Index = std::unordered_map<std::string, std::uint32_t>;

  static std::uint32_t intern(std::string_view name, std::vector<std::string>& names, Index& ids) {
    auto [it, inserted] = ids.emplace(std::string(name), static_cast<std::uint32_t>(names.size()));
    if (inserted) names.emplace_back(name);
    return it->second;
  }
  static std::optional<std::uint32_t> find(std::string_view name, const Index& ids) {
    auto it = ids.find(std::string(name));
    if (it == ids.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::string> variables_;
  std::vector<std::string> letters_;
  Index variable_ids_;
  Index letter_ids_;
  std::uint64_t fresh_counter_ = 0;
};

/// A formula together with the names of its symbols.
struct Problem {
  SymbolTable symbols;
  Formula formula;
};

// ---------------------------------------------------------------------------
// Substitution

inline Word apply_substitution(const Word& w, const Substitution& s) {
  if (s.empty()) return w;
  Word out;
  out.reserve(w.size());
  for (const Term& t : w) {
    if (t.is_variable()) {
      if (auto it = s.find(t.id); it != s.end()) {
        out.insert(out.end(), it->second.begin(), it->second.end());
        continue;
      }
    }
    out.push_back(t);
  }
  return out;
}

inline Equation apply_substitution(const Equation& e, const Substitution& s) {
  return {apply_substitution(e.lhs, s), apply_substitution(e.rhs, s)};
}

inline Formula apply_substitution(const Formula& phi, const Substitution& s) {
  if (s.empty()) return phi;
  Formula out;
  out.equations.reserve(phi.equations.size());
  for (const auto& e : phi.equations) out.equations.push_back(apply_substitution(e, s));
  return out;
}

/// Variables in order of first occurrence, scanning equations left to right.
inline std::vector<std::uint32_t> variables_of(const Formula& phi) {
  std::vector<std::uint32_t> vars;
  std::vector<bool> seen;
  auto visit = [&](const Word& w) {
    for (const Term& t : w) {
      if (!t.is_variable()) continue;
      if (t.id >= seen.size()) seen.resize(t.id + 1, false);
      if (!seen[t.id]) {
        seen[t.id] = true;
        vars.push_back(t.id);
      }
    }
  };
  for (const auto& e : phi.equations) {
    visit(e.lhs);
    visit(e.rhs);
  }
  return vars;
}

/// Letter ids occurring in phi, ascending.
inline std::vector<std::uint32_t> letters_of(const Formula& phi) {
  std::vector<bool> seen;
  for (const auto& e : phi.equations)
    for (const Word* w : {&e.lhs, &e.rhs})
      for (const Term& t : *w)
        if (t.is_letter()) {
          if (t.id >= seen.size()) seen.resize(t.id + 1, false);
          seen[t.id] = true;
        }
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < seen.size(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

inline bool occurs_in(const Formula& phi, std::uint32_t var) {
  for (const auto& e : phi.equations)
    for (const Word* w : {&e.lhs, &e.rhs})
      for (const Term& t : *w)
        if (t.is_variable() && t.id == var) return true;
  return false;
}

/// True iff every equation becomes an identity of letter words under `a`.
/// Throws MissingVariableError if `a` leaves a variable of phi unassigned.
inline bool check_assignment(const Formula& phi, const Assignment& a) {
  Word l, r;
  auto expand = [&](const Word& w, Word& out) {
    out.clear();
    for (const Term& t : w) {
      if (t.is_letter()) {
        out.push_back(t);
        continue;
      }
      auto it = a.find(t.id);
      if (it == a.end()) throw MissingVariableError("assignment has no value for variable #" + std::to_string(t.id));
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
  };
  bool ok = true;
  for (const auto& e : phi.equations) {
    expand(e.lhs, l);
    expand(e.rhs, r);
    if (l != r) ok = false;
  }
  return ok;
}

/// Folds a chain of rule conditions (root first) into letter values for `vars`.
/// Anything left unconstrained by the chain is erased to epsilon.
inline Assignment compose_witness(const std::vector<Substitution>& chain, const std::vector<std::uint32_t>& vars) {
  Assignment values;
  auto resolve = [&](const Word& w) {
    Word out;
    for (const Term& t : w) {
      if (t.is_letter()) {
        out.push_back(t);
      } else if (auto it = values.find(t.id); it != values.end()) {
        out.insert(out.end(), it->second.begin(), it->second.end());
      }
    }
    return out;
  };
  for (auto step = chain.rbegin(); step != chain.rend(); ++step)
    for (const auto& [var, image] : *step) values[var] = resolve(image);
  Assignment out;
  for (auto v : vars) {
    auto it = values.find(v);
    out[v] = it == values.end() ? Word{} : it->second;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Display

inline std::string format_word(const Word& w, const SymbolTable& syms) {
  std::string out;
  for (const Term& t : w) out += syms.name(t);
  return out;
}

/// Human-readable form used in traces and tree dumps; epsilon prints as "ε".
inline std::string format_equation(const Equation& e, const SymbolTable& syms) {
  auto side = [&](const Word& w) { return w.empty() ? std::string("ε") : format_word(w, syms); };
  return side(e.lhs) + " = " + side(e.rhs);
}

inline std::string format_formula(const Formula& phi, const SymbolTable& syms) {
  if (phi.is_true()) return "true";
  std::string out;
  for (std::size_t i = 0; i < phi.equations.size(); ++i) {
    if (i != 0) out += " & ";
    out += format_equation(phi.equations[i], syms);
  }
  return out;
}

}  // namespace wordeq
