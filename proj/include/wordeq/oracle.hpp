#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wordeq/errors.hpp"
#include "wordeq/terms.hpp"

namespace wordeq {

struct OracleOptions {
  /// Maximum number of candidate assignments the enumeration may visit.
  std::uint64_t candidate_cap = 10'000'000;
  /// Letters values are drawn from; defaults to the letters occurring in the formula.
  std::optional<std::vector<std::uint32_t>> alphabet;
};

/// All words over `alphabet` of length <= max_len, shortest first, then
/// lexicographic by letter id.
inline std::vector<Word> enumerate_words(const std::vector<std::uint32_t>& alphabet, int max_len) {
  std::vector<Word> words{Word{}};
  std::size_t level_begin = 0;
  for (int len = 1; len <= max_len && !alphabet.empty(); ++len) {
    const std::size_t level_end = words.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (auto letter : alphabet) {
        Word w = words[i];
        w.push_back(Term::letter(letter));
        words.push_back(std::move(w));
      }
    level_begin = level_end;
  }
  return words;
}

/// Exhaustive search for a satisfying assignment with every value of length
/// <= max_len. Variables are enumerated in first-occurrence order, the first
/// variable most significant, each over enumerate_words order.
inline std::optional<Assignment> brute_force_solve(const Formula& phi, int max_len, const OracleOptions& opts = {}) {
  if (max_len < 0) throw std::invalid_argument("max_len must be non-negative");
  const auto vars = variables_of(phi);
  const auto words = enumerate_words(opts.alphabet ? *opts.alphabet : letters_of(phi), max_len);

  std::uint64_t total = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (total > opts.candidate_cap / words.size()) throw ResourceError("oracle enumeration exceeds candidate cap");
    total *= words.size();
  }
  if (total > opts.candidate_cap) throw ResourceError("oracle enumeration exceeds candidate cap");

  // Dense lookup table from variable id to the current candidate index.
  std::uint32_t max_id = 0;
  for (auto v : vars) max_id = std::max(max_id, v);
  std::vector<std::size_t> pick(vars.empty() ? 0 : max_id + 1, 0);
  std::vector<std::size_t> odometer(vars.size(), 0);

  Word l, r;
  auto expand = [&](const Word& w, Word& out) {
    out.clear();
    for (const Term& t : w) {
      if (t.is_letter()) {
        out.push_back(t);
      } else {
        const Word& value = words[pick[t.id]];
        out.insert(out.end(), value.begin(), value.end());
      }
    }
  };
  auto satisfied = [&] {
    for (const auto& e : phi.equations) {
      expand(e.lhs, l);
      expand(e.rhs, r);
      if (l != r) return false;
    }
    return true;
  };

  for (std::uint64_t n = 0; n < total; ++n) {
    for (std::size_t i = 0; i < vars.size(); ++i) pick[vars[i]] = odometer[i];
    if (satisfied()) {
      Assignment a;
      for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = words[odometer[i]];
      return a;
    }
    for (std::size_t i = vars.size(); i-- > 0;) {
      if (++odometer[i] < words.size()) break;
      odometer[i] = 0;
    }
  }
  return std::nullopt;
}

}  // namespace wordeq
