#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wordeq/gnn.hpp"
#include "wordeq/graph.hpp"
#include "wordeq/random.hpp"
#include "wordeq/rules.hpp"
#include "wordeq/terms.hpp"

namespace wordeq {

enum class Backtrack : std::uint8_t { BT1, BT2, BT3 };

/// Fixed, Random, GNN (S1), GNN-or-fixed (S2), GNN-or-random (S3).
/// FixedReversed explores branches in reverse presentation order.
enum class Ordering : std::uint8_t { Fixed, Random, Gnn, GnnFixed, GnnRandom, FixedReversed };

inline Backtrack parse_backtrack(std::string_view s) {
  if (s == "bt1") return Backtrack::BT1;
  if (s == "bt2") return Backtrack::BT2;
  if (s == "bt3") return Backtrack::BT3;
  throw ParseError("unknown backtrack strategy '" + std::string(s) + "'");
}

inline Ordering parse_ordering(std::string_view s) {
  if (s == "fixed") return Ordering::Fixed;
  if (s == "random") return Ordering::Random;
  if (s == "gnn") return Ordering::Gnn;
  if (s == "gnn-fixed") return Ordering::GnnFixed;
  if (s == "gnn-random") return Ordering::GnnRandom;
  if (s == "fixed-reversed") return Ordering::FixedReversed;
  throw ParseError("unknown branch ordering '" + std::string(s) + "'");
}

inline bool needs_model(Ordering o) {
  return o == Ordering::Gnn || o == Ordering::GnnFixed || o == Ordering::GnnRandom;
}

struct SearchConfig {
  Backtrack backtrack = Backtrack::BT2;
  int l_bt2 = 500;
  int l_bt2_step = 250;
  int l_bt3 = 20;
  Ordering ordering = Ordering::Fixed;
  std::uint64_t seed = 0;
  double timeout_seconds = 300.0;
  /// Formula nodes visited before giving up with UNKNOWN; 0 means no budget.
  std::uint64_t node_budget = 0;
  std::optional<std::string> model_path;
  GraphVariant variant = GraphVariant::G5;

  void validate() const {
    if (l_bt2 <= 0) throw std::invalid_argument("l_BT2 must be positive");
    if (l_bt2_step <= 0) throw std::invalid_argument("l_BT2 step must be positive");
    if (l_bt3 <= 0) throw std::invalid_argument("l_BT3 must be positive");
    if (!(timeout_seconds > 0)) throw std::invalid_argument("timeout must be positive");
  }
};

struct SearchStats {
  std::uint64_t splits = 0;  ///< rule applications
  std::uint64_t nodes = 0;   ///< formula nodes visited
  int max_depth = 0;
  double wall_millis = 0;
  /// BT3 limits, one per round.
  std::vector<int> round_limits;
};

struct SearchResult {
  Status status = Status::Unknown;
  /// Branch conditions along the SAT path, root first, ending with the values
  /// that close the path.
  std::vector<Substitution> witness_chain;
  /// The chain folded onto the input variables (empty unless SAT).
  Assignment witness;
  SearchStats stats;
};

/// Permutation of branch indices in exploration order. Single-branch
/// applications never reach the model.
inline std::vector<std::size_t> order_branches(const Formula& parent, const RuleApplication& app, Ordering ordering,
                                               Rng& rng, const ModelWeights* model, GraphVariant variant) {
  std::vector<std::size_t> perm(app.branches.size());
  std::iota(perm.begin(), perm.end(), 0);
  if (perm.size() < 2) return perm;

  auto by_model = [&] {
    if (model == nullptr) throw ModelError("branch ordering requires a model");
    const Formula empty;
    std::vector<const Formula*> children;
    for (const auto& b : app.branches) children.push_back(b.is_terminal() ? &empty : &b.formula());
    const auto scores = score_branches(parent, children, variant, *model);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  };

  switch (ordering) {
    case Ordering::Fixed: break;
    case Ordering::FixedReversed: std::reverse(perm.begin(), perm.end()); break;
    case Ordering::Random: shuffle_in_place(perm, rng); break;
    case Ordering::Gnn: by_model(); break;
    case Ordering::GnnFixed:
      if (coin_flip(rng)) by_model();
      break;
    case Ordering::GnnRandom:
      if (coin_flip(rng)) {
        by_model();
      } else {
        shuffle_in_place(perm, rng);
      }
      break;
  }
  return perm;
}

namespace detail {

class Searcher {
 public:
  Searcher(SymbolTable symbols, const SearchConfig& cfg, const ModelWeights* model, std::ostream* trace)
      : symbols_(std::move(symbols)), cfg_(cfg), model_(model), trace_(trace), rng_(cfg.seed) {
    start_ = std::chrono::steady_clock::now();
    deadline_ = start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(cfg.timeout_seconds));
  }

  SearchResult run(const Formula& phi) {
    SearchResult result;
    try {
      switch (cfg_.backtrack) {
        case Backtrack::BT1:
          result.status = dfs(phi, std::nullopt);
          break;
        case Backtrack::BT2:
          bt2_budget_ = cfg_.l_bt2;
          result.status = dfs(phi, std::nullopt);
          break;
        case Backtrack::BT3: {
          int limit = cfg_.l_bt3;
          while (true) {
            stats_.round_limits.push_back(limit);
            cut_ = false;
            result.status = dfs(phi, limit);
            if (result.status != Status::Unknown || !cut_) break;
            limit += cfg_.l_bt3;
          }
          break;
        }
      }
    } catch (const Aborted&) {
      result.status = Status::Unknown;
      witness_.clear();
    }
    if (result.status == Status::Sat) {
      result.witness_chain = witness_;
      result.witness = compose_witness(witness_, variables_of(phi));
    }
    stats_.wall_millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    result.stats = stats_;
    return result;
  }

 private:
  struct Aborted {};

  struct Frame {
    int depth = 0;
    Substitution cond;
    std::vector<Branch> branches;  // already in exploration order
    std::size_t next = 0;
    bool saw_unknown = false;
  };

  void check_budget() {
    if (cfg_.node_budget != 0 && stats_.nodes >= cfg_.node_budget) throw Aborted{};
    if (std::chrono::steady_clock::now() >= deadline_) throw Aborted{};
  }

  void record_witness(const Substitution& last) {
    witness_.clear();
    for (const auto& f : stack_) witness_.push_back(f.cond);
    witness_.push_back(last);
  }

  /// Expands one formula node. Returns its status when decided immediately,
  /// or nullopt after pushing a frame.
  std::optional<Status> visit(Formula phi, int depth, Substitution cond, std::optional<int> round_limit) {
    check_budget();
    ++stats_.nodes;
    stats_.max_depth = std::max(stats_.max_depth, depth);

    const RuleId rule = match_rule(phi);
    if (!is_verdict_rule(rule)) {
      if (cfg_.backtrack == Backtrack::BT2 && depth >= bt2_budget_) {
        bt2_budget_ += cfg_.l_bt2_step;
        return Status::Unknown;
      }
      if (round_limit && depth >= *round_limit) {
        cut_ = true;
        return Status::Unknown;
      }
    }

    RuleApplication app = apply_rule(phi, symbols_);
    ++stats_.splits;
    if (trace_ != nullptr) *trace_ << format_trace_line(stats_.nodes, app) << '\n';

    if (app.branches.size() == 1 && app.branches.front().is_terminal()) {
      const Status s = app.branches.front().verdict();
      if (s == Status::Sat) record_witness(cond);
      return s;
    }

    const auto perm = order_branches(phi, app, cfg_.ordering, rng_, model_, cfg_.variant);
    Frame frame{depth, std::move(cond), {}, 0, false};
    frame.branches.reserve(perm.size());
    for (auto i : perm) frame.branches.push_back(std::move(app.branches[i]));
    stack_.push_back(std::move(frame));
    return std::nullopt;
  }

  Status dfs(const Formula& root, std::optional<int> round_limit) {
    stack_.clear();
    if (auto s = visit(root, 0, {}, round_limit)) return *s;
    while (!stack_.empty()) {
      Frame& top = stack_.back();
      if (top.next == top.branches.size()) {
        const Status s = top.saw_unknown ? Status::Unknown : Status::Unsat;
        stack_.pop_back();
        if (stack_.empty()) return s;
        if (s == Status::Unknown) stack_.back().saw_unknown = true;
        continue;
      }
      Branch& b = top.branches[top.next++];
      if (b.is_terminal()) {
        if (b.verdict() == Status::Sat) {
          record_witness(b.cond);
          return Status::Sat;
        }
        continue;
      }
      const int child_depth = top.depth + 1;
      auto s = visit(std::get<Formula>(std::move(b.conclusion)), child_depth, std::move(b.cond), round_limit);
      if (!s) continue;
      if (*s == Status::Sat) return Status::Sat;
      if (*s == Status::Unknown) stack_.back().saw_unknown = true;
    }
    return Status::Unsat;
  }

  SymbolTable symbols_;
  SearchConfig cfg_;
  const ModelWeights* model_;
  std::ostream* trace_;
  Rng rng_;
  std::chrono::steady_clock::time_point start_;
  std::chrono::steady_clock::time_point deadline_;
  SearchStats stats_;
  std::vector<Frame> stack_;
  std::vector<Substitution> witness_;
  int bt2_budget_ = 0;
  bool cut_ = false;
};

}  // namespace detail

/// Depth-first proof search under the configured backtracking and ordering
/// strategies. Timeouts and exhausted node budgets yield UNKNOWN.
inline SearchResult solve(const Problem& problem, const SearchConfig& cfg, const ModelWeights* model,
                          std::ostream* trace = nullptr) {
  cfg.validate();
  if (needs_model(cfg.ordering) && model == nullptr) throw ModelError("branch ordering requires a model");
  return detail::Searcher(problem.symbols, cfg, model, trace).run(problem.formula);
}

/// As above, loading the model from cfg.model_path when the ordering needs one.
inline SearchResult solve(const Problem& problem, const SearchConfig& cfg, std::ostream* trace = nullptr) {
  std::optional<ModelWeights> model;
  if (needs_model(cfg.ordering)) {
    if (!cfg.model_path) throw ModelError("ordering requires --model");
    model = load_weights(*cfg.model_path);
  }
  return solve(problem, cfg, model ? &*model : nullptr, trace);
}

inline nlohmann::ordered_json stats_to_json(const SearchResult& r) {
  nlohmann::ordered_json j;
  j["status"] = std::string(to_string(r.status));
  j["splits"] = r.stats.splits;
  j["nodes"] = r.stats.nodes;
  j["maxDepth"] = r.stats.max_depth;
  j["wallMillis"] = r.stats.wall_millis;
  return j;
}

}  // namespace wordeq
