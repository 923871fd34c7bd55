#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wordeq/rules.hpp"
#include "wordeq/terms.hpp"

namespace wordeq {

struct ProofNode {
  /// Absent for SAT/UNSAT verdict leaves.
  std::optional<Formula> formula;
  /// Leaf label. Set for verdict leaves and for formula nodes left unexpanded
  /// by a cap (UNKNOWN); absent on expanded interior nodes.
  std::optional<Status> label;
  int depth = 0;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
  /// Rule applied at this node (labels every outgoing edge).
  std::optional<RuleId> rule;
  /// Condition on the edge from the parent.
  Substitution cond;
};

/// Rooted tree of rule applications. Children always have larger indices
/// than their parent, so statuses and sizes are computable in one reverse sweep.
class ProofTree {
 public:
  std::size_t add_root(std::optional<Formula> formula, std::optional<Status> label = std::nullopt) {
    nodes_.clear();
    nodes_.push_back({std::move(formula), label, 0, std::nullopt, {}, std::nullopt, {}});
    return 0;
  }

  std::size_t add_child(std::size_t parent, std::optional<Formula> formula, std::optional<Status> label = std::nullopt,
                        Substitution cond = {}) {
    const std::size_t id = nodes_.size();
    nodes_.push_back({std::move(formula), label, nodes_.at(parent).depth + 1, parent, {}, std::nullopt, std::move(cond)});
    nodes_[parent].children.push_back(id);
    return id;
  }

  void set_rule(std::size_t v, RuleId rule) { nodes_.at(v).rule = rule; }
  void set_label(std::size_t v, Status s) { nodes_.at(v).label = s; }

  std::size_t size() const { return nodes_.size(); }
  const ProofNode& node(std::size_t v) const { return nodes_.at(v); }
  const std::vector<ProofNode>& nodes() const { return nodes_; }

  /// sigma for every node: a leaf's own label; otherwise SAT if some child is
  /// SAT, else UNKNOWN if some child is UNKNOWN, else UNSAT.
  std::vector<Status> statuses() const {
    std::vector<Status> sigma(nodes_.size(), Status::Unknown);
    for (std::size_t v = nodes_.size(); v-- > 0;) {
      const ProofNode& n = nodes_[v];
      if (n.children.empty()) {
        sigma[v] = n.label.value_or(Status::Unknown);
        continue;
      }
      bool sat = false, unknown = false;
      for (auto c : n.children) {
        sat |= sigma[c] == Status::Sat;
        unknown |= sigma[c] == Status::Unknown;
      }
      sigma[v] = sat ? Status::Sat : unknown ? Status::Unknown : Status::Unsat;
    }
    return sigma;
  }

  /// Delta for every node: 1 + sum over children.
  std::vector<std::size_t> subtree_sizes() const {
    std::vector<std::size_t> delta(nodes_.size(), 1);
    for (std::size_t v = nodes_.size(); v-- > 0;)
      for (auto c : nodes_[v].children) delta[v] += delta[c];
    return delta;
  }

  Status status(std::size_t v) const { return statuses().at(v); }
  std::size_t subtree_size(std::size_t v) const { return subtree_sizes().at(v); }

  /// Node indices in pre-order (children in branch order).
  std::vector<std::size_t> preorder() const {
    std::vector<std::size_t> order, stack;
    if (nodes_.empty()) return order;
    stack.push_back(0);
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      order.push_back(v);
      const auto& ch = nodes_[v].children;
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    return order;
  }

 private:
  std::vector<ProofNode> nodes_;
};

struct TreeLimits {
  int depth_limit = 12;
  std::size_t node_cap = 20000;
};

/// Breadth-first exhaustive expansion. Formula nodes at `depth_limit` are
/// labelled UNKNOWN unless a verdict rule (R1, R4, R6) decides them; once the
/// next expansion would exceed `node_cap`, every remaining frontier node is
/// labelled UNKNOWN. The symbol table receives the fresh variables.
inline ProofTree build_proof_tree(const Formula& phi, SymbolTable& symbols, const TreeLimits& limits = {}) {
  ProofTree tree;
  tree.add_root(phi);
  std::deque<std::size_t> frontier{0};
  bool capped = false;
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop_front();
    if (capped) {
      tree.set_label(v, Status::Unknown);
      continue;
    }
    const Formula& f = *tree.node(v).formula;
    const RuleId rule = match_rule(f);
    if (!is_verdict_rule(rule) && tree.node(v).depth >= limits.depth_limit) {
      tree.set_label(v, Status::Unknown);
      continue;
    }
    RuleApplication app = apply_rule(f, symbols);
    if (tree.size() + app.branches.size() > limits.node_cap) {
      capped = true;
      tree.set_label(v, Status::Unknown);
      continue;
    }
    tree.set_rule(v, app.rule);
    for (auto& b : app.branches) {
      if (b.is_terminal()) {
        tree.add_child(v, std::nullopt, b.verdict(), std::move(b.cond));
      } else {
        frontier.push_back(tree.add_child(v, std::get<Formula>(std::move(b.conclusion)), std::nullopt, std::move(b.cond)));
      }
    }
  }
  return tree;
}

struct SplitLabel {
  std::size_t node = 0;
  std::vector<int> label;
};

/// One-hot labels for every SAT split point (>= 2 children): the SAT child
/// with the smallest subtree wins, ties going to the lowest index.
inline std::vector<SplitLabel> extract_labels(const ProofTree& tree) {
  const auto sigma = tree.statuses();
  const auto delta = tree.subtree_sizes();
  std::vector<SplitLabel> out;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const auto& ch = tree.node(v).children;
    if (ch.size() < 2 || sigma[v] != Status::Sat) continue;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (auto c : ch)
      if (sigma[c] == Status::Sat) best = std::min(best, delta[c]);
    SplitLabel l{v, std::vector<int>(ch.size(), 0)};
    for (std::size_t i = 0; i < ch.size(); ++i)
      if (sigma[ch[i]] == Status::Sat && delta[ch[i]] == best) {
        l.label[i] = 1;
        break;
      }
    out.push_back(std::move(l));
  }
  return out;
}

/// Structured dump with pre-order node numbering.
inline nlohmann::ordered_json proof_tree_to_json(const ProofTree& tree, const SymbolTable& symbols) {
  const auto order = tree.preorder();
  const auto sigma = tree.statuses();
  const auto delta = tree.subtree_sizes();
  std::vector<std::size_t> number(tree.size());
  for (std::size_t i = 0; i < order.size(); ++i) number[order[i]] = i;

  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (auto v : order) {
    const ProofNode& n = tree.node(v);
    nlohmann::ordered_json j;
    j["id"] = number[v];
    j["depth"] = n.depth;
    j["label"] = n.formula ? format_formula(*n.formula, symbols) : std::string(to_string(*n.label));
    if (n.formula && n.label) j["leaf"] = std::string(to_string(*n.label));
    j["status"] = std::string(to_string(sigma[v]));
    j["size"] = delta[v];
    nodes.push_back(std::move(j));
    for (auto c : n.children) edges.push_back({{"src", number[v]}, {"dst", number[c]}, {"rule", to_string(*n.rule)}});
  }
  nlohmann::ordered_json out;
  out["nodes"] = std::move(nodes);
  out["edges"] = std::move(edges);
  return out;
}

}  // namespace wordeq
