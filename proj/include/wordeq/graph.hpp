#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wordeq/errors.hpp"
#include "wordeq/terms.hpp"

namespace wordeq {

enum class GraphVariant : std::uint8_t { G1 = 1, G2, G3, G4, G5 };

inline std::string to_string(GraphVariant v) { return "G" + std::to_string(static_cast<int>(v)); }

/// Accepts `G3` or `g3`.
inline GraphVariant parse_graph_variant(std::string_view s) {
  if (s.size() == 2 && (s[0] == 'G' || s[0] == 'g') && s[1] >= '1' && s[1] <= '5')
    return static_cast<GraphVariant>(s[1] - '0');
  throw ParseError("unknown graph variant '" + std::string(s) + "'");
}

/// Node types double as indices into the model's type embeddings.
enum class NodeType : std::uint8_t { Variable = 0, Letter = 1, Equals = 2, Sharp = 3 };

inline std::string_view to_string(NodeType t) {
  switch (t) {
    case NodeType::Variable: return "Variable";
    case NodeType::Letter: return "Letter";
    case NodeType::Equals: return "Equals";
    case NodeType::Sharp: return "Sharp";
  }
  return "Letter";
}

inline NodeType parse_node_type(std::string_view s) {
  for (auto t : {NodeType::Variable, NodeType::Letter, NodeType::Equals, NodeType::Sharp})
    if (to_string(t) == s) return t;
  throw ParseError("unknown node type '" + std::string(s) + "'");
}

struct GraphNode {
  NodeType type = NodeType::Equals;
  /// Absent on the `=` root.
  std::optional<Term> symbol;
};

struct EquationGraph {
  GraphVariant variant = GraphVariant::G1;
  std::vector<GraphNode> nodes;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  /// (symbol, node index) of the per-symbol global nodes, first-occurrence order.
  std::vector<std::pair<Term, std::uint32_t>> special_nodes;
};

/// w1l # w2l # ... = w1r # w2r # ...
inline Equation flatten_conjunction(const Formula& phi) {
  if (phi.is_true()) throw std::invalid_argument("cannot flatten the empty conjunction");
  Equation out;
  for (std::size_t i = 0; i < phi.equations.size(); ++i) {
    if (i != 0) {
      out.lhs.push_back(Term::letter(kSeparatorLetter));
      out.rhs.push_back(Term::letter(kSeparatorLetter));
    }
    out.lhs.insert(out.lhs.end(), phi.equations[i].lhs.begin(), phi.equations[i].lhs.end());
    out.rhs.insert(out.rhs.end(), phi.equations[i].rhs.begin(), phi.equations[i].rhs.end());
  }
  return out;
}

namespace detail {

inline NodeType node_type_of(Term t) {
  if (t.is_variable()) return NodeType::Variable;
  return t.id == kSeparatorLetter ? NodeType::Sharp : NodeType::Letter;
}

}  // namespace detail

/// Root `=` is node 0 with edges to the head of each side; each side is a
/// chain linked term -> successor. G2 adds term -> root back-edges. G3/G4/G5
/// add one global node per distinct variable/letter/both, linked in both
/// directions to each occurrence. The empty conjunction encodes as the root alone.
inline EquationGraph encode_graph(const Formula& phi, GraphVariant variant) {
  EquationGraph g;
  g.variant = variant;
  g.nodes.push_back({NodeType::Equals, std::nullopt});
  if (phi.is_true()) return g;

  const Equation flat = flatten_conjunction(phi);
  std::vector<std::uint32_t> term_nodes;
  auto add_chain = [&](const Word& side) {
    std::optional<std::uint32_t> prev;
    for (const Term& t : side) {
      const auto idx = static_cast<std::uint32_t>(g.nodes.size());
      g.nodes.push_back({detail::node_type_of(t), t});
      g.edges.emplace_back(prev.value_or(0), idx);
      term_nodes.push_back(idx);
      prev = idx;
    }
  };
  add_chain(flat.lhs);
  add_chain(flat.rhs);

  if (variant == GraphVariant::G2)
    for (auto idx : term_nodes) g.edges.emplace_back(idx, 0);

  const bool vars = variant == GraphVariant::G3 || variant == GraphVariant::G5;
  const bool letters = variant == GraphVariant::G4 || variant == GraphVariant::G5;
  if (!vars && !letters) return g;

  for (auto idx : term_nodes) {
    const Term t = *g.nodes[idx].symbol;
    if (!(t.is_variable() ? vars : letters)) continue;
    if (std::none_of(g.special_nodes.begin(), g.special_nodes.end(), [&](const auto& s) { return s.first == t; }))
      g.special_nodes.emplace_back(t, 0);
  }
  for (auto& [t, node] : g.special_nodes) {
    node = static_cast<std::uint32_t>(g.nodes.size());
    g.nodes.push_back({detail::node_type_of(t), t});
  }
  for (auto idx : term_nodes) {
    const Term t = *g.nodes[idx].symbol;
    for (const auto& [s, node] : g.special_nodes)
      if (s == t) {
        g.edges.emplace_back(node, idx);
        g.edges.emplace_back(idx, node);
        break;
      }
  }
  return g;
}

/// Closed undirected neighbourhoods (self included, duplicates removed), sorted.
inline std::vector<std::vector<std::uint32_t>> closed_neighbourhoods(const EquationGraph& g) {
  std::vector<std::vector<std::uint32_t>> nb(g.nodes.size());
  for (std::uint32_t v = 0; v < nb.size(); ++v) nb[v].push_back(v);
  for (auto [s, d] : g.edges) {
    nb.at(s).push_back(d);
    nb.at(d).push_back(s);
  }
  for (auto& n : nb) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  return nb;
}

inline nlohmann::ordered_json graph_to_json(const EquationGraph& g, const SymbolTable& symbols) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    nodes.push_back({{"idx", i},
                     {"type", std::string(to_string(n.type))},
                     {"symbol", n.symbol ? symbols.name(*n.symbol) : std::string("=")}});
  }
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (auto [s, d] : g.edges) edges.push_back({s, d});
  nlohmann::ordered_json out;
  out["variant"] = to_string(g.variant);
  out["nodes"] = std::move(nodes);
  out["edges"] = std::move(edges);
  return out;
}

/// Graph file text: a single compact JSON object.
inline std::string serialize_graph(const EquationGraph& g, const SymbolTable& symbols) {
  return graph_to_json(g, symbols).dump();
}

/// Reads a graph back. Symbols are interned into `symbols` by name and kind.
inline EquationGraph graph_from_json(const nlohmann::json& j, SymbolTable& symbols) {
  try {
    EquationGraph g;
    g.variant = parse_graph_variant(j.at("variant").get<std::string>());
    const auto& nodes = j.at("nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      if (n.at("idx").get<std::size_t>() != i) throw ParseError("graph node indices must be 0..n-1 in order");
      const NodeType type = parse_node_type(n.at("type").get<std::string>());
      const auto name = n.at("symbol").get<std::string>();
      std::optional<Term> sym;
      if (type == NodeType::Variable) sym = Term::variable(symbols.intern_variable(name));
      if (type == NodeType::Letter || type == NodeType::Sharp) sym = Term::letter(symbols.intern_letter(name));
      g.nodes.push_back({type, sym});
    }
    for (const auto& e : j.at("edges")) {
      auto s = e.at(0).get<std::uint32_t>(), d = e.at(1).get<std::uint32_t>();
      if (s >= g.nodes.size() || d >= g.nodes.size()) throw ParseError("graph edge index out of range");
      g.edges.emplace_back(s, d);
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed graph: ") + e.what());
  }
}

}  // namespace wordeq
