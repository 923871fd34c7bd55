#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wordeq/graph.hpp"
#include "wordeq/proof_tree.hpp"
#include "wordeq/terms.hpp"

namespace wordeq {

struct TrainingSample {
  EquationGraph parent;
  std::vector<EquationGraph> children;
  std::size_t label = 0;  ///< index of the child marked 1
  std::size_t arity = 0;
  std::string source;
  GraphVariant variant = GraphVariant::G1;
  /// Names for the symbols the graphs refer to.
  std::shared_ptr<const SymbolTable> symbols;
};

struct NamedProblem {
  std::string id;
  Problem problem;
};

/// Builds the capped proof tree of every problem, keeps SAT-rooted ones, and
/// turns each labelled split point into a sample. Skipped problems are
/// reported on `log` when given.
inline std::vector<TrainingSample> collect_dataset(const std::vector<NamedProblem>& problems, GraphVariant variant,
                                                   const TreeLimits& limits, std::ostream* log = nullptr) {
  std::vector<TrainingSample> samples;
  for (const auto& [id, problem] : problems) {
    auto symbols = std::make_shared<SymbolTable>(problem.symbols);
    const ProofTree tree = build_proof_tree(problem.formula, *symbols, limits);
    const Status root = tree.status(0);
    if (root != Status::Sat) {
      if (log != nullptr) *log << "skip " << id << ": root status " << to_string(root) << '\n';
      continue;
    }
    const Formula empty;
    for (const auto& split : extract_labels(tree)) {
      const ProofNode& node = tree.node(split.node);
      TrainingSample s;
      s.parent = encode_graph(*node.formula, variant);
      for (auto c : node.children) {
        const auto& child = tree.node(c);
        s.children.push_back(encode_graph(child.formula ? *child.formula : empty, variant));
      }
      s.arity = node.children.size();
      for (std::size_t i = 0; i < split.label.size(); ++i)
        if (split.label[i] == 1) s.label = i;
      s.source = id;
      s.variant = variant;
      s.symbols = symbols;
      samples.push_back(std::move(s));
    }
  }
  return samples;
}

inline nlohmann::ordered_json sample_to_json(const TrainingSample& s) {
  nlohmann::ordered_json j;
  j["arity"] = s.arity;
  j["label"] = s.label;
  j["source"] = s.source;
  j["variant"] = to_string(s.variant);
  j["parent"] = graph_to_json(s.parent, *s.symbols);
  nlohmann::ordered_json children = nlohmann::ordered_json::array();
  for (const auto& c : s.children) children.push_back(graph_to_json(c, *s.symbols));
  j["children"] = std::move(children);
  return j;
}

/// Writes `<prefix>.arity<n>.data`, one JSON record per line, samples in
/// input order. Returns the paths written.
inline std::vector<std::string> write_shards(const std::vector<TrainingSample>& samples, const std::string& prefix) {
  std::map<std::size_t, std::ofstream> shards;
  std::vector<std::string> paths;
  for (const auto& s : samples) {
    auto it = shards.find(s.arity);
    if (it == shards.end()) {
      const std::string path = prefix + ".arity" + std::to_string(s.arity) + ".data";
      it = shards.emplace(s.arity, std::ofstream(path)).first;
      if (!it->second) throw Error("cannot write " + path);
      paths.push_back(path);
    }
    it->second << sample_to_json(s).dump() << '\n';
  }
  return paths;
}

struct ShardRecord {
  std::size_t arity = 0;
  std::size_t label = 0;
  std::string source;
  EquationGraph parent;
  std::vector<EquationGraph> children;
};

/// Parses one shard line. Symbols are interned into `symbols`.
inline ShardRecord parse_shard_record(const std::string& line, SymbolTable& symbols) {
  try {
    const auto j = nlohmann::json::parse(line);
    ShardRecord r;
    r.arity = j.at("arity").get<std::size_t>();
    r.label = j.at("label").get<std::size_t>();
    r.source = j.at("source").get<std::string>();
    r.parent = graph_from_json(j.at("parent"), symbols);
    for (const auto& c : j.at("children")) r.children.push_back(graph_from_json(c, symbols));
    if (r.children.size() != r.arity || r.label >= r.arity) throw ParseError("shard record arity/label mismatch");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed shard record: ") + e.what());
  }
}

}  // namespace wordeq
