#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wordeq/errors.hpp"
#include "wordeq/graph.hpp"
#include "wordeq/random.hpp"
#include "wordeq/terms.hpp"

namespace wordeq {

/// y = W x + b with W stored row-major, `out` rows by `in` columns.
template <typename Scalar>
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<Scalar> weight;
  std::vector<Scalar> bias;

  void apply(std::span<const Scalar> x, std::span<Scalar> y) const {
    if (x.size() != in || y.size() != out) throw DimensionError("dense layer input/output size mismatch");
    for (std::size_t r = 0; r < out; ++r) {
      Scalar acc = bias[r];
      const Scalar* row = weight.data() + r * in;
      for (std::size_t c = 0; c < in; ++c) acc += row[c] * x[c];
      y[r] = acc;
    }
  }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Type embeddings, one affine transform per message-passing step, and one
/// classifier head per branch arity.
template <typename Scalar>
struct BasicModelWeights {
  std::size_t m = 0;
  std::size_t steps = 0;
  std::array<std::vector<Scalar>, 4> type_embeddings;
  std::vector<DenseLayer<Scalar>> gcn;
  /// arity -> layers, ReLU between consecutive layers.
  std::map<std::size_t, std::vector<DenseLayer<Scalar>>> heads;

  void validate() const {
    if (m == 0) throw DimensionError("embedding size must be positive");
    for (const auto& e : type_embeddings)
      if (e.size() != m) throw DimensionError("type embedding length differs from m");
    if (gcn.size() != steps) throw DimensionError("number of GCN layers differs from T");
    auto check_layer = [](const DenseLayer<Scalar>& l) {
      if (l.weight.size() != l.in * l.out || l.bias.size() != l.out) throw DimensionError("layer shape mismatch");
    };
    for (const auto& l : gcn) {
      check_layer(l);
      if (l.in != m || l.out != m) throw DimensionError("GCN layer must be m x m");
    }
    for (const auto& [arity, layers] : heads) {
      if (arity < 2) throw DimensionError("head arity must be at least 2");
      if (layers.empty()) throw DimensionError("empty classifier head");
      std::size_t width = (arity + 1) * m;
      for (const auto& l : layers) {
        check_layer(l);
        if (l.in != width) throw DimensionError("classifier head layers do not chain");
        width = l.out;
      }
      if (width != arity) throw DimensionError("classifier head output differs from its arity");
    }
    auto finite = [](const std::vector<Scalar>& v) {
      return std::all_of(v.begin(), v.end(), [](Scalar x) { return std::isfinite(x); });
    };
    for (const auto& e : type_embeddings)
      if (!finite(e)) throw ModelError("non-finite type embedding");
    for (const auto& l : gcn)
      if (!finite(l.weight) || !finite(l.bias)) throw ModelError("non-finite GCN parameter");
    for (const auto& [arity, layers] : heads)
      for (const auto& l : layers)
        if (!finite(l.weight) || !finite(l.bias)) throw ModelError("non-finite classifier parameter");
  }

  friend bool operator==(const BasicModelWeights&, const BasicModelWeights&) = default;
};

using ModelWeights = BasicModelWeights<float>;

/// Row-major node-by-feature matrix.
template <typename Scalar>
struct NodeMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Scalar> data;

  std::span<Scalar> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const Scalar> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

/// h'_v = ReLU(W · mean{h_u : u in N(v) ∪ {v}} + b). `neighbourhoods` must
/// already contain v itself (see closed_neighbourhoods).
template <typename Scalar>
NodeMatrix<Scalar> gcn_layer(const NodeMatrix<Scalar>& h, const std::vector<std::vector<std::uint32_t>>& neighbourhoods,
                             const DenseLayer<Scalar>& layer) {
  if (neighbourhoods.size() != h.rows) throw DimensionError("adjacency size differs from node count");
  if (layer.in != h.cols) throw DimensionError("layer input differs from feature width");
  NodeMatrix<Scalar> out{h.rows, layer.out, std::vector<Scalar>(h.rows * layer.out)};
  std::vector<Scalar> mean(h.cols);
  for (std::size_t v = 0; v < h.rows; ++v) {
    std::fill(mean.begin(), mean.end(), Scalar(0));
    for (auto u : neighbourhoods[v]) {
      auto hu = h.row(u);
      for (std::size_t c = 0; c < h.cols; ++c) mean[c] += hu[c];
    }
    const auto k = static_cast<Scalar>(neighbourhoods[v].size());
    for (auto& x : mean) x /= k;
    auto y = out.row(v);
    layer.apply(mean, y);
    for (auto& x : y) x = std::max(x, Scalar(0));
  }
  return out;
}

/// Sum over nodes of the representation after T GCN steps.
template <typename Scalar>
std::vector<Scalar> embed_graph(const EquationGraph& g, const BasicModelWeights<Scalar>& w) {
  NodeMatrix<Scalar> h{g.nodes.size(), w.m, std::vector<Scalar>(g.nodes.size() * w.m)};
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    const auto& emb = w.type_embeddings[static_cast<std::size_t>(g.nodes[v].type)];
    std::copy(emb.begin(), emb.end(), h.row(v).begin());
  }
  const auto nb = closed_neighbourhoods(g);
  for (const auto& layer : w.gcn) h = gcn_layer(h, nb, layer);
  std::vector<Scalar> pooled(h.cols, Scalar(0));
  for (std::size_t v = 0; v < h.rows; ++v) {
    auto hv = h.row(v);
    for (std::size_t c = 0; c < h.cols; ++c) pooled[c] += hv[c];
  }
  return pooled;
}

template <typename Scalar>
std::vector<Scalar> softmax(std::span<const Scalar> logits) {
  std::vector<Scalar> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const Scalar mx = *std::max_element(out.begin(), out.end());
  Scalar total = 0;
  for (auto& x : out) {
    x = std::exp(x - mx);
    total += x;
  }
  for (auto& x : out) x /= total;
  return out;
}

/// Classifier head over pre-computed graph embeddings (parent first), then softmax.
template <typename Scalar>
std::vector<Scalar> score_embeddings(const std::vector<std::vector<Scalar>>& embeddings,
                                     const BasicModelWeights<Scalar>& w) {
  if (embeddings.size() < 3) throw std::invalid_argument("need a parent and at least two children");
  const std::size_t arity = embeddings.size() - 1;
  auto it = w.heads.find(arity);
  if (it == w.heads.end()) throw ModelError("model has no classifier head for arity " + std::to_string(arity));
  std::vector<Scalar> x;
  x.reserve(embeddings.size() * w.m);
  for (const auto& e : embeddings) {
    if (e.size() != w.m) throw DimensionError("embedding length differs from m");
    x.insert(x.end(), e.begin(), e.end());
  }
  const auto& layers = it->second;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    std::vector<Scalar> y(layers[i].out);
    layers[i].apply(x, y);
    if (i + 1 < layers.size())
      for (auto& v : y) v = std::max(v, Scalar(0));
    x = std::move(y);
  }
  return softmax<Scalar>(x);
}

/// Branch probabilities for one split point. `children` are the conclusions in
/// presentation order; terminal conclusions should be passed as `true`, which
/// encodes as the root-only graph.
template <typename Scalar>
std::vector<Scalar> score_branches(const Formula& parent, const std::vector<const Formula*>& children, GraphVariant variant,
                                   const BasicModelWeights<Scalar>& w) {
  std::vector<std::vector<Scalar>> emb;
  emb.reserve(children.size() + 1);
  emb.push_back(embed_graph(encode_graph(parent, variant), w));
  for (const Formula* c : children) emb.push_back(embed_graph(encode_graph(*c, variant), w));
  return score_embeddings(emb, w);
}

// ---------------------------------------------------------------------------
// Weight files

namespace detail {

template <typename Scalar>
nlohmann::ordered_json matrix_to_json(const std::vector<Scalar>& data, std::size_t rows, std::size_t cols) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < rows; ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < cols; ++c) row.push_back(static_cast<double>(data[r * cols + c]));
    out.push_back(std::move(row));
  }
  return out;
}

template <typename Scalar>
nlohmann::ordered_json vector_to_json(const std::vector<Scalar>& v) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (auto x : v) out.push_back(static_cast<double>(x));
  return out;
}

template <typename Scalar>
nlohmann::ordered_json layer_to_json(const DenseLayer<Scalar>& l) {
  nlohmann::ordered_json j;
  j["W"] = matrix_to_json(l.weight, l.out, l.in);
  j["b"] = vector_to_json(l.bias);
  return j;
}

template <typename Scalar>
Scalar number_from_json(const nlohmann::json& j) {
  if (!j.is_number()) throw ParseError("expected a number in weight file");
  return static_cast<Scalar>(j.get<double>());
}

template <typename Scalar>
std::vector<Scalar> vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("expected an array in weight file");
  std::vector<Scalar> out;
  for (const auto& x : j) out.push_back(number_from_json<Scalar>(x));
  return out;
}

template <typename Scalar>
DenseLayer<Scalar> layer_from_json(const nlohmann::json& j) {
  DenseLayer<Scalar> l;
  const auto& rows = j.at("W");
  if (!rows.is_array()) throw ParseError("layer W must be an array of rows");
  l.out = rows.size();
  for (const auto& row : rows) {
    auto r = vector_from_json<Scalar>(row);
    if (l.weight.empty()) l.in = r.size();
    if (r.size() != l.in) throw DimensionError("ragged weight matrix");
    l.weight.insert(l.weight.end(), r.begin(), r.end());
  }
  l.bias = vector_from_json<Scalar>(j.at("b"));
  if (l.bias.size() != l.out) throw DimensionError("bias length differs from weight rows");
  return l;
}

}  // namespace detail

template <typename Scalar>
nlohmann::ordered_json weights_to_json(const BasicModelWeights<Scalar>& w) {
  nlohmann::ordered_json j;
  j["m"] = w.m;
  j["T"] = w.steps;
  nlohmann::ordered_json emb = nlohmann::ordered_json::array();
  for (const auto& e : w.type_embeddings) emb.push_back(detail::vector_to_json(e));
  j["typeEmbeddings"] = std::move(emb);
  nlohmann::ordered_json gcn = nlohmann::ordered_json::array();
  for (const auto& l : w.gcn) gcn.push_back(detail::layer_to_json(l));
  j["gcn"] = std::move(gcn);
  nlohmann::ordered_json heads = nlohmann::ordered_json::object();
  for (const auto& [arity, layers] : w.heads) {
    nlohmann::ordered_json ls = nlohmann::ordered_json::array();
    for (const auto& l : layers) ls.push_back(detail::layer_to_json(l));
    heads[std::to_string(arity)] = std::move(ls);
  }
  j["heads"] = std::move(heads);
  return j;
}

template <typename Scalar = float>
BasicModelWeights<Scalar> weights_from_json(const nlohmann::json& j) {
  BasicModelWeights<Scalar> w;
  try {
    w.m = j.at("m").get<std::size_t>();
    w.steps = j.at("T").get<std::size_t>();
    const auto& emb = j.at("typeEmbeddings");
    if (!emb.is_array() || emb.size() != 4) throw DimensionError("typeEmbeddings must have 4 rows");
    for (std::size_t i = 0; i < 4; ++i) w.type_embeddings[i] = detail::vector_from_json<Scalar>(emb[i]);
    for (const auto& l : j.at("gcn")) w.gcn.push_back(detail::layer_from_json<Scalar>(l));
    for (const auto& [key, layers] : j.at("heads").items()) {
      std::size_t arity = 0;
      try {
        arity = std::stoul(key);
      } catch (const std::exception&) {
        throw ParseError("head key '" + key + "' is not an arity");
      }
      auto& dst = w.heads[arity];
      for (const auto& l : layers) dst.push_back(detail::layer_from_json<Scalar>(l));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed weight file: ") + e.what());
  }
  w.validate();
  return w;
}

template <typename Scalar = float>
BasicModelWeights<Scalar> parse_weights(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("weight file is not valid JSON: ") + e.what());
  }
  return weights_from_json<Scalar>(j);
}

template <typename Scalar = float>
BasicModelWeights<Scalar> load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open weight file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_weights<Scalar>(buf.str());
}

template <typename Scalar>
std::string serialize_weights(const BasicModelWeights<Scalar>& w) {
  return weights_to_json(w).dump();
}

template <typename Scalar>
void save_weights(const BasicModelWeights<Scalar>& w, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write weight file " + path);
  out << serialize_weights(w) << '\n';
}

/// Uniform(-scale, scale) initialisation; heads for arity 2 and 3.
template <typename Scalar = float>
BasicModelWeights<Scalar> random_weights(std::size_t m, std::size_t steps, std::size_t hidden, std::uint64_t seed,
                                         double scale = 0.5) {
  Rng rng(seed);
  auto draw = [&] {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return static_cast<Scalar>((2.0 * u - 1.0) * scale);
  };
  auto layer = [&](std::size_t in, std::size_t out) {
    DenseLayer<Scalar> l{in, out, std::vector<Scalar>(in * out), std::vector<Scalar>(out)};
    for (auto& x : l.weight) x = draw();
    for (auto& x : l.bias) x = draw();
    return l;
  };
  BasicModelWeights<Scalar> w;
  w.m = m;
  w.steps = steps;
  for (auto& e : w.type_embeddings) {
    e.resize(m);
    for (auto& x : e) x = draw();
  }
  for (std::size_t t = 0; t < steps; ++t) w.gcn.push_back(layer(m, m));
  for (std::size_t arity : {2u, 3u}) {
    auto& h = w.heads[arity];
    if (hidden == 0) {
      h.push_back(layer((arity + 1) * m, arity));
    } else {
      h.push_back(layer((arity + 1) * m, hidden));
      h.push_back(layer(hidden, arity));
    }
  }
  return w;
}

}  // namespace wordeq
