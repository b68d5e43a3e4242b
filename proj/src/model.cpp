#include "nap/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "nap/error.hpp"
#include "nap/rng.hpp"

namespace nap {

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::nap: return "nap";
    case Variant::independent: return "independent";
    case Variant::neighbor_only: return "neighbor-only";
    case Variant::random_neighbors: return "random-neighbors";
    case Variant::noise_context: return "noise-context";
    case Variant::feature_fusion: return "feature-fusion";
  }
  return "?";
}

Variant parse_variant(std::string_view text) {
  for (auto v : {Variant::nap, Variant::independent, Variant::neighbor_only,
                 Variant::random_neighbors, Variant::noise_context, Variant::feature_fusion})
    if (to_string(v) == text) return v;
  throw ConfigError("unknown variant '" + std::string(text) + "'");
}

// ------------------------------------------------------------------ config

void ModelConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw ConfigError("gamma must lie in [0, 1], got " + std::to_string(gamma));
  if (!(weight_decay >= 0.0)) throw ConfigError("weight decay must be >= 0");
  if (embedding_dim == 0 || window == 0 || kernels == 0)
    throw ConfigError("embedding_dim, window and kernels must be >= 1");
  if (max_len < window) throw ConfigError("max_len must be >= window");
  if (neighbors == 0) throw ConfigError("K must be >= 1");
  if (neighbor_scheme == NeighborScheme::surrounding && neighbors % 2 != 0)
    throw ConfigError("surrounding neighbors require an even K, got " + std::to_string(neighbors));
  switch (variant) {
    case Variant::independent:
    case Variant::feature_fusion:
      if (gamma != 1.0) throw ConfigError(std::string(to_string(variant)) + " requires gamma = 1");
      break;
    case Variant::neighbor_only:
      if (gamma != 0.0) throw ConfigError("neighbor-only prediction requires gamma = 0");
      break;
    case Variant::random_neighbors:
      if (weighting == WeightingScheme::sfr)
        throw ConfigError("SFR cannot be combined with random neighbors");
      break;
    default: break;
  }
  if (variant != Variant::feature_fusion && feature_dim != 0)
    throw ConfigError("feature_dim is only valid for feature fusion");
}

bool ModelConfig::uses_weighting() const {
  return variant == Variant::nap || variant == Variant::neighbor_only ||
         variant == Variant::random_neighbors;
}

bool ModelConfig::uses_context() const {
  return uses_weighting() || variant == Variant::noise_context;
}

// ------------------------------------------------------------------- model

NapModel NapModel::zeros(const ModelConfig& config) {
  config.validate();
  NapModel model;
  model.config = config;
  model.conv = ConvParams(config.window, config.embedding_dim, config.kernels);
  model.weighting = config.uses_weighting()
                        ? WeightingParams(config.weighting, config.neighbors, config.kernels)
                        : WeightingParams(WeightingScheme::avg, config.neighbors, config.kernels);
  model.output_weights.assign(config.kernels, 0.0);
  model.feature_weights.assign(config.feature_dim, 0.0);
  model.output_bias.assign(1, 0.0);
  return model;
}

std::vector<NamedTensor> NapModel::tensors() {
  std::vector<NamedTensor> out;
  out.push_back({"conv.kernels", {conv.window, conv.dim, conv.kernels}, conv.weights});
  out.push_back({"conv.bias", {conv.kernels}, conv.bias});
  if (!weighting.query.empty())
    out.push_back({"context.query", {weighting.query.size()}, weighting.query});
  if (!weighting.regression.data.empty())
    out.push_back({"context.regression",
                   {weighting.regression.rows, weighting.regression.cols},
                   weighting.regression.data});
  out.push_back({"output.weights", {output_weights.size()}, output_weights});
  if (!feature_weights.empty())
    out.push_back({"output.feature_weights", {feature_weights.size()}, feature_weights});
  out.push_back({"output.bias", {1}, output_bias});
  return out;
}

std::size_t NapModel::parameter_count() {
  std::size_t n = 0;
  for (const auto& t : tensors()) n += t.values.size();
  return n;
}

NapModel initialize(const ModelConfig& config, std::uint64_t seed) {
  NapModel model = NapModel::zeros(config);
  auto glorot = [&](std::span<double> values, std::string_view name, double fan_in,
                    double fan_out) {
    Rng rng = make_rng(seed, std::string("init/") + std::string(name));
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (auto& v : values) v = dist(rng);
  };
  const double l = static_cast<double>(config.window);
  const double d = static_cast<double>(config.embedding_dim);
  const double m = static_cast<double>(config.kernels);
  const double k = static_cast<double>(config.neighbors);
  const double dense_in = m + static_cast<double>(config.feature_dim);
  // receptive-field fans for the convolution
  glorot(model.conv.weights, "conv.kernels", l * d, l * m);
  if (!model.weighting.query.empty()) glorot(model.weighting.query, "context.query", m, 1.0);
  if (!model.weighting.regression.data.empty())
    glorot(model.weighting.regression.data, "context.regression", k, m);
  glorot(model.output_weights, "output.weights", dense_in, 1.0);
  if (!model.feature_weights.empty())
    glorot(model.feature_weights, "output.feature_weights", dense_in, 1.0);
  return model;
}

// ----------------------------------------------------------- pure pieces

std::vector<double> contextualize(std::span<const double> h, std::span<const double> c,
                                  double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw ConfigError("gamma must lie in [0, 1], got " + std::to_string(gamma));
  if (h.size() != c.size()) throw ConfigError("h and c must have equal length");
  std::vector<double> out(h.size());
  for (std::size_t j = 0; j < h.size(); ++j) out[j] = gamma * h[j] + (1.0 - gamma) * c[j];
  return out;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double predict(std::span<const double> combined, std::span<const double> output_weights,
               double output_bias) {
  if (combined.size() != output_weights.size())
    throw ConfigError("output weights do not match the embedding length");
  return sigmoid(std::inner_product(combined.begin(), combined.end(), output_weights.begin(),
                                    output_bias));
}

namespace {

double clip(double p) { return std::clamp(p, kProbabilityClip, 1.0 - kProbabilityClip); }

double example_cross_entropy(double p, int label) {
  const double q = clip(p);
  return label == 1 ? -std::log(q) : -std::log(1.0 - q);
}

double squared_norm(std::span<const double> v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

}  // namespace

double cross_entropy(std::span<const double> predictions, std::span<const int> labels) {
  if (predictions.empty()) throw DataError("loss over an empty batch (M = 0)");
  if (predictions.size() != labels.size()) throw ConfigError("predictions/labels size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    sum += example_cross_entropy(predictions[i], labels[i]);
  return sum / static_cast<double>(predictions.size());
}

double loss(std::span<const double> predictions, std::span<const int> labels,
            std::span<const double> conv_kernels, double weight_decay) {
  return cross_entropy(predictions, labels) + 0.5 * weight_decay * squared_norm(conv_kernels);
}

// ---------------------------------------------------------- forward/back

ReviewMatrix ReviewStore::matrix(std::size_t review) const {
  return embed_review(token_ids.at(review), *table, max_len);
}

namespace {

bool needs_review_embedding(const ModelConfig& c) { return !c.uses_context() || c.gamma > 0.0; }
bool needs_context_embedding(const ModelConfig& c) { return c.uses_context() && c.gamma < 1.0; }

}  // namespace

ForwardTrace forward(const NapModel& model, const ReviewStore& store, const Example& example) {
  const ModelConfig& cfg = model.config;
  const bool need_h = needs_review_embedding(cfg);
  const bool need_c = needs_context_embedding(cfg);
  ForwardTrace trace;

  if (need_h) {
    trace.target_matrix = store.matrix(example.target);
    trace.h = encode_review(*trace.target_matrix, model.conv);
  }
  if (need_c) {
    if (cfg.variant == Variant::noise_context) {
      if (example.fixed_context.size() != cfg.kernels)
        throw DataError("example " + example.pair_id + " lacks a fixed context vector");
      trace.c.values = example.fixed_context;
    } else {
      const std::size_t k = example.neighbors.size();
      if (k != cfg.neighbors)
        throw DataError("example " + example.pair_id + " has " + std::to_string(k) +
                        " neighbors, model expects " + std::to_string(cfg.neighbors));
      trace.context = Matrix(k, cfg.kernels);
      trace.neighbor_matrices.reserve(k);
      trace.neighbor_embeddings.reserve(k);
      for (std::size_t i = 0; i < k; ++i) {
        trace.neighbor_matrices.push_back(store.matrix(example.neighbors[i]));
        trace.neighbor_embeddings.push_back(encode_review(trace.neighbor_matrices.back(), model.conv));
        std::copy(trace.neighbor_embeddings.back().values.begin(),
                  trace.neighbor_embeddings.back().values.end(), trace.context.row(i).begin());
      }
      trace.c = build_context(trace.context, model.weighting, cfg.neighbor_scheme);
    }
  }

  if (need_h && need_c) trace.combined = contextualize(trace.h.values, trace.c.values, cfg.gamma);
  else if (need_h) trace.combined = trace.h.values;
  else trace.combined = trace.c.values;

  double logit = model.output_bias[0];
  for (std::size_t j = 0; j < trace.combined.size(); ++j)
    logit += model.output_weights[j] * trace.combined[j];
  if (example.features.size() != cfg.feature_dim)
    throw DataError("example " + example.pair_id + " has " +
                    std::to_string(example.features.size()) + " features, model expects " +
                    std::to_string(cfg.feature_dim));
  for (std::size_t f = 0; f < cfg.feature_dim; ++f)
    logit += model.feature_weights[f] * example.features[f];
  trace.logit = logit;
  trace.probability = sigmoid(logit);
  return trace;
}

void backward(const NapModel& model, const ForwardTrace& trace, const Example& example,
              double grad_logit, NapModel& grad) {
  const ModelConfig& cfg = model.config;
  const bool need_h = needs_review_embedding(cfg);
  const bool need_c = needs_context_embedding(cfg);
  const std::size_t m = cfg.kernels;

  grad.output_bias[0] += grad_logit;
  for (std::size_t j = 0; j < m; ++j) grad.output_weights[j] += grad_logit * trace.combined[j];
  for (std::size_t f = 0; f < cfg.feature_dim; ++f)
    grad.feature_weights[f] += grad_logit * example.features[f];

  std::vector<double> d_combined(m);
  for (std::size_t j = 0; j < m; ++j) d_combined[j] = grad_logit * model.output_weights[j];

  const double h_share = need_c ? cfg.gamma : 1.0;
  const double c_share = need_h ? 1.0 - cfg.gamma : 1.0;

  if (need_h) {
    std::vector<double> dh(m);
    for (std::size_t j = 0; j < m; ++j) dh[j] = h_share * d_combined[j];
    encode_review_backward(*trace.target_matrix, trace.h, dh, grad.conv);
  }
  if (need_c && cfg.variant != Variant::noise_context) {
    std::vector<double> dc(m);
    for (std::size_t j = 0; j < m; ++j) dc[j] = c_share * d_combined[j];
    Matrix d_context = build_context_backward(trace.context, model.weighting, cfg.neighbor_scheme,
                                              trace.c, dc, grad.weighting);
    for (std::size_t i = 0; i < trace.neighbor_matrices.size(); ++i)
      encode_review_backward(trace.neighbor_matrices[i], trace.neighbor_embeddings[i],
                             d_context.row(i), grad.conv);
  }
}

BatchResult loss_and_gradient(const NapModel& model, const ReviewStore& store,
                              std::span<const Example> examples) {
  if (examples.empty()) throw DataError("loss over an empty batch (M = 0)");
  BatchResult result{0.0, 0.0, NapModel::zeros(model.config)};
  const double inv_m = 1.0 / static_cast<double>(examples.size());
  double ce = 0.0;
  for (const auto& ex : examples) {
    ForwardTrace trace = forward(model, store, ex);
    const double p = trace.probability;
    ce += example_cross_entropy(p, ex.label);
    // The clipped log is flat outside [eps, 1 - eps].
    const bool clipped = p < kProbabilityClip || p > 1.0 - kProbabilityClip;
    const double g = clipped ? 0.0 : (p - static_cast<double>(ex.label)) * inv_m;
    if (g != 0.0) backward(model, trace, ex, g, result.gradient);
  }
  result.cross_entropy = ce * inv_m;
  const double lambda = model.config.weight_decay;
  result.loss = result.cross_entropy + 0.5 * lambda * squared_norm(model.conv.weights);
  for (std::size_t i = 0; i < model.conv.weights.size(); ++i)
    result.gradient.conv.weights[i] += lambda * model.conv.weights[i];
  return result;
}

std::vector<double> predict_examples(const NapModel& model, const ReviewStore& store,
                                     std::span<const Example> examples) {
  std::vector<double> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(forward(model, store, ex).probability);
  return out;
}

double dataset_loss(const NapModel& model, const ReviewStore& store,
                    std::span<const Example> examples) {
  auto probs = predict_examples(model, store, examples);
  std::vector<int> labels;
  labels.reserve(examples.size());
  for (const auto& ex : examples) labels.push_back(ex.label);
  return loss(probs, labels, model.conv.weights, model.config.weight_decay);
}

double accuracy(std::span<const double> probabilities, std::span<const int> labels) {
  if (probabilities.empty()) throw DataError("accuracy over an empty set");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i)
    if ((probabilities[i] >= 0.5 ? 1 : 0) == labels[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(probabilities.size());
}

double evaluate(const NapModel& model, const ReviewStore& store,
                std::span<const Example> examples) {
  if (examples.empty()) throw DataError("evaluation over an empty set");
  auto probs = predict_examples(model, store, examples);
  std::vector<int> labels;
  for (const auto& ex : examples) labels.push_back(ex.label);
  return accuracy(probs, labels);
}

// ---------------------------------------------------------------- variants

ModelConfig VariantSpec::apply(ModelConfig base) const {
  base.variant = variant;
  if (scheme) base.neighbor_scheme = *scheme;
  if (gamma) base.gamma = *gamma;
  base.feature_dim = feature_dim;
  base.validate();
  return base;
}

VariantSpec make_variant(std::string_view kind, std::size_t neighbors, WeightingScheme weighting) {
  VariantSpec spec;
  spec.kind = std::string(kind);
  auto scheme_of = [](char letter) {
    return letter == 'P' ? NeighborScheme::preceding
                         : letter == 'F' ? NeighborScheme::following : NeighborScheme::surrounding;
  };
  if (kind == "I") {
    spec.variant = Variant::independent;
    spec.gamma = 1.0;
  } else if (kind == "P" || kind == "F" || kind == "S") {
    spec.variant = Variant::neighbor_only;
    spec.scheme = scheme_of(kind[0]);
    spec.gamma = 0.0;
  } else if (kind == "I+P" || kind == "I+F" || kind == "I+S") {
    spec.variant = Variant::nap;
    spec.scheme = scheme_of(kind[2]);
  } else if (kind == "I+R") {
    if (weighting == WeightingScheme::sfr)
      throw ConfigError("SFR is not available for I+R: random reviews have no spatial order");
    spec.variant = Variant::random_neighbors;
  } else if (kind == "I+N") {
    spec.variant = Variant::noise_context;
  } else if (kind.starts_with("I+ORD_") || kind == "I+CON" || kind == "I+POL" ||
             kind == "I+ENT") {
    spec.variant = Variant::feature_fusion;
    spec.gamma = 1.0;
    spec.feature_dim = 1;
  } else {
    throw ConfigError("unknown variant kind '" + std::string(kind) + "'");
  }
  if (spec.scheme == NeighborScheme::surrounding && neighbors % 2 != 0)
    throw ConfigError("surrounding neighbors require an even K, got " + std::to_string(neighbors));
  return spec;
}

}  // namespace nap
