#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nap/context.hpp"
#include "nap/corpus.hpp"
#include "nap/embeddings.hpp"
#include "nap/encoder.hpp"

namespace nap {

inline constexpr double kDefaultGamma = 0.5;
inline constexpr double kDefaultWeightDecay = 5e-4;
inline constexpr double kProbabilityClip = 1e-12;

/// Which parts of the network feed the prediction.
///  - nap: gamma * h + (1 - gamma) * c
///  - independent: h only (gamma = 1, no context parameters)
///  - neighbor_only: c only (gamma = 0)
///  - random_neighbors: context built from randomly drawn reviews
///  - noise_context: c replaced by a fixed U[0,1]^m vector per example
///  - feature_fusion: [h, standardized features] -> dense -> sigmoid
enum class Variant { nap, independent, neighbor_only, random_neighbors, noise_context, feature_fusion };

std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view text);

struct ModelConfig {
  std::size_t embedding_dim = kDefaultEmbeddingDim;
  std::size_t window = kDefaultWindow;
  std::size_t kernels = kDefaultKernels;
  std::size_t neighbors = 4;
  std::size_t max_len = kDefaultMaxLen;
  std::size_t feature_dim = 0;
  NeighborScheme neighbor_scheme = NeighborScheme::surrounding;
  WeightingScheme weighting = WeightingScheme::avg;
  double gamma = kDefaultGamma;
  double weight_decay = kDefaultWeightDecay;
  Variant variant = Variant::nap;

  /// Throws ConfigError on out-of-range values or inconsistent variants.
  void validate() const;
  /// Whether c is produced by a weighting scheme over neighbor embeddings.
  bool uses_weighting() const;
  /// Whether c enters the prediction at all.
  bool uses_context() const;
};

/// Mutable view of one parameter tensor.
struct NamedTensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::span<double> values;
};

struct NapModel {
  ModelConfig config;
  ConvParams conv;
  WeightingParams weighting;
  std::vector<double> output_weights;   // W_o, length m
  std::vector<double> feature_weights;  // fusion weights, length feature_dim
  std::vector<double> output_bias;      // b_o, length 1

  /// All-zero parameters of the right shapes.
  static NapModel zeros(const ModelConfig& config);

  /// conv.kernels, conv.bias, context.query | context.regression,
  /// output.weights, output.feature_weights, output.bias (absent ones omitted).
  std::vector<NamedTensor> tensors();
  std::size_t parameter_count();
};

/// Glorot-uniform weights, zero biases. Each tensor draws from its own
/// stream so the draws do not depend on which other tensors exist.
NapModel initialize(const ModelConfig& config, std::uint64_t seed);

/// gamma * h + (1 - gamma) * c.
std::vector<double> contextualize(std::span<const double> h, std::span<const double> c,
                                  double gamma);

double sigmoid(double x);

/// sigmoid(W_o . h_hat + b_o)
double predict(std::span<const double> combined, std::span<const double> output_weights,
               double output_bias);

/// Mean binary cross-entropy with probabilities clipped to [1e-12, 1 - 1e-12].
double cross_entropy(std::span<const double> predictions, std::span<const int> labels);

/// Cross-entropy plus (lambda / 2) * ||W_c||^2. Throws on an empty batch.
double loss(std::span<const double> predictions, std::span<const int> labels,
            std::span<const double> conv_kernels, double weight_decay);

/// Token-id reviews shared by every example of a dataset.
struct ReviewStore {
  std::shared_ptr<const EmbeddingTable> table;
  std::vector<std::vector<std::size_t>> token_ids;
  std::size_t max_len = kDefaultMaxLen;

  ReviewMatrix matrix(std::size_t review) const;
};

/// One training/evaluation instance; review indices point into a ReviewStore.
struct Example {
  std::string pair_id;
  std::size_t target = 0;
  std::vector<std::size_t> neighbors;
  int label = 0;
  std::vector<double> fixed_context;  // noise_context only
  std::vector<double> features;       // feature_fusion only
};

/// Everything the backward pass needs from one forward pass.
struct ForwardTrace {
  std::optional<ReviewMatrix> target_matrix;
  ReviewEmbedding h;
  std::vector<ReviewMatrix> neighbor_matrices;
  std::vector<ReviewEmbedding> neighbor_embeddings;
  ContextMatrix context;
  ContextEmbedding c;
  std::vector<double> combined;  // h_hat
  double logit = 0.0;
  double probability = 0.5;
};

ForwardTrace forward(const NapModel& model, const ReviewStore& store, const Example& example);

/// Accumulates the gradient of `grad_logit * logit` into `grad`.
void backward(const NapModel& model, const ForwardTrace& trace, const Example& example,
              double grad_logit, NapModel& grad);

struct BatchResult {
  double loss = 0.0;
  double cross_entropy = 0.0;
  NapModel gradient;
};

/// Loss of `examples` as one batch and its exact gradient.
BatchResult loss_and_gradient(const NapModel& model, const ReviewStore& store,
                              std::span<const Example> examples);

std::vector<double> predict_examples(const NapModel& model, const ReviewStore& store,
                                     std::span<const Example> examples);

/// Loss (cross-entropy + regularizer) without gradients.
double dataset_loss(const NapModel& model, const ReviewStore& store,
                    std::span<const Example> examples);

/// Fraction of examples with (probability >= 0.5) == label.
double evaluate(const NapModel& model, const ReviewStore& store,
                std::span<const Example> examples);
double accuracy(std::span<const double> probabilities, std::span<const int> labels);

/// Resolved form of a variant name such as "I", "S", "I+P", "I+R", "I+N".
struct VariantSpec {
  std::string kind;
  Variant variant = Variant::nap;
  std::optional<NeighborScheme> scheme;
  std::optional<double> gamma;  // fixed gamma, when the variant pins it
  std::size_t feature_dim = 0;   // fused scalar features

  /// Applies the variant to a base configuration.
  ModelConfig apply(ModelConfig base) const;
};

VariantSpec make_variant(std::string_view kind, std::size_t neighbors, WeightingScheme weighting);

}  // namespace nap
