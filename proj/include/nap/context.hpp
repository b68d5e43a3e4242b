#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "nap/corpus.hpp"
#include "nap/tensor.hpp"

namespace nap {

/// Ordered by flexibility (and parameter count): AVG < WAVG < FR < SFR.
enum class WeightingScheme { avg = 0, wavg = 1, fr = 2, sfr = 3 };

std::string_view to_string(WeightingScheme scheme);
WeightingScheme parse_weighting_scheme(std::string_view text);

/// K x m, one neighbor embedding per row in ascending position order.
using ContextMatrix = Matrix;

/// Trainable parameters of a weighting scheme: the WAVG query vector u_a
/// (length m) or the FR/SFR regression matrix W_b (K x m).
struct WeightingParams {
  WeightingScheme scheme = WeightingScheme::avg;
  std::size_t neighbors = 0;
  std::size_t dim = 0;
  std::vector<double> query;
  Matrix regression;

  WeightingParams() = default;
  WeightingParams(WeightingScheme scheme, std::size_t neighbors, std::size_t dim);

  std::size_t parameter_count() const { return query.size() + regression.data.size(); }
};

/// 0 / m / mK / mK.
std::size_t weighting_parameter_count(WeightingScheme scheme, std::size_t dim,
                                      std::size_t neighbors);

/// Context vector c plus the attention record. For AVG and WAVG `alpha`
/// holds one weight per neighbor; for FR and SFR `beta` is K x m with
/// columns summing to one. The remaining members are forward caches.
struct ContextEmbedding {
  std::vector<double> values;
  std::vector<double> alpha;
  Matrix beta;
  std::vector<double> scores;  // WAVG: tanh(u_a . C_i)
  Matrix activations;          // FR/SFR: tanh(W_b * C)
  Matrix enhanced;             // SFR: cumulative-sum context matrix
};

/// Stable in-place softmax.
void softmax(std::span<double> values);

ContextEmbedding weight_avg(const ContextMatrix& context);
ContextEmbedding weight_wavg(const ContextMatrix& context, std::span<const double> query);
ContextEmbedding weight_fr(const ContextMatrix& context, const Matrix& regression);
ContextEmbedding weight_sfr(const ContextMatrix& context, const Matrix& regression,
                            NeighborScheme scheme);

/// Shares closer neighbors' information with farther ones. Preceding rows
/// take suffix sums (the last row is closest to the target), following rows
/// take prefix sums; a surrounding context splits into a preceding left
/// half and a following right half.
Matrix spatial_enhance(const ContextMatrix& context, NeighborScheme scheme);

ContextEmbedding build_context(const ContextMatrix& context, const WeightingParams& params,
                               NeighborScheme scheme);

/// Returns dL/dC and accumulates parameter gradients into `grad`.
Matrix build_context_backward(const ContextMatrix& context, const WeightingParams& params,
                              NeighborScheme scheme, const ContextEmbedding& forward,
                              std::span<const double> grad_c, WeightingParams& grad);

}  // namespace nap
