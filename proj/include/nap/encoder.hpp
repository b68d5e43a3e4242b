#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nap/embeddings.hpp"
#include "nap/tensor.hpp"

namespace nap {

inline constexpr std::size_t kDefaultWindow = 3;
inline constexpr std::size_t kDefaultKernels = 100;

/// Convolution kernels laid out [window][dim][kernel] so that the innermost
/// loop runs over kernels.
struct ConvParams {
  std::size_t window = 0;
  std::size_t dim = 0;
  std::size_t kernels = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  ConvParams() = default;
  ConvParams(std::size_t window, std::size_t dim, std::size_t kernels)
      : window(window), dim(dim), kernels(kernels), weights(window * dim * kernels, 0.0),
        bias(kernels, 0.0) {}

  double& weight(std::size_t r, std::size_t e, std::size_t j) {
    return weights[(r * dim + e) * kernels + j];
  }
  double weight(std::size_t r, std::size_t e, std::size_t j) const {
    return weights[(r * dim + e) * kernels + j];
  }
};

/// ELU-activated convolution outputs, one row per window start.
struct FeatureMaps {
  Matrix values;
  std::vector<bool> valid;
};

/// Max-pooled review embedding h, with the window that produced each entry.
struct ReviewEmbedding {
  std::vector<double> values;
  std::vector<std::size_t> argmax;
};

inline double elu(double x) { return x > 0.0 ? x : std::expm1(x); }

/// Valid convolution over the real tokens. A review shorter than the window
/// is treated as padded to one window; windows with no real token are
/// marked invalid.
FeatureMaps convolve_elu(const ReviewMatrix& x, const ConvParams& params);

/// Column-wise max over valid windows; ties go to the lowest window index.
ReviewEmbedding max_pool(const FeatureMaps& maps);

ReviewEmbedding encode_review(const ReviewMatrix& x, const ConvParams& params);

/// Accumulates dL/dW_c and dL/db_c into `grad` given dL/dh.
void encode_review_backward(const ReviewMatrix& x, const ReviewEmbedding& h,
                            std::span<const double> grad_h, ConvParams& grad);

}  // namespace nap
