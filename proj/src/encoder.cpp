#include "nap/encoder.hpp"

#include <cmath>
#include <limits>

#include "nap/error.hpp"

namespace nap {

FeatureMaps convolve_elu(const ReviewMatrix& x, const ConvParams& params) {
  const std::size_t l = params.window, d = params.dim, m = params.kernels;
  if (x.dim() != d)
    throw ConfigError("shape mismatch: review dim " + std::to_string(x.dim()) + " vs kernel dim " +
                      std::to_string(d));
  if (l == 0 || x.max_len() < l) throw ConfigError("shape mismatch: window longer than max_len");
  if (params.weights.size() != l * d * m || params.bias.size() != m)
    throw ConfigError("shape mismatch: convolution parameters");

  const std::size_t span = std::max(x.length(), l);
  const std::size_t windows = span - l + 1;
  FeatureMaps maps{Matrix(windows, m), std::vector<bool>(windows)};
  for (std::size_t t = 0; t < windows; ++t) {
    maps.valid[t] = t < x.length();
    if (!maps.valid[t]) continue;
    auto out = maps.values.row(t);
    std::copy(params.bias.begin(), params.bias.end(), out.begin());
    for (std::size_t r = 0; r < l; ++r) {
      if (!x.mask(t + r)) break;  // padding rows contribute nothing
      auto row = x.row(t + r);
      const double* w = params.weights.data() + r * d * m;
      for (std::size_t e = 0; e < d; ++e, w += m) {
        const double xv = row[e];
        for (std::size_t j = 0; j < m; ++j) out[j] += w[j] * xv;
      }
    }
    for (auto& v : out) v = elu(v);
  }
  return maps;
}

ReviewEmbedding max_pool(const FeatureMaps& maps) {
  const std::size_t m = maps.values.cols;
  ReviewEmbedding h{std::vector<double>(m, -std::numeric_limits<double>::infinity()),
                    std::vector<std::size_t>(m, 0)};
  bool any = false;
  for (std::size_t t = 0; t < maps.values.rows; ++t) {
    if (!maps.valid[t]) continue;
    any = true;
    auto row = maps.values.row(t);
    for (std::size_t j = 0; j < m; ++j) {
      if (std::isnan(h.values[j])) continue;
      if (row[j] > h.values[j] || std::isnan(row[j])) {
        h.values[j] = row[j];
        h.argmax[j] = t;
      }
    }
  }
  if (!any) throw DataError("empty review after padding rules");
  return h;
}

ReviewEmbedding encode_review(const ReviewMatrix& x, const ConvParams& params) {
  return max_pool(convolve_elu(x, params));
}

void encode_review_backward(const ReviewMatrix& x, const ReviewEmbedding& h,
                            std::span<const double> grad_h, ConvParams& grad) {
  const std::size_t l = grad.window, d = grad.dim, m = grad.kernels;
  for (std::size_t j = 0; j < m; ++j) {
    if (grad_h[j] == 0.0) continue;
    // ELU'(z) = 1 for z > 0, else exp(z) = ELU(z) + 1
    const double out = h.values[j];
    const double dz = grad_h[j] * (out > 0.0 ? 1.0 : out + 1.0);
    grad.bias[j] += dz;
    const std::size_t t = h.argmax[j];
    for (std::size_t r = 0; r < l && x.mask(t + r); ++r) {
      auto row = x.row(t + r);
      for (std::size_t e = 0; e < d; ++e) grad.weight(r, e, j) += dz * row[e];
    }
  }
}

}  // namespace nap
