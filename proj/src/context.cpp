#include "nap/context.hpp"

#include <algorithm>
#include <cmath>

#include "nap/error.hpp"

namespace nap {

std::string_view to_string(WeightingScheme scheme) {
  switch (scheme) {
    case WeightingScheme::avg: return "AVG";
    case WeightingScheme::wavg: return "WAVG";
    case WeightingScheme::fr: return "FR";
    case WeightingScheme::sfr: return "SFR";
  }
  return "?";
}

WeightingScheme parse_weighting_scheme(std::string_view text) {
  std::string upper(text);
  for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (upper == "AVG") return WeightingScheme::avg;
  if (upper == "WAVG") return WeightingScheme::wavg;
  if (upper == "FR") return WeightingScheme::fr;
  if (upper == "SFR") return WeightingScheme::sfr;
  throw ConfigError("unknown weighting scheme '" + std::string(text) + "'");
}

std::size_t weighting_parameter_count(WeightingScheme scheme, std::size_t dim,
                                      std::size_t neighbors) {
  switch (scheme) {
    case WeightingScheme::avg: return 0;
    case WeightingScheme::wavg: return dim;
    case WeightingScheme::fr:
    case WeightingScheme::sfr: return dim * neighbors;
  }
  return 0;
}

WeightingParams::WeightingParams(WeightingScheme scheme, std::size_t neighbors, std::size_t dim)
    : scheme(scheme), neighbors(neighbors), dim(dim) {
  if (scheme == WeightingScheme::wavg) query.assign(dim, 0.0);
  if (scheme == WeightingScheme::fr || scheme == WeightingScheme::sfr)
    regression = Matrix(neighbors, dim);
}

void softmax(std::span<double> values) {
  if (values.empty()) return;
  const double top = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (auto& v : values) {
    v = std::exp(v - top);
    sum += v;
  }
  for (auto& v : values) v /= sum;
}

namespace {

void require_rows(const ContextMatrix& context) {
  if (context.rows == 0) throw ConfigError("context matrix needs K >= 1 rows");
}

}  // namespace

ContextEmbedding weight_avg(const ContextMatrix& context) {
  require_rows(context);
  const std::size_t k = context.rows, m = context.cols;
  ContextEmbedding out;
  out.values.assign(m, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j) out.values[j] += context(i, j);
  for (auto& v : out.values) v /= static_cast<double>(k);
  out.alpha.assign(k, 1.0 / static_cast<double>(k));
  return out;
}

ContextEmbedding weight_wavg(const ContextMatrix& context, std::span<const double> query) {
  require_rows(context);
  const std::size_t k = context.rows, m = context.cols;
  if (query.size() != m) throw ConfigError("WAVG query length must equal m");
  ContextEmbedding out;
  out.scores.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += query[j] * context(i, j);
    out.scores[i] = std::tanh(s);
  }
  out.alpha = out.scores;
  softmax(out.alpha);
  out.values.assign(m, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j) out.values[j] += out.alpha[i] * context(i, j);
  return out;
}

ContextEmbedding weight_fr(const ContextMatrix& context, const Matrix& regression) {
  require_rows(context);
  const std::size_t k = context.rows, m = context.cols;
  if (regression.rows != k || regression.cols != m)
    throw ConfigError("FR regression matrix must be K x m");
  ContextEmbedding out;
  out.activations = Matrix(k, m);
  for (std::size_t i = 0; i < k * m; ++i)
    out.activations.data[i] = std::tanh(regression.data[i] * context.data[i]);
  out.beta = Matrix(k, m);
  std::vector<double> column(k);
  out.values.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < k; ++i) column[i] = out.activations(i, j);
    softmax(column);
    for (std::size_t i = 0; i < k; ++i) {
      out.beta(i, j) = column[i];
      out.values[j] += column[i] * context(i, j);
    }
  }
  return out;
}

Matrix spatial_enhance(const ContextMatrix& context, NeighborScheme scheme) {
  const std::size_t k = context.rows, m = context.cols;
  Matrix out(k, m);
  auto suffix = [&](std::size_t begin, std::size_t end) {  // closest row is end-1
    for (std::size_t i = end; i-- > begin;)
      for (std::size_t j = 0; j < m; ++j)
        out(i, j) = context(i, j) + (i + 1 < end ? out(i + 1, j) : 0.0);
  };
  auto prefix = [&](std::size_t begin, std::size_t end) {  // closest row is begin
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < m; ++j)
        out(i, j) = context(i, j) + (i > begin ? out(i - 1, j) : 0.0);
  };
  switch (scheme) {
    case NeighborScheme::preceding: suffix(0, k); break;
    case NeighborScheme::following: prefix(0, k); break;
    case NeighborScheme::surrounding:
      if (k % 2 != 0) throw ConfigError("surrounding neighbors require an even K");
      suffix(0, k / 2);
      prefix(k / 2, k);
      break;
  }
  return out;
}

ContextEmbedding weight_sfr(const ContextMatrix& context, const Matrix& regression,
                            NeighborScheme scheme) {
  require_rows(context);
  Matrix enhanced = spatial_enhance(context, scheme);
  ContextEmbedding out = weight_fr(enhanced, regression);
  out.enhanced = std::move(enhanced);
  return out;
}

ContextEmbedding build_context(const ContextMatrix& context, const WeightingParams& params,
                               NeighborScheme scheme) {
  switch (params.scheme) {
    case WeightingScheme::avg: return weight_avg(context);
    case WeightingScheme::wavg: return weight_wavg(context, params.query);
    case WeightingScheme::fr: return weight_fr(context, params.regression);
    case WeightingScheme::sfr: return weight_sfr(context, params.regression, scheme);
  }
  throw ConfigError("unknown weighting scheme");
}

namespace {

// Backward through FR applied to `input`; returns dL/d(input).
Matrix fr_backward(const Matrix& input, const Matrix& regression, const ContextEmbedding& fwd,
                   std::span<const double> grad_c, Matrix& grad_regression) {
  const std::size_t k = input.rows, m = input.cols;
  Matrix grad_input(k, m);
  for (std::size_t j = 0; j < m; ++j) {
    // softmax adjoint: d_z = beta * (d_beta - sum_i beta_i d_beta_i)
    double mean_d_beta = 0.0;
    for (std::size_t i = 0; i < k; ++i) mean_d_beta += fwd.beta(i, j) * grad_c[j] * input(i, j);
    for (std::size_t i = 0; i < k; ++i) {
      const double d_beta = grad_c[j] * input(i, j);
      const double d_z = fwd.beta(i, j) * (d_beta - mean_d_beta);
      const double z = fwd.activations(i, j);
      const double d_pre = d_z * (1.0 - z * z);
      grad_regression(i, j) += d_pre * input(i, j);
      grad_input(i, j) = fwd.beta(i, j) * grad_c[j] + d_pre * regression(i, j);
    }
  }
  return grad_input;
}

}  // namespace

Matrix build_context_backward(const ContextMatrix& context, const WeightingParams& params,
                              NeighborScheme scheme, const ContextEmbedding& forward,
                              std::span<const double> grad_c, WeightingParams& grad) {
  const std::size_t k = context.rows, m = context.cols;
  switch (params.scheme) {
    case WeightingScheme::avg: {
      Matrix g(k, m);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < m; ++j) g(i, j) = grad_c[j] / static_cast<double>(k);
      return g;
    }
    case WeightingScheme::wavg: {
      Matrix g(k, m);
      std::vector<double> d_alpha(k, 0.0);
      double mean = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < m; ++j) d_alpha[i] += grad_c[j] * context(i, j);
        mean += forward.alpha[i] * d_alpha[i];
      }
      for (std::size_t i = 0; i < k; ++i) {
        const double d_z = forward.alpha[i] * (d_alpha[i] - mean);
        const double z = forward.scores[i];
        const double d_s = d_z * (1.0 - z * z);
        for (std::size_t j = 0; j < m; ++j) {
          grad.query[j] += d_s * context(i, j);
          g(i, j) = forward.alpha[i] * grad_c[j] + d_s * params.query[j];
        }
      }
      return g;
    }
    case WeightingScheme::fr:
      return fr_backward(context, params.regression, forward, grad_c, grad.regression);
    case WeightingScheme::sfr: {
      Matrix g_hat = fr_backward(forward.enhanced, params.regression, forward, grad_c,
                                 grad.regression);
      // Transpose of the cumulative sums: a suffix sum's adjoint is a prefix
      // sum over the same block and vice versa.
      Matrix g(k, m);
      auto prefix_of = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
          for (std::size_t j = 0; j < m; ++j)
            g(i, j) = g_hat(i, j) + (i > begin ? g(i - 1, j) : 0.0);
      };
      auto suffix_of = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = end; i-- > begin;)
          for (std::size_t j = 0; j < m; ++j)
            g(i, j) = g_hat(i, j) + (i + 1 < end ? g(i + 1, j) : 0.0);
      };
      switch (scheme) {
        case NeighborScheme::preceding: prefix_of(0, k); break;
        case NeighborScheme::following: suffix_of(0, k); break;
        case NeighborScheme::surrounding:
          prefix_of(0, k / 2);
          suffix_of(k / 2, k);
          break;
      }
      return g;
    }
  }
  throw ConfigError("unknown weighting scheme");
}

}  // namespace nap
