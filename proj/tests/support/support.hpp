#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "nap/model.hpp"
#include "nap/rng.hpp"

namespace nap::test {

/// Table of `vocab` rows with entries in U[-range, range]; row 0 stays zero.
inline std::shared_ptr<const EmbeddingTable> random_table(std::size_t vocab, std::size_t dim,
                                                          std::uint64_t seed, double range = 1.0) {
  Matrix m(vocab, dim);
  Rng rng = make_rng(seed, "test-table");
  std::uniform_real_distribution<double> u(-range, range);
  for (std::size_t i = dim; i < m.data.size(); ++i) m.data[i] = u(rng);
  return std::make_shared<const EmbeddingTable>(std::move(m));
}

/// A store of `reviews` random token sequences of length `length`.
inline ReviewStore random_store(std::size_t reviews, std::size_t length, std::size_t vocab,
                                std::size_t dim, std::size_t max_len, std::uint64_t seed,
                                double range = 1.0) {
  ReviewStore store;
  store.table = random_table(vocab, dim, seed, range);
  store.max_len = max_len;
  Rng rng = make_rng(seed, "test-tokens");
  std::uniform_int_distribution<std::size_t> pick(1, vocab - 1);
  for (std::size_t r = 0; r < reviews; ++r) {
    std::vector<std::size_t> ids(length);
    for (auto& id : ids) id = pick(rng);
    store.token_ids.push_back(std::move(ids));
  }
  return store;
}

/// Examples whose targets and neighbors are consecutive store indices.
inline std::vector<Example> chain_examples(std::size_t count, std::size_t neighbors,
                                           std::uint64_t seed) {
  std::vector<Example> out;
  Rng rng = make_rng(seed, "test-labels");
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < count; ++i) {
    Example ex;
    ex.pair_id = "p" + std::to_string(i);
    const std::size_t base = i * (neighbors + 1);
    ex.target = base + neighbors / 2;
    for (std::size_t k = 0; k <= neighbors; ++k)
      if (base + k != ex.target) ex.neighbors.push_back(base + k);
    ex.label = coin(rng) ? 1 : 0;
    out.push_back(std::move(ex));
  }
  return out;
}

/// The tiny gradient-check configuration: d=4, m=3, l=2, K=2, n=5.
inline ModelConfig tiny_config(WeightingScheme weighting, Variant variant = Variant::nap,
                               double gamma = 0.5) {
  ModelConfig c;
  c.embedding_dim = 4;
  c.kernels = 3;
  c.window = 2;
  c.neighbors = 2;
  c.max_len = 5;
  c.neighbor_scheme = NeighborScheme::preceding;
  c.weighting = weighting;
  c.variant = variant;
  c.gamma = gamma;
  return c;
}

struct TensorCheck {
  std::string name;
  std::size_t size = 0;
  double max_relative_error = 0.0;
};

/// |a - n| / max(|a|, |n|, floor); the floor keeps entries whose true
/// gradient is zero from dividing round-off by round-off.
inline double relative_error(double analytic, double numeric, double floor = 1e-7) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

/// Central finite differences of the batch loss against the analytic gradient.
inline std::vector<TensorCheck> check_gradients(NapModel model, const ReviewStore& store,
                                                std::span<const Example> examples,
                                                double step = 1e-4) {
  BatchResult analytic = loss_and_gradient(model, store, examples);
  auto grads = analytic.gradient.tensors();
  std::vector<TensorCheck> out;
  auto tensors = model.tensors();
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    TensorCheck check{tensors[t].name, tensors[t].values.size(), 0.0};
    for (std::size_t i = 0; i < tensors[t].values.size(); ++i) {
      double& v = model.tensors()[t].values[i];
      const double saved = v;
      v = saved + step;
      const double plus = loss_and_gradient(model, store, examples).loss;
      v = saved - step;
      const double minus = loss_and_gradient(model, store, examples).loss;
      v = saved;
      const double numeric = (plus - minus) / (2.0 * step);
      check.max_relative_error =
          std::max(check.max_relative_error, relative_error(grads[t].values[i], numeric));
    }
    out.push_back(check);
  }
  return out;
}

/// A scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("nap-test-" + tag + "-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

}  // namespace nap::test
