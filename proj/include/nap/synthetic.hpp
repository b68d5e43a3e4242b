#pragma once

#include <cstddef>
#include <cstdint>

#include "nap/corpus.hpp"

namespace nap {

/// Desk-scale corpus with a tunable dependence of labels on neighbors.
///
/// Each review has a latent quality q in {0,1}. A `clear_share` of reviews
/// show it in their words (a share of tokens from a quality-specific topic
/// plus a matching sentiment word); the others use only the shared pool.
/// The label is helpful with probability
///   (1 - rho) * sigmoid(quality_signal * (2q - 1)) + rho * A
/// where A is the majority quality of the surrounding `context_window`
/// reviews (0.5 on a tie).
struct SyntheticConfig {
  std::size_t items = 50;
  std::size_t reviews_per_item = 120;
  std::size_t vocabulary_size = 400;
  double rho = 0.8;
  double quality_signal = 3.0;
  std::size_t context_window = 4;
  std::size_t min_tokens = 12;
  std::size_t max_tokens = 30;
  double topic_share = 0.35;
  double clear_share = 0.5;
  std::uint64_t seed = 0;

  /// Throws ConfigError on an unusable configuration.
  void validate() const;
};

/// Latent per-review state kept for tests and diagnostics.
struct SyntheticReviewInfo {
  int quality = 0;
  bool clear = true;
  double helpful_probability = 0.0;
};

struct SyntheticCorpus {
  Corpus corpus;
  std::vector<std::vector<SyntheticReviewInfo>> latent;  // parallel to corpus
};

SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& config);

}  // namespace nap
