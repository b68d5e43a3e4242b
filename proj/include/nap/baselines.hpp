#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "nap/corpus.hpp"

namespace nap {

/// Contextual scalar features used by the fusion baselines.
inline constexpr std::array<std::string_view, 6> kFeatureNames = {"ORD_D", "ORD_R", "ORD_V",
                                                                  "CON",   "POL",   "ENT"};

using FeatureVector = std::map<std::string, double>;

/// Disjoint sets of positive and negative words.
struct SentimentLexicon {
  std::unordered_set<std::string> positive;
  std::unordered_set<std::string> negative;

  /// "word<TAB>positive|negative" per line; '#' starts a comment.
  static SentimentLexicon load(const std::filesystem::path& path);
  static SentimentLexicon parse(std::string_view text);
  /// Small built-in English list.
  static const SentimentLexicon& builtin();
};

enum class OrderKind { date, rating, votes };

/// Order value [1 + number of reviews ranked strictly before the review's
/// tie group]^-1, sorting newest / highest rated / most voted first.
std::vector<double> order_feature(std::span<const Review> reviews, OrderKind kind);

inline constexpr double kConformitySmoothing = 1e-9;

/// KL divergence from each review's smoothed unigram TF-IDF distribution to
/// the item's mean distribution (IDF computed within the item).
std::vector<double> conformity_feature(std::span<const Review> reviews);

/// (pos - neg) / (pos + neg), 0 when no lexicon word occurs.
double polarity_score(std::span<const std::string> tokens, const SentimentLexicon& lexicon);

enum class PolarityCategory { negative = -1, neutral = 0, positive = 1 };
PolarityCategory polarity_category(double score);

/// |p_r - mean p over the item's majority polarity category|.
std::vector<double> polarity_feature(std::span<const Review> reviews,
                                     const SentimentLexicon& lexicon);

/// Number of words a review adds to the item's vocabulary. `reviews` must be
/// in posting order (oldest first).
std::vector<double> entropy_feature(std::span<const Review> reviews);

/// All six features for an item given in display order; one map per review.
std::vector<FeatureVector> compute_item_features(std::span<const Review> reviews,
                                                 const SentimentLexicon& lexicon);

/// Training-set z-score statistics.
struct FeatureStats {
  std::vector<std::string> names;
  std::vector<double> mean;
  std::vector<double> stddev;
};

FeatureStats fit_feature_stats(std::span<const std::vector<double>> training_rows,
                               std::vector<std::string> names);

/// Features with zero training variance are only centred.
std::vector<double> standardize(std::span<const double> row, const FeatureStats& stats);

/// sigmoid(w . [h, f] + b) with `weights` of length m + f.
double fused_predict(std::span<const double> h, std::span<const double> standardized_features,
                     std::span<const double> weights, double bias);

}  // namespace nap
