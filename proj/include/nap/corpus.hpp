#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nap/rng.hpp"

namespace nap {

using Date = std::chrono::sys_days;

/// Parses "YYYY-MM-DD"; throws DataError on malformed or impossible dates.
Date parse_date(std::string_view text);
std::string format_date(Date date);

struct Review {
  std::string item_id;
  std::string review_id;
  std::size_t position = 0;  // 0 = most recent, display order
  Date date{};
  int star_rating = 1;
  int helpful_votes = 0;
  std::string raw_text;
  std::vector<std::string> tokens;
};

/// Reviews of one item in display order (reverse chronological).
struct ItemSequence {
  std::string item_id;
  std::vector<std::string> name_tokens;
  std::vector<Review> reviews;
};

using Corpus = std::vector<ItemSequence>;

enum class HelpfulnessLabel : int { unhelpful = 0, helpful = 1 };

enum class NeighborScheme { preceding, following, surrounding };

std::string_view to_string(NeighborScheme scheme);
NeighborScheme parse_neighbor_scheme(std::string_view text);

enum class Partition { train, validation, test };

std::string_view to_string(Partition partition);
Partition parse_partition(std::string_view text);

/// A target review and its K neighbors. Indices refer to the review sequence
/// handed to assemble_contexts.
struct ContextPair {
  std::size_t target = 0;
  std::vector<std::size_t> neighbors;
  NeighborScheme scheme = NeighborScheme::preceding;
  HelpfulnessLabel label = HelpfulnessLabel::unhelpful;
};

inline constexpr std::string_view kPadToken = "<PAD>";
inline constexpr std::string_view kUnkToken = "<UNK>";
inline constexpr std::string_view kNumToken = "<NUM>";
inline constexpr std::string_view kOrgToken = "<ORG>";
inline constexpr std::size_t kSpecialTokenCount = 4;
inline constexpr std::size_t kDefaultMaxTerms = 30000;
inline constexpr int kHelpfulVoteThreshold = 2;

bool is_special_token(std::string_view token);

/// Token <-> index mapping. Indices 0..3 are <PAD>, <UNK>, <NUM>, <ORG>.
class Vocabulary {
public:
  /// `terms` excludes the specials; they are prepended.
  explicit Vocabulary(std::vector<std::string> terms = {});

  std::size_t size() const { return tokens_.size(); }
  bool contains(std::string_view token) const;
  std::optional<std::size_t> find(std::string_view token) const;
  /// Throws DataError("token outside vocabulary: ...") when absent.
  std::size_t index_of(std::string_view token) const;
  const std::string& token(std::size_t index) const { return tokens_.at(index); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::size_t pad_index() const { return 0; }
  std::size_t unk_index() const { return 1; }

  /// One token per line, line number = index.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Lowercases, splits into word tokens and drops the articles a/an/the.
std::vector<std::string> tokenize_review(std::string_view raw_text);

bool is_numeric_token(std::string_view token);

/// Top `max_terms` tokens by frequency (ties lexicographic) plus the specials.
Vocabulary build_vocabulary(std::span<const std::vector<std::string>> training_tokens,
                            std::size_t max_terms = kDefaultMaxTerms);

/// <NUM> and <ORG> substitution only.
std::vector<std::string> mask_entities(std::span<const std::string> tokens,
                                       const std::set<std::string>& item_names);

/// <NUM>, then <ORG>, then <UNK> for anything still out of vocabulary.
std::vector<std::string> normalize_tokens(std::span<const std::string> tokens,
                                          const Vocabulary& vocabulary,
                                          const std::set<std::string>& item_names);

HelpfulnessLabel label_review(const Review& review);

struct FilterConfig {
  std::size_t min_reviews = 100;
  std::optional<Date> early_cutoff;  // months before this date are "early"
  std::optional<Date> late_cutoff;   // reviews after this date are dropped
  std::size_t early_month_min_reviews = 15;
};

/// Drops sparse early months, too-recent reviews, then small items.
/// Positions are renumbered to stay contiguous.
Corpus filter_items(Corpus corpus, const FilterConfig& config);

struct SplitFractions {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

/// Per-item partitions, each in display order.
struct ItemSplit {
  std::vector<Review> train;
  std::vector<Review> validation;
  std::vector<Review> test;
};

struct SplitCounts {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
};

SplitCounts split_counts(std::size_t n, const SplitFractions& fractions = {});

/// Oldest reviews go to train, newest to test.
ItemSplit split_chronological(const ItemSequence& item, const SplitFractions& fractions = {});

/// Emits one pair per review whose full neighbor window exists inside
/// `partition`. Labels come from label_review.
std::vector<ContextPair> assemble_contexts(std::span<const Review> partition,
                                           NeighborScheme scheme, std::size_t neighbors);

/// Same windows over a partition described only by its labels.
std::vector<ContextPair> assemble_contexts(std::span<const HelpfulnessLabel> labels,
                                           NeighborScheme scheme, std::size_t neighbors);

/// Downsamples the majority class to the minority count. Retained pairs
/// keep their original relative order.
std::vector<ContextPair> balance_classes(std::vector<ContextPair> pairs, Rng& rng);

/// One raw record per JSONL line, before grouping.
std::vector<Review> read_corpus_jsonl(std::istream& in);
std::vector<Review> read_corpus_jsonl(const std::filesystem::path& path);

/// Groups records into items sorted by item_id; within an item reviews are
/// sorted newest first (stable for same-day reviews) and positions assigned.
Corpus group_into_items(std::vector<Review> records);

void write_corpus_jsonl(std::ostream& out, const Corpus& corpus);

}  // namespace nap
