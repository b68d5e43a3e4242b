#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nap/baselines.hpp"
#include "nap/corpus.hpp"
#include "nap/embeddings.hpp"
#include "nap/model.hpp"
#include "nap/training.hpp"

namespace nap {

/// Settings of the corpus -> dataset pipeline.
struct PipelineConfig {
  FilterConfig filter;
  SplitFractions fractions;
  std::size_t max_terms = kDefaultMaxTerms;
  std::size_t embedding_dim = kDefaultEmbeddingDim;
  std::optional<std::filesystem::path> embeddings_path;
  std::optional<std::filesystem::path> lexicon_path;
  NeighborScheme scheme = NeighborScheme::surrounding;
  std::size_t neighbors = 4;
  bool balance = true;
  std::uint64_t seed = 0;
};

/// A review after filtering, labeling, splitting and normalization.
struct PreparedReview {
  Review review;  // tokens hold the normalized token strings
  HelpfulnessLabel label = HelpfulnessLabel::unhelpful;
  Partition partition = Partition::train;
  std::vector<std::size_t> token_ids;
  FeatureVector features;
};

/// Review indices of one item, per partition, each in display order.
struct ItemPartitions {
  std::string item_id;
  std::array<std::vector<std::size_t>, 3> partitions;  // indexed by Partition
};

struct PreparedCorpus {
  Vocabulary vocabulary;
  std::shared_ptr<const EmbeddingTable> table;
  std::vector<PreparedReview> reviews;
  std::vector<ItemPartitions> items;
};

/// One context pair; review indices point into PreparedCorpus::reviews.
struct PairRecord {
  std::string pair_id;
  Partition partition = Partition::train;
  std::size_t target = 0;
  std::vector<std::size_t> neighbors;
  HelpfulnessLabel label = HelpfulnessLabel::unhelpful;
};

/// Tokenize, filter, label, split, normalize, embed and compute the
/// baseline features. Reviews with no tokens are dropped before positions
/// are assigned.
PreparedCorpus prepare_corpus(Corpus corpus, const PipelineConfig& config);

/// Context pairs for every item and partition, optionally balanced per
/// partition across the whole domain.
std::vector<PairRecord> assemble_pairs(const PreparedCorpus& corpus, NeighborScheme scheme,
                                       std::size_t neighbors, bool balance, std::uint64_t seed);

/// On-disk layout of a preprocessed dataset directory.
struct DatasetFiles {
  static constexpr const char* vocabulary = "vocab.txt";
  static constexpr const char* embeddings = "embeddings.bin";
  static constexpr const char* reviews = "reviews.jsonl";
  static constexpr const char* pairs = "pairs.jsonl";
  static constexpr const char* info = "dataset.json";
};

struct PreparedDataset {
  PreparedCorpus corpus;
  NeighborScheme scheme = NeighborScheme::surrounding;
  std::size_t neighbors = 4;
  bool balanced = true;
  std::uint64_t seed = 0;
  std::vector<PairRecord> pairs;
};

void write_dataset(const std::filesystem::path& dir, const PreparedDataset& dataset);
PreparedDataset read_dataset(const std::filesystem::path& dir);

/// Pairs for (scheme, K): the stored ones when they match, else reassembled.
std::vector<PairRecord> pairs_for(const PreparedDataset& dataset, NeighborScheme scheme,
                                  std::size_t neighbors);

/// Converts pairs into training examples for a model configuration.
/// random_neighbors redraws each pair's K neighbors uniformly from the same
/// partition of the domain; noise_context fixes a U[0,1]^m vector per pair;
/// feature_fusion attaches the named features standardized with training
/// statistics. All draws are seeded by `data_seed`.
TrainingData build_training_data(const PreparedCorpus& corpus, std::span<const PairRecord> pairs,
                                 const ModelConfig& config, std::uint64_t data_seed,
                                 const std::vector<std::string>& feature_names = {});

/// Feature names a fusion variant kind ("I+ORD_D", "I+CON", ...) uses.
std::vector<std::string> fusion_features(std::string_view kind);

}  // namespace nap
