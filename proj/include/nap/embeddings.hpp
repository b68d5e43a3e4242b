#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nap/corpus.hpp"
#include "nap/tensor.hpp"

namespace nap {

inline constexpr std::size_t kDefaultEmbeddingDim = 300;
inline constexpr std::size_t kDefaultMaxLen = 200;
inline constexpr double kEmbeddingInitRange = 0.05;

/// Static |V| x d word-vector lookup. Never updated by training.
class EmbeddingTable {
public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(Matrix values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.rows; }
  std::size_t dim() const { return values_.cols; }
  std::span<const double> row(std::size_t index) const { return values_.row(index); }
  const Matrix& values() const { return values_; }

  /// FNV-1a over the raw bytes; used to assert the table is never mutated.
  std::uint64_t checksum() const;

  /// Binary snapshot: "NAPEMB1\0", u64 rows, u64 dim, rows*dim little-endian doubles.
  void save_binary(const std::filesystem::path& path) const;
  static EmbeddingTable load_binary(const std::filesystem::path& path);

private:
  Matrix values_;
};

/// Reads a "token v1 ... vd" text file. Vocabulary entries missing from the
/// file (and the specials other than <PAD>) are drawn from
/// U[-0.05, 0.05] seeded by `seed`; <PAD> is all zeros.
EmbeddingTable load_embedding_table(std::istream& in, const Vocabulary& vocabulary,
                                    std::size_t dim, std::uint64_t seed);
EmbeddingTable load_embedding_table(const std::filesystem::path& path,
                                    const Vocabulary& vocabulary, std::size_t dim,
                                    std::uint64_t seed);

/// Same initialization with no pretrained vectors at all.
EmbeddingTable random_embedding_table(const Vocabulary& vocabulary, std::size_t dim,
                                      std::uint64_t seed, double range = kEmbeddingInitRange);

/// Padded max_len x d review matrix. Only the first `length()` rows are
/// stored; the remaining rows are zero and masked out.
class ReviewMatrix {
public:
  ReviewMatrix(std::size_t max_len, std::size_t dim);

  std::size_t max_len() const { return max_len_; }
  std::size_t dim() const { return dim_; }
  std::size_t length() const { return length_; }
  bool mask(std::size_t i) const { return i < length_; }
  std::span<const double> row(std::size_t i) const;

  void push_row(std::span<const double> values);

private:
  std::size_t max_len_;
  std::size_t dim_;
  std::size_t length_ = 0;
  std::vector<double> data_;
  std::vector<double> zero_row_;
};

ReviewMatrix embed_review(std::span<const std::size_t> token_ids, const EmbeddingTable& table,
                          std::size_t max_len = kDefaultMaxLen);

/// Token strings must already be normalized; unknown strings are an error.
ReviewMatrix embed_review(std::span<const std::string> tokens, const Vocabulary& vocabulary,
                          const EmbeddingTable& table, std::size_t max_len = kDefaultMaxLen);

}  // namespace nap
