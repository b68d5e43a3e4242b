#include "nap/embeddings.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "nap/error.hpp"
#include "nap/rng.hpp"

namespace nap {

namespace {

constexpr char kBinaryMagic[8] = {'N', 'A', 'P', 'E', 'M', 'B', '1', '\0'};

static_assert(std::endian::native == std::endian::little, "binary snapshots assume little-endian");

void fill_uniform(std::span<double> row, Rng& rng, double range) {
  std::uniform_real_distribution<double> dist(-range, range);
  for (auto& v : row) v = dist(rng);
}

}  // namespace

std::uint64_t EmbeddingTable::checksum() const {
  std::uint64_t h = 1469598103934665603ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(values_.data.data());
  for (std::size_t i = 0; i < values_.data.size() * sizeof(double); ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

void EmbeddingTable::save_binary(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write embedding snapshot " + path.string());
  std::uint64_t rows = values_.rows, cols = values_.cols;
  out.write(kBinaryMagic, sizeof kBinaryMagic);
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  out.write(reinterpret_cast<const char*>(values_.data.data()),
            static_cast<std::streamsize>(values_.data.size() * sizeof(double)));
}

EmbeddingTable EmbeddingTable::load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read embedding snapshot " + path.string());
  char magic[8];
  std::uint64_t rows = 0, cols = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!in || std::memcmp(magic, kBinaryMagic, sizeof magic) != 0)
    throw DataError("not an embedding snapshot: " + path.string());
  Matrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data.data()),
          static_cast<std::streamsize>(m.data.size() * sizeof(double)));
  if (!in) throw DataError("truncated embedding snapshot: " + path.string());
  return EmbeddingTable(std::move(m));
}

EmbeddingTable load_embedding_table(std::istream& in, const Vocabulary& vocabulary,
                                    std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw ConfigError("embedding dimension must be >= 1");
  Matrix values(vocabulary.size(), dim);
  std::vector<bool> loaded(vocabulary.size(), false);

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> row;
    row.reserve(dim);
    std::string field;
    while (fields >> field) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc{} || ptr != field.data() + field.size())
        throw DataError("embedding file line " + std::to_string(line_no) + ": non-numeric value '" +
                        field + "'");
      row.push_back(v);
    }
    if (row.size() != dim)
      throw DataError("embedding file line " + std::to_string(line_no) + ": expected " +
                      std::to_string(dim) + " values, got " + std::to_string(row.size()));
    auto idx = vocabulary.find(token);
    if (!idx || *idx == vocabulary.pad_index() || loaded[*idx]) continue;
    std::copy(row.begin(), row.end(), values.row(*idx).begin());
    loaded[*idx] = true;
  }

  Rng rng = make_rng(seed, "embeddings");
  for (std::size_t i = 0; i < vocabulary.size(); ++i)
    if (!loaded[i] && i != vocabulary.pad_index()) fill_uniform(values.row(i), rng, kEmbeddingInitRange);
  return EmbeddingTable(std::move(values));
}

EmbeddingTable load_embedding_table(const std::filesystem::path& path,
                                    const Vocabulary& vocabulary, std::size_t dim,
                                    std::uint64_t seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read embedding file " + path.string());
  return load_embedding_table(in, vocabulary, dim, seed);
}

EmbeddingTable random_embedding_table(const Vocabulary& vocabulary, std::size_t dim,
                                      std::uint64_t seed, double range) {
  if (dim == 0) throw ConfigError("embedding dimension must be >= 1");
  Matrix values(vocabulary.size(), dim);
  Rng rng = make_rng(seed, "embeddings");
  for (std::size_t i = 0; i < vocabulary.size(); ++i)
    if (i != vocabulary.pad_index()) fill_uniform(values.row(i), rng, range);
  return EmbeddingTable(std::move(values));
}

ReviewMatrix::ReviewMatrix(std::size_t max_len, std::size_t dim)
    : max_len_(max_len), dim_(dim), zero_row_(dim, 0.0) {
  if (max_len == 0) throw ConfigError("max_len must be >= 1");
}

std::span<const double> ReviewMatrix::row(std::size_t i) const {
  if (i < length_) return {data_.data() + i * dim_, dim_};
  return zero_row_;
}

void ReviewMatrix::push_row(std::span<const double> values) {
  if (values.size() != dim_) throw ConfigError("review matrix row has wrong dimension");
  if (length_ == max_len_) throw ConfigError("review matrix is full");
  data_.insert(data_.end(), values.begin(), values.end());
  ++length_;
}

ReviewMatrix embed_review(std::span<const std::size_t> token_ids, const EmbeddingTable& table,
                          std::size_t max_len) {
  ReviewMatrix x(max_len, table.dim());
  const std::size_t n = std::min(token_ids.size(), max_len);
  for (std::size_t i = 0; i < n; ++i) {
    if (token_ids[i] >= table.size())
      throw DataError("token outside vocabulary: index " + std::to_string(token_ids[i]));
    x.push_row(table.row(token_ids[i]));
  }
  return x;
}

ReviewMatrix embed_review(std::span<const std::string> tokens, const Vocabulary& vocabulary,
                          const EmbeddingTable& table, std::size_t max_len) {
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(vocabulary.index_of(t));
  return embed_review(ids, table, max_len);
}

}  // namespace nap
