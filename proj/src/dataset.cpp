#include "nap/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <unordered_set>

#include "json.hpp"
#include "nap/error.hpp"
#include "nap/rng.hpp"

namespace nap {

namespace {

constexpr int kDatasetVersion = 1;

std::size_t partition_slot(Partition p) { return static_cast<std::size_t>(p); }

constexpr std::array<Partition, 3> kPartitions = {Partition::train, Partition::validation,
                                                  Partition::test};

}  // namespace

PreparedCorpus prepare_corpus(Corpus corpus, const PipelineConfig& config) {
  for (auto& item : corpus) {
    for (auto& r : item.reviews) r.tokens = tokenize_review(r.raw_text);
    std::erase_if(item.reviews, [](const Review& r) { return r.tokens.empty(); });
    for (std::size_t i = 0; i < item.reviews.size(); ++i) item.reviews[i].position = i;
  }
  corpus = filter_items(std::move(corpus), config.filter);
  if (corpus.empty()) throw DataError("empty corpus: no item survives filtering");

  const SentimentLexicon lexicon = config.lexicon_path
                                       ? SentimentLexicon::load(*config.lexicon_path)
                                       : SentimentLexicon::builtin();

  PreparedCorpus out;
  std::vector<std::vector<std::string>> masked;  // parallel to out.reviews
  for (const auto& item : corpus) {
    const ItemSplit split = split_chronological(item, config.fractions);
    const std::size_t n_test = split.test.size(), n_val = split.validation.size();
    const std::set<std::string> names(item.name_tokens.begin(), item.name_tokens.end());
    auto features = compute_item_features(item.reviews, lexicon);

    ItemPartitions parts;
    parts.item_id = item.item_id;
    for (std::size_t i = 0; i < item.reviews.size(); ++i) {
      PreparedReview pr;
      pr.review = item.reviews[i];
      pr.label = label_review(pr.review);
      pr.partition = i < n_test ? Partition::test
                                : i < n_test + n_val ? Partition::validation : Partition::train;
      pr.features = std::move(features[i]);
      parts.partitions[partition_slot(pr.partition)].push_back(out.reviews.size());
      masked.push_back(mask_entities(pr.review.tokens, names));
      out.reviews.push_back(std::move(pr));
    }
    out.items.push_back(std::move(parts));
  }

  std::vector<std::vector<std::string>> training_tokens;
  for (std::size_t i = 0; i < out.reviews.size(); ++i)
    if (out.reviews[i].partition == Partition::train) training_tokens.push_back(masked[i]);
  out.vocabulary = build_vocabulary(training_tokens, config.max_terms);

  for (std::size_t i = 0; i < out.reviews.size(); ++i) {
    auto& pr = out.reviews[i];
    pr.review.tokens.clear();
    pr.token_ids.clear();
    for (auto& t : masked[i]) {
      auto idx = out.vocabulary.find(t);
      pr.token_ids.push_back(idx ? *idx : out.vocabulary.unk_index());
      pr.review.tokens.push_back(out.vocabulary.token(pr.token_ids.back()));
    }
  }

  out.table = std::make_shared<const EmbeddingTable>(
      config.embeddings_path
          ? load_embedding_table(*config.embeddings_path, out.vocabulary, config.embedding_dim,
                                 config.seed)
          : random_embedding_table(out.vocabulary, config.embedding_dim, config.seed));
  return out;
}

std::vector<PairRecord> assemble_pairs(const PreparedCorpus& corpus, NeighborScheme scheme,
                                       std::size_t neighbors, bool balance, std::uint64_t seed) {
  std::vector<PairRecord> out;
  for (Partition part : kPartitions) {
    std::vector<ContextPair> pairs;
    std::vector<std::vector<std::size_t>*> unused;
    std::vector<PairRecord> records;
    for (const auto& item : corpus.items) {
      const auto& ids = item.partitions[partition_slot(part)];
      std::vector<HelpfulnessLabel> labels;
      labels.reserve(ids.size());
      for (auto id : ids) labels.push_back(corpus.reviews[id].label);
      for (auto& cp : assemble_contexts(std::span<const HelpfulnessLabel>(labels), scheme, neighbors)) {
        PairRecord rec;
        rec.partition = part;
        rec.target = ids[cp.target];
        rec.pair_id = corpus.reviews[rec.target].review.review_id;
        rec.label = cp.label;
        for (auto n : cp.neighbors) rec.neighbors.push_back(ids[n]);
        // balance_classes works on ContextPair; keep a parallel index in target
        ContextPair handle;
        handle.target = records.size();
        handle.label = cp.label;
        pairs.push_back(std::move(handle));
        records.push_back(std::move(rec));
      }
    }
    if (balance && !pairs.empty()) {
      Rng rng = make_rng(seed, std::string("balance/") + std::string(to_string(part)));
      try {
        pairs = balance_classes(std::move(pairs), rng);
      } catch (const DataError& e) {
        throw DataError(std::string(e.what()) + " in the " + std::string(to_string(part)) +
                        " partition");
      }
    }
    for (const auto& handle : pairs) out.push_back(std::move(records[handle.target]));
  }
  return out;
}

// --------------------------------------------------------------------- I/O

void write_dataset(const std::filesystem::path& dir, const PreparedDataset& dataset) {
  std::filesystem::create_directories(dir);
  const auto& corpus = dataset.corpus;
  corpus.vocabulary.save(dir / DatasetFiles::vocabulary);
  corpus.table->save_binary(dir / DatasetFiles::embeddings);

  {
    std::ofstream out(dir / DatasetFiles::reviews, std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / DatasetFiles::reviews).string());
    for (std::size_t i = 0; i < corpus.reviews.size(); ++i) {
      const auto& pr = corpus.reviews[i];
      nlohmann::ordered_json features(nlohmann::ordered_json::object());
      for (const auto& [k, v] : pr.features) features[k] = v;
      nlohmann::ordered_json row{{"index", i},
                                 {"item_id", pr.review.item_id},
                                 {"review_id", pr.review.review_id},
                                 {"position", pr.review.position},
                                 {"date", format_date(pr.review.date)},
                                 {"rating", pr.review.star_rating},
                                 {"votes", pr.review.helpful_votes},
                                 {"label", static_cast<int>(pr.label)},
                                 {"split", to_string(pr.partition)},
                                 {"tokens", pr.token_ids},
                                 {"features", features}};
      out << row.dump() << '\n';
    }
  }
  {
    std::ofstream out(dir / DatasetFiles::pairs, std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / DatasetFiles::pairs).string());
    for (const auto& p : dataset.pairs) {
      nlohmann::ordered_json row{{"pair_id", p.pair_id},
                                 {"split", to_string(p.partition)},
                                 {"scheme", to_string(dataset.scheme)},
                                 {"K", dataset.neighbors},
                                 {"label", static_cast<int>(p.label)},
                                 {"target", p.target},
                                 {"neighbors", p.neighbors}};
      out << row.dump() << '\n';
    }
  }
  nlohmann::ordered_json info{{"format", "nap-dataset"},
                              {"version", kDatasetVersion},
                              {"scheme", to_string(dataset.scheme)},
                              {"K", dataset.neighbors},
                              {"balanced", dataset.balanced},
                              {"seed", dataset.seed},
                              {"reviews", corpus.reviews.size()},
                              {"items", corpus.items.size()},
                              {"pairs", dataset.pairs.size()},
                              {"vocabulary_size", corpus.vocabulary.size()},
                              {"embedding_dim", corpus.table->dim()}};
  std::ofstream out(dir / DatasetFiles::info, std::ios::binary);
  out << info.dump(2) << '\n';
}

namespace {

template <typename Fn>
void for_each_json_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      fn(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.filename().string() + " line " + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
}

}  // namespace

PreparedDataset read_dataset(const std::filesystem::path& dir) {
  PreparedDataset ds;
  {
    std::ifstream in(dir / DatasetFiles::info, std::ios::binary);
    if (!in) throw DataError("not a dataset directory (missing dataset.json): " + dir.string());
    try {
      auto info = nlohmann::json::parse(in);
      if (info.at("format") != "nap-dataset" || info.at("version").get<int>() != kDatasetVersion)
        throw DataError("unsupported dataset format in " + dir.string());
      ds.scheme = parse_neighbor_scheme(info.at("scheme").get<std::string>());
      ds.neighbors = info.at("K").get<std::size_t>();
      ds.balanced = info.at("balanced").get<bool>();
      ds.seed = info.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      throw DataError("dataset.json: " + std::string(e.what()));
    }
  }
  auto& corpus = ds.corpus;
  corpus.vocabulary = Vocabulary::load(dir / DatasetFiles::vocabulary);
  corpus.table = std::make_shared<const EmbeddingTable>(
      EmbeddingTable::load_binary(dir / DatasetFiles::embeddings));
  if (corpus.table->size() != corpus.vocabulary.size())
    throw DataError("embedding table and vocabulary sizes differ");

  std::map<std::string, std::size_t> item_slot;
  for_each_json_line(dir / DatasetFiles::reviews, [&](const nlohmann::json& row) {
    PreparedReview pr;
    pr.review.item_id = row.at("item_id").get<std::string>();
    pr.review.review_id = row.at("review_id").get<std::string>();
    pr.review.position = row.at("position").get<std::size_t>();
    pr.review.date = parse_date(row.at("date").get<std::string>());
    pr.review.star_rating = row.at("rating").get<int>();
    pr.review.helpful_votes = row.at("votes").get<int>();
    pr.label = static_cast<HelpfulnessLabel>(row.at("label").get<int>());
    pr.partition = parse_partition(row.at("split").get<std::string>());
    pr.token_ids = row.at("tokens").get<std::vector<std::size_t>>();
    for (auto id : pr.token_ids) {
      if (id >= corpus.vocabulary.size()) throw DataError("token index out of range in reviews.jsonl");
      pr.review.tokens.push_back(corpus.vocabulary.token(id));
    }
    for (const auto& [k, v] : row.at("features").items()) pr.features[k] = v.get<double>();
    auto [it, fresh] = item_slot.emplace(pr.review.item_id, corpus.items.size());
    if (fresh) corpus.items.push_back({pr.review.item_id, {}});
    corpus.items[it->second].partitions[partition_slot(pr.partition)].push_back(corpus.reviews.size());
    corpus.reviews.push_back(std::move(pr));
  });

  for_each_json_line(dir / DatasetFiles::pairs, [&](const nlohmann::json& row) {
    PairRecord p;
    p.pair_id = row.at("pair_id").get<std::string>();
    p.partition = parse_partition(row.at("split").get<std::string>());
    p.label = static_cast<HelpfulnessLabel>(row.at("label").get<int>());
    p.target = row.at("target").get<std::size_t>();
    p.neighbors = row.at("neighbors").get<std::vector<std::size_t>>();
    if (p.target >= corpus.reviews.size()) throw DataError("pair target out of range");
    for (auto n : p.neighbors)
      if (n >= corpus.reviews.size()) throw DataError("pair neighbor out of range");
    ds.pairs.push_back(std::move(p));
  });
  return ds;
}

std::vector<PairRecord> pairs_for(const PreparedDataset& dataset, NeighborScheme scheme,
                                  std::size_t neighbors) {
  if (scheme == dataset.scheme && neighbors == dataset.neighbors) return dataset.pairs;
  return assemble_pairs(dataset.corpus, scheme, neighbors, dataset.balanced, dataset.seed);
}

// ----------------------------------------------------------- training data

std::vector<std::string> fusion_features(std::string_view kind) {
  if (!kind.starts_with("I+")) return {};
  std::string name(kind.substr(2));
  for (auto known : kFeatureNames)
    if (known == name) return {name};
  return {};
}

TrainingData build_training_data(const PreparedCorpus& corpus, std::span<const PairRecord> pairs,
                                 const ModelConfig& config, std::uint64_t data_seed,
                                 const std::vector<std::string>& feature_names) {
  config.validate();
  if (corpus.table->dim() != config.embedding_dim)
    throw ConfigError("model embedding_dim " + std::to_string(config.embedding_dim) +
                      " does not match the dataset's " + std::to_string(corpus.table->dim()));
  if (config.variant == Variant::feature_fusion && feature_names.size() != config.feature_dim)
    throw ConfigError("feature_dim does not match the number of fusion features");

  TrainingData data;
  data.store.table = corpus.table;
  data.store.max_len = config.max_len;
  data.store.token_ids.reserve(corpus.reviews.size());
  for (const auto& pr : corpus.reviews) data.store.token_ids.push_back(pr.token_ids);

  std::array<std::vector<std::size_t>, 3> pools;
  for (std::size_t i = 0; i < corpus.reviews.size(); ++i)
    pools[partition_slot(corpus.reviews[i].partition)].push_back(i);

  Rng random_rng = make_rng(data_seed, "random-neighbors");
  Rng noise_rng = make_rng(data_seed, "noise-context");
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (const auto& p : pairs) {
    Example ex;
    ex.pair_id = p.pair_id;
    ex.target = p.target;
    ex.neighbors = p.neighbors;
    ex.label = static_cast<int>(p.label);
    if (config.variant == Variant::random_neighbors) {
      const auto& pool = pools[partition_slot(p.partition)];
      if (pool.size() <= config.neighbors)
        throw DataError("partition too small to draw random neighbors");
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      std::unordered_set<std::size_t> used{p.target};
      ex.neighbors.clear();
      while (ex.neighbors.size() < config.neighbors) {
        const std::size_t candidate = pool[pick(random_rng)];
        if (used.insert(candidate).second) ex.neighbors.push_back(candidate);
      }
    }
    if (config.variant == Variant::noise_context) {
      ex.fixed_context.resize(config.kernels);
      for (auto& v : ex.fixed_context) v = unit(noise_rng);
    }
    if (config.variant == Variant::feature_fusion) {
      const auto& fv = corpus.reviews[p.target].features;
      for (const auto& name : feature_names) {
        auto it = fv.find(name);
        if (it == fv.end()) throw DataError("review lacks feature '" + name + "'");
        ex.features.push_back(it->second);
      }
    }
    switch (p.partition) {
      case Partition::train: data.train.push_back(std::move(ex)); break;
      case Partition::validation: data.validation.push_back(std::move(ex)); break;
      case Partition::test: data.test.push_back(std::move(ex)); break;
    }
  }

  if (config.variant == Variant::feature_fusion) {
    std::vector<std::vector<double>> rows;
    for (const auto& ex : data.train) rows.push_back(ex.features);
    const FeatureStats stats = fit_feature_stats(rows, feature_names);
    for (auto* set : {&data.train, &data.validation, &data.test})
      for (auto& ex : *set) ex.features = standardize(ex.features, stats);
  }
  return data;
}

}  // namespace nap
