#include "nap/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include "json.hpp"
#include <sstream>

#include "nap/error.hpp"

namespace nap {

namespace {

bool is_word_byte(unsigned char ch) { return std::isalnum(ch) != 0 || ch == '\'' || ch >= 0x80; }

bool is_digit(char ch) { return ch >= '0' && ch <= '9'; }

bool is_article(std::string_view token) { return token == "a" || token == "an" || token == "the"; }

}  // namespace

Date parse_date(std::string_view text) {
  using namespace std::chrono;
  auto bad = [&] { return DataError("malformed date '" + std::string(text) + "', expected YYYY-MM-DD"); };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (!is_digit(text[i])) throw bad();
  auto num = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) v = v * 10 + (text[i] - '0');
    return v;
  };
  year_month_day ymd{year{num(0, 4)}, month{static_cast<unsigned>(num(5, 2))},
                     day{static_cast<unsigned>(num(8, 2))}};
  if (!ymd.ok()) throw bad();
  return sys_days{ymd};
}

std::string format_date(Date date) {
  std::chrono::year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string_view to_string(NeighborScheme scheme) {
  switch (scheme) {
    case NeighborScheme::preceding: return "preceding";
    case NeighborScheme::following: return "following";
    case NeighborScheme::surrounding: return "surrounding";
  }
  return "?";
}

NeighborScheme parse_neighbor_scheme(std::string_view text) {
  if (text == "preceding" || text == "P") return NeighborScheme::preceding;
  if (text == "following" || text == "F") return NeighborScheme::following;
  if (text == "surrounding" || text == "S") return NeighborScheme::surrounding;
  throw ConfigError("unknown neighbor scheme '" + std::string(text) + "'");
}

std::string_view to_string(Partition partition) {
  switch (partition) {
    case Partition::train: return "train";
    case Partition::validation: return "validation";
    case Partition::test: return "test";
  }
  return "?";
}

Partition parse_partition(std::string_view text) {
  if (text == "train") return Partition::train;
  if (text == "validation" || text == "val") return Partition::validation;
  if (text == "test") return Partition::test;
  throw ConfigError("unknown partition '" + std::string(text) + "'");
}

bool is_special_token(std::string_view token) {
  return token == kPadToken || token == kUnkToken || token == kNumToken || token == kOrgToken;
}

// ---------------------------------------------------------------- Vocabulary

Vocabulary::Vocabulary(std::vector<std::string> terms) {
  tokens_.reserve(terms.size() + kSpecialTokenCount);
  for (auto special : {kPadToken, kUnkToken, kNumToken, kOrgToken}) tokens_.emplace_back(special);
  for (auto& t : terms) {
    if (is_special_token(t)) continue;
    tokens_.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], i).second)
      throw DataError("duplicate vocabulary token '" + tokens_[i] + "'");
  }
}

bool Vocabulary::contains(std::string_view token) const { return find(token).has_value(); }

std::optional<std::size_t> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocabulary::index_of(std::string_view token) const {
  auto idx = find(token);
  if (!idx) throw DataError("token outside vocabulary: '" + std::string(token) + "'");
  return *idx;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write vocabulary file " + path.string());
  for (const auto& t : tokens_) out << t << '\n';
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read vocabulary file " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  if (lines.size() < kSpecialTokenCount || lines[0] != kPadToken || lines[1] != kUnkToken ||
      lines[2] != kNumToken || lines[3] != kOrgToken)
    throw DataError("vocabulary file " + path.string() + " does not start with the special tokens");
  return Vocabulary(std::vector<std::string>(lines.begin() + kSpecialTokenCount, lines.end()));
}

// ------------------------------------------------------------ text handling

std::vector<std::string> tokenize_review(std::string_view raw_text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    // strip quoting apostrophes
    std::size_t b = 0, e = current.size();
    while (b < e && current[b] == '\'') ++b;
    while (e > b && current[e - 1] == '\'') --e;
    std::string token = current.substr(b, e - b);
    current.clear();
    if (!token.empty() && !is_article(token)) tokens.push_back(std::move(token));
  };
  for (std::size_t i = 0; i < raw_text.size(); ++i) {
    auto ch = static_cast<unsigned char>(raw_text[i]);
    if (is_word_byte(ch)) {
      current.push_back(static_cast<char>(std::tolower(ch)));
    } else if ((ch == '.' || ch == ',') && !current.empty() && is_digit(current.back()) &&
               i + 1 < raw_text.size() && is_digit(raw_text[i + 1])) {
      current.push_back(static_cast<char>(ch));  // 1,000 / 3.50
    } else if (!current.empty()) {
      flush();
    }
  }
  if (!current.empty()) flush();
  return tokens;
}

bool is_numeric_token(std::string_view token) {
  bool digit = false;
  for (char ch : token) {
    if (is_digit(ch)) digit = true;
    else if (ch != '.' && ch != ',') return false;
  }
  return digit;
}

Vocabulary build_vocabulary(std::span<const std::vector<std::string>> training_tokens,
                            std::size_t max_terms) {
  if (max_terms < 1) throw ConfigError("max_terms must be >= 1");
  if (training_tokens.empty()) throw DataError("empty corpus");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& seq : training_tokens)
    for (const auto& t : seq)
      if (!is_special_token(t)) ++counts[t];
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > max_terms) ranked.resize(max_terms);
  std::vector<std::string> terms;
  terms.reserve(ranked.size());
  for (auto& [t, _] : ranked) terms.push_back(t);
  return Vocabulary(std::move(terms));
}

std::vector<std::string> mask_entities(std::span<const std::string> tokens,
                                       const std::set<std::string>& item_names) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (is_numeric_token(t)) out.emplace_back(kNumToken);
    else if (item_names.contains(t)) out.emplace_back(kOrgToken);
    else out.push_back(t);
  }
  return out;
}

std::vector<std::string> normalize_tokens(std::span<const std::string> tokens,
                                          const Vocabulary& vocabulary,
                                          const std::set<std::string>& item_names) {
  auto out = mask_entities(tokens, item_names);
  for (auto& t : out)
    if (!vocabulary.contains(t)) t = kUnkToken;
  return out;
}

HelpfulnessLabel label_review(const Review& review) {
  return review.helpful_votes >= kHelpfulVoteThreshold ? HelpfulnessLabel::helpful
                                                       : HelpfulnessLabel::unhelpful;
}

// --------------------------------------------------------------- filtering

Corpus filter_items(Corpus corpus, const FilterConfig& config) {
  using namespace std::chrono;
  Corpus kept;
  for (auto& item : corpus) {
    std::vector<Review> reviews;
    for (auto& r : item.reviews)
      if (!config.late_cutoff || r.date <= *config.late_cutoff) reviews.push_back(std::move(r));

    if (config.early_cutoff) {
      std::map<std::pair<int, unsigned>, std::size_t> per_month;
      auto month_key = [](Date d) {
        year_month_day ymd{d};
        return std::pair{static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month())};
      };
      for (const auto& r : reviews) ++per_month[month_key(r.date)];
      std::erase_if(reviews, [&](const Review& r) {
        return r.date < *config.early_cutoff &&
               per_month[month_key(r.date)] < config.early_month_min_reviews;
      });
    }
    if (reviews.size() < config.min_reviews) continue;
    for (std::size_t i = 0; i < reviews.size(); ++i) reviews[i].position = i;
    item.reviews = std::move(reviews);
    kept.push_back(std::move(item));
  }
  return kept;
}

// ------------------------------------------------------------------ split

SplitCounts split_counts(std::size_t n, const SplitFractions& fractions) {
  double total = fractions.train + fractions.validation + fractions.test;
  if (std::abs(total - 1.0) > 1e-9 || fractions.train < 0 || fractions.validation < 0 ||
      fractions.test < 0)
    throw ConfigError("split fractions must be non-negative and sum to 1");
  SplitCounts c;
  // small epsilon so that e.g. 0.1 * 10 floors to 1, not 0
  c.validation = static_cast<std::size_t>(std::floor(n * fractions.validation + 1e-9));
  c.test = static_cast<std::size_t>(std::floor(n * fractions.test + 1e-9));
  c.train = n - c.validation - c.test;
  return c;
}

ItemSplit split_chronological(const ItemSequence& item, const SplitFractions& fractions) {
  const std::size_t n = item.reviews.size();
  auto counts = split_counts(n, fractions);
  if (n < 10 || counts.validation == 0 || counts.test == 0 || counts.train == 0)
    throw DataError("item too small to split: '" + item.item_id + "' has " + std::to_string(n) +
                    " reviews");
  // Display order is newest first: the head is test, the tail is train.
  ItemSplit split;
  auto begin = item.reviews.begin();
  split.test.assign(begin, begin + counts.test);
  split.validation.assign(begin + counts.test, begin + counts.test + counts.validation);
  split.train.assign(begin + counts.test + counts.validation, item.reviews.end());
  return split;
}

// --------------------------------------------------------------- contexts

std::vector<ContextPair> assemble_contexts(std::span<const Review> partition,
                                           NeighborScheme scheme, std::size_t neighbors) {
  std::vector<HelpfulnessLabel> labels;
  labels.reserve(partition.size());
  for (const auto& r : partition) labels.push_back(label_review(r));
  return assemble_contexts(std::span<const HelpfulnessLabel>(labels), scheme, neighbors);
}

std::vector<ContextPair> assemble_contexts(std::span<const HelpfulnessLabel> labels,
                                           NeighborScheme scheme, std::size_t neighbors) {
  if (neighbors < 1) throw ConfigError("K must be >= 1");
  if (scheme == NeighborScheme::surrounding && neighbors % 2 != 0)
    throw ConfigError("surrounding neighbors require an even K, got " + std::to_string(neighbors));
  std::vector<ContextPair> pairs;
  const std::size_t n = labels.size();
  if (n < neighbors + 1) return pairs;

  std::size_t before = 0, after = 0;
  switch (scheme) {
    case NeighborScheme::preceding: before = neighbors; break;
    case NeighborScheme::following: after = neighbors; break;
    case NeighborScheme::surrounding: before = after = neighbors / 2; break;
  }
  for (std::size_t i = before; i + after < n; ++i) {
    ContextPair pair;
    pair.target = i;
    pair.scheme = scheme;
    pair.label = labels[i];
    pair.neighbors.reserve(neighbors);
    for (std::size_t j = i - before; j < i; ++j) pair.neighbors.push_back(j);
    for (std::size_t j = i + 1; j <= i + after; ++j) pair.neighbors.push_back(j);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<ContextPair> balance_classes(std::vector<ContextPair> pairs, Rng& rng) {
  std::vector<std::size_t> helpful, unhelpful;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    (pairs[i].label == HelpfulnessLabel::helpful ? helpful : unhelpful).push_back(i);
  if (helpful.empty() || unhelpful.empty()) throw DataError("degenerate class distribution");
  auto& majority = helpful.size() > unhelpful.size() ? helpful : unhelpful;
  const std::size_t target = std::min(helpful.size(), unhelpful.size());
  std::vector<std::size_t> keep;
  keep.reserve(2 * target);
  if (majority.size() > target) {
    std::shuffle(majority.begin(), majority.end(), rng);
    majority.resize(target);
  }
  keep.insert(keep.end(), helpful.begin(), helpful.end());
  keep.insert(keep.end(), unhelpful.begin(), unhelpful.end());
  std::sort(keep.begin(), keep.end());
  std::vector<ContextPair> out;
  out.reserve(keep.size());
  for (auto i : keep) out.push_back(std::move(pairs[i]));
  return out;
}

// -------------------------------------------------------------------- I/O

std::vector<Review> read_corpus_jsonl(std::istream& in) {
  std::vector<Review> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto where = [&] { return "corpus line " + std::to_string(line_no) + ": "; };
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
      Review r;
      r.item_id = obj.at("item_id").get<std::string>();
      r.review_id = obj.at("review_id").get<std::string>();
      r.date = parse_date(obj.at("date").get<std::string>());
      r.star_rating = obj.at("rating").get<int>();
      r.helpful_votes = obj.at("votes").get<int>();
      r.raw_text = obj.at("text").get<std::string>();
      if (r.star_rating < 1 || r.star_rating > 5)
        throw DataError("rating must be in 1..5, got " + std::to_string(r.star_rating));
      if (r.helpful_votes < 0) throw DataError("votes must be >= 0");
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where() + e.what());
    } catch (const DataError& e) {
      throw DataError(where() + e.what());
    }
  }
  return records;
}

std::vector<Review> read_corpus_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read corpus " + path.string());
  return read_corpus_jsonl(in);
}

Corpus group_into_items(std::vector<Review> records) {
  std::map<std::string, std::vector<Review>> by_item;
  for (auto& r : records) by_item[r.item_id].push_back(std::move(r));
  Corpus corpus;
  corpus.reserve(by_item.size());
  for (auto& [id, reviews] : by_item) {
    std::stable_sort(reviews.begin(), reviews.end(),
                     [](const Review& a, const Review& b) { return a.date > b.date; });
    for (std::size_t i = 0; i < reviews.size(); ++i) reviews[i].position = i;
    ItemSequence item;
    item.item_id = id;
    item.name_tokens = tokenize_review(id);
    item.reviews = std::move(reviews);
    corpus.push_back(std::move(item));
  }
  return corpus;
}

void write_corpus_jsonl(std::ostream& out, const Corpus& corpus) {
  for (const auto& item : corpus) {
    for (const auto& r : item.reviews) {
      nlohmann::ordered_json obj{{"item_id", r.item_id},   {"review_id", r.review_id},
                                 {"date", format_date(r.date)}, {"rating", r.star_rating},
                                 {"votes", r.helpful_votes}, {"text", r.raw_text}};
      out << obj.dump() << '\n';
    }
  }
}

}  // namespace nap
