#include "nap/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "nap/error.hpp"
#include "nap/model.hpp"

namespace nap {

// ----------------------------------------------------------------- lexicon

SentimentLexicon SentimentLexicon::parse(std::string_view text) {
  SentimentLexicon lex;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError("lexicon line " + std::to_string(line_no) + ": expected word<TAB>polarity");
    std::string word = line.substr(0, tab), polarity = line.substr(tab + 1);
    if (polarity == "positive") lex.positive.insert(word);
    else if (polarity == "negative") lex.negative.insert(word);
    else
      throw DataError("lexicon line " + std::to_string(line_no) + ": unknown polarity '" +
                      polarity + "'");
  }
  for (const auto& w : lex.positive)
    if (lex.negative.contains(w)) throw DataError("lexicon word '" + w + "' has both polarities");
  return lex;
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read lexicon " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const SentimentLexicon& SentimentLexicon::builtin() {
  static const SentimentLexicon lex = [] {
    SentimentLexicon l;
    for (const char* w : {"good", "great", "excellent", "amazing", "awesome", "helpful", "happy",
                          "love", "loved", "best", "fast", "easy", "friendly", "recommend",
                          "reliable", "perfect", "wonderful", "pleased", "satisfied", "nice",
                          "quick", "courteous", "professional", "fantastic", "smooth"})
      l.positive.insert(w);
    for (const char* w : {"bad", "terrible", "awful", "horrible", "worst", "poor", "slow",
                          "rude", "scam", "refund", "refused", "never", "disappointed", "broken",
                          "hate", "waste", "problem", "complaint", "unhelpful", "fraud",
                          "late", "wrong", "angry", "useless", "difficult"})
      l.negative.insert(w);
    return l;
  }();
  return lex;
}

// ------------------------------------------------------------------ orders

std::vector<double> order_feature(std::span<const Review> reviews, OrderKind kind) {
  auto key = [&](const Review& r) -> long long {
    switch (kind) {
      case OrderKind::date: return r.date.time_since_epoch().count();
      case OrderKind::rating: return r.star_rating;
      case OrderKind::votes: return r.helpful_votes;
    }
    return 0;
  };
  // Count of reviews with a strictly larger key precedes each tie group.
  std::vector<long long> keys;
  keys.reserve(reviews.size());
  for (const auto& r : reviews) keys.push_back(key(r));
  std::vector<long long> sorted = keys;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> out;
  out.reserve(reviews.size());
  for (auto k : keys) {
    auto before = std::lower_bound(sorted.begin(), sorted.end(), k, std::greater<>()) - sorted.begin();
    out.push_back(1.0 / static_cast<double>(before + 1));
  }
  return out;
}

// -------------------------------------------------------------- conformity

std::vector<double> conformity_feature(std::span<const Review> reviews) {
  const std::size_t n = reviews.size();
  if (n == 0) return {};
  std::map<std::string, std::size_t> vocab;
  for (const auto& r : reviews)
    for (const auto& t : r.tokens) vocab.emplace(t, 0);
  std::size_t next = 0;
  for (auto& [_, idx] : vocab) idx = next++;
  const std::size_t v = vocab.size();
  if (v == 0) return std::vector<double>(n, 0.0);

  std::vector<std::vector<double>> tf(n, std::vector<double>(v, 0.0));
  std::vector<double> df(v, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& t : reviews[i].tokens) tf[i][vocab[t]] += 1.0;
    for (std::size_t w = 0; w < v; ++w)
      if (tf[i][w] > 0.0) df[w] += 1.0;
  }
  std::vector<double> mean(v, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t w = 0; w < v; ++w) {
      tf[i][w] *= std::log(static_cast<double>(n) / df[w]);
      mean[w] += tf[i][w] / static_cast<double>(n);
    }

  auto to_distribution = [&](std::vector<double>& u) {
    double total = 0.0;
    for (auto& x : u) total += (x += kConformitySmoothing);
    for (auto& x : u) x /= total;
  };
  to_distribution(mean);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    to_distribution(tf[i]);
    // sum of p ln(p/q) - p + q: each term is non-negative and the extra
    // terms cancel because both sides sum to one
    double kl = 0.0;
    for (std::size_t w = 0; w < v; ++w) {
      const double p = tf[i][w], q = mean[w];
      kl += std::max(0.0, p * std::log(p / q) - p + q);
    }
    out[i] = kl;
  }
  return out;
}

// ---------------------------------------------------------------- polarity

double polarity_score(std::span<const std::string> tokens, const SentimentLexicon& lexicon) {
  double pos = 0.0, neg = 0.0;
  for (const auto& t : tokens) {
    if (lexicon.positive.contains(t)) pos += 1.0;
    else if (lexicon.negative.contains(t)) neg += 1.0;
  }
  return pos + neg == 0.0 ? 0.0 : (pos - neg) / (pos + neg);
}

PolarityCategory polarity_category(double score) {
  if (score > 1.0 / 3.0) return PolarityCategory::positive;
  if (score < -1.0 / 3.0) return PolarityCategory::negative;
  return PolarityCategory::neutral;
}

std::vector<double> polarity_feature(std::span<const Review> reviews,
                                     const SentimentLexicon& lexicon) {
  std::vector<double> scores;
  scores.reserve(reviews.size());
  std::map<PolarityCategory, std::size_t> counts;
  for (const auto& r : reviews) {
    scores.push_back(polarity_score(r.tokens, lexicon));
    ++counts[polarity_category(scores.back())];
  }
  std::size_t top = 0;
  for (const auto& [_, c] : counts) top = std::max(top, c);
  std::size_t winners = 0;
  PolarityCategory mainstream = PolarityCategory::neutral;
  for (const auto& [cat, c] : counts)
    if (c == top) {
      ++winners;
      mainstream = cat;
    }
  if (winners != 1) mainstream = PolarityCategory::neutral;

  double sum = 0.0;
  std::size_t members = 0;
  for (double s : scores)
    if (polarity_category(s) == mainstream) {
      sum += s;
      ++members;
    }
  const double mainstream_mean = members == 0 ? 0.0 : sum / static_cast<double>(members);
  std::vector<double> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(std::abs(s - mainstream_mean));
  return out;
}

// ----------------------------------------------------------------- entropy

std::vector<double> entropy_feature(std::span<const Review> reviews) {
  std::set<std::string> seen;
  std::vector<double> out;
  out.reserve(reviews.size());
  for (const auto& r : reviews) {
    const std::size_t before = seen.size();
    seen.insert(r.tokens.begin(), r.tokens.end());
    out.push_back(static_cast<double>(seen.size() - before));
  }
  return out;
}

std::vector<FeatureVector> compute_item_features(std::span<const Review> reviews,
                                                 const SentimentLexicon& lexicon) {
  const std::size_t n = reviews.size();
  std::vector<FeatureVector> out(n);
  auto put = [&](std::string_view name, const std::vector<double>& values) {
    for (std::size_t i = 0; i < n; ++i) out[i][std::string(name)] = values[i];
  };
  put("ORD_D", order_feature(reviews, OrderKind::date));
  put("ORD_R", order_feature(reviews, OrderKind::rating));
  put("ORD_V", order_feature(reviews, OrderKind::votes));
  put("CON", conformity_feature(reviews));
  put("POL", polarity_feature(reviews, lexicon));
  // posting order is the reverse of display order
  std::vector<Review> posting(reviews.rbegin(), reviews.rend());
  auto ent = entropy_feature(posting);
  std::reverse(ent.begin(), ent.end());
  put("ENT", ent);
  return out;
}

// ---------------------------------------------------------- standardizing

FeatureStats fit_feature_stats(std::span<const std::vector<double>> rows,
                               std::vector<std::string> names) {
  if (rows.empty()) throw DataError("cannot fit feature statistics on an empty training set");
  const std::size_t f = names.size();
  FeatureStats stats{std::move(names), std::vector<double>(f, 0.0), std::vector<double>(f, 0.0)};
  const double n = static_cast<double>(rows.size());
  for (const auto& row : rows) {
    if (row.size() != f) throw DataError("feature row has the wrong width");
    for (std::size_t k = 0; k < f; ++k) stats.mean[k] += row[k] / n;
  }
  for (const auto& row : rows)
    for (std::size_t k = 0; k < f; ++k) stats.stddev[k] += (row[k] - stats.mean[k]) * (row[k] - stats.mean[k]) / n;
  for (auto& s : stats.stddev) s = std::sqrt(s);
  return stats;
}

std::vector<double> standardize(std::span<const double> row, const FeatureStats& stats) {
  if (stats.mean.size() != row.size() || stats.stddev.size() != row.size())
    throw DataError("missing training statistics for feature standardization");
  std::vector<double> out(row.size());
  for (std::size_t k = 0; k < row.size(); ++k) {
    const double centred = row[k] - stats.mean[k];
    out[k] = stats.stddev[k] > 0.0 ? centred / stats.stddev[k] : centred;
  }
  return out;
}

double fused_predict(std::span<const double> h, std::span<const double> features,
                     std::span<const double> weights, double bias) {
  if (weights.size() != h.size() + features.size())
    throw ConfigError("fusion layer expects " + std::to_string(h.size() + features.size()) +
                      " weights");
  double logit = bias;
  for (std::size_t j = 0; j < h.size(); ++j) logit += weights[j] * h[j];
  for (std::size_t k = 0; k < features.size(); ++k) logit += weights[h.size() + k] * features[k];
  return sigmoid(logit);
}

}  // namespace nap
