#include "nap/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "nap/baselines.hpp"
#include "nap/error.hpp"
#include "nap/rng.hpp"

namespace nap {

void SyntheticConfig::validate() const {
  if (items == 0) throw ConfigError("synthetic items must be positive");
  if (reviews_per_item < context_window + 1)
    throw ConfigError("reviews per item must exceed the context window");
  if (vocabulary_size < 10) throw ConfigError("synthetic vocabulary needs at least 10 words");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("rho must lie in [0, 1]");
  if (!(topic_share >= 0.0 && topic_share <= 1.0))
    throw ConfigError("topic_share must lie in [0, 1]");
  if (!(clear_share >= 0.0 && clear_share <= 1.0))
    throw ConfigError("clear_share must lie in [0, 1]");
  if (min_tokens == 0 || min_tokens > max_tokens)
    throw ConfigError("need 0 < min_tokens <= max_tokens");
}

namespace {

constexpr const char* kConsonants = "bdfgklmnprstvz";
constexpr const char* kVowels = "aeiou";

std::vector<std::string> make_words(std::size_t count, Rng& rng) {
  const auto lexicon = SentimentLexicon::builtin();
  std::uniform_int_distribution<std::size_t> consonant(0, 13), vowel(0, 4), syllables(2, 3);
  std::set<std::string> seen;
  std::vector<std::string> words;
  while (words.size() < count) {
    std::string w;
    for (std::size_t s = syllables(rng); s > 0; --s) {
      w += kConsonants[consonant(rng)];
      w += kVowels[vowel(rng)];
    }
    if (lexicon.positive.contains(w) || lexicon.negative.contains(w)) continue;
    if (seen.insert(w).second) words.push_back(std::move(w));
  }
  return words;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& config) {
  config.validate();
  Rng rng = make_rng(config.seed, "synthetic");
  const auto words = make_words(config.vocabulary_size, rng);
  const std::size_t topic = config.vocabulary_size / 5;
  // words[0, topic) poor topic, [topic, 2 topic) good topic, rest shared
  const auto lexicon = SentimentLexicon::builtin();
  std::vector<std::string> positive(lexicon.positive.begin(), lexicon.positive.end());
  std::vector<std::string> negative(lexicon.negative.begin(), lexicon.negative.end());
  std::ranges::sort(positive);
  std::ranges::sort(negative);

  std::bernoulli_distribution coin(0.5), topical(config.topic_share), extra(0.1),
      clarity(config.clear_share);
  std::uniform_int_distribution<std::size_t> length(config.min_tokens, config.max_tokens);
  std::uniform_int_distribution<std::size_t> topic_word(0, topic - 1);
  std::uniform_int_distribution<std::size_t> shared_word(2 * topic, words.size() - 1);
  std::uniform_int_distribution<int> number(1, 500);
  const Date base = parse_date("2020-12-31");
  const std::size_t half = config.context_window / 2;

  SyntheticCorpus out;
  for (std::size_t i = 0; i < config.items; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "item%02zu", i);
    const std::size_t n = config.reviews_per_item;

    std::vector<int> quality(n);
    for (auto& q : quality) q = coin(rng) ? 1 : 0;

    ItemSequence item;
    item.item_id = name;
    item.name_tokens = {name};
    std::vector<SyntheticReviewInfo> latent(n);
    for (std::size_t p = 0; p < n; ++p) {
      // surrounding window, shifted inward at the sequence ends
      std::size_t lo = p >= half ? p - half : 0;
      std::size_t hi = std::min(n - 1, lo + config.context_window);
      lo = hi >= config.context_window ? hi - config.context_window : 0;
      int good = 0, seen = 0;
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == p) continue;
        good += quality[j];
        ++seen;
      }
      const double majority = 2 * good > seen ? 1.0 : 2 * good < seen ? 0.0 : 0.5;
      const double own = sigmoid(config.quality_signal * (2 * quality[p] - 1));
      const double prob = (1.0 - config.rho) * own + config.rho * majority;
      const bool helpful = std::bernoulli_distribution(prob)(rng);
      const bool clear = clarity(rng);
      latent[p] = {quality[p], clear, prob};

      Review r;
      r.item_id = item.item_id;
      char rid[48];
      std::snprintf(rid, sizeof rid, "%s-r%03zu", name, p);
      r.review_id = rid;
      r.position = p;
      r.date = base - std::chrono::days(static_cast<int>(p));
      r.star_rating = quality[p] ? std::uniform_int_distribution<int>(4, 5)(rng)
                                 : std::uniform_int_distribution<int>(1, 3)(rng);
      r.helpful_votes = helpful ? std::uniform_int_distribution<int>(2, 9)(rng)
                                : std::uniform_int_distribution<int>(0, 1)(rng);

      const std::size_t offset = quality[p] ? topic : 0;
      std::string text;
      auto append = [&text](const std::string& w) {
        if (!text.empty()) text += ' ';
        text += w;
      };
      for (std::size_t t = length(rng); t > 0; --t)
        append(words[clear && topical(rng) ? offset + topic_word(rng) : shared_word(rng)]);
      if (clear) {
        const auto& mood = quality[p] ? positive : negative;
        append(mood[std::uniform_int_distribution<std::size_t>(0, mood.size() - 1)(rng)]);
      }
      if (extra(rng)) append("the " + item.item_id);
      if (extra(rng)) append(std::to_string(number(rng)));
      r.raw_text = std::move(text);
      item.reviews.push_back(std::move(r));
    }
    out.corpus.push_back(std::move(item));
    out.latent.push_back(std::move(latent));
  }
  return out;
}

}  // namespace nap
