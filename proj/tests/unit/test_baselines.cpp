#include <cmath>

#include "doctest.h"
#include "nap/baselines.hpp"
#include "nap/error.hpp"
#include "nap/model.hpp"
#include "support.hpp"

using namespace nap;

namespace {

Review reviewed(std::string date, int rating, int votes, std::vector<std::string> tokens) {
  Review r;
  r.item_id = "item";
  r.review_id = "r" + date + std::to_string(rating) + std::to_string(votes);
  r.date = parse_date(date);
  r.star_rating = rating;
  r.helpful_votes = votes;
  r.tokens = std::move(tokens);
  return r;
}

const SentimentLexicon& toy_lexicon() {
  static const SentimentLexicon lex = SentimentLexicon::parse(
      "# toy\ngood\tpositive\ngreat\tpositive\nbad\tnegative\nawful\tnegative\n");
  return lex;
}

// KL(p || q) over smoothed, normalized vectors.
double smoothed_kl(std::vector<double> p, std::vector<double> q) {
  double sp = 0.0, sq = 0.0;
  for (auto& x : p) sp += (x += kConformitySmoothing);
  for (auto& x : q) sq += (x += kConformitySmoothing);
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) kl += p[i] / sp * std::log((p[i] / sp) / (q[i] / sq));
  return kl;
}

}  // namespace

TEST_CASE("order features") {
  std::vector<Review> rs{reviewed("2021-03-03", 5, 1, {"a"}), reviewed("2021-03-03", 4, 2, {"b"}),
                         reviewed("2021-03-01", 3, 9, {"c"})};
  auto by_date = order_feature(rs, OrderKind::date);
  CHECK(by_date == std::vector<double>{1.0, 1.0, 1.0 / 3.0});
  CHECK(order_feature(rs, OrderKind::rating) == std::vector<double>{1.0, 0.5, 1.0 / 3.0});
  CHECK(order_feature(rs, OrderKind::votes) == std::vector<double>{1.0 / 3.0, 0.5, 1.0});

  std::vector<Review> same(4, reviewed("2021-01-01", 3, 0, {"x"}));
  for (double v : order_feature(same, OrderKind::date)) CHECK(v == 1.0);

  std::vector<Review> distinct;
  for (int d = 9; d >= 1; --d) distinct.push_back(reviewed("2021-01-0" + std::to_string(d), 3, 0, {"x"}));
  auto ord = order_feature(distinct, OrderKind::date);
  for (std::size_t n = 0; n < ord.size(); ++n) CHECK(ord[n] == 1.0 / static_cast<double>(n + 1));
}

TEST_CASE("conformity") {
  std::vector<Review> same(3, reviewed("2021-01-01", 3, 0, {"same", "words"}));
  for (double v : conformity_feature(same)) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<Review> disjoint{reviewed("2021-01-02", 3, 0, {"a"}), reviewed("2021-01-01", 3, 0, {"b"})};
  auto con = conformity_feature(disjoint);
  const double idf = std::log(2.0);
  const double oracle = smoothed_kl({idf, 0.0}, {idf / 2.0, idf / 2.0});
  CHECK(con[0] == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(con[1] == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(oracle == doctest::Approx(std::log(2.0)).epsilon(1e-6));

  std::vector<Review> mixed{reviewed("2021-01-03", 3, 0, {"a", "a", "b"}),
                            reviewed("2021-01-02", 3, 0, {"b", "c"}),
                            reviewed("2021-01-01", 3, 0, {"c", "d", "a"})};
  for (double v : conformity_feature(mixed)) CHECK(v >= 0.0);
  CHECK(conformity_feature(std::vector<Review>{}).empty());
}

TEST_CASE("polarity") {
  const auto& lex = toy_lexicon();
  CHECK(polarity_score(std::vector<std::string>{"good", "great", "good", "bad", "meh"}, lex) == 0.5);
  CHECK(polarity_category(0.5) == PolarityCategory::positive);
  CHECK(polarity_score(std::vector<std::string>{"good", "bad"}, lex) == 0.0);
  CHECK(polarity_score(std::vector<std::string>{"meh"}, lex) == 0.0);
  CHECK(polarity_category(1.0 / 3.0) == PolarityCategory::neutral);
  CHECK(polarity_category(-0.34) == PolarityCategory::negative);

  std::vector<Review> rs{reviewed("2021-01-04", 5, 0, {"good"}), reviewed("2021-01-03", 5, 0, {"great"}),
                         reviewed("2021-01-02", 4, 0, {"good", "good", "good", "bad"}),
                         reviewed("2021-01-01", 1, 0, {"awful"})};
  auto pol = polarity_feature(rs, lex);
  // mainstream is positive with mean (1 + 1 + 0.5) / 3
  const double mean = (1.0 + 1.0 + 0.5) / 3.0;
  CHECK(pol[0] == doctest::Approx(1.0 - mean));
  CHECK(pol[2] == doctest::Approx(mean - 0.5));
  CHECK(pol[3] == doctest::Approx(1.0 + mean));
  for (double v : pol) {
    CHECK(v >= 0.0);
    CHECK(v <= 2.0);
  }

  // duplicating every review leaves the feature unchanged
  std::vector<Review> doubled;
  for (const auto& r : rs) {
    doubled.push_back(r);
    doubled.push_back(r);
  }
  auto pol2 = polarity_feature(doubled, lex);
  for (std::size_t i = 0; i < rs.size(); ++i) CHECK(pol2[2 * i] == doctest::Approx(pol[i]));
}

TEST_CASE("entropy") {
  std::vector<Review> posting{reviewed("2021-01-01", 3, 0, {"a", "b"}),
                              reviewed("2021-01-02", 3, 0, {"b", "c"}),
                              reviewed("2021-01-03", 3, 0, {"a", "c"})};
  CHECK(entropy_feature(std::span<const Review>(posting).first(2)) == std::vector<double>{2, 1});
  auto ent = entropy_feature(posting);
  CHECK(ent == std::vector<double>{2, 1, 0});
  double total = 0.0;
  for (double v : ent) total += v;
  CHECK(total == 3.0);  // size of the item's vocabulary

  // display order input: newest first
  std::vector<Review> display(posting.rbegin(), posting.rend());
  auto features = compute_item_features(display, toy_lexicon());
  CHECK(features[0].at("ENT") == 0.0);
  CHECK(features[2].at("ENT") == 2.0);
  CHECK(features[0].size() == kFeatureNames.size());
}

TEST_CASE("standardization and fusion") {
  std::vector<std::vector<double>> rows{{1, 5}, {2, 5}, {3, 5}, {6, 5}};
  auto stats = fit_feature_stats(rows, {"x", "y"});
  double sum = 0.0, sq = 0.0;
  for (const auto& r : rows) {
    auto z = standardize(r, stats);
    sum += z[0];
    sq += z[0] * z[0];
    CHECK(z[1] == 0.0);
  }
  CHECK(sum == doctest::Approx(0.0));
  CHECK(sq / 4.0 == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_feature_stats(std::span<const std::vector<double>>{}, {"x"}), DataError);

  const std::vector<double> h{1.0, 2.0}, f{-1.0}, w{0.5, 0.25, 2.0};
  CHECK(fused_predict(h, f, w, 0.1) == doctest::Approx(sigmoid(0.5 + 0.5 - 2.0 + 0.1)));
}

TEST_CASE("lexicon files") {
  const auto& lex = toy_lexicon();
  CHECK(lex.positive.count("great") == 1);
  CHECK(lex.negative.count("awful") == 1);
  CHECK_THROWS_AS(SentimentLexicon::parse("good positive\n"), DataError);
  CHECK_FALSE(SentimentLexicon::builtin().positive.empty());
  for (const auto& w : SentimentLexicon::builtin().positive)
    CHECK(SentimentLexicon::builtin().negative.count(w) == 0);
}
