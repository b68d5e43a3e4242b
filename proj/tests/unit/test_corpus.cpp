#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "nap/corpus.hpp"
#include "nap/error.hpp"

using namespace nap;

namespace {

Review make_review(std::string id, std::string date, int votes, std::string text = "x") {
  Review r;
  r.item_id = "item";
  r.review_id = std::move(id);
  r.date = parse_date(date);
  r.helpful_votes = votes;
  r.star_rating = 3;
  r.raw_text = std::move(text);
  r.tokens = tokenize_review(r.raw_text);
  return r;
}

ItemSequence item_of(std::size_t n) {
  ItemSequence item;
  item.item_id = "item";
  const Date newest = parse_date("2021-06-30");
  for (std::size_t i = 0; i < n; ++i) {
    Review r = make_review("r" + std::to_string(i), "2021-06-30", static_cast<int>(i % 3));
    r.date = newest - std::chrono::days(static_cast<int>(i));
    r.position = i;
    item.reviews.push_back(r);
  }
  return item;
}

std::vector<HelpfulnessLabel> labels(std::size_t n) {
  return std::vector<HelpfulnessLabel>(n, HelpfulnessLabel::helpful);
}

}  // namespace

TEST_CASE("tokenize lowercases and drops articles") {
  using V = std::vector<std::string>;
  CHECK(tokenize_review("The Headphone is Cool") == V{"headphone", "is", "cool"});
  CHECK(tokenize_review("").empty());
  CHECK(tokenize_review("A a THE an").empty());
  CHECK(tokenize_review("Paid $1,000 for it, worth 3.50!") == V{"paid", "1,000", "for", "it", "worth", "3.50"});
  CHECK(tokenize_review("don't 'quoted'") == V{"don't", "quoted"});
}

TEST_CASE("dates parse strictly") {
  CHECK(format_date(parse_date("2020-02-29")) == "2020-02-29");
  CHECK_THROWS_AS(parse_date("2021-02-29"), DataError);
  CHECK_THROWS_AS(parse_date("2021-1-01"), DataError);
  CHECK_THROWS_AS(parse_date("yesterday"), DataError);
}

TEST_CASE("vocabulary keeps the most frequent terms with lexicographic ties") {
  std::vector<std::vector<std::string>> docs{{"x", "x", "x", "y", "y", "z"}};
  Vocabulary v = build_vocabulary(docs, 2);
  CHECK(v.size() == 2 + kSpecialTokenCount);
  CHECK(v.contains("x"));
  CHECK(v.contains("y"));
  CHECK_FALSE(v.contains("z"));
  CHECK(v.token(0) == kPadToken);
  CHECK(v.token(1) == kUnkToken);

  std::vector<std::vector<std::string>> tied{{"y", "x", "y", "x"}};
  Vocabulary t = build_vocabulary(tied, 1);
  CHECK(t.contains("x"));
  CHECK_FALSE(t.contains("y"));
  CHECK(kDefaultMaxTerms == 30000);

  CHECK_THROWS_WITH_AS(build_vocabulary(std::vector<std::vector<std::string>>{}, 5), "empty corpus",
                       DataError);
  CHECK_THROWS_AS(v.index_of("zzz"), DataError);
}

TEST_CASE("vocabulary file round trip") {
  Vocabulary v({"alpha", "beta"});
  const auto path = std::filesystem::temp_directory_path() / "nap-vocab-test.txt";
  v.save(path);
  Vocabulary back = Vocabulary::load(path);
  std::filesystem::remove(path);
  CHECK(back.tokens() == v.tokens());
  CHECK(back.index_of("beta") == kSpecialTokenCount + 1);
}

TEST_CASE("normalization substitutes NUM, ORG, UNK in order") {
  using V = std::vector<std::string>;
  Vocabulary vocab({"paid", "to", "ok"});
  const std::set<std::string> names{"acme"};
  CHECK(normalize_tokens(V{"paid", "200", "to", "acme"}, vocab, names) ==
        V{"paid", "<NUM>", "to", "<ORG>"});
  CHECK(normalize_tokens(V{"paid", "to", "ok"}, vocab, names) == V{"paid", "to", "ok"});
  CHECK(normalize_tokens(V{"zzzunseen"}, vocab, names) == V{"<UNK>"});
  // a numeric item name is still a number first
  CHECK(normalize_tokens(V{"42"}, vocab, {"42"}) == V{"<NUM>"});
}

TEST_CASE("labels follow the two-vote rule") {
  CHECK(label_review(make_review("a", "2020-01-01", 2)) == HelpfulnessLabel::helpful);
  CHECK(label_review(make_review("a", "2020-01-01", 0)) == HelpfulnessLabel::unhelpful);
  CHECK(label_review(make_review("a", "2020-01-01", 1)) == HelpfulnessLabel::unhelpful);
}

TEST_CASE("filtering by review count and dates") {
  FilterConfig cfg;
  CHECK(filter_items({item_of(99)}, cfg).empty());
  auto kept = filter_items({item_of(100)}, cfg);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].reviews.size() == 100);
  CHECK(filter_items({}, cfg).empty());

  // late cutoff drops the newest reviews and renumbers positions
  FilterConfig late;
  late.min_reviews = 1;
  late.late_cutoff = parse_date("2021-06-28");
  auto trimmed = filter_items({item_of(10)}, late);
  REQUIRE(trimmed[0].reviews.size() == 8);
  CHECK(trimmed[0].reviews[0].position == 0);
  CHECK(format_date(trimmed[0].reviews[0].date) == "2021-06-28");

  // early months with fewer than 15 reviews are dropped before the cutoff
  ItemSequence item = item_of(40);  // 2021-06-30 back to 2021-05-22
  FilterConfig early;
  early.min_reviews = 1;
  early.early_cutoff = parse_date("2021-06-01");
  auto pruned = filter_items({item}, early);
  // May 2021 holds 10 reviews (22..31) and is dropped; June has 30
  CHECK(pruned[0].reviews.size() == 30);
}

TEST_CASE("chronological split counts") {
  auto counts = [](std::size_t n) {
    auto c = split_counts(n);
    return std::array<std::size_t, 3>{c.train, c.validation, c.test};
  };
  CHECK(counts(100) == std::array<std::size_t, 3>{80, 10, 10});
  CHECK(counts(10) == std::array<std::size_t, 3>{8, 1, 1});
  CHECK(counts(103) == std::array<std::size_t, 3>{83, 10, 10});
  CHECK_THROWS_WITH_AS(split_chronological(item_of(9)), doctest::Contains("item too small to split"),
                       DataError);
}

TEST_CASE("split partitions are ordered in time") {
  for (std::size_t n : {10, 37, 100, 103}) {
    auto split = split_chronological(item_of(n));
    CHECK(split.train.size() + split.validation.size() + split.test.size() == n);
    for (const auto& tr : split.train)
      for (const auto& va : split.validation) CHECK(tr.date <= va.date);
    for (const auto& va : split.validation)
      for (const auto& te : split.test) CHECK(va.date <= te.date);
  }
}

TEST_CASE("context windows") {
  auto s = assemble_contexts(labels(5), NeighborScheme::surrounding, 4);
  REQUIRE(s.size() == 1);
  CHECK(s[0].target == 2);
  CHECK(s[0].neighbors == std::vector<std::size_t>{0, 1, 3, 4});

  auto p = assemble_contexts(labels(3), NeighborScheme::preceding, 2);
  REQUIRE(p.size() == 1);
  CHECK(p[0].target == 2);
  CHECK(p[0].neighbors == std::vector<std::size_t>{0, 1});

  auto one = assemble_contexts(labels(2), NeighborScheme::preceding, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].target == 1);
  CHECK(one[0].neighbors == std::vector<std::size_t>{0});

  auto f = assemble_contexts(labels(4), NeighborScheme::following, 2);
  REQUIRE(f.size() == 2);
  CHECK(f[1].target == 1);
  CHECK(f[1].neighbors == std::vector<std::size_t>{2, 3});

  CHECK(assemble_contexts(labels(3), NeighborScheme::preceding, 3).empty());
  CHECK_THROWS_AS(assemble_contexts(labels(9), NeighborScheme::surrounding, 3), ConfigError);
}

TEST_CASE("every pair has K ordered neighbors excluding the target") {
  for (auto scheme : {NeighborScheme::preceding, NeighborScheme::following, NeighborScheme::surrounding})
    for (std::size_t k : {2, 4, 6})
      for (const auto& pair : assemble_contexts(labels(15), scheme, k)) {
        CHECK(pair.neighbors.size() == k);
        CHECK(std::ranges::is_sorted(pair.neighbors));
        CHECK(std::ranges::find(pair.neighbors, pair.target) == pair.neighbors.end());
      }
}

TEST_CASE("class balancing") {
  std::vector<ContextPair> pairs;
  for (int i = 0; i < 14; ++i) {
    ContextPair p;
    p.target = static_cast<std::size_t>(i);
    p.label = i < 10 ? HelpfulnessLabel::helpful : HelpfulnessLabel::unhelpful;
    pairs.push_back(p);
  }
  Rng a = make_rng(7, "balance"), b = make_rng(7, "balance");
  auto x = balance_classes(pairs, a);
  auto y = balance_classes(pairs, b);
  CHECK(x.size() == 8);
  CHECK(std::ranges::count(x, HelpfulnessLabel::helpful, &ContextPair::label) == 4);
  CHECK(std::ranges::equal(x, y, {}, &ContextPair::target, &ContextPair::target));
  CHECK(std::ranges::is_sorted(x, {}, &ContextPair::target));

  std::vector<ContextPair> even(pairs.begin() + 6, pairs.end());
  CHECK(balance_classes(even, a).size() == 8);

  std::vector<ContextPair> one_class(pairs.begin(), pairs.begin() + 5);
  CHECK_THROWS_WITH_AS(balance_classes(one_class, a), "degenerate class distribution", DataError);
}

TEST_CASE("corpus JSONL reading, grouping and writing") {
  std::istringstream in(
      R"({"item_id":"b","review_id":"b1","date":"2020-01-02","rating":5,"votes":3,"text":"Great"}
{"item_id":"a","review_id":"a1","date":"2020-01-01","rating":4,"votes":0,"text":"old"}

{"item_id":"a","review_id":"a2","date":"2020-01-05","rating":2,"votes":1,"text":"new"}
)");
  auto corpus = group_into_items(read_corpus_jsonl(in));
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].item_id == "a");
  CHECK(corpus[0].reviews[0].review_id == "a2");
  CHECK(corpus[0].reviews[1].position == 1);

  std::ostringstream out;
  write_corpus_jsonl(out, corpus);
  std::istringstream again(out.str());
  auto round = group_into_items(read_corpus_jsonl(again));
  CHECK(round[1].reviews[0].raw_text == "Great");

  std::istringstream bad_rating(R"({"item_id":"a","review_id":"x","date":"2020-01-01","rating":6,"votes":0,"text":""})");
  CHECK_THROWS_WITH_AS(read_corpus_jsonl(bad_rating), doctest::Contains("line 1"), DataError);
  std::istringstream bad_json("{\"item_id\": \n");
  CHECK_THROWS_AS(read_corpus_jsonl(bad_json), DataError);
  std::istringstream missing(R"({"item_id":"a","date":"2020-01-01","rating":3,"votes":0,"text":""})");
  CHECK_THROWS_AS(read_corpus_jsonl(missing), DataError);
}

TEST_CASE("same-day reviews keep file order") {
  std::istringstream in(
      R"({"item_id":"a","review_id":"first","date":"2020-01-01","rating":4,"votes":0,"text":"x"}
{"item_id":"a","review_id":"second","date":"2020-01-01","rating":4,"votes":0,"text":"y"})");
  auto corpus = group_into_items(read_corpus_jsonl(in));
  CHECK(corpus[0].reviews[0].review_id == "first");
}
