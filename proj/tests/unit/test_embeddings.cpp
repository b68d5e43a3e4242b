#include <sstream>

#include "doctest.h"
#include "nap/embeddings.hpp"
#include "nap/error.hpp"
#include "support.hpp"

using namespace nap;

TEST_CASE("pretrained rows pass through, missing rows are small and seeded") {
  Vocabulary vocab({"cat", "dog"});
  std::istringstream file("cat 0.1 0.2 0.3\nunused 9 9 9\n");
  EmbeddingTable t = load_embedding_table(file, vocab, 3, 11);
  const auto cat = t.row(vocab.index_of("cat"));
  CHECK(std::vector<double>(cat.begin(), cat.end()) == std::vector<double>{0.1, 0.2, 0.3});
  for (double x : t.row(vocab.pad_index())) CHECK(x == 0.0);
  for (double x : t.row(vocab.index_of("dog"))) {
    CHECK(x >= -kEmbeddingInitRange);
    CHECK(x <= kEmbeddingInitRange);
  }
  std::istringstream again("cat 0.1 0.2 0.3\n");
  CHECK(load_embedding_table(again, vocab, 3, 11).values() == t.values());
  CHECK(kDefaultEmbeddingDim == 300);
}

TEST_CASE("malformed embedding files report the line") {
  Vocabulary vocab({"cat"});
  std::istringstream arity("cat 0.1 0.2\n");
  CHECK_THROWS_WITH_AS(load_embedding_table(arity, vocab, 3, 0), doctest::Contains("line 1"), DataError);
  std::istringstream word("ok 1 2 3\ncat 0.1 zz 0.3\n");
  CHECK_THROWS_WITH_AS(load_embedding_table(word, vocab, 3, 0), doctest::Contains("line 2"), DataError);
}

TEST_CASE("review matrices") {
  auto table = test::random_table(6, 2, 3);
  const std::vector<std::size_t> one{4};
  ReviewMatrix x = embed_review(one, *table, 5);
  CHECK(x.mask(0));
  CHECK_FALSE(x.mask(1));
  CHECK(x.row(0)[0] == table->row(4)[0]);
  CHECK(x.row(3)[1] == 0.0);

  const std::vector<std::size_t> long_review{1, 2, 3, 4, 5, 1, 2};
  ReviewMatrix t = embed_review(long_review, *table, 4);
  CHECK(t.length() == 4);
  CHECK(t.row(3)[0] == table->row(4)[0]);

  ReviewMatrix empty = embed_review(std::span<const std::size_t>{}, *table, 4);
  CHECK(empty.length() == 0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK_FALSE(empty.mask(i));
    CHECK(empty.row(i)[0] == 0.0);
  }

  Vocabulary vocab({"a1", "b1"});
  auto vt = test::random_table(vocab.size(), 2, 5);
  CHECK_THROWS_WITH_AS(embed_review(std::vector<std::string>{"zz"}, vocab, *vt, 4),
                       doctest::Contains("token outside vocabulary"), DataError);
}

TEST_CASE("reconstruction holds for every masked row") {
  auto table = test::random_table(50, 7, 9);
  Rng rng = make_rng(1, "recon");
  std::uniform_int_distribution<std::size_t> pick(0, 49), len(0, 30);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> ids(len(rng));
    for (auto& id : ids) id = pick(rng);
    ReviewMatrix x = embed_review(ids, *table, 20);
    CHECK(x.length() == std::min<std::size_t>(ids.size(), 20));
    for (std::size_t i = 0; i < x.length(); ++i)
      for (std::size_t e = 0; e < 7; ++e) REQUIRE(x.row(i)[e] == table->row(ids[i])[e]);
  }
}

TEST_CASE("binary snapshot round trip") {
  auto table = test::random_table(8, 3, 2);
  test::TempDir dir("emb");
  table->save_binary(dir.path / "e.bin");
  EmbeddingTable back = EmbeddingTable::load_binary(dir.path / "e.bin");
  CHECK(back.values() == table->values());
  CHECK(back.checksum() == table->checksum());
}
