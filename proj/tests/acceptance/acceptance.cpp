// One PASS/FAIL line per acceptance criterion. With no arguments every
// criterion runs; otherwise the arguments name criteria (1..9) or
// "monotonicity". Exit status is non-zero if any selected check fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "nap/baselines.hpp"
#include "nap/cli.hpp"
#include "nap/context.hpp"
#include "nap/dataset.hpp"
#include "nap/experiment.hpp"
#include "nap/synthetic.hpp"
#include "support.hpp"

using namespace nap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

constexpr std::array kWeightings{WeightingScheme::avg, WeightingScheme::wavg, WeightingScheme::fr,
                                 WeightingScheme::sfr};
constexpr std::array kNeighborSchemes{NeighborScheme::preceding, NeighborScheme::following,
                                      NeighborScheme::surrounding};

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double range = 2.0) {
  std::uniform_real_distribution<double> u(-range, range);
  Matrix m(r, c);
  for (auto& v : m.data) v = u(rng);
  return m;
}

WeightingParams random_params(WeightingScheme s, std::size_t k, std::size_t m, Rng& rng) {
  WeightingParams p(s, k, m);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (auto& v : p.query) v = u(rng);
  for (auto& v : p.regression.data) v = u(rng);
  return p;
}

// ------------------------------------------------------------- criteria

Outcome gradient_oracle() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string worst_name;
  std::size_t tensors = 0;
  for (auto w : kWeightings) {
    ModelConfig cfg = test::tiny_config(w);
    ReviewStore store = test::random_store(6, 5, 30, cfg.embedding_dim, cfg.max_len, 1);
    auto examples = test::chain_examples(2, cfg.neighbors, 1);
    NapModel model = initialize(cfg, 1);
    for (auto& b : model.conv.bias) b = 0.1;
    model.output_bias[0] = -0.2;
    for (const auto& t : test::check_gradients(model, store, examples)) {
      ++tensors;
      if (t.max_relative_error >= worst) {
        worst = t.max_relative_error;
        worst_name = std::string(to_string(w)) + " " + t.name;
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-4 && seconds < 10.0 && tensors == 4 + 5 + 5 + 5,
          std::to_string(tensors) + " tensors, max rel err " + fmt(worst) + " (" + worst_name +
              "), " + fmt(seconds, 2) + " s"};
}

Outcome reduction_identities() {
  Rng rng = make_rng(2, "acceptance");
  double worst = 0.0;
  bool exact = true;
  for (int trial = 0; trial < 200; ++trial) {
    Matrix c = random_matrix(6, 5, rng);
    auto avg = weight_avg(c).values;
    auto wavg = weight_wavg(c, std::vector<double>(5, 0.0)).values;
    auto fr = weight_fr(c, Matrix(6, 5)).values;
    for (std::size_t j = 0; j < 5; ++j)
      worst = std::max({worst, std::abs(wavg[j] - avg[j]), std::abs(fr[j] - avg[j])});

    Matrix one = random_matrix(1, 5, rng);
    for (auto w : kWeightings)
      for (auto s : {NeighborScheme::preceding, NeighborScheme::following}) {
        auto got = build_context(one, random_params(w, 1, 5, rng), s).values;
        exact = exact && got == one.data;
      }
    Matrix reg = random_matrix(1, 5, rng);
    exact = exact && weight_sfr(one, reg, NeighborScheme::preceding).values == weight_fr(one, reg).values;
  }
  return {worst <= 1e-6 && exact,
          "max |WAVG-AVG|,|FR-AVG| = " + fmt(worst) + (exact ? ", K=1 exact" : ", K=1 NOT exact")};
}

Outcome normalization() {
  Rng rng = make_rng(3, "acceptance");
  double worst = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const std::size_t k = 1 + draw % 10, m = 1 + draw % 7;
    Matrix c = random_matrix(k, m, rng, 3.0);
    auto wavg = build_context(c, random_params(WeightingScheme::wavg, k, m, rng), NeighborScheme::preceding);
    double sum = 0.0;
    for (double a : wavg.alpha) sum += a;
    worst = std::max(worst, std::abs(sum - 1.0));
    for (auto w : {WeightingScheme::fr, WeightingScheme::sfr}) {
      auto e = build_context(c, random_params(w, k, m, rng), NeighborScheme::following);
      for (std::size_t j = 0; j < m; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < k; ++i) col += e.beta(i, j);
        worst = std::max(worst, std::abs(col - 1.0));
      }
    }
  }
  return {worst <= 1e-6, "1000 draws, max |sum - 1| = " + fmt(worst)};
}

Outcome parameter_counts() {
  const std::vector<std::pair<std::size_t, std::size_t>> shapes{{100, 4}, {100, 10}, {3, 2}};
  bool ok = true;
  std::string detail;
  for (auto [m, k] : shapes) {
    const std::map<WeightingScheme, std::size_t> expected{{WeightingScheme::avg, 0},
                                                          {WeightingScheme::wavg, m},
                                                          {WeightingScheme::fr, m * k},
                                                          {WeightingScheme::sfr, m * k}};
    for (auto [w, want] : expected) {
      const std::size_t built = WeightingParams(w, k, m).parameter_count();
      const std::size_t declared = weighting_parameter_count(w, m, k);
      if (built != want || declared != want) {
        ok = false;
        detail += std::string(to_string(w)) + "(" + std::to_string(m) + "," + std::to_string(k) +
                  ")=" + std::to_string(built) + " ";
      }
    }
  }
  return {ok, ok ? "AVG 0, WAVG m, FR mK, SFR mK for (100,4), (100,10), (3,2)" : detail};
}

PreparedDataset synthetic_dataset(const SyntheticConfig& gen, std::size_t embedding_dim,
                                  std::size_t min_reviews) {
  PipelineConfig p;
  p.filter.min_reviews = min_reviews;
  p.embedding_dim = embedding_dim;
  p.seed = gen.seed;
  PreparedDataset ds;
  ds.corpus = prepare_corpus(generate_synthetic_corpus(gen).corpus, p);
  ds.seed = gen.seed;
  ds.pairs = assemble_pairs(ds.corpus, ds.scheme, ds.neighbors, true, gen.seed);
  return ds;
}

Outcome variant_equivalence() {
  SyntheticConfig gen;
  gen.items = 6;
  gen.reviews_per_item = 80;
  gen.vocabulary_size = 80;
  gen.seed = 5;
  PreparedDataset ds = synthetic_dataset(gen, 16, 10);
  ModelConfig base;
  base.embedding_dim = 16;
  base.kernels = 8;
  base.max_len = 40;
  ModelConfig nap = base;
  nap.gamma = 1.0;
  TrainingData data = variant_data(ds, "I+S", nap, 5);
  if (data.train.size() < 64) return {false, "only " + std::to_string(data.train.size()) + " pairs"};
  data.train.resize(64);
  TrainConfig tc;
  tc.max_epochs = 5;
  tc.patience = 5;
  tc.seed = 5;
  RunResult a = train(initialize(nap, 5), data, tc);
  RunResult b = train(initialize(variant_config("I", base), 5), data, tc);
  double worst = a.step_losses.size() == b.step_losses.size() ? 0.0 : 1.0;
  for (std::size_t i = 0; i < std::min(a.step_losses.size(), b.step_losses.size()); ++i)
    worst = std::max(worst, std::abs(a.step_losses[i] - b.step_losses[i]));
  return {worst <= 1e-12 && a.step_losses.size() == 5,
          std::to_string(a.step_losses.size()) + " steps over 5 epochs, max |diff| = " + fmt(worst)};
}

// Settings of the synthetic contextual experiment.
SyntheticConfig experiment_generator(double rho, std::uint64_t seed) {
  SyntheticConfig gen;
  gen.items = 50;
  gen.reviews_per_item = 120;
  gen.vocabulary_size = 100;
  gen.rho = rho;
  gen.seed = seed;
  return gen;
}

ModelConfig experiment_model() {
  ModelConfig m;
  m.embedding_dim = 32;
  m.kernels = 32;
  m.max_len = 40;
  m.neighbors = 4;
  m.weighting = WeightingScheme::avg;
  return m;
}

TrainConfig experiment_training(std::uint64_t seed) {
  TrainConfig tc;
  tc.learning_rate = 0.005;
  tc.max_epochs = 30;
  tc.patience = 10;
  tc.seed = seed;
  return tc;
}

std::map<std::string, double> experiment_means(double rho, const std::vector<std::string>& kinds) {
  std::map<std::string, double> mean;
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  for (auto seed : seeds) {
    PreparedDataset ds = synthetic_dataset(experiment_generator(rho, seed), 32, 100);
    for (const auto& kind : kinds)
      mean[kind] += run_variant(ds, kind, experiment_model(), experiment_training(seed), seed)
                        .test_accuracy / static_cast<double>(seeds.size());
  }
  return mean;
}

Outcome synthetic_experiment() {
  const auto start = std::chrono::steady_clock::now();
  auto acc = experiment_means(0.8, {"I", "I+S", "I+N", "I+R"});
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double gain = acc["I+S"] - acc["I"];
  const bool ok = gain >= 0.05 && acc["I+N"] <= acc["I"] && acc["I+R"] <= acc["I"] && seconds < 300.0;
  return {ok, "I " + fmt(acc["I"], 3) + ", I+S " + fmt(acc["I+S"], 3) + " (+" + fmt(100 * gain, 3) +
                  " pts), I+N " + fmt(acc["I+N"], 3) + ", I+R " + fmt(acc["I+R"], 3) + ", " +
                  fmt(seconds, 3) + " s"};
}

Outcome baseline_oracles() {
  auto review = [](std::string date, std::vector<std::string> tokens) {
    Review r;
    r.date = parse_date(date);
    r.tokens = std::move(tokens);
    return r;
  };
  std::vector<std::string> failures;
  std::vector<Review> ord{review("2021-01-03", {"a"}), review("2021-01-03", {"b"}),
                          review("2021-01-01", {"c"})};
  if (order_feature(ord, OrderKind::date) != std::vector<double>{1.0, 1.0, 1.0 / 3.0})
    failures.push_back("ORD");

  std::vector<Review> same(4, review("2021-01-01", {"same", "text", "here"}));
  for (double v : conformity_feature(same))
    if (std::abs(v) > 1e-9) failures.push_back("CON identical");

  Rng rng = make_rng(7, "acceptance");
  std::uniform_int_distribution<int> size(1, 8), len(1, 12), word(0, 25);
  bool con_ok = true, ent_ok = true;
  for (int item = 0; item < 1000; ++item) {
    std::vector<Review> rs;
    std::set<std::string> vocab;
    const int n = size(rng);
    for (int r = 0; r < n; ++r) {
      std::vector<std::string> tokens;
      for (int t = len(rng); t > 0; --t) tokens.push_back(std::string(1, static_cast<char>('a' + word(rng))));
      vocab.insert(tokens.begin(), tokens.end());
      rs.push_back(review("2021-01-01", tokens));
    }
    for (double v : conformity_feature(rs)) con_ok = con_ok && v >= 0.0;
    double total = 0.0;
    for (double v : entropy_feature(rs)) total += v;
    ent_ok = ent_ok && total == static_cast<double>(vocab.size());
  }
  if (!con_ok) failures.push_back("CON >= 0");
  if (!ent_ok) failures.push_back("ENT telescoping");

  const auto lex = SentimentLexicon::parse("good\tpositive\nbad\tnegative\n");
  for (const auto& tokens : std::vector<std::vector<std::string>>{{"good"}, {"meh"}, {"bad", "bad"}}) {
    std::vector<Review> rs(5, review("2021-01-01", tokens));
    for (double v : polarity_feature(rs, lex))
      if (v != 0.0) failures.push_back("POL shared polarity");
  }
  std::string detail = "ORD, CON, ENT, POL oracles";
  for (const auto& f : failures) detail += "; failed " + f;
  return {failures.empty(), detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome pipeline_determinism() {
  test::TempDir dir("acceptance");
  const std::string corpus = (dir.path / "corpus.jsonl").string();
  std::ostringstream out, err;
  auto cli = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "nap");
    return run_cli(args, out, err);
  };
  if (cli({"gen-synthetic", "--out", corpus, "--items", "6", "--reviews-per-item", "60",
           "--vocabulary-size", "80", "--seed", "11"}) != kExitSuccess)
    return {false, "gen-synthetic failed: " + err.str()};
  std::vector<double> accuracies;
  for (const std::string run : {"a", "b"}) {
    const std::string data = (dir.path / ("data-" + run)).string();
    if (cli({"preprocess", "--input", corpus, "--out", data, "--min-reviews", "20",
             "--embedding-dim", "16", "--seed", "11"}) != kExitSuccess)
      return {false, "preprocess failed: " + err.str()};
    const std::string result = (dir.path / ("run-" + run)).string();
    if (cli({"train", "--dataset", data, "--out", result, "--variant", "I+S", "--kernels", "8",
             "--max-len", "40", "--max-epochs", "3", "--repetitions", "1", "--seed", "11"}) !=
        kExitSuccess)
      return {false, "train failed: " + err.str()};
    accuracies.push_back(
        nlohmann::json::parse(slurp(fs::path(result) / "results.json"))["mean_test_accuracy"].get<double>());
  }
  std::size_t identical = 0;
  const std::vector<std::string> files{DatasetFiles::vocabulary, DatasetFiles::embeddings,
                                       DatasetFiles::reviews, DatasetFiles::pairs, DatasetFiles::info};
  for (const auto& f : files) {
    const std::string a = slurp(dir.path / "data-a" / f), b = slurp(dir.path / "data-b" / f);
    if (!a.empty() && a == b) ++identical;
  }
  return {identical == files.size() && accuracies[0] == accuracies[1],
          std::to_string(identical) + "/" + std::to_string(files.size()) +
              " dataset files byte-identical, test accuracy " + fmt(accuracies[0]) + " vs " +
              fmt(accuracies[1])};
}

Outcome overfit_sanity() {
  struct Setup {
    std::string name;
    ModelConfig config;
  };
  std::vector<Setup> setups;
  ModelConfig base;
  base.embedding_dim = 8;
  base.kernels = 16;
  base.window = 2;
  base.max_len = 8;
  base.neighbors = 2;
  for (auto w : kWeightings)
    for (auto s : kNeighborSchemes) {
      ModelConfig c = base;
      c.weighting = w;
      c.neighbor_scheme = s;
      setups.push_back({std::string(to_string(w)) + "/" + std::string(to_string(s)), c});
    }
  ModelConfig only = base;
  only.variant = Variant::neighbor_only;
  only.gamma = 0.0;
  setups.push_back({"neighbor-only", only});
  ModelConfig ind = base;
  ind.variant = Variant::independent;
  ind.gamma = 1.0;
  setups.push_back({"independent", ind});

  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, cfg] : setups) {
    TrainingData data;
    data.store = test::random_store(8 * 3, 6, 50, cfg.embedding_dim, cfg.max_len, 9);
    data.train = test::chain_examples(8, cfg.neighbors, 9);
    for (std::size_t i = 0; i < data.train.size(); ++i) data.train[i].label = static_cast<int>(i % 2);
    data.validation = data.train;
    TrainConfig tc;
    tc.learning_rate = 0.01;
    tc.max_epochs = 500;
    tc.patience = 500;
    tc.seed = 9;
    RunResult r = train(initialize(cfg, 9), data, tc);
    std::vector<int> labels;
    for (const auto& ex : data.train) labels.push_back(ex.label);
    const double ce = cross_entropy(predict_examples(r.model, data.store, data.train), labels);
    if (ce >= worst) {
      worst = ce;
      worst_name = name;
    }
  }
  return {worst < 0.01, std::to_string(setups.size()) + " configurations, worst cross-entropy " +
                            fmt(worst) + " (" + worst_name + ")"};
}

Outcome monotonicity() {
  std::vector<double> gains;
  std::string detail = "I+S - I:";
  for (double rho : {0.0, 0.5, 1.0}) {
    auto acc = experiment_means(rho, {"I", "I+S"});
    gains.push_back(acc["I+S"] - acc["I"]);
    detail += " rho=" + fmt(rho, 2) + " " + fmt(100 * gains.back(), 3) + " pts";
  }
  return {gains[0] <= gains[1] && gains[1] <= gains[2], detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::pair<std::string, std::function<Outcome()>>>> checks{
      {"1", {"gradient oracle", gradient_oracle}},
      {"2", {"reduction identities", reduction_identities}},
      {"3", {"attention normalization", normalization}},
      {"4", {"parameter counts", parameter_counts}},
      {"5", {"gamma=1 equals variant I", variant_equivalence}},
      {"6", {"synthetic contextual experiment", synthetic_experiment}},
      {"7", {"baseline oracles", baseline_oracles}},
      {"8", {"pipeline determinism", pipeline_determinism}},
      {"9", {"overfit sanity", overfit_sanity}},
      {"monotonicity", {"synthetic monotonicity in rho", monotonicity}},
  };
  std::vector<std::string> selected(argv + 1, argv + argc);
  if (selected.empty())
    for (const auto& c : checks)
      if (c.first != "monotonicity") selected.push_back(c.first);

  int failed = 0;
  for (const auto& id : selected) {
    auto it = std::ranges::find(checks, id, [](const auto& c) { return c.first; });
    if (it == checks.end()) {
      std::cerr << "unknown criterion '" << id << "'\n";
      return 1;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << id << "] " << it->second.first << ": "
              << o.detail << std::endl;
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
