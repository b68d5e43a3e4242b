#include "nap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "nap/checkpoint.hpp"
#include "nap/error.hpp"

namespace nap {

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::optional<std::size_t> failed_index;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failed_index || i < *failed_index) {
            failed_index = i;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ModelConfig variant_config(const std::string& kind, const ModelConfig& base) {
  ModelConfig cfg = make_variant(kind, base.neighbors, base.weighting).apply(base);
  return cfg;
}

TrainingData variant_data(const PreparedDataset& dataset, const std::string& kind,
                          const ModelConfig& model_config, std::uint64_t seed) {
  const auto pairs = pairs_for(dataset, model_config.neighbor_scheme, model_config.neighbors);
  return build_training_data(dataset.corpus, pairs, model_config, seed, fusion_features(kind));
}

RunResult run_variant(const PreparedDataset& dataset, const std::string& kind,
                      const ModelConfig& base, const TrainConfig& train_config,
                      std::uint64_t seed) {
  const ModelConfig cfg = variant_config(kind, base);
  const TrainingData data = variant_data(dataset, kind, cfg, seed);
  TrainConfig tc = train_config;
  tc.seed = seed;
  return train(initialize(cfg, seed), data, tc);
}

namespace {

std::pair<double, double> mean_and_stddev(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace

RepeatedRuns run_repetitions(const PreparedDataset& dataset, const std::string& kind,
                             const ModelConfig& base, const TrainConfig& train_config,
                             std::size_t workers) {
  train_config.validate();
  RepeatedRuns out;
  out.kind = kind;
  out.config = variant_config(kind, base);
  out.runs.resize(train_config.repetitions);
  parallel_for(train_config.repetitions, workers, [&](std::size_t r) {
    out.runs[r] = run_variant(dataset, kind, base, train_config, train_config.seed + r);
  });
  std::vector<double> acc;
  for (const auto& run : out.runs) acc.push_back(run.test_accuracy);
  std::tie(out.mean_accuracy, out.stddev_accuracy) = mean_and_stddev(acc);
  return out;
}

// ------------------------------------------------------------------- sweep

SweepGrid default_sweep_grid() {
  SweepGrid grid;
  for (std::size_t k = 1; k <= 10; ++k) grid.neighbors.push_back(k);
  grid.schemes = {NeighborScheme::preceding, NeighborScheme::following,
                  NeighborScheme::surrounding};
  grid.weightings = {WeightingScheme::avg, WeightingScheme::wavg, WeightingScheme::fr,
                     WeightingScheme::sfr};
  grid.gammas = {kDefaultGamma};
  return grid;
}

std::string SweepCell::annotation() const {
  return std::string(to_string(weighting)) + "/" + std::to_string(neighbors);
}

std::pair<std::vector<SweepCell>, std::vector<SkippedCell>> enumerate_cells(const SweepGrid& grid) {
  std::vector<SweepCell> cells;
  std::vector<SkippedCell> skipped;
  for (Variant v : grid.variants) {
    const bool sweeps_gamma = v != Variant::neighbor_only;
    const std::vector<double> gammas = sweeps_gamma ? grid.gammas : std::vector<double>{0.0};
    for (NeighborScheme s : grid.schemes)
      for (std::size_t k : grid.neighbors)
        for (WeightingScheme w : grid.weightings)
          for (double g : gammas) {
            SweepCell cell{v, s, k, w, g};
            std::string reason;
            if (v != Variant::nap && v != Variant::neighbor_only && v != Variant::random_neighbors)
              reason = "variant '" + std::string(to_string(v)) + "' has no context settings";
            else if (k == 0)
              reason = "K must be >= 1";
            else if (s == NeighborScheme::surrounding && k % 2 != 0)
              reason = "surrounding neighbors require an even K";
            else if (v == Variant::random_neighbors && w == WeightingScheme::sfr)
              reason = "SFR cannot be combined with random neighbors";
            else if (!(g >= 0.0 && g <= 1.0))
              reason = "gamma outside [0, 1]";
            if (reason.empty())
              cells.push_back(cell);
            else
              skipped.push_back({cell, std::move(reason)});
          }
  }
  return {std::move(cells), std::move(skipped)};
}

int weighting_rank(WeightingScheme scheme) {
  switch (scheme) {
    case WeightingScheme::avg: return 0;
    case WeightingScheme::wavg: return 1;
    case WeightingScheme::fr: return 2;
    case WeightingScheme::sfr: return 3;
  }
  return 4;
}

std::vector<Alternative> find_alternatives(const CellResult& best,
                                           const std::vector<CellResult>& cells, double delta) {
  std::vector<Alternative> out;
  for (const auto& c : cells) {
    if (c.cell.variant != best.cell.variant) continue;
    if (c.cell.neighbors >= best.cell.neighbors) continue;
    if (weighting_rank(c.cell.weighting) > weighting_rank(best.cell.weighting)) continue;
    const double drop = best.mean_accuracy - c.mean_accuracy;
    if (std::abs(drop) > delta) continue;
    out.push_back({c, drop});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Alternative& a, const Alternative& b) { return a.drop < b.drop; });
  return out;
}

SweepReport run_sweep(const PreparedDataset& dataset, const SweepGrid& grid,
                      const ModelConfig& base, const TrainConfig& train_config, double delta,
                      std::size_t workers) {
  train_config.validate();
  if (!(delta >= 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in [0, 1]");
  SweepReport report;
  report.delta = delta;
  auto [cells, skipped] = enumerate_cells(grid);
  report.skipped = std::move(skipped);

  // pair sets are shared by all cells with the same (scheme, K)
  std::map<std::pair<NeighborScheme, std::size_t>, std::vector<PairRecord>> pair_sets;
  for (const auto& c : cells)
    if (!pair_sets.contains({c.scheme, c.neighbors}))
      pair_sets[{c.scheme, c.neighbors}] = pairs_for(dataset, c.scheme, c.neighbors);

  const std::size_t reps = train_config.repetitions;
  std::vector<double> accuracy(cells.size() * reps, 0.0);
  parallel_for(cells.size() * reps, workers, [&](std::size_t job) {
    const SweepCell& c = cells[job / reps];
    const std::uint64_t seed = train_config.seed + job % reps;
    ModelConfig cfg = base;
    cfg.variant = c.variant;
    cfg.neighbor_scheme = c.scheme;
    cfg.neighbors = c.neighbors;
    cfg.weighting = c.weighting;
    cfg.gamma = c.gamma;
    cfg.feature_dim = 0;
    const auto& pairs = pair_sets.at({c.scheme, c.neighbors});
    const TrainingData data = build_training_data(dataset.corpus, pairs, cfg, seed);
    TrainConfig tc = train_config;
    tc.seed = seed;
    accuracy[job] = train(initialize(cfg, seed), data, tc).test_accuracy;
  });

  for (std::size_t i = 0; i < cells.size(); ++i) {
    CellResult r;
    r.cell = cells[i];
    r.accuracies.assign(accuracy.begin() + i * reps, accuracy.begin() + (i + 1) * reps);
    r.mean_accuracy = mean_and_stddev(r.accuracies).first;
    report.cells.push_back(std::move(r));
  }

  for (Variant v : grid.variants) {
    const CellResult* best = nullptr;
    for (const auto& c : report.cells)
      if (c.cell.variant == v && (!best || c.mean_accuracy > best->mean_accuracy)) best = &c;
    if (!best) continue;
    report.summaries.push_back({v, *best, find_alternatives(*best, report.cells, delta)});
  }
  return report;
}

namespace {

nlohmann::ordered_json cell_json(const SweepCell& c) {
  return {{"variant", to_string(c.variant)},
          {"scheme", to_string(c.scheme)},
          {"K", c.neighbors},
          {"weighting", to_string(c.weighting)},
          {"gamma", c.gamma},
          {"annotation", c.annotation()}};
}

nlohmann::ordered_json result_json(const CellResult& r) {
  auto j = cell_json(r.cell);
  j["accuracies"] = r.accuracies;
  j["mean_accuracy"] = r.mean_accuracy;
  return j;
}

}  // namespace

nlohmann::ordered_json sweep_report_json(const SweepReport& report) {
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& c : report.cells) cells.push_back(result_json(c));
  nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
  for (const auto& s : report.skipped) {
    auto j = cell_json(s.cell);
    j["reason"] = s.reason;
    skipped.push_back(std::move(j));
  }
  nlohmann::ordered_json summaries = nlohmann::ordered_json::array();
  for (const auto& s : report.summaries) {
    nlohmann::ordered_json alts = nlohmann::ordered_json::array();
    for (const auto& a : s.alternatives) {
      auto j = result_json(a.result);
      j["drop"] = a.drop;
      alts.push_back(std::move(j));
    }
    summaries.push_back({{"variant", to_string(s.variant)},
                         {"best", result_json(s.best)},
                         {"alternatives", alts}});
  }
  return {{"delta", report.delta},
          {"cells", cells},
          {"skipped", skipped},
          {"summaries", summaries}};
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void write_sweep_csv(std::ostream& out, const SweepReport& report) {
  out << "variant,scheme,K,weighting,gamma,annotation,mean_accuracy,repetitions\n";
  for (const auto& c : report.cells)
    out << to_string(c.cell.variant) << ',' << to_string(c.cell.scheme) << ','
        << c.cell.neighbors << ',' << to_string(c.cell.weighting) << ','
        << format_number(c.cell.gamma) << ',' << c.cell.annotation() << ','
        << format_number(c.mean_accuracy) << ',' << c.accuracies.size() << '\n';
}

// ----------------------------------------------------------------- exports

void export_embeddings(std::ostream& out, const NapModel& model, const ReviewStore& store,
                       std::span<const Example> examples) {
  const std::size_t m = model.config.kernels;
  out << "pair_id,label";
  for (std::size_t j = 0; j < m; ++j) out << ",h" << j;
  out << '\n';
  for (const auto& ex : examples) {
    const ForwardTrace trace = forward(model, store, ex);
    out << ex.pair_id << ',' << ex.label;
    for (std::size_t j = 0; j < m; ++j) out << ',' << format_number(trace.combined[j]);
    out << '\n';
  }
}

void export_attention(std::ostream& out, const NapModel& model, const ReviewStore& store,
                      std::span<const Example> examples) {
  out << "pair_id,neighbor_index,weight\n";
  if (!model.config.uses_weighting() || model.config.gamma == 1.0) return;
  const bool per_dimension = model.config.weighting == WeightingScheme::fr ||
                             model.config.weighting == WeightingScheme::sfr;
  for (const auto& ex : examples) {
    const ForwardTrace trace = forward(model, store, ex);
    for (std::size_t k = 0; k < model.config.neighbors; ++k) {
      double w = 0.0;
      if (per_dimension) {
        for (std::size_t j = 0; j < trace.c.beta.cols; ++j) w += trace.c.beta(k, j);
        w /= static_cast<double>(trace.c.beta.cols);
      } else {
        w = trace.c.alpha[k];
      }
      out << ex.pair_id << ',' << k << ',' << format_number(w) << '\n';
    }
  }
}

void export_features(std::ostream& out, const PreparedCorpus& corpus) {
  out << "review_id,feature_name,value\n";
  for (const auto& pr : corpus.reviews)
    for (auto name : kFeatureNames) {
      auto it = pr.features.find(std::string(name));
      if (it == pr.features.end()) continue;
      out << pr.review.review_id << ',' << name << ',' << format_number(it->second) << '\n';
    }
}

}  // namespace nap
