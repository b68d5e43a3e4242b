#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nap/dataset.hpp"
#include "nap/model.hpp"
#include "nap/training.hpp"

namespace nap {

/// Runs fn(0..count-1) on up to `workers` threads. Exceptions are rethrown
/// on the caller (the lowest failing index wins, so errors are stable).
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

/// Resolves a variant kind against a base configuration and trains it once.
/// The run seed drives initialization, shuffling and the I+R / I+N draws.
RunResult run_variant(const PreparedDataset& dataset, const std::string& kind,
                      const ModelConfig& base, const TrainConfig& train_config,
                      std::uint64_t seed);

/// Example set for one variant; exposed for evaluation and exports.
TrainingData variant_data(const PreparedDataset& dataset, const std::string& kind,
                          const ModelConfig& model_config, std::uint64_t seed);

/// The model configuration a variant kind implies for a base configuration.
ModelConfig variant_config(const std::string& kind, const ModelConfig& base);

struct RepeatedRuns {
  std::string kind;
  ModelConfig config;
  std::vector<RunResult> runs;  // repetition r uses seed base + r
  double mean_accuracy = 0.0;
  double stddev_accuracy = 0.0;
};

RepeatedRuns run_repetitions(const PreparedDataset& dataset, const std::string& kind,
                             const ModelConfig& base, const TrainConfig& train_config,
                             std::size_t workers = 1);

// ------------------------------------------------------------------- sweep

struct SweepGrid {
  std::vector<std::size_t> neighbors;
  std::vector<NeighborScheme> schemes;
  std::vector<WeightingScheme> weightings;
  std::vector<double> gammas;
  std::vector<Variant> variants{Variant::nap};
};

/// K = 1..10, P/F/S, all four weightings, gamma = 0.5, NAP only.
SweepGrid default_sweep_grid();

struct SweepCell {
  Variant variant = Variant::nap;
  NeighborScheme scheme = NeighborScheme::surrounding;
  std::size_t neighbors = 1;
  WeightingScheme weighting = WeightingScheme::avg;
  double gamma = kDefaultGamma;

  /// Table-style "Weighting Scheme/#Neighbors", e.g. "WAVG/8".
  std::string annotation() const;
};

struct SkippedCell {
  SweepCell cell;
  std::string reason;
};

/// Valid cells in grid order plus the skipped ones with reasons.
/// Gamma is not swept for neighbor-only cells (it is pinned to 0).
std::pair<std::vector<SweepCell>, std::vector<SkippedCell>> enumerate_cells(const SweepGrid& grid);

struct CellResult {
  SweepCell cell;
  std::vector<double> accuracies;
  double mean_accuracy = 0.0;
};

struct Alternative {
  CellResult result;
  double drop = 0.0;
};

struct VariantSummary {
  Variant variant = Variant::nap;
  CellResult best;
  std::vector<Alternative> alternatives;  // ordered by drop
};

struct SweepReport {
  std::vector<CellResult> cells;
  std::vector<SkippedCell> skipped;
  std::vector<VariantSummary> summaries;
  double delta = 0.01;
};

/// Weighting complexity rank: AVG < WAVG < FR < SFR.
int weighting_rank(WeightingScheme scheme);

/// Comparable alternatives of `best`: strictly smaller K, no more complex
/// weighting, accuracy drop at most delta.
std::vector<Alternative> find_alternatives(const CellResult& best,
                                           const std::vector<CellResult>& cells, double delta);

SweepReport run_sweep(const PreparedDataset& dataset, const SweepGrid& grid,
                      const ModelConfig& base, const TrainConfig& train_config,
                      double delta = 0.01, std::size_t workers = 1);

nlohmann::ordered_json sweep_report_json(const SweepReport& report);
void write_sweep_csv(std::ostream& out, const SweepReport& report);

// ----------------------------------------------------------------- exports

/// Header "pair_id,label,h0,...,h{m-1}"; one row of h_hat per example.
void export_embeddings(std::ostream& out, const NapModel& model, const ReviewStore& store,
                       std::span<const Example> examples);

/// Rows "pair_id,neighbor_index,weight". AVG/WAVG write alpha; FR/SFR write
/// each neighbor's beta averaged over the m dimensions.
void export_attention(std::ostream& out, const NapModel& model, const ReviewStore& store,
                      std::span<const Example> examples);

/// Rows "review_id,feature_name,value".
void export_features(std::ostream& out, const PreparedCorpus& corpus);

/// Shortest round-trip text of a double.
std::string format_number(double value);

}  // namespace nap
