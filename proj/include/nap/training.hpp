#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nap/model.hpp"

namespace nap {

struct TrainConfig {
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t patience = 10;
  std::size_t max_epochs = 100;
  std::uint64_t seed = 0;
  std::size_t repetitions = 5;

  void validate() const;
};

/// Train/validation/test examples over a shared review store.
struct TrainingData {
  ReviewStore store;
  std::vector<Example> train;
  std::vector<Example> validation;
  std::vector<Example> test;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;       // mean over the epoch's batches
  double validation_loss = 0.0;  // full validation set, best-so-far model not restored
};

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<EpochRecord> history;
  std::vector<double> step_losses;  // one per Adam step
  std::size_t adam_steps = 0;
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;
  double best_validation_loss = 0.0;
  double test_accuracy = 0.0;
  NapModel model;  // best-validation checkpoint
};

/// Adam with bias correction, one moment pair per parameter tensor.
class Adam {
public:
  Adam(const TrainConfig& config, NapModel& shape);

  void step(NapModel& model, NapModel& gradient);
  std::size_t steps() const { return steps_; }

private:
  TrainConfig config_;
  std::vector<std::vector<double>> first_;
  std::vector<std::vector<double>> second_;
  std::size_t steps_ = 0;
};

/// Mini-batch training with per-epoch shuffling, early stopping on the
/// validation loss and restoration of the best checkpoint. Throws
/// NumericError if a loss becomes non-finite.
RunResult train(NapModel model, const TrainingData& data, const TrainConfig& config);

}  // namespace nap
