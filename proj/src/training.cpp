#include "nap/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nap/error.hpp"
#include "nap/rng.hpp"

namespace nap {

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (patience < 1) throw ConfigError("patience must be >= 1");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0))
    throw ConfigError("Adam moment decays must lie in [0, 1)");
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
}

Adam::Adam(const TrainConfig& config, NapModel& shape) : config_(config) {
  for (const auto& t : shape.tensors()) {
    first_.emplace_back(t.values.size(), 0.0);
    second_.emplace_back(t.values.size(), 0.0);
  }
}

void Adam::step(NapModel& model, NapModel& gradient) {
  ++steps_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  auto params = model.tensors();
  auto grads = gradient.tensors();
  for (std::size_t t = 0; t < params.size(); ++t) {
    auto p = params[t].values;
    auto g = grads[t].values;
    auto& m1 = first_[t];
    auto& m2 = second_[t];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m1[i] = b1 * m1[i] + (1.0 - b1) * g[i];
      m2[i] = b2 * m2[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m1[i] / correction1;
      const double v_hat = m2[i] / correction2;
      p[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

RunResult train(NapModel model, const TrainingData& data, const TrainConfig& config) {
  config.validate();
  if (data.train.empty()) throw DataError("training set is empty");
  if (data.validation.empty()) throw DataError("validation set is empty");

  RunResult result;
  result.seed = config.seed;
  Adam adam(config, model);
  Rng shuffle_rng = make_rng(config.seed, "shuffle");
  std::vector<std::size_t> order(data.train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Example> batch;
  batch.reserve(config.batch_size);

  double best = std::numeric_limits<double>::infinity();
  NapModel best_model = model;
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(data.train[order[i]]);
      BatchResult step = loss_and_gradient(model, data.store, batch);
      if (!std::isfinite(step.loss))
        throw NumericError("training diverged: non-finite loss at epoch " + std::to_string(epoch));
      adam.step(model, step.gradient);
      result.step_losses.push_back(step.loss);
      epoch_loss += step.loss;
      ++batches;
    }
    const double val_loss = dataset_loss(model, data.store, data.validation);
    if (!std::isfinite(val_loss))
      throw NumericError("training diverged: non-finite validation loss at epoch " +
                         std::to_string(epoch));
    result.history.push_back({epoch, epoch_loss / static_cast<double>(batches), val_loss});
    result.epochs_run = epoch;
    if (val_loss < best) {
      best = val_loss;
      best_model = model;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }

  result.adam_steps = adam.steps();
  result.best_validation_loss = best;
  result.model = std::move(best_model);
  if (!data.test.empty()) result.test_accuracy = evaluate(result.model, data.store, data.test);
  return result;
}

}  // namespace nap
