#pragma once

#include <filesystem>

#include "json.hpp"
#include "nap/model.hpp"
#include "nap/training.hpp"

namespace nap {

inline constexpr int kCheckpointVersion = 1;

nlohmann::ordered_json to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const TrainConfig& config);

/// Checkpoint layout (JSON, version 1):
///   {"format": "nap-checkpoint", "version": 1, "config": {...},
///    "tensors": [{"name": ..., "shape": [...], "values": [...]}, ...]}
/// Values are written with round-trip precision.
nlohmann::ordered_json checkpoint_json(NapModel& model);
NapModel model_from_checkpoint_json(const nlohmann::json& j);

void save_checkpoint(const std::filesystem::path& path, NapModel& model);
NapModel load_checkpoint(const std::filesystem::path& path);

/// {variant, scheme, weighting, K, gamma, seed, epochs, test_accuracy, history, ...}
nlohmann::ordered_json run_result_json(const RunResult& result, const ModelConfig& config,
                                       const std::string& variant_kind);

}  // namespace nap
