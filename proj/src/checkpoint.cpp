#include "nap/checkpoint.hpp"

#include <fstream>

#include "nap/error.hpp"

namespace nap {

nlohmann::ordered_json to_json(const ModelConfig& c) {
  return {{"embedding_dim", c.embedding_dim},
          {"window", c.window},
          {"kernels", c.kernels},
          {"neighbors", c.neighbors},
          {"max_len", c.max_len},
          {"feature_dim", c.feature_dim},
          {"neighbor_scheme", to_string(c.neighbor_scheme)},
          {"weighting", to_string(c.weighting)},
          {"gamma", c.gamma},
          {"weight_decay", c.weight_decay},
          {"variant", to_string(c.variant)}};
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  try {
    ModelConfig c;
    c.embedding_dim = j.at("embedding_dim").get<std::size_t>();
    c.window = j.at("window").get<std::size_t>();
    c.kernels = j.at("kernels").get<std::size_t>();
    c.neighbors = j.at("neighbors").get<std::size_t>();
    c.max_len = j.at("max_len").get<std::size_t>();
    c.feature_dim = j.at("feature_dim").get<std::size_t>();
    c.neighbor_scheme = parse_neighbor_scheme(j.at("neighbor_scheme").get<std::string>());
    c.weighting = parse_weighting_scheme(j.at("weighting").get<std::string>());
    c.gamma = j.at("gamma").get<double>();
    c.weight_decay = j.at("weight_decay").get<double>();
    c.variant = parse_variant(j.at("variant").get<std::string>());
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad model config: ") + e.what());
  }
}

nlohmann::ordered_json to_json(const TrainConfig& c) {
  return {{"batch_size", c.batch_size}, {"learning_rate", c.learning_rate},
          {"beta1", c.beta1},           {"beta2", c.beta2},
          {"epsilon", c.epsilon},       {"patience", c.patience},
          {"max_epochs", c.max_epochs}, {"seed", c.seed},
          {"repetitions", c.repetitions}};
}

nlohmann::ordered_json checkpoint_json(NapModel& model) {
  nlohmann::ordered_json j;
  j["format"] = "nap-checkpoint";
  j["version"] = kCheckpointVersion;
  j["config"] = to_json(model.config);
  auto& tensors = j["tensors"] = nlohmann::ordered_json::array();
  for (const auto& t : model.tensors()) {
    tensors.push_back({{"name", t.name},
                       {"shape", t.shape},
                       {"values", std::vector<double>(t.values.begin(), t.values.end())}});
  }
  return j;
}

NapModel model_from_checkpoint_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "nap-checkpoint") throw DataError("not a checkpoint");
    if (j.at("version").get<int>() != kCheckpointVersion)
      throw DataError("unsupported checkpoint version " + j.at("version").dump());
    NapModel model = NapModel::zeros(model_config_from_json(j.at("config")));
    auto tensors = model.tensors();
    const auto& stored = j.at("tensors");
    if (stored.size() != tensors.size())
      throw DataError("checkpoint has " + std::to_string(stored.size()) + " tensors, expected " +
                      std::to_string(tensors.size()));
    for (const auto& entry : stored) {
      auto name = entry.at("name").get<std::string>();
      auto it = std::find_if(tensors.begin(), tensors.end(),
                             [&](const NamedTensor& t) { return t.name == name; });
      if (it == tensors.end()) throw DataError("unexpected tensor '" + name + "'");
      if (entry.at("shape").get<std::vector<std::size_t>>() != it->shape)
        throw DataError("shape mismatch for tensor '" + name + "'");
      auto values = entry.at("values").get<std::vector<double>>();
      if (values.size() != it->values.size()) throw DataError("size mismatch for '" + name + "'");
      std::copy(values.begin(), values.end(), it->values.begin());
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, NapModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out << checkpoint_json(model).dump() << '\n';
}

NapModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read checkpoint " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint " + path.string() + ": " + e.what());
  }
  return model_from_checkpoint_json(j);
}

nlohmann::ordered_json run_result_json(const RunResult& r, const ModelConfig& config,
                                       const std::string& variant_kind) {
  nlohmann::ordered_json history = nlohmann::ordered_json::array();
  for (const auto& e : r.history)
    history.push_back(
        {{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"validation_loss", e.validation_loss}});
  return {{"variant", variant_kind},
          {"scheme", to_string(config.neighbor_scheme)},
          {"weighting", to_string(config.weighting)},
          {"K", config.neighbors},
          {"gamma", config.gamma},
          {"seed", r.seed},
          {"epochs", r.epochs_run},
          {"best_epoch", r.best_epoch},
          {"adam_steps", r.adam_steps},
          {"best_validation_loss", r.best_validation_loss},
          {"test_accuracy", r.test_accuracy},
          {"history", history}};
}

}  // namespace nap
