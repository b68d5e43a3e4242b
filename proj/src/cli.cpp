#include "nap/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"
#include "nap/checkpoint.hpp"
#include "nap/config.hpp"
#include "nap/dataset.hpp"
#include "nap/error.hpp"
#include "nap/experiment.hpp"
#include "nap/manifest.hpp"
#include "nap/synthetic.hpp"

namespace nap {

namespace {

namespace fs = std::filesystem;

struct Key {
  std::string name;
  std::string fallback;  // empty: optional, or required when listed as such
  std::string help;
};

const std::vector<Key> kModelKeys = {
    {"variant", "I+S", "variant kind: I, P, F, S, I+P, I+F, I+S, I+R, I+N, I+ORD_D, ..."},
    {"weighting", "AVG", "weighting scheme: AVG, WAVG, FR, SFR"},
    {"K", "", "number of neighbors (default: the dataset's)"},
    {"scheme", "", "neighbor scheme P/F/S for I, I+R, I+N (default: the dataset's)"},
    {"gamma", "0.5", "review/context mixing weight"},
    {"window", "3", "convolution window length l"},
    {"kernels", "100", "number of convolution kernels m"},
    {"max_len", "200", "reviews are truncated/padded to this many tokens"},
    {"weight_decay", "0.0005", "L2 penalty on the convolution kernels"},
};

const std::vector<Key> kTrainKeys = {
    {"batch_size", "64", "mini-batch size"},
    {"learning_rate", "0.001", "Adam learning rate"},
    {"beta1", "0.9", "Adam beta1"},
    {"beta2", "0.999", "Adam beta2"},
    {"epsilon", "1e-8", "Adam epsilon"},
    {"patience", "10", "early-stopping patience in epochs"},
    {"max_epochs", "100", "epoch limit"},
    {"repetitions", "5", "independent runs; run r uses seed + r"},
    {"seed", "0", "base seed"},
    {"workers", "1", "parallel runs"},
};

struct Command {
  std::string name;
  std::string description;
  std::vector<Key> keys;
  std::vector<std::string> required;
  std::function<int(const Settings&, std::ostream&, std::ostream&)> run;
};

std::string dashed(std::string name) {
  std::ranges::replace(name, '_', '-');
  return name;
}

std::vector<Key> join(std::initializer_list<std::vector<Key>> parts) {
  std::vector<Key> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// ------------------------------------------------------------- helpers

ModelConfig model_config(const Settings& s, const PreparedDataset& ds) {
  ModelConfig cfg;
  cfg.embedding_dim = ds.corpus.table->dim();
  cfg.weighting = parse_weighting_scheme(s.get_string("weighting"));
  cfg.neighbors = s.get_optional("K") ? s.get_size("K") : ds.neighbors;
  cfg.neighbor_scheme =
      s.get_optional("scheme") ? parse_neighbor_scheme(s.get_string("scheme")) : ds.scheme;
  cfg.gamma = s.get_double("gamma");
  cfg.window = s.get_size("window");
  cfg.kernels = s.get_size("kernels");
  cfg.max_len = s.get_size("max_len");
  cfg.weight_decay = s.get_double("weight_decay");
  return cfg;
}

TrainConfig train_config(const Settings& s) {
  TrainConfig tc;
  tc.batch_size = s.get_size("batch_size");
  tc.learning_rate = s.get_double("learning_rate");
  tc.beta1 = s.get_double("beta1");
  tc.beta2 = s.get_double("beta2");
  tc.epsilon = s.get_double("epsilon");
  tc.patience = s.get_size("patience");
  tc.max_epochs = s.get_size("max_epochs");
  tc.repetitions = s.get_size("repetitions");
  tc.seed = s.get_u64("seed");
  tc.validate();
  return tc;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  open_output(path) << j.dump(2) << '\n';
}

const std::vector<Example>& split_examples(const TrainingData& data, Partition p) {
  switch (p) {
    case Partition::train: return data.train;
    case Partition::validation: return data.validation;
    case Partition::test: break;
  }
  return data.test;
}

nlohmann::ordered_json checkpoint_with_meta(NapModel& model, const std::string& kind,
                                            std::uint64_t seed) {
  auto j = checkpoint_json(model);
  j["kind"] = kind;
  j["seed"] = seed;
  return j;
}

struct LoadedCheckpoint {
  NapModel model;
  std::string kind;
  std::uint64_t seed = 0;
};

LoadedCheckpoint read_checkpoint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read checkpoint " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint " + path.string() + ": " + e.what());
  }
  LoadedCheckpoint out;
  out.model = model_from_checkpoint_json(j);
  out.kind = j.value("kind", std::string("I+S"));
  out.seed = j.value("seed", std::uint64_t{0});
  return out;
}

// ------------------------------------------------------------ commands

int cmd_gen_synthetic(const Settings& s, std::ostream& out, std::ostream&) {
  SyntheticConfig cfg;
  cfg.items = s.get_size("items");
  cfg.reviews_per_item = s.get_size("reviews_per_item");
  cfg.vocabulary_size = s.get_size("vocabulary_size");
  cfg.rho = s.get_double("rho");
  cfg.quality_signal = s.get_double("quality_signal");
  cfg.context_window = s.get_size("context_window");
  cfg.min_tokens = s.get_size("min_tokens");
  cfg.max_tokens = s.get_size("max_tokens");
  cfg.topic_share = s.get_double("topic_share");
  cfg.clear_share = s.get_double("clear_share");
  cfg.seed = s.get_u64("seed");
  const fs::path path = s.get_string("out");
  const auto corpus = generate_synthetic_corpus(cfg);
  {
    auto file = open_output(path);
    write_corpus_jsonl(file, corpus.corpus);
  }
  Manifest m{"gen-synthetic", s, {{"seed", cfg.seed}}, {}, {path.generic_string()}};
  m.write(path.string() + ".manifest.json");
  out << "wrote " << corpus.corpus.size() << " items to " << path.string() << '\n';
  return kExitSuccess;
}

int cmd_preprocess(const Settings& s, std::ostream& out, std::ostream&) {
  PipelineConfig cfg;
  cfg.filter.min_reviews = s.get_size("min_reviews");
  if (auto d = s.get_optional("early_cutoff")) cfg.filter.early_cutoff = parse_date(*d);
  if (auto d = s.get_optional("late_cutoff")) cfg.filter.late_cutoff = parse_date(*d);
  cfg.filter.early_month_min_reviews = s.get_size("early_month_min_reviews");
  cfg.fractions = {s.get_double("train_fraction"), s.get_double("validation_fraction"),
                   s.get_double("test_fraction")};
  cfg.max_terms = s.get_size("max_terms");
  cfg.embedding_dim = s.get_size("embedding_dim");
  if (auto p = s.get_optional("embeddings")) cfg.embeddings_path = *p;
  if (auto p = s.get_optional("lexicon")) cfg.lexicon_path = *p;
  cfg.scheme = parse_neighbor_scheme(s.get_string("scheme"));
  cfg.neighbors = s.get_size("K");
  cfg.balance = s.get_bool("balance");
  cfg.seed = s.get_u64("seed");
  if (cfg.neighbors == 0) throw ConfigError("K must be >= 1");
  if (cfg.scheme == NeighborScheme::surrounding && cfg.neighbors % 2 != 0)
    throw ConfigError("surrounding neighbors require an even K, got " +
                      std::to_string(cfg.neighbors));

  const fs::path input = s.get_string("input");
  const fs::path dir = s.get_string("out");
  PreparedDataset ds;
  ds.corpus = prepare_corpus(group_into_items(read_corpus_jsonl(input)), cfg);
  ds.scheme = cfg.scheme;
  ds.neighbors = cfg.neighbors;
  ds.balanced = cfg.balance;
  ds.seed = cfg.seed;
  ds.pairs = assemble_pairs(ds.corpus, cfg.scheme, cfg.neighbors, cfg.balance, cfg.seed);
  write_dataset(dir, ds);

  Manifest m{"preprocess", s, {{"seed", cfg.seed}}, {input}, {}};
  if (cfg.embeddings_path) m.inputs.push_back(*cfg.embeddings_path);
  if (cfg.lexicon_path) m.inputs.push_back(*cfg.lexicon_path);
  for (auto name : {DatasetFiles::vocabulary, DatasetFiles::embeddings, DatasetFiles::reviews,
                    DatasetFiles::pairs, DatasetFiles::info})
    m.outputs.push_back((dir / name).generic_string());
  m.write(dir / "manifest.json");
  out << "prepared " << ds.corpus.items.size() << " items, " << ds.corpus.reviews.size()
      << " reviews, " << ds.pairs.size() << " pairs, vocabulary " << ds.corpus.vocabulary.size()
      << '\n';
  return kExitSuccess;
}

int cmd_train(const Settings& s, std::ostream& out, std::ostream&) {
  const fs::path dataset_dir = s.get_string("dataset");
  const fs::path dir = s.get_string("out");
  const PreparedDataset ds = read_dataset(dataset_dir);
  const std::string kind = s.get_string("variant");
  const ModelConfig base = model_config(s, ds);
  const TrainConfig tc = train_config(s);

  auto runs = run_repetitions(ds, kind, base, tc, s.get_size("workers"));

  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  Manifest m{"train", s, {{"base_seed", tc.seed}}, {dataset_dir}, {}};
  m.seeds["run_seeds"] = nlohmann::ordered_json::array();
  auto summary = open_output(dir / "summary.csv");
  auto history = open_output(dir / "history.csv");
  summary << "repetition,seed,test_accuracy,best_epoch,epochs_run,best_validation_loss\n";
  history << "repetition,epoch,train_loss,validation_loss\n";
  for (std::size_t r = 0; r < runs.runs.size(); ++r) {
    auto& run = runs.runs[r];
    results.push_back(run_result_json(run, runs.config, kind));
    m.seeds["run_seeds"].push_back(run.seed);
    summary << r << ',' << run.seed << ',' << format_number(run.test_accuracy) << ','
            << run.best_epoch << ',' << run.epochs_run << ','
            << format_number(run.best_validation_loss) << '\n';
    for (const auto& e : run.history)
      history << r << ',' << e.epoch << ',' << format_number(e.train_loss) << ','
              << format_number(e.validation_loss) << '\n';
    const fs::path ckpt = dir / ("checkpoint-r" + std::to_string(r) + ".json");
    write_json(ckpt, checkpoint_with_meta(run.model, kind, run.seed));
    m.outputs.push_back(ckpt.generic_string());
  }
  write_json(dir / "results.json", {{"variant", kind},
                                    {"model", to_json(runs.config)},
                                    {"training", to_json(tc)},
                                    {"mean_test_accuracy", runs.mean_accuracy},
                                    {"stddev_test_accuracy", runs.stddev_accuracy},
                                    {"runs", results}});
  for (auto name : {"results.json", "summary.csv", "history.csv"})
    m.outputs.push_back((dir / name).generic_string());

  if (s.get_bool("attention") && !runs.runs.empty()) {
    const auto& first = runs.runs.front();
    const TrainingData data = variant_data(ds, kind, runs.config, first.seed);
    auto file = open_output(dir / "attention.csv");
    export_attention(file, first.model, data.store, data.test);
    m.outputs.push_back((dir / "attention.csv").generic_string());
  }
  m.write(dir / "manifest.json");
  out << kind << ": mean test accuracy " << format_number(runs.mean_accuracy) << " (sd "
      << format_number(runs.stddev_accuracy) << ") over " << runs.runs.size() << " runs\n";
  return kExitSuccess;
}

int cmd_evaluate(const Settings& s, std::ostream& out, std::ostream&) {
  const fs::path dataset_dir = s.get_string("dataset");
  const fs::path ckpt_path = s.get_string("checkpoint");
  const fs::path dir = s.get_string("out");
  const PreparedDataset ds = read_dataset(dataset_dir);
  const LoadedCheckpoint ckpt = read_checkpoint(ckpt_path);
  const std::uint64_t seed = s.get_optional("seed") ? s.get_u64("seed") : ckpt.seed;
  const Partition split = parse_partition(s.get_string("split"));
  const TrainingData data = variant_data(ds, ckpt.kind, ckpt.model.config, seed);
  const auto& examples = split_examples(data, split);
  if (examples.empty()) throw DataError("no pairs in the " + std::string(to_string(split)) + " split");

  const auto probs = predict_examples(ckpt.model, data.store, examples);
  std::vector<int> labels;
  for (const auto& ex : examples) labels.push_back(ex.label);
  const double acc = accuracy(probs, labels);
  const double ce = cross_entropy(probs, labels);

  auto preds = open_output(dir / "predictions.csv");
  preds << "pair_id,label,probability\n";
  for (std::size_t i = 0; i < examples.size(); ++i)
    preds << examples[i].pair_id << ',' << labels[i] << ',' << format_number(probs[i]) << '\n';
  write_json(dir / "evaluation.json", {{"variant", ckpt.kind},
                                       {"split", to_string(split)},
                                       {"pairs", examples.size()},
                                       {"accuracy", acc},
                                       {"cross_entropy", ce}});
  Manifest m{"evaluate", s, {{"data_seed", seed}}, {dataset_dir, ckpt_path},
             {(dir / "evaluation.json").generic_string(), (dir / "predictions.csv").generic_string()}};
  m.write(dir / "manifest.json");
  out << ckpt.kind << " on " << to_string(split) << ": accuracy " << format_number(acc) << '\n';
  return kExitSuccess;
}

int cmd_sweep(const Settings& s, std::ostream& out, std::ostream& err) {
  const fs::path dataset_dir = s.get_string("dataset");
  const fs::path dir = s.get_string("out");
  const PreparedDataset ds = read_dataset(dataset_dir);
  ModelConfig base = model_config(s, ds);
  const TrainConfig tc = train_config(s);

  SweepGrid grid;
  grid.neighbors = s.get_size_list("grid_K");
  for (const auto& x : s.get_list("grid_schemes")) grid.schemes.push_back(parse_neighbor_scheme(x));
  for (const auto& x : s.get_list("grid_weightings"))
    grid.weightings.push_back(parse_weighting_scheme(x));
  grid.gammas = s.get_double_list("grid_gammas");
  grid.variants.clear();
  for (const auto& x : s.get_list("grid_variants")) grid.variants.push_back(parse_variant(x));

  const auto report = run_sweep(ds, grid, base, tc, s.get_double("delta"), s.get_size("workers"));
  for (const auto& sk : report.skipped)
    err << "skipped " << to_string(sk.cell.variant) << ' ' << to_string(sk.cell.scheme) << ' '
        << sk.cell.annotation() << ": " << sk.reason << '\n';
  write_json(dir / "report.json", sweep_report_json(report));
  {
    auto csv = open_output(dir / "report.csv");
    write_sweep_csv(csv, report);
  }
  Manifest m{"sweep", s, {{"base_seed", tc.seed}, {"repetitions", tc.repetitions}}, {dataset_dir},
             {(dir / "report.json").generic_string(), (dir / "report.csv").generic_string()}};
  m.write(dir / "manifest.json");
  out << report.cells.size() << " cells run, " << report.skipped.size() << " skipped\n";
  for (const auto& sum : report.summaries)
    out << to_string(sum.variant) << " best " << to_string(sum.best.cell.scheme) << ' '
        << sum.best.cell.annotation() << " accuracy " << format_number(sum.best.mean_accuracy)
        << ", " << sum.alternatives.size() << " comparable alternatives\n";
  return kExitSuccess;
}

int cmd_export_embeddings(const Settings& s, std::ostream& out, std::ostream&) {
  const fs::path dataset_dir = s.get_string("dataset");
  const fs::path path = s.get_string("out");
  const PreparedDataset ds = read_dataset(dataset_dir);
  Manifest m{"export-embeddings", s, {}, {dataset_dir}, {path.generic_string()}};

  NapModel model;
  std::string kind;
  std::uint64_t seed = 0;
  if (auto ckpt_path = s.get_optional("checkpoint")) {
    LoadedCheckpoint ckpt = read_checkpoint(*ckpt_path);
    model = std::move(ckpt.model);
    kind = ckpt.kind;
    seed = s.get_optional("seed") ? s.get_u64("seed") : ckpt.seed;
    m.inputs.push_back(*ckpt_path);
  } else {
    kind = s.get_string("variant");
    seed = s.get_optional("seed") ? s.get_u64("seed") : 0;
    model = initialize(variant_config(kind, model_config(s, ds)), seed);
  }
  m.seeds["seed"] = seed;
  const Partition split = parse_partition(s.get_string("split"));
  const TrainingData data = variant_data(ds, kind, model.config, seed);
  const auto& examples = split_examples(data, split);
  {
    auto file = open_output(path);
    export_embeddings(file, model, data.store, examples);
  }
  m.write(path.string() + ".manifest.json");
  out << "wrote " << examples.size() << " embeddings to " << path.string() << '\n';
  return kExitSuccess;
}

int cmd_features(const Settings& s, std::ostream& out, std::ostream&) {
  const fs::path dataset_dir = s.get_string("dataset");
  const fs::path path = s.get_string("out");
  const PreparedDataset ds = read_dataset(dataset_dir);
  {
    auto file = open_output(path);
    export_features(file, ds.corpus);
  }
  Manifest m{"features", s, {}, {dataset_dir}, {path.generic_string()}};
  m.write(path.string() + ".manifest.json");
  out << "wrote features of " << ds.corpus.reviews.size() << " reviews to " << path.string()
      << '\n';
  return kExitSuccess;
}

std::vector<Command> commands() {
  return {
      {"gen-synthetic",
       "generate a synthetic corpus (JSONL)",
       {{"out", "", "output corpus path"},
        {"items", "50", "number of items"},
        {"reviews_per_item", "120", "reviews per item"},
        {"vocabulary_size", "400", "distinct content words"},
        {"rho", "0.8", "dependence of labels on neighbors, in [0, 1]"},
        {"quality_signal", "3", "strength of a review's own quality"},
        {"context_window", "4", "neighbors that define the label context"},
        {"min_tokens", "12", "minimum review length"},
        {"max_tokens", "30", "maximum review length"},
        {"topic_share", "0.35", "share of quality-topic words"},
        {"clear_share", "0.5", "share of reviews whose words reveal their quality"},
        {"seed", "0", "generator seed"}},
       {"out"},
       cmd_gen_synthetic},
      {"preprocess",
       "filter, label, split and embed a corpus into a dataset directory",
       {{"input", "", "corpus JSONL"},
        {"out", "", "dataset directory"},
        {"min_reviews", "100", "minimum reviews per item"},
        {"early_cutoff", "", "YYYY-MM-DD; sparse months before it are dropped"},
        {"late_cutoff", "", "YYYY-MM-DD; later reviews are dropped"},
        {"early_month_min_reviews", "15", "minimum reviews of an early month"},
        {"train_fraction", "0.8", "training share per item"},
        {"validation_fraction", "0.1", "validation share per item"},
        {"test_fraction", "0.1", "test share per item"},
        {"max_terms", "30000", "vocabulary size limit"},
        {"embedding_dim", "300", "word embedding dimension"},
        {"embeddings", "", "pretrained embeddings text file"},
        {"lexicon", "", "sentiment lexicon (word<TAB>positive|negative)"},
        {"scheme", "S", "neighbor scheme P/F/S of the stored pairs"},
        {"K", "4", "neighbors of the stored pairs"},
        {"balance", "true", "downsample the majority class per split"},
        {"seed", "0", "seed for embeddings and balancing"}},
       {"input", "out"},
       cmd_preprocess},
      {"train",
       "train a variant with repetitions",
       join({{{"dataset", "", "dataset directory"},
              {"out", "", "run directory"},
              {"attention", "false", "write attention.csv for the first run"}},
             kModelKeys,
             kTrainKeys}),
       {"dataset", "out"},
       cmd_train},
      {"evaluate",
       "evaluate a checkpoint on a split",
       {{"dataset", "", "dataset directory"},
        {"checkpoint", "", "checkpoint JSON"},
        {"out", "", "output directory"},
        {"split", "test", "train, validation or test"},
        {"seed", "", "data seed for I+R/I+N draws (default: the checkpoint's)"}},
       {"dataset", "checkpoint", "out"},
       cmd_evaluate},
      {"sweep",
       "grid search over context settings",
       join({{{"dataset", "", "dataset directory"},
              {"out", "", "report directory"},
              {"grid_K", "1-10", "K values, e.g. 1-10 or 2,4,8"},
              {"grid_schemes", "P,F,S", "neighbor schemes"},
              {"grid_weightings", "AVG,WAVG,FR,SFR", "weighting schemes"},
              {"grid_gammas", "0.5", "gamma values"},
              {"grid_variants", "nap", "nap, neighbor-only, random-neighbors"},
              {"delta", "0.01", "accuracy drop allowed for alternatives"}},
             kModelKeys,
             kTrainKeys}),
       {"dataset", "out"},
       cmd_sweep},
      {"export-embeddings",
       "write h_hat per pair as CSV",
       join({{{"dataset", "", "dataset directory"},
              {"out", "", "output CSV"},
              {"checkpoint", "", "checkpoint JSON (default: untrained model)"},
              {"split", "test", "train, validation or test"}},
             kModelKeys,
             {{"seed", "", "initialization/data seed"}}}),
       {"dataset", "out"},
       cmd_export_embeddings},
      {"features",
       "dump the contextual baseline features as CSV",
       {{"dataset", "", "dataset directory"}, {"out", "", "output CSV"}},
       {"dataset", "out"},
       cmd_features},
  };
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto cmds = commands();
  CLI::App app{"Neighbor-aware review helpfulness prediction"};
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> flag_values;
  std::map<std::string, std::string> config_paths;
  for (const auto& cmd : cmds) {
    auto* sub = app.add_subcommand(cmd.name, cmd.description);
    sub->add_option("--config", config_paths[cmd.name], "key = value settings file");
    for (const auto& key : cmd.keys) {
      std::string flag = "--" + key.name;
      std::string help = key.help;
      if (!key.fallback.empty()) help += " [" + key.fallback + "]";
      sub->add_option(flag, flag_values[cmd.name][key.name], help);
      if (key.name.find('_') != std::string::npos)
        sub->add_option("--" + dashed(key.name), flag_values[cmd.name][key.name])->group("");
    }
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\nrun with --help for the list of options\n";
    return kExitUsage;
  }

  auto* sub = app.get_subcommands().front();
  const Command& cmd = *std::ranges::find(cmds, sub->get_name(), &Command::name);
  try {
    Settings settings;
    for (const auto& key : cmd.keys) settings.set(key.name, key.fallback);
    if (!config_paths[cmd.name].empty()) {
      const Settings file = load_settings(config_paths[cmd.name]);
      for (const auto& [k, v] : file.values()) {
        if (!std::ranges::any_of(cmd.keys, [&](const Key& key) { return key.name == k; }))
          throw ConfigError("unknown setting '" + k + "' for " + cmd.name);
        settings.set(k, v);
      }
    }
    for (const auto& key : cmd.keys) {
      const bool given = sub->count("--" + key.name) > 0 ||
                         (key.name.find('_') != std::string::npos &&
                          sub->count("--" + dashed(key.name)) > 0);
      if (given) settings.set(key.name, flag_values[cmd.name][key.name]);
    }
    for (const auto& req : cmd.required)
      if (!settings.get_optional(req))
        throw ConfigError(cmd.name + " requires '" + req + "' (flag --" + req + " or config)");
    return cmd.run(settings, out, err);
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace nap
