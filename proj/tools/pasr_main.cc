// tools/pasr_main.cc

// Copyright 2026  The pasr authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "pasr/experiment.hpp"
#include "pasr/io.hpp"
#include "pasr/pruner.hpp"
#include "pasr/threading.hpp"

namespace fs = std::filesystem;

namespace {

using namespace pasr;

ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return ExperimentConfig::defaults();
  return ExperimentConfig::from_json(read_json_file(path));
}

ModelDims model_dims(const ExperimentConfig& cfg, const World& world) {
  ModelDims dims = cfg.model;
  dims.feat_dim = world.config.feat_dim;
  dims.n_outputs = world.vocab.size();
  return dims;
}

std::string person_file(const std::string& id, const char* split) {
  return "person_" + id + "_" + split + ".jsonl";
}

void cmd_make_world(const std::string& config_path, std::uint64_t seed,
                    const std::string& out) {
  const ExperimentConfig cfg = load_config(config_path);
  cfg.world.validate();
  fs::create_directories(out);
  const fs::path dir(out);

  const World world = build_world(cfg.world, seed);
  save_world(world, (dir / "world.json").string());
  {
    Rng rng = make_substream(seed, "data/global-train");
    save_dataset(make_global_dataset(world, cfg.world.global_train_utts,
                                     Split::kTrain, rng),
                 world.vocab, (dir / "global_train.jsonl").string());
  }
  {
    Rng rng = make_substream(seed, "data/global-val");
    save_dataset(make_global_dataset(world, cfg.world.global_val_utts,
                                     Split::kVal, rng),
                 world.vocab, (dir / "global_val.jsonl").string());
  }
  for (const auto& target : world.targets) {
    {
      Rng rng = make_substream(seed, "data/person/" + target.id + "/train");
      save_dataset(make_budgeted_dataset(world, target,
                                         cfg.world.person_frame_budget, rng),
                   world.vocab,
                   (dir / person_file(target.id, "train")).string());
    }
    {
      Rng rng = make_substream(seed, "data/person/" + target.id + "/val");
      save_dataset(make_counted_dataset(world, target,
                                        cfg.world.person_val_utts, Split::kVal,
                                        rng),
                   world.vocab, (dir / person_file(target.id, "val")).string());
    }
    {
      Rng rng = make_substream(seed, "data/person/" + target.id + "/test");
      save_dataset(make_counted_dataset(world, target,
                                        cfg.world.person_test_utts,
                                        Split::kTest, rng),
                   world.vocab,
                   (dir / person_file(target.id, "test")).string());
    }
  }
  std::cout << "world with " << world.global_pool.size()
            << " global speakers and " << world.targets.size()
            << " target speakers written to " << out << "\n";
}

void cmd_train_global(const std::string& config_path, std::uint64_t seed,
                      const std::string& data, const std::string& out) {
  const ExperimentConfig cfg = load_config(config_path);
  const fs::path data_dir(data);
  const World world = load_world((data_dir / "world.json").string());
  const Dataset train = load_dataset((data_dir / "global_train.jsonl").string(),
                                     world.vocab, Split::kTrain);
  const Dataset val = load_dataset((data_dir / "global_val.jsonl").string(),
                                   world.vocab, Split::kVal);

  AcousticModel model = AcousticModel::init(seed, model_dims(cfg, world));
  TrainConfig tg = cfg.train_global;
  tg.seed = seed;
  const TrainReport report = train_global(model, train, val, tg);

  fs::create_directories(out);
  const fs::path dir(out);
  save_checkpoint(model, dir / "global.ckpt");
  save_report(report, (dir / "train_report.json").string());
  std::cout << "global model: best val WER "
            << format_double(report.best_val_wer()) << "% at epoch "
            << report.best_epoch << "\n";
}

struct PersonalizeOpts {
  std::string config, data, model, real, out;
  std::uint64_t seed = 1;
  std::string variant = "person-syn";
  double lambda = -1.0;  // <0 means take the config value
  std::string select = "none";
  int select_k = 0;
  int select_period = 0;
  std::string grad_scope;
};

void cmd_personalize(const PersonalizeOpts& o) {
  const ExperimentConfig cfg = load_config(o.config);
  const fs::path data_dir(o.data);
  const World world = load_world((data_dir / "world.json").string());
  AcousticModel model = load_checkpoint(o.model);

  const Dataset person =
      load_dataset(o.real, world.vocab, Split::kTrain);
  if (person.empty()) throw ConfigError("personalize: --real dataset empty");
  const std::string speaker = person.utts.front().speaker;
  const SpeakerSpec* target = world.find_speaker(speaker);
  if (!target || target->category == 0) {
    throw ConfigError("personalize: speaker '" + speaker +
                      "' is not a target speaker of this world");
  }
  const Dataset val =
      load_dataset((data_dir / person_file(speaker, "val")).string(),
                   world.vocab, Split::kVal);

  TrainConfig pc = cfg.personalize;
  pc.seed = o.seed;
  if (o.lambda >= 0.0) pc.lambda = o.lambda;

  const Variant variant = variant_from_string(o.variant);
  Dataset aux;
  if (variant != Variant::kNone) {
    Dataset global_train;
    if (variant == Variant::kMultiPersonSyn ||
        variant == Variant::kGlobalInterp) {
      global_train = load_dataset((data_dir / "global_train.jsonl").string(),
                                  world.vocab, Split::kTrain);
    }
    Dataset other_train;
    const Dataset* other = nullptr;
    if (variant == Variant::kOtherPersonSyn) {
      const SpeakerSpec& o_spec = nearest_other_target(world, *target);
      other_train =
          load_dataset((data_dir / person_file(o_spec.id, "train")).string(),
                       world.vocab, Split::kTrain);
      other = &other_train;
    }
    Rng rng = make_substream(o.seed,
                             "syn/" + to_string(variant) + "/" + target->id);
    aux = build_adaptation_set(variant, world, *target, person, global_train,
                               other, cfg.n_syn, cfg.eta, rng);
  }

  SelectionConfig sel = cfg.selection;
  if (o.select_k > 0) sel.k = o.select_k;
  if (o.select_period > 0) sel.period = o.select_period;
  if (!o.grad_scope.empty()) sel.scope = grad_scope_from_string(o.grad_scope);
  const bool use_selection = o.select == "gradmatch";
  if (o.select != "none" && o.select != "gradmatch") {
    throw ConfigError("personalize: --select must be none or gradmatch");
  }

  SelectionLog log;
  const TrainReport report =
      personalize(model, person, aux, val, pc,
                  use_selection ? &sel : nullptr, use_selection ? &log : nullptr);

  fs::create_directories(o.out);
  const fs::path dir(o.out);
  save_checkpoint(model, dir / "personalized.ckpt");
  save_report(report, (dir / "personalize_report.json").string());
  if (use_selection) {
    save_selection_log(log, (dir / "selection_trace.jsonl").string());
  }
  std::cout << "personalized '" << speaker << "' (" << o.variant
            << "): best val WER " << format_double(report.best_val_wer())
            << "% at epoch " << report.best_epoch << "\n";
}

void cmd_prune(const std::string& config_path, std::uint64_t seed,
               const std::string& data, const std::string& model_path,
               const std::string& out) {
  const ExperimentConfig cfg = load_config(config_path);
  const fs::path data_dir(data);
  const World world = load_world((data_dir / "world.json").string());
  const Dataset train = load_dataset((data_dir / "global_train.jsonl").string(),
                                     world.vocab, Split::kTrain);
  const Dataset val = load_dataset((data_dir / "global_val.jsonl").string(),
                                   world.vocab, Split::kVal);
  const AcousticModel model = load_checkpoint(model_path);

  TrainConfig tg = cfg.train_global;
  tg.seed = seed;
  const auto stages = prune_and_finetune(model, cfg.prune, train, val, tg);

  fs::create_directories(out);
  const fs::path dir(out);
  std::ostringstream csv;
  csv << "sparsity,effective_params,global_val_wer\n";
  for (const auto& stage : stages) {
    const std::string name =
        "model_s" + format_double(stage.target_sparsity) + ".ckpt";
    save_checkpoint(stage.model, dir / name);
    csv << format_double(stage.target_sparsity) << ","
        << stage.effective_params << ","
        << format_double(stage.report.best_val_wer()) << "\n";
  }
  write_text_file((dir / "prune_summary.csv").string(), csv.str());
  std::cout << stages.size() << " prune stages written to " << out << "\n";
}

void cmd_evaluate(const std::string& model_path, const std::string& dataset) {
  const Vocabulary vocab;
  const AcousticModel model = load_checkpoint(model_path);
  const Dataset ds = load_dataset(dataset, vocab, Split::kTest);
  const Metrics m = evaluate(model, ds);
  nlohmann::json j{{"wer", m.wer()},
                   {"n_sub", m.n_sub},
                   {"n_ins", m.n_ins},
                   {"n_del", m.n_del},
                   {"n_utts", m.n_utts},
                   {"n_ref_words", m.n_ref_words}};
  std::cout << j.dump(2) << "\n";
}

void cmd_experiment(const std::string& config_path, const std::string& preset,
                    const std::vector<std::uint64_t>& seeds,
                    const std::string& out) {
  ExperimentConfig cfg = load_config(config_path);
  if (!preset.empty()) cfg.preset = preset;
  if (!seeds.empty()) cfg.seeds = seeds;
  if (!out.empty()) cfg.out_dir = out;
  if (cfg.out_dir.empty()) cfg.out_dir = "runs/" + cfg.preset;
  const ExperimentResult result = run_experiment(cfg);
  std::cout << result.summary_csv;
  std::cout << "results written to " << cfg.out_dir << "\n";
}

void cmd_report(const std::string& in_dir) {
  const std::string csv =
      read_text_file((fs::path(in_dir) / "results.csv").string());
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("report: empty results.csv");

  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw ConfigError("report: results.csv lacks column '" + name + "'");
  };
  const int c_cat = col("category"), c_cond = col("condition"),
            c_wer = col("wer");

  // (category, condition) -> wer samples, in first-appearance order
  std::vector<std::pair<int, std::string>> order;
  std::map<std::pair<int, std::string>, std::vector<double>> groups;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    const std::pair<int, std::string> key{std::stoi(cells[c_cat]),
                                          cells[c_cond]};
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(std::stod(cells[c_wer]));
  }

  int current_cat = -1;
  for (const auto& key : order) {
    const auto& [cat, cond] = key;
    if (cat != current_cat) {
      if (current_cat != -1) std::cout << "\n";
      std::cout << "category " << cat << "\n";
      current_cat = cat;
    }
    const auto& wers = groups[key];
    double m = 0.0;
    for (double w : wers) m += w;
    m /= static_cast<double>(wers.size());
    char buf[128];
    std::snprintf(buf, sizeof(buf), "  %-18s %6.1f%%  (%zu seeds)\n",
                  cond.c_str(), m, wers.size());
    std::cout << buf;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toy speech personalization laboratory"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (default: PASR_THREADS or 1)");

  std::string config, data = ".", out, model, dataset, in_dir = ".";
  std::uint64_t seed = 1;

  auto* mk = app.add_subcommand("make-world", "generate a world + datasets");
  mk->add_option("--config", config, "experiment config JSON");
  mk->add_option("--seed", seed, "root seed");
  mk->add_option("--out", out, "output directory");

  auto* tg = app.add_subcommand("train-global", "train the global model");
  tg->add_option("--config", config, "experiment config JSON");
  tg->add_option("--seed", seed, "root seed");
  tg->add_option("--data", data, "make-world output directory");
  tg->add_option("--out", out, "output directory");

  PersonalizeOpts po;
  auto* pz = app.add_subcommand("personalize", "fine-tune to one speaker");
  pz->add_option("--config", po.config, "experiment config JSON");
  pz->add_option("--seed", po.seed, "root seed");
  pz->add_option("--data", po.data, "make-world output directory");
  pz->add_option("--model", po.model, "global checkpoint")->required();
  pz->add_option("--real", po.real, "personal real dataset (JSONL)")
      ->required();
  pz->add_option("--out", po.out, "output directory");
  pz->add_option("--variant", po.variant,
                 "none|person-syn|other-person-syn|multi-person-syn|"
                 "global-text-syn|global-interp");
  pz->add_option("--lambda", po.lambda, "auxiliary loss weight");
  pz->add_option("--select", po.select, "none|gradmatch");
  pz->add_option("--select-k", po.select_k, "candidates kept per round");
  pz->add_option("--select-period", po.select_period,
                 "epochs between re-selections");
  pz->add_option("--grad-scope", po.grad_scope, "full|last-layer");

  auto* pr = app.add_subcommand("prune", "magnitude-prune + fine-tune stages");
  pr->add_option("--config", config, "experiment config JSON");
  pr->add_option("--seed", seed, "root seed");
  pr->add_option("--data", data, "make-world output directory");
  pr->add_option("--model", model, "global checkpoint")->required();
  pr->add_option("--out", out, "output directory");

  auto* ev = app.add_subcommand("evaluate", "score a model on a dataset");
  ev->add_option("--model", model, "checkpoint")->required();
  ev->add_option("--dataset", dataset, "dataset JSONL")->required();

  std::string preset;
  std::vector<std::uint64_t> seeds;
  auto* ex = app.add_subcommand("experiment", "run a preset over seeds");
  ex->add_option("--config", config, "experiment config JSON");
  ex->add_option("--preset", preset, "table1|table2|capacity|gradmatch");
  ex->add_option("--seeds", seeds, "seed list")->delimiter(',');
  ex->add_option("--out", out, "output directory");

  auto* rp = app.add_subcommand("report", "pretty-print a results directory");
  rp->add_option("--in", in_dir, "experiment output directory");

  try {
    app.parse(argc, argv);
    if (threads > 0) pasr::set_thread_count(threads);
    if (mk->parsed()) {
      cmd_make_world(config, seed, out.empty() ? "." : out);
    } else if (tg->parsed()) {
      cmd_train_global(config, seed, data, out.empty() ? "." : out);
    } else if (pz->parsed()) {
      if (po.out.empty()) po.out = ".";
      if (po.data.empty()) po.data = ".";
      cmd_personalize(po);
    } else if (pr->parsed()) {
      cmd_prune(config, seed, data, model, out.empty() ? "." : out);
    } else if (ev->parsed()) {
      cmd_evaluate(model, dataset);
    } else if (ex->parsed()) {
      cmd_experiment(config, preset, seeds, out);
    } else if (rp->parsed()) {
      cmd_report(in_dir);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const pasr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
