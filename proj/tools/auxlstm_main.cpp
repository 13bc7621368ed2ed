// auxlstm: train, evaluate and sweep LSTM classifiers with anchored
// auxiliary losses. Run `auxlstm <subcommand> --help` for the flags.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "auxlstm/checkpoint.hpp"
#include "auxlstm/config.hpp"
#include "auxlstm/copy_task.hpp"
#include "auxlstm/datasource.hpp"
#include "auxlstm/errors.hpp"
#include "auxlstm/model_gradcheck.hpp"
#include "auxlstm/seqfile.hpp"
#include "auxlstm/sweeps.hpp"
#include "auxlstm/trainer.hpp"

namespace {

using namespace auxlstm;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::size_t> supervised_window;
  std::optional<std::string> aux_window;
  std::optional<std::size_t> n;
  std::optional<std::size_t> l;
  std::optional<std::string> dataset;
  std::optional<std::string> data_dir;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> max_epochs;
  std::optional<std::uint64_t> pretrain_epochs;
  bool no_joint_aux = false;
  std::vector<std::string> sets;
  bool quiet = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "run seed");
    app->add_option("--mode", mode, "baseline, r or p")->check(CLI::IsMember({"baseline", "r", "p"}));
    app->add_option("--supervised-window", supervised_window, "supervised BPTT steps");
    app->add_option("--aux-window", aux_window, "auxiliary BPTT steps, or auto");
    app->add_option("--n", n, "segments per sequence");
    app->add_option("--l", l, "segment length");
    app->add_option("--dataset", dataset, "mnist, pmnist, cifar10 or copy")
        ->check(CLI::IsMember({"mnist", "pmnist", "cifar10", "copy"}));
    app->add_option("--data-dir", data_dir, "directory holding dataset files");
    app->add_option("--out-dir", out_dir, "directory for metrics and checkpoints");
    app->add_option("--max-epochs", max_epochs, "joint-phase epochs");
    app->add_option("--pretrain-epochs", pretrain_epochs, "pretraining epochs");
    app->add_flag("--no-joint-aux", no_joint_aux, "drop the auxiliary loss in the joint phase");
    app->add_option("--set", sets, "extra key=value config override (repeatable)");
    app->add_flag("-q,--quiet", quiet, "no per-epoch log lines");
  }

  ExperimentConfig build(bool validate = true) const {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path);
    auto set = [&](const char* key, const std::string& v) { set_config_value(cfg, key, v); };
    if (seed) cfg.seed = *seed;
    if (mode) set("mode", *mode);
    if (supervised_window) cfg.supervised_window = *supervised_window;
    if (aux_window) set("aux_window", *aux_window);
    if (n) cfg.n = *n;
    if (l) cfg.l = *l;
    if (dataset) set("dataset", *dataset);
    if (data_dir) cfg.data.data_dir = *data_dir;
    if (out_dir) cfg.out_dir = *out_dir;
    if (max_epochs) cfg.schedule.max_epochs = *max_epochs;
    if (pretrain_epochs) cfg.schedule.pretrain_epochs = *pretrain_epochs;
    if (no_joint_aux) cfg.joint_aux = false;
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (validate) cfg.validate();
    return cfg;
  }

  std::ostream* log() const { return quiet ? nullptr : &std::cerr; }
};

std::vector<std::size_t> parse_windows(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "full") out.push_back(static_cast<std::size_t>(-1) >> 1);
    else out.push_back(std::stoul(item));
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw ConfigError("--pairs expects NxL items, got '" + item + "'");
    out.emplace_back(std::stoul(item.substr(0, x)), std::stoul(item.substr(x + 1)));
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path) << text;
}

int cmd_train(const Overrides& ov, const std::string& resume) {
  const auto cfg = ov.build();
  const auto data = load_datasets(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  write_text(cfg.out_dir / "config.txt", cfg.to_text());
  auto outcome = run_experiment(cfg, data.train, data.test, true, resume, ov.log());
  save_checkpoint(cfg.out_dir / "final.bin", outcome.session);
  std::cout << "test_accuracy " << outcome.test_accuracy << "\n"
            << "train_accuracy " << outcome.train_accuracy << "\n"
            << "steps " << outcome.session.step << "\n";
  return 0;
}

int cmd_eval(const Overrides& ov, const std::string& checkpoint, const std::string& split) {
  const auto cfg = ov.build();
  const auto data = load_datasets(cfg);
  const Dataset& ds = split == "train" ? data.train : data.test;
  auto session = load_checkpoint(checkpoint, cfg, ds.mode, ds.input_dim, ds.num_classes);
  std::cout << split << "_accuracy " << evaluate(session.model, ds) << "\n";
  return 0;
}

int cmd_sweep_bptt(const Overrides& ov, const std::string& windows) {
  const auto cfg = ov.build();
  const auto data = load_datasets(cfg);
  auto table = sweep_shrinking_bptt(cfg, parse_windows(windows), data.train, data.test, true, ov.log());
  write_text(cfg.out_dir / "sweep_bptt.csv", table.to_csv());
  std::cout << table.to_csv();
  return 0;
}

int cmd_sweep_segments(const Overrides& ov, const std::string& pairs) {
  const auto cfg = ov.build();
  const auto data = load_datasets(cfg);
  auto table = sweep_segments(cfg, parse_pairs(pairs), data.train, data.test, true, ov.log());
  write_text(cfg.out_dir / "sweep_segments.csv", table.to_csv());
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << table.to_csv();
  return 0;
}

// Self-test of the analytic gradients on tiny models of every mode and token type.
int cmd_gradcheck(std::uint64_t seed, double tolerance) {
  bool ok = true;
  for (auto token : {TokenMode::kDiscrete, TokenMode::kContinuous}) {
    Dataset ds;
    if (token == TokenMode::kDiscrete) {
      ds = gen_copy_memory({2, 3, 3, seed}, 1);
    } else {
      ds.mode = TokenMode::kContinuous;
      ds.input_dim = 2;
      ds.num_classes = 3;
      SequenceExample ex;
      ex.mode = TokenMode::kContinuous;
      ex.values = Tensor(8, 2);
      RngStream r(seed);
      for (double& v : ex.values.data()) v = r.uniform();
      ex.label = 1;
      ds.examples.push_back(ex);
    }
    for (auto mode : {TrainMode::kBaseline, TrainMode::kReconstruction, TrainMode::kPrediction}) {
      ExperimentConfig cfg;
      cfg.mode = mode;
      cfg.seed = seed;
      cfg.model = {4, 3, 5, 0.5, 5, 0.5, 0.5, 1.0};
      // Windows cover the whole sequence and prediction segments span it, so
      // no truncation separates the analytic gradient from the numeric one.
      cfg.n = 2;
      cfg.l = mode == TrainMode::kPrediction ? ds.examples[0].length() : 3;
      cfg.spread = 1;
      cfg.aux_window = 100;
      cfg.supervised_window = 100;
      Model m = Model::create(cfg, ds.mode, ds.input_dim, ds.num_classes);
      // Random biases too, so no ReLU sits exactly at its kink.
      RngStream perturb = RngStream(seed).split("perturb");
      visit_blocks(m, [&](const std::string&, Tensor& t) {
        for (double& v : t.data()) v = perturb.uniform(-0.5, 0.5);
      });
      auto opt = example_options(cfg, Phase::kJoint, 0);
      auto rngs = ExampleRngs::derive(seed, 0, 0);
      auto report = gradcheck_model(m, ds.examples[0], opt, rngs);
      const bool pass = report.max_relative_error < tolerance;
      ok = ok && pass;
      std::cout << (pass ? "PASS " : "FAIL ") << to_string(mode) << " "
                << (token == TokenMode::kDiscrete ? "discrete" : "continuous")
                << " max_rel_err " << std::scientific << std::setprecision(3)
                << report.max_relative_error << std::defaultfloat << "\n";
      for (const auto& b : report.blocks) {
        std::cout << "  " << std::left << std::setw(28) << b.name << std::right << std::setw(6)
                  << b.count << "  " << std::scientific << std::setprecision(3)
                  << b.max_relative_error << std::defaultfloat << "\n";
      }
    }
  }
  return ok ? 0 : 1;
}

int cmd_gen_copy(const Overrides& ov, const std::string& train_out, const std::string& test_out) {
  auto cfg = ov.build(false);
  cfg.data.kind = DatasetKind::kCopy;
  cfg.data.copy_train_file.clear();
  cfg.data.copy_test_file.clear();
  const auto data = load_datasets(cfg);
  write_sequence_file(train_out, data.train);
  write_sequence_file(test_out, data.test);
  std::cout << "wrote " << data.train.size() << " + " << data.test.size() << " sequences of length "
            << data.train.examples.front().length() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LSTM sequence classifiers with anchored auxiliary losses"};
  app.require_subcommand(1);

  Overrides train_ov, eval_ov, bptt_ov, seg_ov, gen_ov;
  std::string resume, checkpoint, split = "test", windows = "300,100,30,10,1,0";
  std::string pairs = "1x600,10x60,20x30,50x12,100x6,200x3";
  std::string train_out = "copy_train.axsq", test_out = "copy_test.axsq";
  std::uint64_t gc_seed = 3;
  double gc_tol = 1e-4;

  auto* train = app.add_subcommand("train", "pretrain and jointly train one model");
  train_ov.attach(train);
  train->add_option("--resume", resume, "continue from a checkpoint")->check(CLI::ExistingFile);

  auto* eval = app.add_subcommand("eval", "accuracy of a checkpoint");
  eval_ov.attach(eval);
  eval->add_option("--checkpoint", checkpoint, "checkpoint file")->required()->check(CLI::ExistingFile);
  eval->add_option("--split", split, "train or test")->check(CLI::IsMember({"train", "test"}));

  auto* bptt = app.add_subcommand("sweep-bptt", "one run per supervised BPTT window");
  bptt_ov.attach(bptt);
  bptt->add_option("--windows", windows, "comma-separated windows; 'full' for no truncation");

  auto* seg = app.add_subcommand("sweep-segments", "one run per (n, l) pair at fixed n*l");
  seg_ov.attach(seg);
  seg->add_option("--pairs", pairs, "comma-separated NxL pairs");

  auto* gc = app.add_subcommand("gradcheck", "finite-difference check of every gradient");
  gc->add_option("--seed", gc_seed, "seed of the tiny models");
  gc->add_option("--tolerance", gc_tol, "maximum relative error");

  auto* gen = app.add_subcommand("gen-copy", "write copy-task train/test sequence files");
  gen_ov.attach(gen);
  gen->add_option("--train-out", train_out, "training set file");
  gen->add_option("--test-out", test_out, "test set file");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*train) return cmd_train(train_ov, resume);
    if (*eval) return cmd_eval(eval_ov, checkpoint, split);
    if (*bptt) return cmd_sweep_bptt(bptt_ov, windows);
    if (*seg) return cmd_sweep_segments(seg_ov, pairs);
    if (*gc) return cmd_gradcheck(gc_seed, gc_tol);
    if (*gen) return cmd_gen_copy(gen_ov, train_out, test_out);
  } catch (const auxlstm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
