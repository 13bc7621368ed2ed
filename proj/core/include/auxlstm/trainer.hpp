#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <span>

#include "auxlstm/anchor.hpp"
#include "auxlstm/aux_loss.hpp"
#include "auxlstm/config.hpp"
#include "auxlstm/dataset.hpp"
#include "auxlstm/metrics.hpp"
#include "auxlstm/model.hpp"
#include "auxlstm/rmsprop.hpp"
#include "auxlstm/rng.hpp"
#include "auxlstm/schedule.hpp"

namespace auxlstm {

/// Instrumented work counters.
struct StepCounters {
  std::uint64_t forward_flops = 0;   // main LSTM forward multiply-adds
  std::uint64_t sup_grad_steps = 0;  // main LSTM steps backpropagated by the supervised loss
  std::uint64_t aux_grad_steps = 0;  // main LSTM steps backpropagated by auxiliary losses
  std::uint64_t decoder_steps = 0;   // auxiliary decoder steps
  std::size_t peak_step_caches = 0;  // largest number of main step caches held at once
  std::size_t snapshots = 0;

  StepCounters& operator+=(const StepCounters& o);
  friend bool operator==(const StepCounters&, const StepCounters&) = default;
};

/// What one example contributes to a step.
struct ExampleOptions {
  bool supervised = true;
  bool auxiliary = false;
  std::size_t supervised_window = 300;
  std::size_t aux_window = 300;
  AnchorPlanOptions anchors;
  double aux_weight = 1.0;
  double ss_prob = 1.0;
  bool train_mode = true;
  // Multiplies every gradient (1 / batch size in training).
  double grad_scale = 1.0;
};

/// Randomness of one example in one step. Each stream is derived from
/// (seed, step, example index, purpose) alone, so a step can be replayed
/// without any stream state.
struct ExampleRngs {
  RngStream anchors;
  RngStream head_mask;
  RngStream aux_mask;
  RngStream sampling;

  static ExampleRngs derive(std::uint64_t seed, std::uint64_t step, std::size_t example_index);
};

struct ExampleResult {
  LossReport report;
  bool correct = false;
  AnchorPlan plan;
  StepCounters counters;
};

/// Forward and backward pass for one example. The supervised term is the
/// cross-entropy of the head applied to the final hidden state, truncated to
/// the last `supervised_window` steps. The auxiliary term follows the
/// decoder's kind. Gradients accumulate into `grads` when not null.
ExampleResult compute_example(const Model& model, const SequenceExample& example,
                              const ExampleOptions& options, ExampleRngs rngs, Model* grads);

ExampleOptions example_options(const ExperimentConfig& config, Phase phase, std::uint64_t step);

/// Mutable state of a run; everything a checkpoint stores.
struct TrainSession {
  ExperimentConfig config;
  Model model;
  RmsPropState optimizer;
  Phase phase = Phase::kPretrain;
  std::uint64_t epoch = 0;  // completed epochs in `phase`
  std::uint64_t step = 0;   // optimizer updates since the start of the run
  std::size_t metrics_rows = 0;
  StepCounters totals;
};

TrainSession make_session(const ExperimentConfig& config, const Dataset& train);

struct BatchResult {
  LossReport report;  // batch means
  double accuracy = 0.0;
  StepCounters counters;
};

/// Gradients of one batch (mean over its examples) into `grads`, without an
/// update.
BatchResult accumulate_batch(const TrainSession& session, const Dataset& train,
                             std::span<const std::size_t> batch, const ExampleOptions& options,
                             Model& grads);

/// One RMSProp update from one batch at the current session step. `label`
/// names the batch in diagnostics. Throws NumericError on a non-finite loss
/// or gradient.
BatchResult train_step(TrainSession& session, const Dataset& train,
                       std::span<const std::size_t> batch, const std::string& label);

struct TrainHooks {
  MetricsWriter* metrics = nullptr;
  // Written after every `config.checkpoint_every` epochs when not empty.
  std::filesystem::path checkpoint_path;
  // Called after each epoch; return false to stop early.
  std::function<bool(const TrainSession&, const MetricsRecord&)> on_epoch;
  std::ostream* log = nullptr;
};

/// Auxiliary loss only, for the remaining pretraining epochs; leaves the
/// classifier head untouched and moves the session to the joint phase.
/// Throws ConfigError in baseline mode. Returns false if a hook stopped it.
bool run_pretraining(TrainSession& session, const Dataset& train, const Dataset* test,
                     const TrainHooks& hooks = {});

/// Supervised plus (unless joint_aux is off) auxiliary loss for the
/// remaining joint epochs. A session still in pretraining is moved to the
/// joint phase first. Returns false if a hook stopped it.
bool run_joint(TrainSession& session, const Dataset& train, const Dataset* test,
               const TrainHooks& hooks = {});

/// Fraction of examples whose eval-mode logits have their argmax at the label.
double evaluate(const Model& model, const Dataset& dataset);

struct TrainOutcome {
  TrainSession session;
  double test_accuracy = 0.0;
  double train_accuracy = 0.0;
  std::vector<MetricsRecord> metrics;
};

/// Full run: pretraining (r and p modes) then joint training. Writes
/// metrics.csv (and checkpoints, when enabled) under `config.out_dir` if
/// `write_files` is set. `resume` continues from a checkpoint file.
TrainOutcome run_experiment(const ExperimentConfig& config, const Dataset& train,
                            const Dataset& test, bool write_files = true,
                            const std::filesystem::path& resume = {}, std::ostream* log = nullptr);

}  // namespace auxlstm
