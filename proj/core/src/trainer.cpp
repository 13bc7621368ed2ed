#include "auxlstm/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "auxlstm/checkpoint.hpp"
#include "auxlstm/classifier.hpp"
#include "auxlstm/batching.hpp"
#include "auxlstm/errors.hpp"
#include "auxlstm/losses.hpp"
#include "auxlstm/unroll.hpp"

namespace auxlstm {

StepCounters& StepCounters::operator+=(const StepCounters& o) {
  forward_flops += o.forward_flops;
  sup_grad_steps += o.sup_grad_steps;
  aux_grad_steps += o.aux_grad_steps;
  decoder_steps += o.decoder_steps;
  peak_step_caches = std::max(peak_step_caches, o.peak_step_caches);
  snapshots = std::max(snapshots, o.snapshots);
  return *this;
}

ExampleRngs ExampleRngs::derive(std::uint64_t seed, std::uint64_t step, std::size_t example_index) {
  const RngStream base = RngStream(seed).split(step).split(example_index);
  return {base.split("anchors"), base.split("head_mask"), base.split("aux_mask"),
          base.split("sampling")};
}

namespace {

void embedding_grads_from_tape(const Model& model, const SequenceExample& ex, const UnrollTape& tape,
                               const BackwardResult& br, EmbeddingTable& grads) {
  for (std::size_t j = 0; j < br.input_grads.size(); ++j) {
    accumulate_token_grad(model.embedding, ex, tape.start_step() + j, br.input_grads[j].data(),
                          grads);
  }
}

}  // namespace

ExampleResult compute_example(const Model& model, const SequenceExample& ex,
                              const ExampleOptions& opt, ExampleRngs rngs, Model* grads) {
  ExampleResult res;
  const std::size_t T = ex.length();
  const bool aux = opt.auxiliary;
  if (aux && !model.decoder) throw ConfigError("compute_example: auxiliary loss without a decoder");

  UnrollOptions uo;
  uo.window = opt.supervised && grads != nullptr ? opt.supervised_window : 0;
  // Reconstruction anchors whose windows all reach step 0 share one sweep.
  bool merged = false;
  std::uint64_t logical_aux_steps = 0;
  if (aux) {
    res.plan = sample_anchor_plan(rngs.anchors, T, opt.anchors);
    auto req = plan_requirements(res.plan, opt.aux_window);
    uo.checkpoints = std::move(req.checkpoints);
    // Prediction always needs the tapes it reads; reconstruction only to backprop.
    if (grads != nullptr || res.plan.kind == AuxKind::kPrediction) {
      if (res.plan.kind == AuxKind::kReconstruction && res.plan.n() > 1 &&
          std::all_of(req.retain.begin(), req.retain.end(),
                      [](const StepInterval& iv) { return iv.begin == 0; })) {
        merged = true;
        std::size_t end = 0;
        for (const auto& iv : req.retain) {
          end = std::max(end, iv.end);
          logical_aux_steps += iv.length();
        }
        uo.retain = {StepInterval{0, end}};
      } else {
        uo.retain = std::move(req.retain);
      }
    } else {
      uo.retain.assign(res.plan.n(), StepInterval{});
    }
  }
  UnrollResult u = unroll_forward(model.lstm, model.embedding, ex, uo);
  res.counters.forward_flops = u.forward_flops;
  res.counters.peak_step_caches = u.memory.peak_step_caches;
  res.counters.snapshots = u.memory.snapshots;

  // Classifier on the final hidden state. Outside the supervised phase the
  // head only reports accuracy, in eval mode.
  const bool head_train = opt.train_mode && opt.supervised;
  auto head = classifier_forward(model.head, u.final_state.hidden.data(), rngs.head_mask, head_train);
  res.correct = argmax(head.logits.data()) == ex.label;

  if (opt.supervised) {
    auto ce = softmax_cross_entropy(head.logits, ex.label);
    res.report.supervised = ce.loss;
    if (grads != nullptr) {
      ce.grad *= opt.grad_scale;
      StateGrad g{classifier_backward(model.head, head.cache, ce.grad.data(), grads->head),
                  Tensor::vector(model.lstm.hidden())};
      if (!u.tape.empty()) {
        auto br = bptt_backward(model.lstm, u.tape, g, grads->lstm);
        embedding_grads_from_tape(model, ex, u.tape, br, grads->embedding);
        res.counters.sup_grad_steps = br.steps;
        // br.boundary is dropped: stop-gradient at the truncation boundary.
      }
    }
  }

  if (aux) {
    const AnchorPlan& plan = res.plan;
    const double total_len = static_cast<double>(plan.total_length());
    AuxContext ctx;
    ctx.ss_prob = opt.ss_prob;
    ctx.ss_rng = &rngs.sampling;
    ctx.mask_rng = &rngs.aux_mask;
    ctx.train_mode = opt.train_mode;
    ctx.grad_scale = opt.grad_scale * opt.aux_weight / total_len;

    AuxResult ar;
    if (plan.kind == AuxKind::kReconstruction) {
      ar = reconstruction_loss(u.checkpoint_states, *model.decoder, model.embedding, ex, plan, ctx,
                               grads ? &*grads->decoder : nullptr,
                               grads ? &grads->embedding : nullptr);
      if (grads != nullptr && merged) {
        // Linearity: one reverse sweep with each anchor's cotangent injected
        // where the sweep passes it equals the separate per-anchor sweeps.
        const UnrollTape& tape = u.runs[0];
        if (!tape.empty()) {
          std::vector<StateGrad> inject(tape.size(), StateGrad::zeros(model.lstm.hidden()));
          for (std::size_t i = 0; i < plan.n(); ++i) {
            const std::size_t a = plan.segments[i].anchor;
            if (a == 0) continue;  // zero initial state, nothing to train
            inject[a - 1].hidden += ar.anchor_grads[i].hidden;
            inject[a - 1].cell += ar.anchor_grads[i].cell;
          }
          const StateGrad zero = StateGrad::zeros(model.lstm.hidden());
          auto br = bptt_backward(model.lstm, tape, zero, grads->lstm, {}, inject);
          embedding_grads_from_tape(model, ex, tape, br, grads->embedding);
        }
        res.counters.aux_grad_steps = logical_aux_steps;
      } else if (grads != nullptr) {
        for (std::size_t i = 0; i < plan.n(); ++i) {
          const UnrollTape& tape = u.runs[i];
          if (tape.empty()) continue;
          auto br = bptt_backward(model.lstm, tape, ar.anchor_grads[i], grads->lstm);
          embedding_grads_from_tape(model, ex, tape, br, grads->embedding);
          res.counters.aux_grad_steps += br.steps;
        }
      }
      for (const auto& s : plan.segments) res.report.predicted_tokens += s.length - 1;
    } else {
      std::vector<std::vector<Tensor>> hidden_grads;
      ar = prediction_loss(u.checkpoint_states, u.runs, *model.decoder, ex, plan, ctx,
                           grads ? &*grads->decoder : nullptr, grads ? &hidden_grads : nullptr);
      if (grads != nullptr) {
        const StateGrad zero = StateGrad::zeros(model.lstm.hidden());
        for (std::size_t i = 0; i < plan.n(); ++i) {
          const UnrollTape& tape = u.runs[i];
          if (tape.empty()) continue;
          auto br = bptt_backward(model.lstm, tape, zero, grads->lstm, hidden_grads[i]);
          embedding_grads_from_tape(model, ex, tape, br, grads->embedding);
          res.counters.aux_grad_steps += br.steps;
        }
        // ar.anchor_grads are dropped: no auxiliary gradient crosses the anchor.
      }
      for (const auto& s : plan.segments) res.report.predicted_tokens += s.length;
    }
    res.counters.decoder_steps = ar.decoder_steps;
    res.report.per_segment = std::move(ar.per_segment);
    res.report.auxiliary = aggregate_aux_loss(res.report.per_segment);
  }

  res.report.total = (opt.supervised ? res.report.supervised : 0.0) +
                     (aux ? opt.aux_weight * res.report.auxiliary : 0.0);
  return res;
}

ExampleOptions example_options(const ExperimentConfig& config, Phase phase, std::uint64_t step) {
  ExampleOptions o;
  o.supervised = phase == Phase::kJoint;
  o.auxiliary = config.has_aux() && (phase == Phase::kPretrain || config.joint_aux);
  o.supervised_window = config.supervised_window;
  o.aux_window = config.effective_aux_window();
  o.anchors = config.anchor_options();
  o.aux_weight = phase == Phase::kPretrain ? 1.0 : config.aux_weight;
  o.ss_prob = scheduled_sampling_prob(step, config.ss);
  o.train_mode = true;
  return o;
}

TrainSession make_session(const ExperimentConfig& config, const Dataset& train) {
  config.validate_for_length(train.examples.at(0).length());
  TrainSession s;
  s.config = config;
  s.model = Model::create(config, train.mode, train.input_dim, train.num_classes);
  s.optimizer.config = {config.rms_decay, config.rms_epsilon, config.schedule.initial_lr,
                        config.clip_norm};
  s.phase = config.has_aux() && config.schedule.pretrain_epochs > 0 ? Phase::kPretrain
                                                                    : Phase::kJoint;
  return s;
}

BatchResult accumulate_batch(const TrainSession& session, const Dataset& train,
                             std::span<const std::size_t> batch, const ExampleOptions& options,
                             Model& grads) {
  BatchResult out;
  ExampleOptions opt = options;
  opt.grad_scale = options.grad_scale / static_cast<double>(batch.size());
  std::size_t correct = 0;
  for (std::size_t idx : batch) {
    auto rngs = ExampleRngs::derive(session.config.seed, session.step, idx);
    auto r = compute_example(session.model, train.examples.at(idx), opt, rngs, &grads);
    if (!std::isfinite(r.report.total)) {
      throw NumericError("non-finite loss on training example " + std::to_string(idx));
    }
    out.report.supervised += r.report.supervised;
    out.report.auxiliary += r.report.auxiliary;
    out.report.total += r.report.total;
    out.report.predicted_tokens += r.report.predicted_tokens;
    correct += r.correct ? 1 : 0;
    out.counters += r.counters;
  }
  const double b = static_cast<double>(batch.size());
  out.report.supervised /= b;
  out.report.auxiliary /= b;
  out.report.total /= b;
  out.accuracy = static_cast<double>(correct) / b;
  return out;
}

namespace {

PhaseSchedule phase_schedule(const ExperimentConfig& config, Phase phase) {
  PhaseSchedule s = config.schedule;
  s.phase = phase;
  return s;
}

}  // namespace

BatchResult train_step(TrainSession& session, const Dataset& train,
                       std::span<const std::size_t> batch, const std::string& label) {
  const auto opt = example_options(session.config, session.phase, session.step);
  Model grads = session.model.zeros_like();
  BatchResult r;
  try {
    r = accumulate_batch(session, train, batch, opt, grads);
    session.optimizer.config.lr = lr_at(session.epoch, phase_schedule(session.config, session.phase));
    auto blocks = param_blocks(session.model, grads);
    rmsprop_update(session.optimizer, blocks);
  } catch (const NumericError& e) {
    throw NumericError(label + ": " + e.what());
  }
  ++session.step;
  return r;
}

double evaluate(const Model& model, const Dataset& dataset) {
  if (dataset.empty()) return 0.0;
  std::size_t correct = 0;
  RngStream unused;
  for (const auto& ex : dataset.examples) {
    UnrollOptions uo;
    auto u = unroll_forward(model.lstm, model.embedding, ex, uo);
    auto head = classifier_forward(model.head, u.final_state.hidden.data(), unused, false);
    if (argmax(head.logits.data()) == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

namespace {

// One epoch of the session's current phase. Returns the hook's verdict.
bool run_epoch(TrainSession& s, const Dataset& train, const Dataset* test, const TrainHooks& hooks,
               std::uint64_t phase_epochs) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const ExperimentConfig& cfg = s.config;
  const RngStream shuffle =
      RngStream(cfg.seed).split("shuffle").split(static_cast<std::uint64_t>(s.phase)).split(s.epoch);
  BatchIterator it = batch_iter(train, cfg.batch_size, shuffle);

  MetricsRecord rec;
  rec.phase = s.phase;
  rec.lr = lr_at(s.epoch, phase_schedule(cfg, s.phase));
  double sup = 0.0, aux = 0.0, total = 0.0, acc = 0.0;
  StepCounters counters;
  std::size_t seen = 0;
  for (std::size_t b = 0; b < it.num_batches(); ++b) {
    const auto batch = it.batch(b);
    rec.ss_prob = scheduled_sampling_prob(s.step, cfg.ss);
    std::ostringstream label;
    label << to_string(s.phase) << " epoch " << s.epoch << " batch " << b << " (step " << s.step
          << ")";
    const BatchResult r = train_step(s, train, batch, label.str());
    const double w = static_cast<double>(batch.size());
    sup += r.report.supervised * w;
    aux += r.report.auxiliary * w;
    total += r.report.total * w;
    acc += r.accuracy * w;
    seen += batch.size();
    counters += r.counters;
  }
  ++s.epoch;
  const double n = static_cast<double>(seen);
  rec.step = s.step;
  rec.epoch = s.epoch;
  rec.train_supervised = sup / n;
  rec.train_auxiliary = aux / n;
  rec.train_total = total / n;
  rec.train_accuracy = acc / n;
  rec.aux_grad_steps = counters.aux_grad_steps;
  rec.sup_grad_steps = counters.sup_grad_steps;
  rec.forward_flops = counters.forward_flops;
  s.totals += counters;
  const bool last = s.epoch >= phase_epochs;
  if (test != nullptr && cfg.eval_every > 0 && (s.epoch % cfg.eval_every == 0 || last)) {
    rec.test_accuracy = evaluate(s.model, *test);
  }
  const double secs = std::chrono::duration<double>(clock::now() - t0).count();

  if (hooks.metrics != nullptr) {
    hooks.metrics->append(rec);
    hooks.metrics->append_timing(rec.step, secs / static_cast<double>(it.num_batches()), secs);
  }
  ++s.metrics_rows;
  if (!hooks.checkpoint_path.empty() && cfg.checkpoint_every > 0 &&
      s.epoch % cfg.checkpoint_every == 0) {
    save_checkpoint(hooks.checkpoint_path, s);
  }
  if (hooks.log != nullptr) {
    *hooks.log << to_string(s.phase) << " epoch " << s.epoch << "/" << phase_epochs
               << " step " << s.step << " lr " << rec.lr << " sup " << rec.train_supervised
               << " aux " << rec.train_auxiliary << " train_acc " << rec.train_accuracy;
    if (rec.test_accuracy) *hooks.log << " test_acc " << *rec.test_accuracy;
    *hooks.log << " (" << secs << " s)" << std::endl;
  }
  return hooks.on_epoch ? hooks.on_epoch(s, rec) : true;
}

}  // namespace

bool run_pretraining(TrainSession& s, const Dataset& train, const Dataset* test,
                     const TrainHooks& hooks) {
  if (!s.config.has_aux()) throw ConfigError("run_pretraining: baseline mode has no auxiliary loss");
  if (s.phase != Phase::kPretrain) return true;
  const std::uint64_t epochs = s.config.schedule.pretrain_epochs;
  while (s.epoch < epochs) {
    if (!run_epoch(s, train, test, hooks, epochs)) return false;
  }
  s.phase = Phase::kJoint;
  s.epoch = 0;
  return true;
}

bool run_joint(TrainSession& s, const Dataset& train, const Dataset* test, const TrainHooks& hooks) {
  if (s.phase == Phase::kPretrain) {
    s.phase = Phase::kJoint;
    s.epoch = 0;
  }
  const std::uint64_t epochs = s.config.schedule.max_epochs;
  while (s.epoch < epochs) {
    if (!run_epoch(s, train, test, hooks, epochs)) return false;
  }
  return true;
}

TrainOutcome run_experiment(const ExperimentConfig& config, const Dataset& train,
                            const Dataset& test, bool write_files,
                            const std::filesystem::path& resume, std::ostream* log) {
  if (train.empty()) throw ConfigError("run_experiment: training set is empty");
  config.validate_for_length(train.examples.front().length());
  TrainOutcome out;
  out.session = resume.empty()
                    ? make_session(config, train)
                    : load_checkpoint(resume, config, train.mode, train.input_dim, train.num_classes);
  TrainSession& s = out.session;

  std::optional<MetricsWriter> writer;
  TrainHooks hooks;
  hooks.log = log;
  if (write_files) {
    std::filesystem::create_directories(config.out_dir);
    writer.emplace(config.out_dir / "metrics.csv",
                   resume.empty() ? std::nullopt : std::optional<std::size_t>(s.metrics_rows));
    hooks.metrics = &*writer;
    if (config.checkpoint_every > 0) hooks.checkpoint_path = config.out_dir / "checkpoint.bin";
  }
  hooks.on_epoch = [&](const TrainSession&, const MetricsRecord& r) {
    out.metrics.push_back(r);
    return true;
  };

  if (config.has_aux()) run_pretraining(s, train, &test, hooks);
  run_joint(s, train, &test, hooks);

  const MetricsRecord* last = out.metrics.empty() ? nullptr : &out.metrics.back();
  out.test_accuracy = last && last->test_accuracy && last->phase == Phase::kJoint
                          ? *last->test_accuracy
                          : evaluate(s.model, test);
  out.train_accuracy = last ? last->train_accuracy : 0.0;
  return out;
}

}  // namespace auxlstm
