// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
//
//   auxlstm_acceptance [--only 1,4,9] [--mnist-dir DIR] [--work-dir DIR]

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "auxlstm/anchor.hpp"
#include "auxlstm/aux_loss.hpp"
#include "auxlstm/checkpoint.hpp"
#include "auxlstm/copy_task.hpp"
#include "auxlstm/datasource.hpp"
#include "auxlstm/gradcheck.hpp"
#include "auxlstm/idx.hpp"
#include "auxlstm/model_gradcheck.hpp"
#include "auxlstm/permutation.hpp"
#include "auxlstm/schedule.hpp"
#include "auxlstm/sweeps.hpp"
#include "auxlstm/trainer.hpp"
#include "auxlstm/unroll.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace auxlstm;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

struct Env {
  fs::path work_dir;
  fs::path mnist_dir;
};

std::string fmt(double v, int prec = 3) {
  std::ostringstream s;
  s << std::setprecision(prec) << v;
  return s.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------- 1

constexpr double kGradTol = 1e-4;
constexpr double kFdStep = 1e-5;

double worst(const ModelGradcheck& g) {
  double w = 0.0;
  for (const auto& b : g.blocks) w = std::max(w, b.max_relative_error);
  return w;
}

Outcome gradient_exactness(const Env&) {
  Outcome out;
  // Supervised pipeline over discrete tokens: token t has id t, so embedding
  // row t is the input gradient of step t.
  {
    auto cfg = fixtures::tiny_config(TrainMode::kBaseline, 8, 4, 6);
    Model m = Model::create(cfg, TokenMode::kDiscrete, 12, 3);
    fixtures::randomize(m, RngStream(1001));
    const auto ex = fixtures::unique_token_example(12, 2);
    ExampleOptions opt;
    opt.supervised_window = 12;
    const double e = worst(gradcheck_model(m, ex, opt, ExampleRngs::derive(1, 0, 0), kFdStep));
    out.require(e < kGradTol, "discrete pipeline rel err " + fmt(e));
    out.detail += "pipeline(discrete) " + fmt(e, 2);
  }
  // Same with continuous tokens, checking the raw input cotangents too.
  {
    auto cfg = fixtures::tiny_config(TrainMode::kBaseline, 8, 4, 6);
    Model m = Model::create(cfg, TokenMode::kContinuous, 2, 3);
    fixtures::randomize(m, RngStream(1002));
    RngStream rng(1003);
    auto ex = fixtures::continuous_example(12, 2, 1, rng);
    const auto rngs = ExampleRngs::derive(2, 0, 0);
    ExampleOptions opt;
    opt.supervised_window = 12;
    const double e = worst(gradcheck_model(m, ex, opt, rngs, kFdStep));
    const Tensor analytic = fixtures::supervised_token_grads(m, ex, rngs);
    const Tensor orig = ex.values;
    const Tensor fd = finite_difference_gradient(
        [&](const Tensor& v) {
          ex.values = v;
          return compute_example(m, ex, opt, rngs, nullptr).report.total;
        },
        orig, kFdStep);
    ex.values = orig;
    const double ei = compare_gradients(analytic, fd).max_relative_error;
    out.require(e < kGradTol, "continuous pipeline rel err " + fmt(e));
    out.require(ei < kGradTol, "input grads rel err " + fmt(ei));
    out.detail += ", pipeline(continuous) " + fmt(e, 2) + ", inputs " + fmt(ei, 2);
  }
  // Auxiliary objectives, hidden 5 and segments of length 4. A window
  // covering the whole sequence makes the analytic gradient complete.
  for (TrainMode mode : {TrainMode::kReconstruction, TrainMode::kPrediction}) {
    auto cfg = fixtures::tiny_config(mode, 5, 3, 6);
    Model m = Model::create(cfg, TokenMode::kDiscrete, 12, 3);
    fixtures::randomize(m, RngStream(1004 + static_cast<int>(mode)));
    const auto ex = fixtures::unique_token_example(12, 0);
    ExampleOptions opt;
    opt.supervised = false;
    opt.auxiliary = true;
    opt.aux_window = 12;
    opt.ss_prob = 1.0;
    opt.anchors.kind = mode == TrainMode::kReconstruction ? AuxKind::kReconstruction : AuxKind::kPrediction;
    opt.anchors.l = 4;
    opt.anchors.spread = 0;
    // Prediction cuts the gradient at its anchor, which central differences
    // cannot see, so its segment starts at 0.
    opt.anchors.n = mode == TrainMode::kReconstruction ? 2 : 1;
    opt.anchors.distant_past = true;
    ExampleRngs rngs = ExampleRngs::derive(3, 0, 0);
    if (mode == TrainMode::kPrediction) {
      // Search the anchor stream for a plan anchored at 0.
      for (std::uint64_t s = 0;; ++s) {
        rngs = ExampleRngs::derive(3, s, 0);
        RngStream a = rngs.anchors;
        if (sample_anchor_plan(a, 12, opt.anchors).segments[0].anchor == 0) break;
      }
    }
    const double e = worst(gradcheck_model(m, ex, opt, rngs, kFdStep));
    out.require(e < kGradTol, std::string(to_string(mode)) + " rel err " + fmt(e));
    out.detail += std::string(", ") + std::string(to_string(mode)) + " " + fmt(e, 2);
  }
  return out;
}

// ---------------------------------------------------------------- 2

Outcome truncation_nullity(const Env&) {
  Outcome out;
  const std::size_t T = 10;
  auto cfg = fixtures::tiny_config(TrainMode::kBaseline, 4, 3, 5);
  Model m = Model::create(cfg, TokenMode::kDiscrete, T, 3);
  fixtures::randomize(m, RngStream(2001));
  const auto ex = fixtures::unique_token_example(T, 1);
  std::size_t zero_rows = 0;
  for (std::size_t k : {0u, 1u, 3u, 7u}) {
    ExampleOptions opt;
    opt.supervised_window = k;
    Model g = m.zeros_like();
    compute_example(m, ex, opt, ExampleRngs::derive(k, 0, 0), &g);
    for (std::size_t t = 0; t < T; ++t) {
      bool all_zero = true;
      for (double v : g.embedding.table.row(t)) all_zero = all_zero && v == 0.0;
      if (t < T - k) {
        out.require(all_zero, "k=" + std::to_string(k) + " token " + std::to_string(t) + " nonzero");
        ++zero_rows;
      } else {
        out.require(!all_zero, "k=" + std::to_string(k) + " token " + std::to_string(t) + " inside window is zero");
      }
    }
  }
  out.detail = std::to_string(zero_rows) + " supervised rows bitwise zero";

  // Reconstruction: a token reaches the auxiliary loss only through the
  // main LSTM window before an anchor or as a decoder input.
  const std::size_t TA = 20;
  auto rc = fixtures::tiny_config(TrainMode::kReconstruction, 4, 3, 5);
  Model rm = Model::create(rc, TokenMode::kDiscrete, TA, 3);
  fixtures::randomize(rm, RngStream(2002));
  const auto rex = fixtures::unique_token_example(TA, 1);
  std::size_t aux_zero = 0;
  for (std::size_t w : {0u, 1u, 3u, 7u}) {
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
      ExampleOptions opt;
      opt.supervised = false;
      opt.auxiliary = true;
      opt.aux_window = w;
      opt.anchors.kind = AuxKind::kReconstruction;
      opt.anchors.n = 3;
      opt.anchors.l = 2;
      opt.anchors.spread = 0;
      Model g = rm.zeros_like();
      const auto r = compute_example(rm, rex, opt, ExampleRngs::derive(w, trial, 0), &g);
      std::set<std::size_t> reachable;
      std::uint64_t expect_steps = 0;
      for (const auto& s : r.plan.segments) {
        for (std::size_t t = s.anchor >= w ? s.anchor - w : 0; t < s.anchor; ++t) reachable.insert(t);
        const auto order = segment_order(s);
        for (std::size_t k = 0; k + 1 < order.size(); ++k) reachable.insert(order[k]);
        expect_steps += std::min(w, s.anchor);
      }
      for (std::size_t t = 0; t < TA; ++t) {
        if (reachable.count(t)) continue;
        bool all_zero = true;
        for (double v : g.embedding.table.row(t)) all_zero = all_zero && v == 0.0;
        out.require(all_zero, "aux w=" + std::to_string(w) + " token " + std::to_string(t) + " nonzero");
        ++aux_zero;
      }
      out.require(r.counters.aux_grad_steps == expect_steps, "aux step count w=" + std::to_string(w));
    }
  }
  // Prediction stops at its anchor.
  auto pc = fixtures::tiny_config(TrainMode::kPrediction, 4, 3, 5);
  Model pm = Model::create(pc, TokenMode::kDiscrete, TA, 3);
  fixtures::randomize(pm, RngStream(2003));
  std::size_t pred_zero = 0;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    ExampleOptions opt;
    opt.supervised = false;
    opt.auxiliary = true;
    opt.anchors.kind = AuxKind::kPrediction;
    opt.anchors.n = 2;
    opt.anchors.l = 4;
    Model g = pm.zeros_like();
    const auto r = compute_example(pm, rex, opt, ExampleRngs::derive(7, trial, 0), &g);
    std::size_t first = TA;
    for (const auto& s : r.plan.segments) first = std::min(first, s.anchor);
    for (std::size_t t = 0; t < first; ++t) {
      for (double v : g.embedding.table.row(t)) out.require(v == 0.0, "prediction token before anchor");
      ++pred_zero;
    }
  }
  out.detail += ", " + std::to_string(aux_zero) + " reconstruction rows, " + std::to_string(pred_zero) +
                " prediction rows";
  return out;
}

// ---------------------------------------------------------------- 3

constexpr double kAggregateTol = 1e-12;

Outcome aggregation_formula(const Env&) {
  Outcome out;
  RngStream gen(3001);
  double worst_err = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(gen.uniform_int(1, 40));
    std::vector<SegmentLoss> segs;
    std::vector<double> tokens;
    std::size_t total_len = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto l = static_cast<std::size_t>(gen.uniform_int(1, 60));
      SegmentLoss s;
      s.length = l;
      for (std::size_t k = 0; k < l; ++k) {
        const double tl = -std::log(gen.uniform(1e-6, 1.0));  // a cross-entropy value
        tokens.push_back(tl);
        s.loss += tl;
      }
      total_len += l;
      segs.push_back(s);
    }
    long double brute = 0.0L;
    for (double t : tokens) brute += t;
    brute /= static_cast<long double>(total_len);
    const double got = aggregate_aux_loss(segs);
    const double err = std::abs(got - static_cast<double>(brute)) / std::max(1.0, std::abs(got));
    worst_err = std::max(worst_err, err);
  }
  out.require(worst_err < kAggregateTol, "max error " + fmt(worst_err));
  out.detail = "1000 configs, max error " + fmt(worst_err, 2);
  return out;
}

// ---------------------------------------------------------------- 4

Outcome memory_contract(const Env&) {
  Outcome out;
  RngStream rng(4001);
  const LstmParams p = LstmParams::uniform(1, 4, rng, 0.1);
  const EmbeddingTable emb = EmbeddingTable::uniform(TokenMode::kContinuous, 1, 1, rng, 1.0);
  const std::size_t window = 300;
  for (std::size_t T : {100u, 1000u, 10000u}) {
    const auto ex = fixtures::continuous_example(T, 1, 0, rng);
    for (std::size_t n : {1u, 5u}) {
      AnchorPlanOptions ao;
      ao.kind = AuxKind::kReconstruction;
      ao.n = n;
      ao.l = 10;
      ao.spread = 0;
      RngStream a(T + n);
      const auto plan = sample_anchor_plan(a, T, ao);
      UnrollOptions uo;
      uo.window = window;
      uo.checkpoints = plan_requirements(plan, window).checkpoints;
      const auto u = unroll_forward(p, emb, ex, uo);
      const std::size_t expect = std::min(window, T) + n;
      out.require(u.memory.peak_retained() == expect,
                  "T=" + std::to_string(T) + " n=" + std::to_string(n) + " retained " +
                      std::to_string(u.memory.peak_retained()) + " want " + std::to_string(expect));
    }
    // The trainer's own counter on a supervised-only example.
    auto cfg = fixtures::tiny_config(TrainMode::kBaseline, 4, 1, 4);
    Model m = Model::create(cfg, TokenMode::kContinuous, 1, 2);
    ExampleOptions opt;
    opt.supervised_window = window;
    Model g = m.zeros_like();
    const auto r = compute_example(m, ex, opt, ExampleRngs::derive(0, 0, 0), &g);
    out.require(r.counters.peak_step_caches == std::min(window, T), "trainer counter T=" + std::to_string(T));
    out.detail += (out.detail.empty() ? "" : ", ") + std::string("T=") + std::to_string(T) + ": " +
                  std::to_string(std::min(window, T)) + "+n";
  }
  return out;
}

// ---------------------------------------------------------------- 5

Outcome schedules(const Env&) {
  Outcome out;
  PhaseSchedule pre;
  pre.phase = Phase::kPretrain;
  out.require(lr_at(0, pre) == 0.001, "pretrain lr(0)");
  out.require(lr_at(49, pre) == 0.001, "pretrain lr(49)");
  out.require(lr_at(50, pre) == 0.0005, "pretrain lr(50)");
  out.require(lr_at(99, pre) == 0.0005, "pretrain lr(99)");
  PhaseSchedule joint;
  out.require(lr_at(0, joint) == 0.001, "joint lr(0)");
  out.require(lr_at(299, joint) == 0.001, "joint lr(299)");
  out.require(lr_at(300, joint) == 0.0005, "joint lr(300)");
  out.require(lr_at(600, joint) == 0.00025, "joint lr(600)");
  out.require(lr_at(900, joint) == 0.000125, "joint lr(900)");
  const SsSchedule ss;
  out.require(scheduled_sampling_prob(0, ss) == 1.0, "ss(0)");
  out.require(scheduled_sampling_prob(50000, ss) == 0.5, "ss(50000)");
  out.require(scheduled_sampling_prob(100000, ss) == 0.0, "ss(100000)");
  out.require(scheduled_sampling_prob(250000, ss) == 0.0, "ss(250000)");
  out.detail = "lr 0.001/0.0005 at 50, halving every 300 joint epochs, ss 1.0 -> 0.0 at 100000";
  return out;
}

// ---------------------------------------------------------------- 6

// Shared settings of the long-gap copy runs. The main LSTM keeps a strong
// forget bias and a wide init so its state can carry a symbol across the
// gap once the auxiliary loss writes it there.
ExperimentConfig copy_run(TrainMode mode, std::uint64_t seed, const fs::path& dir) {
  ExperimentConfig c;
  c.mode = mode;
  c.data.kind = DatasetKind::kCopy;
  c.data.copy_alphabet = 8;
  c.data.copy_payload = 5;
  c.data.copy_blank = 200;
  c.data.copy_train = 2000;
  c.data.copy_test = 500;
  c.data.copy_seed = 1;
  c.model.hidden = 32;
  c.model.embed = 16;
  c.model.ffn = 64;
  c.model.aux_ffn = 64;
  c.model.init_scale = 0.5;
  c.model.forget_bias = 3.0;
  c.supervised_window = 20;
  c.batch_size = 16;
  c.schedule.initial_lr = 0.01;
  c.schedule.pretrain_halve_at = 100;
  c.schedule.joint_halve_every = 100;
  c.distant_past = true;
  c.spread = 0;
  c.seed = seed;
  c.eval_every = 0;  // the final epoch is still evaluated
  c.out_dir = dir;
  switch (mode) {
    case TrainMode::kBaseline:
      c.schedule.pretrain_epochs = 0;
      c.schedule.max_epochs = 30;
      break;
    case TrainMode::kReconstruction:
      c.n = 50;
      c.l = 5;
      c.aux_window = 300;
      c.schedule.pretrain_epochs = 5;
      c.schedule.max_epochs = 10;
      break;
    case TrainMode::kPrediction:
      // One segment spanning the sequence: the echo is the only predictable
      // part that depends on the label symbol.
      c.n = 1;
      c.l = 210;
      c.model.forget_bias = 5.0;
      c.schedule.initial_lr = 0.003;
      c.clip_norm = 1.0;
      c.schedule.pretrain_epochs = 8;
      c.schedule.max_epochs = 22;
      break;
  }
  return c;
}

constexpr double kBaselineMax = 0.25;
constexpr double kAuxMin = 0.60;
constexpr double kCopyBudgetSeconds = 30 * 60;

Outcome long_dependency(const Env& env) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  for (TrainMode mode : {TrainMode::kBaseline, TrainMode::kReconstruction, TrainMode::kPrediction}) {
    std::vector<double> acc;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto cfg = copy_run(mode, seed, env.work_dir / "copy" / std::string(to_string(mode)));
      const auto data = load_datasets(cfg);
      const auto r = run_experiment(cfg, data.train, data.test, true);
      acc.push_back(r.test_accuracy);
      std::cerr << "  copy " << to_string(mode) << " seed " << seed << ": test " << r.test_accuracy
                << std::endl;
    }
    std::sort(acc.begin(), acc.end());
    const double median = acc[1];
    if (mode == TrainMode::kBaseline) {
      out.require(median <= kBaselineMax, "baseline median " + fmt(median) + " > " + fmt(kBaselineMax));
    } else {
      out.require(median >= kAuxMin, std::string(to_string(mode)) + " median " + fmt(median) + " < " + fmt(kAuxMin));
    }
    out.detail += (out.detail.empty() ? "" : ", ") + std::string(to_string(mode)) + " " + fmt(median) +
                  " [" + fmt(acc[0]) + " " + fmt(acc[2]) + "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.detail += ", medians of 3 seeds";
  out.require(secs < kCopyBudgetSeconds, "runtime " + fmt(secs, 4) + " s over target");
  return out;
}

// ---------------------------------------------------------------- 7

Outcome segment_sweep(const Env& env) {
  Outcome out;
  ExperimentConfig c;
  c.mode = TrainMode::kReconstruction;
  c.data.kind = DatasetKind::kCopy;
  c.data.copy_alphabet = 8;
  c.data.copy_payload = 5;
  c.data.copy_blank = 590;  // length 600, room for the single 600-step segment
  c.data.copy_train = 16;
  c.data.copy_test = 16;
  c.model.hidden = 8;
  c.model.embed = 4;
  c.model.ffn = 8;
  c.model.aux_ffn = 8;
  c.supervised_window = 20;
  c.spread = 0;
  c.batch_size = 8;
  c.schedule.pretrain_epochs = 1;
  c.schedule.max_epochs = 1;
  c.out_dir = env.work_dir / "segments";
  const auto data = load_datasets(c);
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{1, 600}, {10, 60}, {20, 30},
                                                               {50, 12}, {100, 6}, {200, 3}};
  const auto table = sweep_segments(c, pairs, data.train, data.test, false);
  out.require(table.rows.size() == pairs.size(), "row count");
  out.require(table.warnings.empty(), "unexpected budget warning");
  // Two epochs (pretraining and joint), 600 main steps per example.
  const std::uint64_t expect = 2ull * c.data.copy_train * 600;
  for (const auto& r : table.rows) {
    out.require(r.aux_grad_steps == expect, std::to_string(r.n) + "x" + std::to_string(r.l) + " steps " +
                                                std::to_string(r.aux_grad_steps));
  }
  out.detail = std::to_string(table.rows.size()) + " pairs, aux-grad steps " +
               std::to_string(table.rows.empty() ? 0 : table.rows[0].aux_grad_steps) + " each";
  return out;
}

// ---------------------------------------------------------------- 8

ExperimentConfig small_run(TrainMode mode, const fs::path& dir) {
  ExperimentConfig c;
  c.mode = mode;
  c.data.kind = DatasetKind::kCopy;
  c.data.copy_alphabet = 4;
  c.data.copy_payload = 3;
  c.data.copy_blank = 10;
  c.data.copy_train = 40;
  c.data.copy_test = 20;
  c.model.hidden = 8;
  c.model.embed = 4;
  c.model.ffn = 8;
  c.model.aux_ffn = 8;
  c.supervised_window = 5;
  c.n = 2;
  c.l = 4;
  c.spread = 1;
  c.batch_size = 8;
  c.schedule.initial_lr = 0.01;
  c.schedule.pretrain_epochs = 3;
  c.schedule.max_epochs = 3;
  c.ss.horizon = 30;
  c.seed = 11;
  c.out_dir = dir;
  return c;
}

Outcome determinism(const Env& env) {
  Outcome out;
  const fs::path root = env.work_dir / "determinism";
  fs::remove_all(root);
  int compared = 0;
  for (TrainMode mode : {TrainMode::kBaseline, TrainMode::kReconstruction, TrainMode::kPrediction}) {
    const std::string tag(to_string(mode));
    const auto a = small_run(mode, root / (tag + "_a"));
    const auto data = load_datasets(a);
    auto b = a;
    b.out_dir = root / (tag + "_b");
    const auto ra = run_experiment(a, data.train, data.test);
    const auto rb = run_experiment(b, data.train, data.test);
    const auto ma = slurp(a.out_dir / "metrics.csv");
    out.require(!ma.empty() && ma == slurp(b.out_dir / "metrics.csv"), tag + " metrics differ");
    out.require(ra.session.model == rb.session.model, tag + " models differ");
    ++compared;

    // Uninterrupted reference with a checkpoint after every epoch, then a
    // run stopped after each epoch of it and resumed from its checkpoint.
    auto full = a;
    full.checkpoint_every = 1;
    full.out_dir = root / (tag + "_full");
    const auto ref = run_experiment(full, data.train, data.test);
    const std::uint64_t total = (mode == TrainMode::kBaseline ? 0 : full.schedule.pretrain_epochs) +
                                full.schedule.max_epochs;
    for (std::uint64_t stop = 1; stop < total; ++stop) {
      auto part = full;
      part.out_dir = root / (tag + "_part");
      fs::remove_all(part.out_dir);
      fs::create_directories(part.out_dir);
      TrainSession s = make_session(part, data.train);
      MetricsWriter w(part.out_dir / "metrics.csv");
      TrainHooks hooks;
      hooks.metrics = &w;
      hooks.checkpoint_path = part.out_dir / "checkpoint.bin";
      std::uint64_t seen = 0;
      hooks.on_epoch = [&](const TrainSession&, const MetricsRecord&) { return ++seen < stop; };
      if (!s.config.has_aux() || run_pretraining(s, data.train, &data.test, hooks)) {
        run_joint(s, data.train, &data.test, hooks);
      }
      const auto resumed = run_experiment(part, data.train, data.test, true, part.out_dir / "checkpoint.bin");
      const std::string at = tag + " stop " + std::to_string(stop);
      out.require(resumed.session.model == ref.session.model, at + " model");
      out.require(resumed.session.optimizer.mean_square == ref.session.optimizer.mean_square, at + " optimizer");
      out.require(resumed.session.step == ref.session.step, at + " step");
      out.require(resumed.session.totals == ref.session.totals, at + " counters");
      out.require(slurp(part.out_dir / "metrics.csv") == slurp(full.out_dir / "metrics.csv"), at + " metrics");
      ++compared;
    }
  }
  fs::remove_all(root);
  out.detail = std::to_string(compared) + " bitwise comparisons across baseline, r and p";
  return out;
}

// ---------------------------------------------------------------- 9

bool has_mnist(const fs::path& dir) {
  if (dir.empty()) return false;
  for (const char* f : {"train-images-idx3-ubyte", "train-labels-idx1-ubyte", "t10k-images-idx3-ubyte",
                        "t10k-labels-idx1-ubyte"}) {
    if (!fs::exists(dir / f)) return false;
  }
  return true;
}

// A 60000/10000 IDX pair with random pixels and labels 0..9.
void write_synthetic_mnist(const fs::path& dir) {
  fs::create_directories(dir);
  RngStream rng(9001);
  for (auto [prefix, count] : {std::pair{"train", 60000u}, std::pair{"t10k", 10000u}}) {
    IdxImages im;
    im.count = count;
    im.rows = 28;
    im.cols = 28;
    im.pixels.resize(std::size_t{count} * 784);
    for (auto& px : im.pixels) px = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    std::vector<std::uint8_t> labels(count);
    for (auto& l : labels) l = static_cast<std::uint8_t>(rng.uniform_int(0, 9));
    write_idx_images(dir / (std::string(prefix) + "-images-idx3-ubyte"), im);
    write_idx_labels(dir / (std::string(prefix) + "-labels-idx1-ubyte"), labels);
  }
}

Outcome data_ingestion(const Env& env) {
  Outcome out;
  const bool real = has_mnist(env.mnist_dir);
  const fs::path dir = real ? env.mnist_dir : env.work_dir / "synthetic_mnist";
  if (!real) write_synthetic_mnist(dir);

  ExperimentConfig c;
  c.data.kind = DatasetKind::kMnist;
  c.data.data_dir = dir;
  const auto splits = load_datasets(c);
  const auto& train = splits.train;
  out.require(train.examples.size() == 60000, "train count " + std::to_string(train.examples.size()));
  out.require(train.num_classes == 10, "classes");
  bool shapes = true, labels = true, range = true;
  for (const auto& ex : train.examples) {
    shapes = shapes && ex.length() == 784 && ex.values.cols() == 1;
    labels = labels && ex.label <= 9;
    for (double v : ex.values.data()) range = range && v >= 0.0 && v <= 1.0;
  }
  out.require(shapes, "sequence shape");
  out.require(labels, "label range");
  out.require(range, "pixel range");

  // Identity round trip: loaded values are the raw bytes / 255, and
  // rewriting the bytes reproduces the file.
  const auto raw = read_idx_images(dir / "train-images-idx3-ubyte");
  const auto raw_labels = read_idx_labels(dir / "train-labels-idx1-ubyte");
  bool same = raw.count == train.examples.size();
  for (std::size_t i = 0; same && i < train.examples.size(); ++i) {
    same = train.examples[i].label == raw_labels[i];
    for (std::size_t t = 0; same && t < 784; ++t) {
      same = train.examples[i].values(t, 0) == raw.pixels[i * 784 + t] / 255.0;
    }
  }
  out.require(same, "loaded values differ from raw bytes");
  const fs::path copy = env.work_dir / "roundtrip-images";
  write_idx_images(copy, raw);
  out.require(slurp(copy) == slurp(dir / "train-images-idx3-ubyte"), "rewritten image file differs");
  fs::remove(copy);

  // The permuted variant.
  const auto p1 = PermutationSpec::from_seed(c.data.perm_seed);
  const auto p2 = PermutationSpec::from_seed(c.data.perm_seed);
  out.require(p1.perm == p2.perm && p1.is_bijection() && p1.perm.size() == 784, "permutation not stable");
  out.require(PermutationSpec::from_seed(c.data.perm_seed + 1).perm != p1.perm, "seed ignored");
  Dataset head;
  head.mode = train.mode;
  head.input_dim = train.input_dim;
  head.num_classes = train.num_classes;
  head.examples.assign(train.examples.begin(), train.examples.begin() + 100);
  const auto permuted = apply_permutation(head, p1);
  const auto back = apply_permutation(permuted, p1.inverse());
  bool inv = true;
  for (std::size_t i = 0; i < head.examples.size(); ++i) {
    inv = inv && back.examples[i].values == head.examples[i].values &&
          permuted.examples[i].values(0, 0) == head.examples[i].values(p1.perm[0], 0);
  }
  out.require(inv, "permutation round trip");
  auto pc = c;
  pc.data.kind = DatasetKind::kPMnist;
  pc.data.train_limit = 100;
  pc.data.test_limit = 1;
  const auto pm = load_datasets(pc);
  bool matches = pm.train.examples.size() == 100;
  for (std::size_t i = 0; matches && i < 100; ++i) matches = pm.train.examples[i].values == permuted.examples[i].values;
  out.require(matches, "pmnist loader disagrees with apply_permutation");

  if (!real) fs::remove_all(dir);
  out.detail = std::string(real ? "real MNIST files" : "synthetic 60000x28x28 IDX stand-in (no MNIST dir given)") +
               ", 60000 sequences of 784";
  return out;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome(const Env&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"auxlstm acceptance suite"};
  std::vector<int> only;
  Env env;
  std::string work = (fs::temp_directory_path() / "auxlstm_acceptance").string();
  std::string mnist;
  if (const char* e = std::getenv("AUXLSTM_MNIST_DIR")) mnist = e;
  app.add_option("--only", only, "criterion numbers to run")->delimiter(',');
  app.add_option("--mnist-dir", mnist, "directory with the four MNIST IDX files");
  app.add_option("--work-dir", work, "scratch directory");
  CLI11_PARSE(app, argc, argv);
  env.work_dir = work;
  env.mnist_dir = mnist;
  fs::create_directories(env.work_dir);

  // The long-gap copy runs carry their own runtime target inside.
  const std::vector<Criterion> all{
      {1, "gradient-exactness", 10, gradient_exactness},
      {2, "truncation-nullity", 5, truncation_nullity},
      {3, "aggregation-formula", 5, aggregation_formula},
      {4, "memory-contract", 30, memory_contract},
      {5, "schedules", 1, schedules},
      {6, "long-dependency-copy", 1e9, long_dependency},
      {7, "segment-sweep-budget", 600, segment_sweep},
      {8, "determinism-checkpointing", 300, determinism},
      {9, "data-ingestion", 60, data_ingestion},
  };
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(env);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_seconds) o.require(false, "runtime " + fmt(secs) + " s > " + fmt(c.budget_seconds) + " s");
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << fmt(secs, 3)
              << " s): " << o.detail;
    for (const auto& f : o.failures) std::cout << " | " << f;
    std::cout << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
