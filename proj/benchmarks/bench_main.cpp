#include <benchmark/benchmark.h>

#include "auxlstm/copy_task.hpp"
#include "auxlstm/lstm.hpp"
#include "auxlstm/trainer.hpp"
#include "auxlstm/unroll.hpp"

using namespace auxlstm;

static void BM_LstmStep(benchmark::State& state) {
  const auto h = static_cast<std::size_t>(state.range(0));
  RngStream rng(1);
  auto p = LstmParams::uniform(h, h, rng);
  LstmState s = LstmState::zeros(h);
  Tensor x = Tensor::vector(h, 0.1);
  StepCache cache;
  for (auto _ : state) {
    lstm_step_into(p, s, x.data(), cache, s);
    benchmark::DoNotOptimize(s.hidden.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lstm_step_flops(p)));
}
BENCHMARK(BM_LstmStep)->Arg(32)->Arg(128);

static void BM_UnrollBackward(benchmark::State& state) {
  const auto window = static_cast<std::size_t>(state.range(0));
  RngStream rng(2);
  auto p = LstmParams::uniform(32, 32, rng);
  auto emb = EmbeddingTable::uniform(TokenMode::kDiscrete, 10, 32, rng);
  auto ds = gen_copy_memory({5, 200, 8, 3}, 1);
  for (auto _ : state) {
    auto u = unroll_forward(p, emb, ds.examples[0], {window, {}, {}});
    LstmParams g = p.zeros_like();
    StateGrad fg = StateGrad::zeros(32);
    fg.hidden.fill(1.0);
    auto br = bptt_backward(p, u.tape, fg, g);
    benchmark::DoNotOptimize(br.boundary.hidden.data().data());
  }
}
BENCHMARK(BM_UnrollBackward)->Arg(0)->Arg(20)->Arg(210);

static void BM_TrainExample(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.mode = static_cast<TrainMode>(state.range(0));
  cfg.model.hidden = 32;
  cfg.model.embed = 32;
  cfg.model.ffn = 64;
  cfg.model.aux_ffn = 64;
  cfg.supervised_window = 20;
  cfg.n = 1;
  cfg.l = 100;
  auto ds = gen_copy_memory({5, 200, 8, 3}, 1);
  Model m = Model::create(cfg, ds.mode, ds.input_dim, ds.num_classes);
  auto opt = example_options(cfg, Phase::kJoint, 0);
  std::uint64_t step = 0;
  for (auto _ : state) {
    Model g = m.zeros_like();
    auto r = compute_example(m, ds.examples[0], opt, ExampleRngs::derive(1, step++, 0), &g);
    benchmark::DoNotOptimize(r.report.total);
  }
}
BENCHMARK(BM_TrainExample)->Arg(0)->Arg(1)->Arg(2);

BENCHMARK_MAIN();
