#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "auxlstm/dataset.hpp"
#include "auxlstm/embedding.hpp"
#include "auxlstm/lstm.hpp"

namespace auxlstm {

/// Half-open range of time steps [begin, end).
struct StepInterval {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t length() const { return end > begin ? end - begin : 0; }
  bool contains(std::size_t t) const { return t >= begin && t < end; }
};

/// Bounded window of step caches. Holds at most `capacity` consecutive steps;
/// pushing past capacity evicts the oldest step, which is then unrecoverable.
class UnrollTape {
 public:
  UnrollTape() = default;
  explicit UnrollTape(std::size_t capacity) : capacity_(capacity) {}

  void push(std::size_t step, StepCache cache);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  /// Time index of the oldest retained step.
  std::size_t start_step() const { return start_step_; }
  std::size_t end_step() const { return start_step_ + steps_.size(); }
  const StepCache& at(std::size_t i) const { return steps_[i]; }
  const StepCache& step(std::size_t t) const { return steps_[t - start_step_]; }

 private:
  std::size_t capacity_ = 0;
  std::size_t start_step_ = 0;
  std::deque<StepCache> steps_;
};

struct UnrollOptions {
  /// Number of trailing steps whose caches are kept for truncated BPTT.
  std::size_t window = 0;
  /// State snapshots to capture. Index c in [0, T] names the state entering
  /// step c, so 0 is the initial state and T is the final state.
  std::vector<std::size_t> checkpoints;
  /// Extra step ranges to cache, one tape per range (auxiliary backprop).
  std::vector<StepInterval> retain;
};

struct MemoryStats {
  std::size_t peak_step_caches = 0;
  std::size_t snapshots = 0;
  std::size_t peak_retained() const { return peak_step_caches + snapshots; }
};

struct UnrollResult {
  LstmState final_state;
  UnrollTape tape;
  std::vector<LstmState> checkpoint_states;  // aligned with options.checkpoints
  std::vector<UnrollTape> runs;              // aligned with options.retain
  MemoryStats memory;
  std::uint64_t forward_flops = 0;
};

/// Runs the LSTM over the whole example from the zero state. Only the caches
/// named by `options` are retained; peak memory is bounded by
/// window + sum of retain lengths + number of checkpoints.
UnrollResult unroll_forward(const LstmParams& params, const EmbeddingTable& embedding,
                            const SequenceExample& example, const UnrollOptions& options);

struct BackwardResult {
  /// Cotangent of the state entering the tape. At a truncation boundary the
  /// caller drops it; otherwise it may be chained into an earlier tape.
  StateGrad boundary;
  /// Cotangent of the embedded input of each tape step.
  std::vector<Tensor> input_grads;
  std::size_t steps = 0;
};

/// Reverse sweep over exactly the steps held by `tape`. `final_grad` is the
/// cotangent of the state leaving the last step; `hidden_grads`, when not
/// empty, holds one extra cotangent per tape step added to that step's
/// output hidden state. `state_grads`, when not empty, likewise adds a full
/// (hidden, cell) cotangent to the state leaving each step. Parameter
/// gradients accumulate into `grads`.
BackwardResult bptt_backward(const LstmParams& params, const UnrollTape& tape,
                             const StateGrad& final_grad, LstmParams& grads,
                             std::span<const Tensor> hidden_grads = {},
                             std::span<const StateGrad> state_grads = {});

/// Per-step cost of lstm_step in multiply-adds.
std::uint64_t lstm_step_flops(const LstmParams& params);

}  // namespace auxlstm
