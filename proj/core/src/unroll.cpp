#include "auxlstm/unroll.hpp"

#include <algorithm>
#include <numeric>

#include "auxlstm/errors.hpp"

namespace auxlstm {

void UnrollTape::push(std::size_t step, StepCache cache) {
  if (capacity_ == 0) return;
  if (steps_.empty()) {
    start_step_ = step;
  } else if (step != end_step()) {
    throw IndexError("UnrollTape: step " + std::to_string(step) + " is not contiguous with " +
                     std::to_string(end_step()));
  }
  steps_.push_back(std::move(cache));
  if (steps_.size() > capacity_) {
    steps_.pop_front();
    ++start_step_;
  }
}

std::uint64_t lstm_step_flops(const LstmParams& params) {
  return 4ULL * params.hidden() * (params.input_dim() + params.hidden());
}

UnrollResult unroll_forward(const LstmParams& params, const EmbeddingTable& embedding,
                            const SequenceExample& example, const UnrollOptions& options) {
  params.validate();
  if (embedding.embed_dim() != params.input_dim()) {
    throw DimensionError("unroll_forward: embedding width " +
                         std::to_string(embedding.embed_dim()) + " but LSTM expects " +
                         std::to_string(params.input_dim()));
  }
  const std::size_t T = example.length();
  for (std::size_t c : options.checkpoints) {
    if (c > T) {
      throw IndexError("unroll_forward: checkpoint " + std::to_string(c) +
                       " outside sequence of length " + std::to_string(T));
    }
  }
  for (const auto& iv : options.retain) {
    if (iv.end > T || iv.begin > iv.end) {
      throw IndexError("unroll_forward: retain range [" + std::to_string(iv.begin) + ", " +
                       std::to_string(iv.end) + ") outside sequence of length " +
                       std::to_string(T));
    }
  }

  UnrollResult out;
  const std::size_t window = std::min(options.window, T);
  const std::size_t tape_begin = T - window;
  out.tape = UnrollTape(window);
  out.runs.reserve(options.retain.size());
  for (const auto& iv : options.retain) out.runs.emplace_back(iv.length());
  out.checkpoint_states.resize(options.checkpoints.size());
  out.memory.snapshots = options.checkpoints.size();

  // Checkpoint positions sorted by time index.
  std::vector<std::size_t> order(options.checkpoints.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return options.checkpoints[a] < options.checkpoints[b];
  });
  std::size_t next_ckpt = 0;

  LstmState state = LstmState::zeros(params.hidden());
  Tensor x = Tensor::vector(params.input_dim());
  StepCache scratch;
  std::size_t retained = 0;
  const std::uint64_t per_step = lstm_step_flops(params);

  for (std::size_t t = 0; t <= T; ++t) {
    while (next_ckpt < order.size() && options.checkpoints[order[next_ckpt]] == t) {
      out.checkpoint_states[order[next_ckpt]] = state;
      ++next_ckpt;
    }
    if (t == T) break;

    embed_token(embedding, example, t, x.data());
    lstm_step_into(params, state, x.data(), scratch, state);
    out.forward_flops += per_step;

    if (t >= tape_begin && window > 0) {
      out.tape.push(t, scratch);
      ++retained;
    }
    for (std::size_t r = 0; r < options.retain.size(); ++r) {
      if (options.retain[r].contains(t)) {
        out.runs[r].push(t, scratch);
        ++retained;
      }
    }
    out.memory.peak_step_caches = std::max(out.memory.peak_step_caches, retained);
  }
  out.final_state = std::move(state);
  return out;
}

BackwardResult bptt_backward(const LstmParams& params, const UnrollTape& tape,
                             const StateGrad& final_grad, LstmParams& grads,
                             std::span<const Tensor> hidden_grads,
                             std::span<const StateGrad> state_grads) {
  const std::size_t h = params.hidden();
  if (final_grad.hidden.size() != h || final_grad.cell.size() != h) {
    throw DimensionError("bptt_backward: final state gradient has size " +
                         std::to_string(final_grad.hidden.size()) + " but hidden is " +
                         std::to_string(h));
  }
  if (!hidden_grads.empty() && hidden_grads.size() != tape.size()) {
    throw DimensionError("bptt_backward: " + std::to_string(hidden_grads.size()) +
                         " hidden gradients for a tape of " + std::to_string(tape.size()));
  }
  if (!state_grads.empty() && state_grads.size() != tape.size()) {
    throw DimensionError("bptt_backward: " + std::to_string(state_grads.size()) +
                         " state gradients for a tape of " + std::to_string(tape.size()));
  }
  if (!tape.empty() && tape.at(0).hidden.size() != h) {
    throw DimensionError("bptt_backward: tape hidden size " +
                         std::to_string(tape.at(0).hidden.size()) + " vs params " +
                         std::to_string(h));
  }

  BackwardResult out;
  out.input_grads.assign(tape.size(), Tensor::vector(params.input_dim()));
  StateGrad carry = final_grad;
  for (std::size_t i = tape.size(); i-- > 0;) {
    if (!hidden_grads.empty()) carry.hidden += hidden_grads[i];
    if (!state_grads.empty()) {
      carry.hidden += state_grads[i].hidden;
      carry.cell += state_grads[i].cell;
    }
    lstm_step_backward(params, tape.at(i), carry, grads, out.input_grads[i].data(), carry);
  }
  out.steps = tape.size();
  out.boundary = std::move(carry);
  return out;
}

}  // namespace auxlstm
