#include "auxlstm/aux_decoder.hpp"

#include <algorithm>

#include "auxlstm/errors.hpp"
#include "auxlstm/losses.hpp"

namespace auxlstm {

AuxDecoderParams AuxDecoderParams::create(const AuxDecoderShape& shape, RngStream& rng) {
  AuxDecoderParams p;
  p.kind = shape.kind;
  p.token_mode = shape.token_mode;
  const std::size_t h = shape.main_hidden;
  const std::size_t bottom_in = shape.kind == AuxKind::kReconstruction ? shape.embed_dim : h;
  p.bottom = LstmParams::uniform(bottom_in, h, rng, shape.init_scale, shape.forget_bias_offset);
  p.top = LstmParams::uniform(h, h, rng, shape.init_scale, shape.forget_bias_offset);
  if (shape.token_mode == TokenMode::kContinuous) {
    p.head = FfnParams::uniform(h, shape.ffn_hidden, shape.token_dim, rng, shape.drop_connect,
                                shape.init_scale);
  } else {
    p.projection = Tensor(h, shape.token_dim);
    for (double& w : p.projection.data()) w = rng.uniform(-shape.init_scale, shape.init_scale);
    p.projection_bias = Tensor::vector(shape.token_dim);
  }
  return p;
}

AuxDecoderParams AuxDecoderParams::zeros_like() const {
  AuxDecoderParams p;
  p.kind = kind;
  p.token_mode = token_mode;
  p.bottom = bottom.zeros_like();
  p.top = top.zeros_like();
  if (token_mode == TokenMode::kContinuous) {
    p.head = head.zeros_like();
  } else {
    p.projection = Tensor(projection.shape());
    p.projection_bias = Tensor(projection_bias.shape());
  }
  return p;
}

std::size_t AuxDecoderParams::output_dim() const {
  return token_mode == TokenMode::kContinuous ? head.output_dim() : projection.cols();
}

namespace {

struct HeadCache {
  FfnCache ffn;
  Tensor input;
};

Tensor head_forward(const AuxDecoderParams& dec, std::span<const double> top_hidden,
                    const AuxContext& ctx, HeadCache& cache) {
  if (dec.token_mode == TokenMode::kContinuous) {
    RngStream fallback;
    RngStream& rng = ctx.mask_rng != nullptr ? *ctx.mask_rng : fallback;
    auto out = classifier_forward(dec.head, top_hidden, rng, ctx.train_mode);
    cache.ffn = std::move(out.cache);
    return std::move(out.logits);
  }
  cache.input = Tensor::from_vector(top_hidden);
  Tensor logits = dec.projection_bias;
  vecmat_acc(top_hidden, dec.projection, logits.data());
  return logits;
}

void head_backward(const AuxDecoderParams& dec, const HeadCache& cache,
                   std::span<const double> out_grad, AuxDecoderParams& grads,
                   std::span<double> top_hidden_grad) {
  if (dec.token_mode == TokenMode::kContinuous) {
    Tensor g = classifier_backward(dec.head, cache.ffn, out_grad, grads.head);
    axpy(1.0, g.data(), top_hidden_grad);
    return;
  }
  axpy(1.0, out_grad, grads.projection_bias.data());
  outer_t_acc(grads.projection, cache.input.data(), out_grad);
  vecmat_t_acc(dec.projection, out_grad, top_hidden_grad);
}

LossAndGrad token_loss(const AuxDecoderParams& dec, const Tensor& output,
                       const SequenceExample& seq, std::size_t t) {
  if (dec.token_mode == TokenMode::kDiscrete) return softmax_cross_entropy(output, seq.ids[t]);
  return l2_token_loss(output.data(), seq.value(t));
}

void check_decoder(const AuxDecoderParams& dec, AuxKind kind, const SequenceExample& seq) {
  if (dec.kind != kind) {
    throw ConfigError(std::string("aux decoder built for ") + std::string(to_string(dec.kind)) +
                      " used for " + std::string(to_string(kind)));
  }
  if (dec.token_mode != seq.mode) throw ConfigError("aux decoder token mode differs from data");
  if (seq.mode == TokenMode::kContinuous && dec.output_dim() != seq.values.cols()) {
    throw DimensionError("aux decoder output width " + std::to_string(dec.output_dim()) +
                         " does not match token width " + std::to_string(seq.values.cols()));
  }
}

struct DecoderStep {
  StepCache bottom;
  StepCache top;
  HeadCache head;
  Tensor loss_grad;
  // Input fed at this step: a token id or a continuous vector.
  std::uint32_t input_id = 0;
  Tensor input_value;
};

}  // namespace

AuxResult reconstruction_loss(std::span<const LstmState> anchor_states,
                              const AuxDecoderParams& decoder, const EmbeddingTable& embedding,
                              const SequenceExample& seq, const AnchorPlan& plan,
                              const AuxContext& ctx, AuxDecoderParams* decoder_grads,
                              EmbeddingTable* embedding_grads) {
  if (plan.kind != AuxKind::kReconstruction) {
    throw ConfigError("reconstruction_loss: plan was sampled for prediction");
  }
  if (anchor_states.size() != plan.n()) {
    throw DimensionError("reconstruction_loss: " + std::to_string(anchor_states.size()) +
                         " anchor states for " + std::to_string(plan.n()) + " segments");
  }
  check_decoder(decoder, AuxKind::kReconstruction, seq);
  const bool want_grads = decoder_grads != nullptr;
  const bool discrete = seq.mode == TokenMode::kDiscrete;
  const std::size_t hb = decoder.bottom.hidden();
  const std::size_t ht = decoder.top.hidden();
  const std::size_t embed = embedding.embed_dim();

  AuxResult out;
  out.per_segment.reserve(plan.n());
  out.anchor_grads.reserve(plan.n());
  std::vector<DecoderStep> steps;
  Tensor x = Tensor::vector(embed);

  for (std::size_t i = 0; i < plan.n(); ++i) {
    const SegmentSpec& seg = plan.segments[i];
    validate_segment(seg, AuxKind::kReconstruction, seq.length());
    const auto order = segment_order(seg);
    const std::size_t l = seg.length;
    const std::size_t n_steps = l - 1;
    SegmentLoss seg_loss{0.0, l};

    LstmState bottom = anchor_states[i];
    LstmState top = LstmState::zeros(ht);
    steps.assign(n_steps, DecoderStep{});

    // Input of step 0 is always the first visited token.
    std::uint32_t next_id = discrete ? seq.ids[order[0]] : 0;
    Tensor next_value = discrete ? Tensor() : Tensor::from_vector(seq.value(order[0]));

    for (std::size_t k = 0; k < n_steps; ++k) {
      DecoderStep& st = steps[k];
      st.input_id = next_id;
      st.input_value = next_value;
      if (discrete) {
        embedding.embed_id(st.input_id, x.data());
      } else {
        embedding.embed_value(st.input_value.data(), x.data());
      }
      lstm_step_into(decoder.bottom, bottom, x.data(), st.bottom, bottom);
      lstm_step_into(decoder.top, top, bottom.hidden.data(), st.top, top);
      Tensor output = head_forward(decoder, top.hidden.data(), ctx, st.head);

      const std::size_t target = order[k + 1];
      auto tl = token_loss(decoder, output, seq, target);
      seg_loss.loss += tl.loss;
      st.loss_grad = std::move(tl.grad);
      ++out.decoder_steps;

      if (k + 1 < n_steps) {
        bool teacher = true;
        if (ctx.ss_prob < 1.0) {
          if (ctx.ss_rng == nullptr) {
            throw ConfigError("reconstruction_loss: scheduled sampling needs a random stream");
          }
          teacher = ctx.ss_rng->bernoulli(ctx.ss_prob);
        }
        if (teacher) {
          if (discrete) {
            next_id = seq.ids[target];
          } else {
            next_value = Tensor::from_vector(seq.value(target));
          }
        } else if (discrete) {
          next_id = static_cast<std::uint32_t>(argmax(output.data()));
        } else {
          // The prediction is fed back as data; no gradient flows through it.
          next_value = std::move(output);
        }
      }
    }
    out.per_segment.push_back(seg_loss);

    StateGrad d_bottom = StateGrad::zeros(hb);
    if (want_grads) {
      StateGrad d_top = StateGrad::zeros(ht);
      Tensor d_bottom_out = Tensor::vector(hb);
      Tensor dx = Tensor::vector(embed);
      Tensor d_top_hidden = Tensor::vector(ht);
      for (std::size_t k = n_steps; k-- > 0;) {
        DecoderStep& st = steps[k];
        st.loss_grad *= ctx.grad_scale;
        d_top_hidden.fill(0.0);
        head_backward(decoder, st.head, st.loss_grad.data(), *decoder_grads, d_top_hidden.data());
        d_top.hidden += d_top_hidden;
        d_bottom_out.fill(0.0);
        lstm_step_backward(decoder.top, st.top, d_top, decoder_grads->top, d_bottom_out.data(),
                           d_top);
        d_bottom.hidden += d_bottom_out;
        dx.fill(0.0);
        lstm_step_backward(decoder.bottom, st.bottom, d_bottom, decoder_grads->bottom, dx.data(),
                           d_bottom);
        if (embedding_grads != nullptr) {
          if (discrete) {
            embedding.accumulate_id_grad(st.input_id, dx.data(), *embedding_grads);
          } else {
            embedding.accumulate_value_grad(st.input_value.data(), dx.data(), *embedding_grads);
          }
        }
      }
    }
    out.anchor_grads.push_back(std::move(d_bottom));
  }
  return out;
}

AuxResult prediction_loss(std::span<const LstmState> anchor_states,
                          std::span<const UnrollTape> segment_tapes,
                          const AuxDecoderParams& decoder, const SequenceExample& seq,
                          const AnchorPlan& plan, const AuxContext& ctx,
                          AuxDecoderParams* decoder_grads,
                          std::vector<std::vector<Tensor>>* main_hidden_grads) {
  if (plan.kind != AuxKind::kPrediction) {
    throw ConfigError("prediction_loss: plan was sampled for reconstruction");
  }
  if (anchor_states.size() != plan.n() || segment_tapes.size() != plan.n()) {
    throw DimensionError("prediction_loss: need one anchor state and one tape per segment, got " +
                         std::to_string(anchor_states.size()) + " and " +
                         std::to_string(segment_tapes.size()) + " for " +
                         std::to_string(plan.n()));
  }
  check_decoder(decoder, AuxKind::kPrediction, seq);
  const bool want_grads = decoder_grads != nullptr;
  const std::size_t hb = decoder.bottom.hidden();
  const std::size_t ht = decoder.top.hidden();
  const std::size_t main_h = decoder.bottom.input_dim();

  AuxResult out;
  if (main_hidden_grads != nullptr) main_hidden_grads->assign(plan.n(), {});
  std::vector<DecoderStep> steps;

  for (std::size_t i = 0; i < plan.n(); ++i) {
    const SegmentSpec& seg = plan.segments[i];
    validate_segment(seg, AuxKind::kPrediction, seq.length());
    const UnrollTape& tape = segment_tapes[i];
    const std::size_t l = seg.length;
    if (tape.size() != l - 1 || (l > 1 && tape.start_step() != seg.start)) {
      throw IndexError("prediction_loss: tape for segment " + std::to_string(i) +
                       " must cover steps [" + std::to_string(seg.start) + ", " +
                       std::to_string(seg.end() - 1) + ")");
    }
    SegmentLoss seg_loss{0.0, l};
    LstmState bottom = anchor_states[i];
    LstmState top = LstmState::zeros(ht);
    steps.assign(l, DecoderStep{});

    for (std::size_t k = 0; k < l; ++k) {
      DecoderStep& st = steps[k];
      const Tensor& main_out = k == 0 ? anchor_states[i].hidden : tape.at(k - 1).hidden;
      if (main_out.size() != main_h) {
        throw DimensionError("prediction_loss: main hidden size " +
                             std::to_string(main_out.size()) + " vs decoder input " +
                             std::to_string(main_h));
      }
      lstm_step_into(decoder.bottom, bottom, main_out.data(), st.bottom, bottom);
      lstm_step_into(decoder.top, top, bottom.hidden.data(), st.top, top);
      Tensor output = head_forward(decoder, top.hidden.data(), ctx, st.head);
      auto tl = token_loss(decoder, output, seq, seg.start + k);
      seg_loss.loss += tl.loss;
      st.loss_grad = std::move(tl.grad);
      ++out.decoder_steps;
    }
    out.per_segment.push_back(seg_loss);

    StateGrad d_bottom = StateGrad::zeros(hb);
    if (want_grads) {
      std::vector<Tensor> hidden_grads(l - 1, Tensor::vector(main_h));
      StateGrad d_top = StateGrad::zeros(ht);
      Tensor d_bottom_out = Tensor::vector(hb);
      Tensor d_main_out = Tensor::vector(main_h);
      Tensor d_top_hidden = Tensor::vector(ht);
      for (std::size_t k = l; k-- > 0;) {
        DecoderStep& st = steps[k];
        st.loss_grad *= ctx.grad_scale;
        d_top_hidden.fill(0.0);
        head_backward(decoder, st.head, st.loss_grad.data(), *decoder_grads, d_top_hidden.data());
        d_top.hidden += d_top_hidden;
        d_bottom_out.fill(0.0);
        lstm_step_backward(decoder.top, st.top, d_top, decoder_grads->top, d_bottom_out.data(),
                           d_top);
        d_bottom.hidden += d_bottom_out;
        d_main_out.fill(0.0);
        lstm_step_backward(decoder.bottom, st.bottom, d_bottom, decoder_grads->bottom,
                           d_main_out.data(), d_bottom);
        if (k == 0) {
          d_bottom.hidden += d_main_out;
        } else {
          hidden_grads[k - 1] = d_main_out;
        }
      }
      if (main_hidden_grads != nullptr) (*main_hidden_grads)[i] = std::move(hidden_grads);
    }
    out.anchor_grads.push_back(std::move(d_bottom));
  }
  return out;
}

}  // namespace auxlstm
