#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "auxlstm/anchor.hpp"
#include "auxlstm/aux_loss.hpp"
#include "auxlstm/classifier.hpp"
#include "auxlstm/dataset.hpp"
#include "auxlstm/embedding.hpp"
#include "auxlstm/lstm.hpp"
#include "auxlstm/unroll.hpp"

namespace auxlstm {

struct AuxDecoderShape {
  AuxKind kind = AuxKind::kReconstruction;
  TokenMode token_mode = TokenMode::kContinuous;
  std::size_t embed_dim = 128;    // reconstruction decoder input width
  std::size_t main_hidden = 128;  // bottom layer hidden size (state handoff)
  std::size_t token_dim = 1;      // vocabulary size or continuous token width
  std::size_t ffn_hidden = 256;
  double drop_connect = 0.5;
  double init_scale = 0.08;
  double forget_bias_offset = 1.0;
};

/// Two-layer auxiliary LSTM plus a per-step output head. The bottom layer
/// starts from the main LSTM's anchor state and the top layer from zero.
/// Reconstruction decoders read embedded tokens; prediction decoders read
/// the main LSTM's hidden outputs.
struct AuxDecoderParams {
  AuxKind kind = AuxKind::kReconstruction;
  TokenMode token_mode = TokenMode::kContinuous;
  LstmParams bottom;
  LstmParams top;
  FfnParams head;          // continuous tokens
  Tensor projection;       // discrete tokens: (hidden x vocab)
  Tensor projection_bias;  // (1 x vocab)

  static AuxDecoderParams create(const AuxDecoderShape& shape, RngStream& rng);
  AuxDecoderParams zeros_like() const;
  std::size_t output_dim() const;
};

template <class P, class F>
  requires std::is_same_v<std::remove_const_t<P>, AuxDecoderParams>
void visit_blocks(P& p, F&& f) {
  visit_blocks(p.bottom, [&](std::string_view n, auto& t) { f("bottom." + std::string(n), t); });
  visit_blocks(p.top, [&](std::string_view n, auto& t) { f("top." + std::string(n), t); });
  if (p.token_mode == TokenMode::kContinuous) {
    visit_blocks(p.head, [&](std::string_view n, auto& t) { f("head." + std::string(n), t); });
  } else {
    f(std::string("projection"), p.projection);
    f(std::string("projection_bias"), p.projection_bias);
  }
}

struct AuxContext {
  double ss_prob = 1.0;           // probability of feeding ground truth
  RngStream* ss_rng = nullptr;    // scheduled-sampling draws
  RngStream* mask_rng = nullptr;  // drop-connect masks in the output head
  bool train_mode = true;
  // Multiplies every token-loss cotangent, so callers can fold
  // d(total)/d(sum L_i) into the backward pass.
  double grad_scale = 1.0;
};

struct AuxResult {
  std::vector<SegmentLoss> per_segment;
  /// Cotangent of each anchor snapshot. Reconstruction callers chain it into
  /// the main LSTM for at most the auxiliary window; prediction callers drop
  /// it (stop-gradient at the anchor).
  std::vector<StateGrad> anchor_grads;
  std::size_t decoder_steps = 0;
};

/// Reconstruction loss of every segment in `plan`. The decoder is fed the
/// first token of the segment (in visiting order) and predicts the other
/// l - 1; with probability 1 - ss_prob the next input is its own previous
/// prediction (argmax id for discrete tokens). Pass null gradient sinks for
/// a forward-only evaluation.
AuxResult reconstruction_loss(std::span<const LstmState> anchor_states,
                              const AuxDecoderParams& decoder, const EmbeddingTable& embedding,
                              const SequenceExample& sequence, const AnchorPlan& plan,
                              const AuxContext& ctx, AuxDecoderParams* decoder_grads,
                              EmbeddingTable* embedding_grads);

/// Prediction loss: for a segment [a, a + l) the auxiliary stack reads the
/// main hidden state entering step a + k and predicts token a + k.
/// `segment_tapes[i]` must hold main steps [a, a + l - 1) from the forward
/// pass. `main_hidden_grads[i][k]` receives the cotangent of the hidden
/// output of tape step k, for bptt_backward.
AuxResult prediction_loss(std::span<const LstmState> anchor_states,
                          std::span<const UnrollTape> segment_tapes,
                          const AuxDecoderParams& decoder, const SequenceExample& sequence,
                          const AnchorPlan& plan, const AuxContext& ctx,
                          AuxDecoderParams* decoder_grads,
                          std::vector<std::vector<Tensor>>* main_hidden_grads);

}  // namespace auxlstm
