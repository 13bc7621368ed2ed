#include "auxlstm/anchor.hpp"

#include <algorithm>

#include "auxlstm/errors.hpp"

namespace auxlstm {

std::string_view to_string(AuxKind kind) {
  return kind == AuxKind::kReconstruction ? "reconstruction" : "prediction";
}

std::size_t AnchorPlan::total_length() const {
  std::size_t total = 0;
  for (const auto& s : segments) total += s.length;
  return total;
}

AnchorPlan sample_anchor_plan(RngStream& rng, std::size_t seq_len, const AnchorPlanOptions& opts) {
  if (opts.n == 0) throw ConfigError("anchor plan: n must be at least 1");
  if (opts.l == 0) throw ConfigError("anchor plan: segment length l must be at least 1");
  if (opts.l + opts.spread > seq_len) {
    throw ConfigError("anchor plan: l + spread = " + std::to_string(opts.l + opts.spread) +
                      " exceeds sequence length " + std::to_string(seq_len));
  }
  AnchorPlan plan;
  plan.kind = opts.kind;
  plan.sequence_length = seq_len;
  plan.seed = rng;
  plan.segments.reserve(opts.n);
  const std::size_t l = opts.l;

  for (std::size_t i = 0; i < opts.n; ++i) {
    SegmentSpec seg;
    seg.length = l;
    if (opts.kind == AuxKind::kPrediction) {
      seg.anchor = rng.uniform_int(0, seq_len - l);
      seg.start = seg.anchor;
      seg.direction = Direction::kForward;
    } else {
      seg.anchor = l < seq_len ? rng.uniform_int(l, seq_len - 1) : seq_len;
      const std::size_t max_spread = std::min(opts.spread, seq_len - seg.anchor);
      seg.spread_over_anchor = max_spread > 0 ? rng.uniform_int(0, max_spread) : 0;
      const std::size_t end = seg.anchor + seg.spread_over_anchor;
      seg.start = opts.distant_past ? rng.uniform_int(0, end - l) : end - l;
      seg.direction = opts.reversed ? Direction::kReversed : Direction::kForward;
    }
    plan.segments.push_back(seg);
  }
  return plan;
}

void validate_segment(const SegmentSpec& s, AuxKind kind, std::size_t seq_len) {
  auto fail = [&](const char* why) {
    throw IndexError(std::string("segment [") + std::to_string(s.start) + ", " +
                     std::to_string(s.end()) + ") with anchor " + std::to_string(s.anchor) +
                     ": " + why + " (sequence length " + std::to_string(seq_len) + ")");
  };
  if (s.length == 0) fail("empty segment");
  if (s.end() > seq_len) fail("segment runs past the sequence");
  if (kind == AuxKind::kReconstruction) {
    if (s.anchor > seq_len) fail("anchor outside the sequence");
    if (s.end() > s.anchor + s.spread_over_anchor) fail("segment extends past its spread");
  } else {
    if (s.start != s.anchor) fail("prediction segment must start at its anchor");
  }
}

std::vector<std::size_t> segment_order(const SegmentSpec& s) {
  std::vector<std::size_t> order(s.length);
  for (std::size_t k = 0; k < s.length; ++k) {
    order[k] = s.direction == Direction::kReversed ? s.end() - 1 - k : s.start + k;
  }
  return order;
}

PlanRequirements plan_requirements(const AnchorPlan& plan, std::size_t aux_window) {
  PlanRequirements req;
  for (const auto& s : plan.segments) {
    req.checkpoints.push_back(s.anchor);
    if (plan.kind == AuxKind::kReconstruction) {
      const std::size_t begin = s.anchor > aux_window ? s.anchor - aux_window : 0;
      req.retain.push_back({begin, s.anchor});
    } else {
      // The auxiliary stack reads main outputs after tokens anchor .. end-2.
      req.retain.push_back({s.start, s.end() - 1});
    }
  }
  return req;
}

}  // namespace auxlstm
