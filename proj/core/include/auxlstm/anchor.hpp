#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "auxlstm/rng.hpp"
#include "auxlstm/unroll.hpp"

namespace auxlstm {

enum class AuxKind : std::uint8_t { kReconstruction = 0, kPrediction = 1 };
enum class Direction : std::uint8_t { kForward = 0, kReversed = 1 };

std::string_view to_string(AuxKind kind);

/// One auxiliary segment [start, start + length).
///
/// An anchor index `a` names the boundary the main LSTM state snapshot is
/// taken at: the state after consuming tokens [0, a). Reconstruction
/// segments lie before the anchor, except for `spread_over_anchor` trailing
/// tokens the snapshot has not seen yet. Prediction segments start at the
/// anchor.
struct SegmentSpec {
  std::size_t anchor = 0;
  std::size_t start = 0;
  std::size_t length = 0;
  Direction direction = Direction::kReversed;
  std::size_t spread_over_anchor = 0;

  std::size_t end() const { return start + length; }
  friend bool operator==(const SegmentSpec&, const SegmentSpec&) = default;
};

struct AnchorPlanOptions {
  std::size_t n = 1;
  std::size_t l = 1;
  AuxKind kind = AuxKind::kReconstruction;
  bool distant_past = true;
  bool reversed = true;
  std::size_t spread = 0;
};

struct AnchorPlan {
  AuxKind kind = AuxKind::kReconstruction;
  std::size_t sequence_length = 0;
  std::vector<SegmentSpec> segments;
  RngStream seed;  // state of the stream before sampling

  std::size_t n() const { return segments.size(); }
  std::size_t total_length() const;
};

/// Draws n anchors independently and uniformly from the feasible range.
/// Reconstruction anchors come from [l, T-1] (or exactly T when l == T); the
/// segment ends at anchor + s with s uniform in [0, min(spread, T - anchor)],
/// and with `distant_past` its start is uniform over every feasible position
/// instead of abutting that end. Prediction anchors come from [0, T - l].
/// Throws ConfigError for n == 0, l == 0 or l + spread > T.
AnchorPlan sample_anchor_plan(RngStream& rng, std::size_t seq_len, const AnchorPlanOptions& opts);

/// Throws IndexError unless the segment satisfies its kind's bounds.
void validate_segment(const SegmentSpec& segment, AuxKind kind, std::size_t seq_len);

/// Order in which the decoder visits segment positions.
std::vector<std::size_t> segment_order(const SegmentSpec& segment);

/// Main-LSTM checkpoint indices and cached step ranges the plan needs:
/// one snapshot per anchor; for reconstruction the aux_window steps before
/// the anchor, for prediction the steps the auxiliary stack reads.
struct PlanRequirements {
  std::vector<std::size_t> checkpoints;
  std::vector<StepInterval> retain;
};
PlanRequirements plan_requirements(const AnchorPlan& plan, std::size_t aux_window);

}  // namespace auxlstm
