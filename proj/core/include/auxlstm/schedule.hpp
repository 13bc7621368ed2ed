#pragma once

#include <cstdint>
#include <string_view>

namespace auxlstm {

/// Probability of feeding the ground-truth token to an auxiliary decoder.
struct SsSchedule {
  std::uint64_t horizon = 100000;
};

/// max(0, 1 - step / horizon). A zero horizon means fully annealed.
double scheduled_sampling_prob(std::uint64_t step, const SsSchedule& sched);

enum class Phase : std::uint8_t { kPretrain = 0, kJoint = 1 };
std::string_view to_string(Phase phase);

struct PhaseSchedule {
  Phase phase = Phase::kJoint;
  std::uint64_t pretrain_epochs = 100;
  double initial_lr = 0.001;
  std::uint64_t pretrain_halve_at = 50;
  std::uint64_t joint_halve_every = 300;
  std::uint64_t max_epochs = 1000;
  // When false the joint phase starts from the rate pretraining ended at.
  bool joint_restart = true;
};

/// Learning rate for `epoch`, counted from the start of the schedule's phase.
double lr_at(std::uint64_t epoch, const PhaseSchedule& sched);

}  // namespace auxlstm
