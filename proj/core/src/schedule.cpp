#include "auxlstm/schedule.hpp"

#include <cmath>

namespace auxlstm {

double scheduled_sampling_prob(std::uint64_t step, const SsSchedule& sched) {
  if (sched.horizon == 0 || step >= sched.horizon) return 0.0;
  return 1.0 - static_cast<double>(step) / static_cast<double>(sched.horizon);
}

std::string_view to_string(Phase phase) { return phase == Phase::kPretrain ? "pretrain" : "joint"; }

double lr_at(std::uint64_t epoch, const PhaseSchedule& sched) {
  if (sched.phase == Phase::kPretrain) {
    return epoch < sched.pretrain_halve_at ? sched.initial_lr : sched.initial_lr * 0.5;
  }
  double base = sched.initial_lr;
  if (!sched.joint_restart && sched.pretrain_epochs > sched.pretrain_halve_at) base *= 0.5;
  if (sched.joint_halve_every == 0) return base;
  const auto halvings = static_cast<int>(epoch / sched.joint_halve_every);
  return std::ldexp(base, -halvings);
}

}  // namespace auxlstm
