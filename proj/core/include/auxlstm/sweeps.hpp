#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "auxlstm/config.hpp"
#include "auxlstm/dataset.hpp"

namespace auxlstm {

struct SweepRow {
  std::size_t supervised_window = 0;
  std::size_t n = 0;
  std::size_t l = 0;
  std::size_t aux_window = 0;
  double test_accuracy = 0.0;
  double train_accuracy = 0.0;
  std::uint64_t aux_grad_steps = 0;  // summed over the whole run
  std::uint64_t steps = 0;           // optimizer updates
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;

  /// CSV with a header row.
  std::string to_csv() const;
};

/// One run per supervised window, everything else shared. Each run writes
/// under <out_dir>/window_<k> when `write_files` is set. Throws ConfigError
/// for an empty list.
SweepTable sweep_shrinking_bptt(const ExperimentConfig& config, std::span<const std::size_t> windows,
                                const Dataset& train, const Dataset& test, bool write_files = true,
                                std::ostream* log = nullptr);

/// One run per (n, l) pair with the auxiliary window set to l, so every run
/// backpropagates n*l auxiliary steps into the main LSTM per example. Pairs
/// whose n*l differs from the first pair's are run anyway and reported in
/// `warnings`. Throws ConfigError for an empty list or baseline mode.
SweepTable sweep_segments(const ExperimentConfig& config,
                          std::span<const std::pair<std::size_t, std::size_t>> pairs,
                          const Dataset& train, const Dataset& test, bool write_files = true,
                          std::ostream* log = nullptr);

}  // namespace auxlstm
