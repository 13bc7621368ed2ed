#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "auxlstm/schedule.hpp"

namespace auxlstm {

/// One row per completed epoch. `step` counts optimizer updates since the
/// start of the run. Everything here is a deterministic function of the
/// config, so two runs with one seed write identical files; wall-clock time
/// lives in a separate timing file.
struct MetricsRecord {
  std::uint64_t step = 0;
  std::uint64_t epoch = 0;  // within the phase, 1-based once completed
  Phase phase = Phase::kJoint;
  double lr = 0.0;
  double ss_prob = 1.0;
  double train_supervised = 0.0;
  double train_auxiliary = 0.0;
  double train_total = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> test_accuracy;
  std::uint64_t aux_grad_steps = 0;
  std::uint64_t sup_grad_steps = 0;
  std::uint64_t forward_flops = 0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

inline constexpr int kMetricsSchemaVersion = 1;

/// CSV header row (without the schema comment line).
std::string metrics_header();
std::string metrics_row(const MetricsRecord& r);
MetricsRecord parse_metrics_row(const std::string& line);

/// Append-only metrics file: a `# auxlstm-metrics v1` line, the header row,
/// then one row per record. Opening with `keep_rows` set truncates the file
/// to its first `keep_rows` data rows and appends after them (used on resume).
class MetricsWriter {
 public:
  explicit MetricsWriter(const std::filesystem::path& path,
                         std::optional<std::size_t> keep_rows = std::nullopt);

  void append(const MetricsRecord& record);
  /// Wall time of one epoch, to the side file <stem>.timing.csv.
  void append_timing(std::uint64_t step, double seconds_per_batch, double epoch_seconds);
  std::size_t rows() const { return rows_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::ofstream timing_;
  std::size_t rows_ = 0;
};

std::vector<MetricsRecord> read_metrics_file(const std::filesystem::path& path);

}  // namespace auxlstm
