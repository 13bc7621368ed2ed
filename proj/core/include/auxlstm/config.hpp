#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "auxlstm/anchor.hpp"
#include "auxlstm/schedule.hpp"

namespace auxlstm {

enum class TrainMode : std::uint8_t { kBaseline = 0, kReconstruction = 1, kPrediction = 2 };
enum class DatasetKind : std::uint8_t { kMnist = 0, kPMnist = 1, kCifar10 = 2, kCopy = 3 };

std::string_view to_string(TrainMode mode);
std::string_view to_string(DatasetKind kind);
TrainMode parse_train_mode(std::string_view text);
DatasetKind parse_dataset_kind(std::string_view text);

struct ModelConfig {
  std::size_t hidden = 128;
  std::size_t embed = 128;
  std::size_t ffn = 256;
  double drop_connect = 0.5;
  std::size_t aux_ffn = 256;
  double aux_drop_connect = 0.5;
  double init_scale = 0.08;
  double forget_bias = 1.0;
};

struct DataConfig {
  DatasetKind kind = DatasetKind::kMnist;
  std::filesystem::path data_dir = "data";
  std::uint64_t perm_seed = 17;
  // Keep only the first N examples when positive.
  std::size_t train_limit = 0;
  std::size_t test_limit = 0;
  // Copy task generator settings, or pre-generated sequence files.
  std::size_t copy_payload = 5;
  std::size_t copy_blank = 200;
  std::size_t copy_alphabet = 8;
  std::size_t copy_train = 2000;
  std::size_t copy_test = 500;
  std::uint64_t copy_seed = 1;
  std::filesystem::path copy_train_file;
  std::filesystem::path copy_test_file;
};

/// Everything that determines a training run. Text form: one `key = value`
/// per line, `#` starts a comment; see config_keys() for the vocabulary.
struct ExperimentConfig {
  ModelConfig model;
  TrainMode mode = TrainMode::kReconstruction;
  std::size_t supervised_window = 300;
  // Unset means 300 for a single segment and l otherwise.
  std::optional<std::size_t> aux_window;
  std::size_t n = 1;
  std::size_t l = 600;
  bool reversed = true;
  bool distant_past = true;
  // Unset means l / 10.
  std::optional<std::size_t> spread;
  double aux_weight = 1.0;
  // Keep the auxiliary loss during the joint phase.
  bool joint_aux = true;
  PhaseSchedule schedule;
  SsSchedule ss;
  std::size_t batch_size = 128;
  double rms_decay = 0.9;
  double rms_epsilon = 1e-8;
  double clip_norm = 0.0;
  DataConfig data;
  std::uint64_t seed = 0;
  // Evaluate on the test set every k epochs (and after the last one); 0 never.
  std::size_t eval_every = 1;
  std::size_t checkpoint_every = 0;
  std::filesystem::path out_dir = "runs";

  std::size_t effective_aux_window() const;
  std::size_t effective_spread() const;
  AnchorPlanOptions anchor_options() const;
  bool has_aux() const { return mode != TrainMode::kBaseline; }

  /// Throws ConfigError on inconsistent values or missing data files.
  void validate() const;
  /// Checks the segment geometry against the sequence length.
  void validate_for_length(std::size_t seq_len) const;

  /// Canonical text form; parse_config(to_text()) reproduces the config.
  std::string to_text() const;
  /// FNV-1a of the canonical text, excluding run-length and path keys, so a
  /// checkpoint can be resumed with a longer schedule or moved directories.
  std::uint64_t hash() const;
};

/// Applies `key = value` lines on top of `base`. Unknown keys, duplicate
/// keys and malformed values throw ConfigError naming the line.
ExperimentConfig parse_config(std::string_view text, const ExperimentConfig& base = {});
ExperimentConfig load_config_file(const std::filesystem::path& path,
                                  const ExperimentConfig& base = {});
/// Sets one key; throws ConfigError for unknown keys or bad values.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);
std::vector<std::string> config_keys();

}  // namespace auxlstm
