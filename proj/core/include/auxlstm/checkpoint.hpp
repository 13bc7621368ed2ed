#pragma once

#include <filesystem>

#include "auxlstm/trainer.hpp"

namespace auxlstm {

/// Single-file binary checkpoint, little-endian:
///
///   "AXCK"  u32 version(=1)  u64 config_hash
///   u64 seed  u64 rng_counter  u32 phase  u64 epoch  u64 step  u64 metrics_rows
///   6 x u64 counters (forward_flops, sup_grad_steps, aux_grad_steps,
///                     decoder_steps, peak_step_caches, snapshots)
///   u32 mode  u32 num_blocks  num_blocks x block
///   u32 num_accumulators  num_accumulators x block
///   string config_text
///
/// A block is: u32 name_len, name bytes, u64 payload_bytes, then the payload
/// (u64 rows, u64 cols, rows*cols f64). Strings are u32 length + bytes.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::filesystem::path& path, const TrainSession& session);

/// Restores a session written by save_checkpoint. The model layout is
/// rebuilt from `config` and must match the stored blocks by name and shape;
/// FormatError if the config hash differs from the stored one.
TrainSession load_checkpoint(const std::filesystem::path& path, const ExperimentConfig& config,
                             TokenMode token_mode, std::size_t input_dim, std::size_t num_classes);

}  // namespace auxlstm
