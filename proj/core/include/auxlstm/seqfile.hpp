#pragma once

#include <filesystem>

#include "auxlstm/dataset.hpp"

namespace auxlstm {

/// Binary sequence container, all integers little-endian:
///
///   "AXSQ"  u32 version(=1)  u32 mode(0 discrete, 1 continuous)
///   u64 input_dim  u64 num_classes  u64 count
///   count x { u32 label  u64 length  payload }
///
/// payload is `length` u32 token ids (discrete) or length*input_dim IEEE-754
/// doubles in row-major order (continuous).
inline constexpr std::uint32_t kSeqFileVersion = 1;

void write_sequence_file(const std::filesystem::path& path, const Dataset& dataset);
Dataset read_sequence_file(const std::filesystem::path& path);

}  // namespace auxlstm
