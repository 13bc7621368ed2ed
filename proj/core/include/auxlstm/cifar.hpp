#pragma once

#include <cstddef>
#include <filesystem>

#include "auxlstm/dataset.hpp"

namespace auxlstm {

inline constexpr std::size_t kCifarRecordBytes = 3073;
inline constexpr std::size_t kCifarPixels = 1024;

/// Reads one CIFAR-10 binary batch: 3073-byte records of one label byte and
/// 1024 R, 1024 G, 1024 B bytes. Each image becomes a row-major sequence of
/// 1024 RGB tokens scaled to [0, 1].
Dataset load_cifar10_binary(const std::filesystem::path& path);

/// Concatenates several batch files into one dataset.
Dataset load_cifar10_batches(const std::vector<std::filesystem::path>& paths);

}  // namespace auxlstm
