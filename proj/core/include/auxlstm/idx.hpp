#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "auxlstm/dataset.hpp"

namespace auxlstm {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

/// Reads an IDX image/label file pair (MNIST layout). Every image becomes a
/// row-major sequence of length rows*cols with one continuous token per
/// pixel, scaled to [0, 1] by /255. Throws FormatError on a bad magic and
/// LengthError on truncation or count mismatch.
Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path);

/// Raw IDX images: `pixels` holds count*rows*cols bytes.
struct IdxImages {
  std::uint32_t count = 0;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint8_t> pixels;
};

IdxImages read_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);

void write_idx_images(const std::filesystem::path& path, const IdxImages& images);
void write_idx_labels(const std::filesystem::path& path, const std::vector<std::uint8_t>& labels);

}  // namespace auxlstm
