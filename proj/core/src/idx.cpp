#include "auxlstm/idx.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>

#include "auxlstm/errors.hpp"

namespace auxlstm {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<std::uint8_t>& bytes, std::size_t offset,
                   const std::filesystem::path& path) {
  if (offset + 4 > bytes.size()) {
    throw LengthError(path.string() + ": header truncated at byte " + std::to_string(offset));
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void put_be32(std::ofstream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                         static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(bytes, 4);
}

std::string hex(std::uint32_t v) {
  char buf[11];
  std::snprintf(buf, sizeof buf, "0x%08X", v);
  return buf;
}

}  // namespace

IdxImages read_idx_images(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  const std::uint32_t magic = be32(bytes, 0, path);
  if (magic != kIdxImageMagic) {
    throw FormatError(path.string() + ": bad IDX image magic " + hex(magic) + ", expected " +
                      hex(kIdxImageMagic));
  }
  IdxImages img;
  img.count = be32(bytes, 4, path);
  img.rows = be32(bytes, 8, path);
  img.cols = be32(bytes, 12, path);
  const std::size_t need = std::size_t{img.count} * img.rows * img.cols;
  if (bytes.size() < 16 + need) {
    throw LengthError(path.string() + ": expected " + std::to_string(need) +
                      " pixel bytes, found " + std::to_string(bytes.size() - 16));
  }
  img.pixels.assign(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(need));
  return img;
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  const std::uint32_t magic = be32(bytes, 0, path);
  if (magic != kIdxLabelMagic) {
    throw FormatError(path.string() + ": bad IDX label magic " + hex(magic) + ", expected " +
                      hex(kIdxLabelMagic));
  }
  const std::uint32_t count = be32(bytes, 4, path);
  if (bytes.size() < 8 + std::size_t{count}) {
    throw LengthError(path.string() + ": expected " + std::to_string(count) +
                      " labels, found " + std::to_string(bytes.size() - 8));
  }
  return {bytes.begin() + 8, bytes.begin() + 8 + count};
}

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path) {
  const IdxImages img = read_idx_images(images_path);
  const auto labels = read_idx_labels(labels_path);
  if (labels.size() != img.count) {
    throw LengthError("IDX pair has " + std::to_string(img.count) + " images but " +
                      std::to_string(labels.size()) + " labels");
  }
  Dataset ds;
  ds.mode = TokenMode::kContinuous;
  ds.input_dim = 1;
  ds.num_classes = 10;
  const std::size_t len = std::size_t{img.rows} * img.cols;
  ds.examples.resize(img.count);
  for (std::size_t i = 0; i < img.count; ++i) {
    SequenceExample& ex = ds.examples[i];
    ex.mode = TokenMode::kContinuous;
    ex.values = Tensor(len, 1);
    const std::uint8_t* px = img.pixels.data() + i * len;
    for (std::size_t t = 0; t < len; ++t) ex.values[t] = px[t] / 255.0;
    ex.label = labels[i];
    if (ex.label >= ds.num_classes) ds.num_classes = ex.label + 1u;
  }
  return ds;
}

void write_idx_images(const std::filesystem::path& path, const IdxImages& images) {
  if (images.pixels.size() != std::size_t{images.count} * images.rows * images.cols) {
    throw LengthError("write_idx_images: pixel buffer does not match count x rows x cols");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  put_be32(out, kIdxImageMagic);
  put_be32(out, images.count);
  put_be32(out, images.rows);
  put_be32(out, images.cols);
  out.write(reinterpret_cast<const char*>(images.pixels.data()),
            static_cast<std::streamsize>(images.pixels.size()));
}

void write_idx_labels(const std::filesystem::path& path, const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  put_be32(out, kIdxLabelMagic);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
}

}  // namespace auxlstm
