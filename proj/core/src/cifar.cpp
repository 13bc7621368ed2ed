#include "auxlstm/cifar.hpp"

#include <fstream>
#include <iterator>
#include <vector>

#include "auxlstm/errors.hpp"

namespace auxlstm {

Dataset load_cifar10_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                        std::istreambuf_iterator<char>()};
  if (bytes.empty() || bytes.size() % kCifarRecordBytes != 0) {
    throw FormatError(path.string() + ": size " + std::to_string(bytes.size()) +
                      " is not a positive multiple of " + std::to_string(kCifarRecordBytes));
  }
  const std::size_t count = bytes.size() / kCifarRecordBytes;
  Dataset ds;
  ds.mode = TokenMode::kContinuous;
  ds.input_dim = 3;
  ds.num_classes = 10;
  ds.examples.resize(count);
  for (std::size_t r = 0; r < count; ++r) {
    const std::uint8_t* rec = bytes.data() + r * kCifarRecordBytes;
    if (rec[0] >= 10) {
      throw FormatError(path.string() + ": record " + std::to_string(r) + " has label " +
                        std::to_string(rec[0]));
    }
    SequenceExample& ex = ds.examples[r];
    ex.mode = TokenMode::kContinuous;
    ex.label = rec[0];
    ex.values = Tensor(kCifarPixels, 3);
    for (std::size_t p = 0; p < kCifarPixels; ++p) {
      for (std::size_t c = 0; c < 3; ++c) ex.values(p, c) = rec[1 + c * kCifarPixels + p] / 255.0;
    }
  }
  return ds;
}

Dataset load_cifar10_batches(const std::vector<std::filesystem::path>& paths) {
  Dataset all;
  all.mode = TokenMode::kContinuous;
  all.input_dim = 3;
  all.num_classes = 10;
  for (const auto& p : paths) {
    Dataset part = load_cifar10_binary(p);
    for (auto& ex : part.examples) all.examples.push_back(std::move(ex));
  }
  return all;
}

}  // namespace auxlstm
