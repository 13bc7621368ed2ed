#include "auxlstm/seqfile.hpp"

#include <fstream>

#include "auxlstm/binio.hpp"
#include "auxlstm/errors.hpp"

namespace auxlstm {

namespace {
constexpr char kMagic[4] = {'A', 'X', 'S', 'Q'};
constexpr std::uint64_t kMaxLength = 1ULL << 28;
}  // namespace

void write_sequence_file(const std::filesystem::path& path, const Dataset& dataset) {
  dataset.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(kMagic, 4);
  binio::put_u32(out, kSeqFileVersion);
  binio::put_u32(out, static_cast<std::uint32_t>(dataset.mode));
  binio::put_u64(out, dataset.input_dim);
  binio::put_u64(out, dataset.num_classes);
  binio::put_u64(out, dataset.size());
  for (const auto& ex : dataset.examples) {
    binio::put_u32(out, ex.label);
    binio::put_u64(out, ex.length());
    if (ex.mode == TokenMode::kDiscrete) {
      for (auto id : ex.ids) binio::put_u32(out, id);
    } else {
      for (double v : ex.values.data()) binio::put_f64(out, v);
    }
  }
  if (!out) throw FormatError("write failed for " + path.string());
}

Dataset read_sequence_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  char magic[4];
  binio::read_exact(in, magic, 4, "sequence file magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(path.string() + ": not a sequence file (bad magic)");
  }
  const std::uint32_t version = binio::get_u32(in, "sequence file version");
  if (version != kSeqFileVersion) {
    throw FormatError(path.string() + ": unsupported sequence file version " +
                      std::to_string(version));
  }
  const std::uint32_t mode = binio::get_u32(in, "sequence file mode");
  if (mode > 1) throw FormatError(path.string() + ": bad token mode " + std::to_string(mode));
  Dataset ds;
  ds.mode = static_cast<TokenMode>(mode);
  ds.input_dim = binio::get_u64(in, "input_dim");
  ds.num_classes = binio::get_u64(in, "num_classes");
  const std::uint64_t count = binio::get_u64(in, "count");
  ds.examples.reserve(std::min<std::uint64_t>(count, 1 << 20));
  for (std::uint64_t i = 0; i < count; ++i) {
    SequenceExample ex;
    ex.mode = ds.mode;
    ex.label = binio::get_u32(in, "label");
    const std::uint64_t len = binio::get_u64(in, "length");
    if (len > kMaxLength) throw FormatError(path.string() + ": implausible sequence length");
    if (ds.mode == TokenMode::kDiscrete) {
      ex.ids.resize(len);
      for (auto& id : ex.ids) id = binio::get_u32(in, "token id");
    } else {
      ex.values = Tensor(len, ds.input_dim);
      for (double& v : ex.values.data()) v = binio::get_f64(in, "token value");
    }
    ds.examples.push_back(std::move(ex));
  }
  ds.validate();
  return ds;
}

}  // namespace auxlstm
