#include "auxlstm/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "auxlstm/binio.hpp"
#include "auxlstm/errors.hpp"

namespace auxlstm {

namespace {

constexpr char kMagic[4] = {'A', 'X', 'C', 'K'};

void put_block(std::ostream& out, const std::string& name, const Tensor& t) {
  binio::put_string(out, name);
  binio::put_u64(out, 16 + 8 * t.size());
  binio::put_tensor(out, t);
}

void get_block(std::istream& in, const std::string& expected_name, Tensor& dst) {
  const std::string name = binio::get_string(in, "block name");
  if (name != expected_name) {
    throw FormatError("checkpoint: expected block '" + expected_name + "', found '" + name + "'");
  }
  const std::uint64_t bytes = binio::get_u64(in, "block length");
  Tensor t = binio::get_tensor(in, name.c_str());
  if (bytes != 16 + 8 * t.size()) throw FormatError("checkpoint: bad length for block " + name);
  if (!(t.shape() == dst.shape())) {
    throw FormatError("checkpoint: block " + name + " has shape " + t.shape().str() +
                      " but the model expects " + dst.shape().str());
  }
  dst = std::move(t);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const TrainSession& s) {
  // Write to a sibling file first so an interrupted save never clobbers the
  // previous checkpoint.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("checkpoint: cannot write " + tmp.string());
    out.write(kMagic, 4);
    binio::put_u32(out, kCheckpointVersion);
    binio::put_u64(out, s.config.hash());
    binio::put_u64(out, s.config.seed);
    binio::put_u64(out, 0);  // all per-step streams are derived from (seed, step)
    binio::put_u32(out, static_cast<std::uint32_t>(s.phase));
    binio::put_u64(out, s.epoch);
    binio::put_u64(out, s.step);
    binio::put_u64(out, s.metrics_rows);
    binio::put_u64(out, s.totals.forward_flops);
    binio::put_u64(out, s.totals.sup_grad_steps);
    binio::put_u64(out, s.totals.aux_grad_steps);
    binio::put_u64(out, s.totals.decoder_steps);
    binio::put_u64(out, s.totals.peak_step_caches);
    binio::put_u64(out, s.totals.snapshots);
    binio::put_u32(out, static_cast<std::uint32_t>(s.model.mode));

    std::vector<std::pair<std::string, const Tensor*>> blocks;
    visit_blocks(s.model, [&](const std::string& n, const Tensor& t) { blocks.emplace_back(n, &t); });
    binio::put_u32(out, static_cast<std::uint32_t>(blocks.size()));
    for (const auto& [n, t] : blocks) put_block(out, n, *t);

    const auto& ms = s.optimizer.mean_square;
    if (!ms.empty() && ms.size() != blocks.size()) {
      throw DimensionError("checkpoint: optimizer state does not match the model");
    }
    binio::put_u32(out, static_cast<std::uint32_t>(ms.size()));
    for (std::size_t i = 0; i < ms.size(); ++i) put_block(out, blocks[i].first, ms[i]);

    binio::put_string(out, s.config.to_text());
    if (!out) throw FormatError("checkpoint: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

TrainSession load_checkpoint(const std::filesystem::path& path, const ExperimentConfig& config,
                             TokenMode token_mode, std::size_t input_dim, std::size_t num_classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("checkpoint: cannot open " + path.string());
  char magic[4];
  binio::read_exact(in, magic, 4, "checkpoint magic");
  if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError(path.string() + ": not a checkpoint");
  const std::uint32_t version = binio::get_u32(in, "checkpoint version");
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint: unsupported version " + std::to_string(version));
  }
  const std::uint64_t hash = binio::get_u64(in, "config hash");
  if (hash != config.hash()) {
    throw FormatError("checkpoint: " + path.string() + " was written by a different config");
  }

  TrainSession s;
  s.config = config;
  s.model = Model::create(config, token_mode, input_dim, num_classes);
  s.optimizer.config = {config.rms_decay, config.rms_epsilon, config.schedule.initial_lr,
                        config.clip_norm};
  binio::get_u64(in, "seed");
  binio::get_u64(in, "rng counter");
  const std::uint32_t phase = binio::get_u32(in, "phase");
  if (phase > 1) throw FormatError("checkpoint: bad phase");
  s.phase = static_cast<Phase>(phase);
  s.epoch = binio::get_u64(in, "epoch");
  s.step = binio::get_u64(in, "step");
  s.metrics_rows = binio::get_u64(in, "metrics rows");
  s.totals.forward_flops = binio::get_u64(in, "counters");
  s.totals.sup_grad_steps = binio::get_u64(in, "counters");
  s.totals.aux_grad_steps = binio::get_u64(in, "counters");
  s.totals.decoder_steps = binio::get_u64(in, "counters");
  s.totals.peak_step_caches = binio::get_u64(in, "counters");
  s.totals.snapshots = binio::get_u64(in, "counters");
  if (binio::get_u32(in, "mode") != static_cast<std::uint32_t>(config.mode)) {
    throw FormatError("checkpoint: training mode differs from config");
  }

  std::vector<std::pair<std::string, Tensor*>> blocks;
  visit_blocks(s.model, [&](const std::string& n, Tensor& t) { blocks.emplace_back(n, &t); });
  if (binio::get_u32(in, "block count") != blocks.size()) {
    throw FormatError("checkpoint: parameter block count differs from the model");
  }
  for (auto& [n, t] : blocks) get_block(in, n, *t);

  const std::uint32_t num_ms = binio::get_u32(in, "accumulator count");
  if (num_ms != 0 && num_ms != blocks.size()) {
    throw FormatError("checkpoint: optimizer accumulator count differs from the model");
  }
  s.optimizer.mean_square.resize(num_ms);
  for (std::uint32_t i = 0; i < num_ms; ++i) {
    s.optimizer.mean_square[i] = Tensor(blocks[i].second->shape());
    get_block(in, blocks[i].first, s.optimizer.mean_square[i]);
  }
  binio::get_string(in, "config text");
  return s;
}

}  // namespace auxlstm
