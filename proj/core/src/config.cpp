#include "auxlstm/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "auxlstm/errors.hpp"
#include "auxlstm/rng.hpp"

namespace auxlstm {

std::string_view to_string(TrainMode mode) {
  switch (mode) {
    case TrainMode::kBaseline: return "baseline";
    case TrainMode::kReconstruction: return "r";
    case TrainMode::kPrediction: return "p";
  }
  return "?";
}

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kMnist: return "mnist";
    case DatasetKind::kPMnist: return "pmnist";
    case DatasetKind::kCifar10: return "cifar10";
    case DatasetKind::kCopy: return "copy";
  }
  return "?";
}

TrainMode parse_train_mode(std::string_view text) {
  if (text == "baseline") return TrainMode::kBaseline;
  if (text == "r") return TrainMode::kReconstruction;
  if (text == "p") return TrainMode::kPrediction;
  throw ConfigError("unknown mode '" + std::string(text) + "' (expected baseline, r or p)");
}

DatasetKind parse_dataset_kind(std::string_view text) {
  if (text == "mnist") return DatasetKind::kMnist;
  if (text == "pmnist") return DatasetKind::kPMnist;
  if (text == "cifar10") return DatasetKind::kCifar10;
  if (text == "copy") return DatasetKind::kCopy;
  throw ConfigError("unknown dataset '" + std::string(text) +
                    "' (expected mnist, pmnist, cifar10 or copy)");
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError("bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "off" || text == "no") return false;
  throw ConfigError("bad boolean '" + std::string(text) + "' for " + std::string(key));
}

struct Key {
  std::string name;
  bool hashed;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, std::string_view)> set;
};

template <class T>
Key num_key(std::string name, T ExperimentConfig::*member, bool hashed = true) {
  return {name, hashed,
          [member](const ExperimentConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return fmt_double(c.*member);
            else return std::to_string(c.*member);
          },
          [member, name](ExperimentConfig& c, std::string_view v) {
            c.*member = parse_number<T>(name, v);
          }};
}

template <class S, class T>
Key nested_num_key(std::string name, S ExperimentConfig::*outer, T S::*member, bool hashed = true) {
  return {name, hashed,
          [outer, member](const ExperimentConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return fmt_double(c.*outer.*member);
            else return std::to_string(c.*outer.*member);
          },
          [outer, member, name](ExperimentConfig& c, std::string_view v) {
            c.*outer.*member = parse_number<T>(name, v);
          }};
}

Key bool_key(std::string name, bool ExperimentConfig::*member) {
  return {name, true, [member](const ExperimentConfig& c) { return std::string(c.*member ? "true" : "false"); },
          [member, name](ExperimentConfig& c, std::string_view v) { c.*member = parse_bool(name, v); }};
}

Key auto_key(std::string name, std::optional<std::size_t> ExperimentConfig::*member) {
  return {name, true,
          [member](const ExperimentConfig& c) {
            return (c.*member) ? std::to_string(*(c.*member)) : std::string("auto");
          },
          [member, name](ExperimentConfig& c, std::string_view v) {
            if (v == "auto") c.*member = std::nullopt;
            else c.*member = parse_number<std::size_t>(name, v);
          }};
}

Key path_key(std::string name, std::filesystem::path DataConfig::*member) {
  return {name, false, [member](const ExperimentConfig& c) { return (c.data.*member).string(); },
          [member](ExperimentConfig& c, std::string_view v) { c.data.*member = std::string(v); }};
}

const std::vector<Key>& keys() {
  using E = ExperimentConfig;
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    k.push_back({"mode", true, [](const E& c) { return std::string(to_string(c.mode)); },
                 [](E& c, std::string_view v) { c.mode = parse_train_mode(v); }});
    k.push_back(num_key("seed", &E::seed));
    k.push_back(nested_num_key("hidden", &E::model, &ModelConfig::hidden));
    k.push_back(nested_num_key("embed", &E::model, &ModelConfig::embed));
    k.push_back(nested_num_key("ffn", &E::model, &ModelConfig::ffn));
    k.push_back(nested_num_key("drop_connect", &E::model, &ModelConfig::drop_connect));
    k.push_back(nested_num_key("aux_ffn", &E::model, &ModelConfig::aux_ffn));
    k.push_back(nested_num_key("aux_drop_connect", &E::model, &ModelConfig::aux_drop_connect));
    k.push_back(nested_num_key("init_scale", &E::model, &ModelConfig::init_scale));
    k.push_back(nested_num_key("forget_bias", &E::model, &ModelConfig::forget_bias));
    k.push_back(num_key("supervised_window", &E::supervised_window));
    k.push_back(auto_key("aux_window", &E::aux_window));
    k.push_back(num_key("n", &E::n));
    k.push_back(num_key("l", &E::l));
    k.push_back(bool_key("reversed", &E::reversed));
    k.push_back(bool_key("distant_past", &E::distant_past));
    k.push_back(auto_key("spread", &E::spread));
    k.push_back(num_key("aux_weight", &E::aux_weight));
    k.push_back(bool_key("joint_aux", &E::joint_aux));
    k.push_back(nested_num_key("pretrain_epochs", &E::schedule, &PhaseSchedule::pretrain_epochs));
    k.push_back(nested_num_key("max_epochs", &E::schedule, &PhaseSchedule::max_epochs, false));
    k.push_back(nested_num_key("initial_lr", &E::schedule, &PhaseSchedule::initial_lr));
    k.push_back(nested_num_key("pretrain_halve_at", &E::schedule, &PhaseSchedule::pretrain_halve_at));
    k.push_back(nested_num_key("joint_halve_every", &E::schedule, &PhaseSchedule::joint_halve_every));
    k.push_back({"joint_restart", true,
                 [](const E& c) { return std::string(c.schedule.joint_restart ? "true" : "false"); },
                 [](E& c, std::string_view v) { c.schedule.joint_restart = parse_bool("joint_restart", v); }});
    k.push_back(nested_num_key("ss_horizon", &E::ss, &SsSchedule::horizon));
    k.push_back(num_key("batch_size", &E::batch_size));
    k.push_back(num_key("rms_decay", &E::rms_decay));
    k.push_back(num_key("rms_epsilon", &E::rms_epsilon));
    k.push_back(num_key("clip_norm", &E::clip_norm));
    k.push_back({"dataset", true, [](const E& c) { return std::string(to_string(c.data.kind)); },
                 [](E& c, std::string_view v) { c.data.kind = parse_dataset_kind(v); }});
    k.push_back(path_key("data_dir", &DataConfig::data_dir));
    k.push_back(nested_num_key("perm_seed", &E::data, &DataConfig::perm_seed));
    k.push_back(nested_num_key("train_limit", &E::data, &DataConfig::train_limit));
    k.push_back(nested_num_key("test_limit", &E::data, &DataConfig::test_limit));
    k.push_back(nested_num_key("copy_payload", &E::data, &DataConfig::copy_payload));
    k.push_back(nested_num_key("copy_blank", &E::data, &DataConfig::copy_blank));
    k.push_back(nested_num_key("copy_alphabet", &E::data, &DataConfig::copy_alphabet));
    k.push_back(nested_num_key("copy_train", &E::data, &DataConfig::copy_train));
    k.push_back(nested_num_key("copy_test", &E::data, &DataConfig::copy_test));
    k.push_back(nested_num_key("copy_seed", &E::data, &DataConfig::copy_seed));
    k.push_back(path_key("copy_train_file", &DataConfig::copy_train_file));
    k.push_back(path_key("copy_test_file", &DataConfig::copy_test_file));
    k.push_back(num_key("eval_every", &E::eval_every, false));
    k.push_back(num_key("checkpoint_every", &E::checkpoint_every, false));
    k.push_back({"out_dir", false, [](const E& c) { return c.out_dir.string(); },
                 [](E& c, std::string_view v) { c.out_dir = std::string(v); }});
    return k;
  }();
  return table;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::size_t ExperimentConfig::effective_aux_window() const {
  if (aux_window) return *aux_window;
  return n == 1 ? 300 : l;
}

std::size_t ExperimentConfig::effective_spread() const { return spread ? *spread : l / 10; }

AnchorPlanOptions ExperimentConfig::anchor_options() const {
  AnchorPlanOptions o;
  o.n = n;
  o.l = l;
  o.kind = mode == TrainMode::kPrediction ? AuxKind::kPrediction : AuxKind::kReconstruction;
  o.distant_past = distant_past;
  o.reversed = reversed;
  // Spread over the anchor only applies to reconstruction segments.
  o.spread = mode == TrainMode::kReconstruction ? effective_spread() : 0;
  return o;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
  if (model.hidden == 0 || model.embed == 0 || model.ffn == 0 || model.aux_ffn == 0) {
    fail("layer sizes must be positive");
  }
  if (!(model.drop_connect >= 0.0 && model.drop_connect <= 1.0) ||
      !(model.aux_drop_connect >= 0.0 && model.aux_drop_connect <= 1.0)) {
    fail("drop_connect probabilities must lie in [0, 1]");
  }
  if (batch_size == 0) fail("batch_size must be at least 1");
  if (has_aux() && (n == 0 || l == 0)) fail("n and l must be positive for the r and p modes");
  if (!(schedule.initial_lr > 0.0)) fail("initial_lr must be positive");
  if (!(rms_decay >= 0.0 && rms_decay < 1.0)) fail("rms_decay must lie in [0, 1)");
  if (!(rms_epsilon > 0.0)) fail("rms_epsilon must be positive");
  if (!(clip_norm >= 0.0)) fail("clip_norm must be nonnegative");
  if (schedule.joint_halve_every == 0) fail("joint_halve_every must be positive");

  namespace fs = std::filesystem;
  auto require = [&](const fs::path& p) {
    if (!fs::exists(p)) fail("missing data file " + p.string());
  };
  switch (data.kind) {
    case DatasetKind::kMnist:
    case DatasetKind::kPMnist:
      require(data.data_dir / "train-images-idx3-ubyte");
      require(data.data_dir / "train-labels-idx1-ubyte");
      require(data.data_dir / "t10k-images-idx3-ubyte");
      require(data.data_dir / "t10k-labels-idx1-ubyte");
      break;
    case DatasetKind::kCifar10:
      for (int b = 1; b <= 5; ++b) require(data.data_dir / ("data_batch_" + std::to_string(b) + ".bin"));
      require(data.data_dir / "test_batch.bin");
      break;
    case DatasetKind::kCopy:
      if (!data.copy_train_file.empty()) require(data.copy_train_file);
      if (!data.copy_test_file.empty()) require(data.copy_test_file);
      if (data.copy_alphabet < 2) fail("copy_alphabet must be at least 2");
      if (data.copy_payload == 0) fail("copy_payload must be positive");
      break;
  }
}

void ExperimentConfig::validate_for_length(std::size_t seq_len) const {
  if (!has_aux()) return;
  const auto o = anchor_options();
  if (o.l + o.spread > seq_len) {
    throw ConfigError("config: segment length l=" + std::to_string(o.l) + " plus spread " +
                      std::to_string(o.spread) + " exceeds sequence length " +
                      std::to_string(seq_len));
  }
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& k : keys()) out += k.name + " = " + k.get(*this) + "\n";
  return out;
}

std::uint64_t ExperimentConfig::hash() const {
  std::string text;
  for (const auto& k : keys()) {
    if (k.hashed) text += k.name + "=" + k.get(*this) + "\n";
  }
  return fnv1a64(text);
}

void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value) {
  for (const auto& k : keys()) {
    if (k.name == key) {
      k.set(config, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

ExperimentConfig parse_config(std::string_view text, const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" +
                        std::string(key) + "'");
    }
    try {
      set_config_value(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path, const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : keys()) out.push_back(k.name);
  return out;
}

}  // namespace auxlstm
