#include "auxlstm/copy_task.hpp"

#include "auxlstm/errors.hpp"
#include "auxlstm/rng.hpp"

namespace auxlstm {

Dataset gen_copy_memory(const CopyTaskConfig& config, std::size_t count) {
  if (config.alphabet < 2) throw ConfigError("copy task: alphabet must have at least 2 symbols");
  if (config.payload_len == 0) throw ConfigError("copy task: payload_len must be positive");
  Dataset ds;
  ds.mode = TokenMode::kDiscrete;
  ds.input_dim = config.vocab_size();
  ds.num_classes = config.alphabet;
  ds.examples.resize(count);

  RngStream rng(config.seed);
  const std::size_t p = config.payload_len;
  const auto a = static_cast<std::uint32_t>(config.alphabet);
  for (auto& ex : ds.examples) {
    ex.mode = TokenMode::kDiscrete;
    ex.ids.reserve(config.sequence_length());
    for (std::size_t i = 0; i < p; ++i) {
      ex.ids.push_back(static_cast<std::uint32_t>(rng.uniform_int(0, a - 1)));
    }
    ex.ids.insert(ex.ids.end(), config.blank_len, config.blank_token());
    ex.ids.push_back(config.cue_token());
    for (std::size_t j = 1; j < p; ++j) ex.ids.push_back((ex.ids[j] + ex.ids[0]) % a);
    ex.label = ex.ids[0];
  }
  return ds;
}

}  // namespace auxlstm
