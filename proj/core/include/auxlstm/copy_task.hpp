#pragma once

#include <cstddef>
#include <cstdint>

#include "auxlstm/dataset.hpp"

namespace auxlstm {

/// Synthetic long-dependency task over discrete tokens.
///
/// Each sequence is `payload_len` random symbols from [0, alphabet), then
/// `blank_len` blank symbols, then a recall section of `payload_len` tokens:
/// a cue symbol followed by (payload[j] + payload[0]) mod alphabet for
/// j = 1 .. payload_len-1. The label is payload[0]. The recall section alone
/// says nothing about it, so it can only be recovered by remembering the
/// start of the sequence; predicting the recall section needs the same
/// memory.
///
/// Vocabulary: symbols 0..alphabet-1, blank = alphabet, cue = alphabet+1.
struct CopyTaskConfig {
  std::size_t payload_len = 5;
  std::size_t blank_len = 200;
  std::size_t alphabet = 8;
  std::uint64_t seed = 0;

  std::size_t sequence_length() const { return 2 * payload_len + blank_len; }
  std::uint32_t blank_token() const { return static_cast<std::uint32_t>(alphabet); }
  std::uint32_t cue_token() const { return static_cast<std::uint32_t>(alphabet + 1); }
  std::size_t vocab_size() const { return alphabet + 2; }
};

/// Deterministic in (config, count). Throws ConfigError if alphabet < 2 or
/// payload_len == 0.
Dataset gen_copy_memory(const CopyTaskConfig& config, std::size_t count);

}  // namespace auxlstm
