#pragma once

#include <cstdint>
#include <string_view>

namespace auxlstm {

/// Counter-based random stream. Draw k of a stream is a pure function of
/// (seed, k), so a stream can be snapshotted, serialized and replayed
/// exactly on any platform.
class RngStream {
 public:
  RngStream() = default;
  explicit RngStream(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 bits of precision.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer on the closed range [lo, hi]. Unbiased (rejection).
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  bool bernoulli(double p);

  /// Independent substream keyed by `key`. Does not advance this stream.
  RngStream split(std::uint64_t key) const;
  RngStream split(std::string_view label) const;

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

}  // namespace auxlstm
