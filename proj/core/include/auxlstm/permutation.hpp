#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "auxlstm/dataset.hpp"

namespace auxlstm {

/// Fixed bijection on [0, size) applied to every sequence of a dataset.
struct PermutationSpec {
  std::uint64_t seed = 0;
  std::vector<std::size_t> perm;

  /// Fisher-Yates shuffle of the identity, driven by RngStream(seed).
  static PermutationSpec from_seed(std::uint64_t seed, std::size_t size = 784);
  static PermutationSpec identity(std::size_t size);
  PermutationSpec inverse() const;
  bool is_bijection() const;
};

/// Output token i of every example is input token perm[i]; labels unchanged.
/// Throws DimensionError if an example length differs from the domain size.
Dataset apply_permutation(const Dataset& dataset, const PermutationSpec& spec);

}  // namespace auxlstm
