#include "auxlstm/permutation.hpp"

#include <numeric>

#include "auxlstm/errors.hpp"
#include "auxlstm/rng.hpp"

namespace auxlstm {

PermutationSpec PermutationSpec::identity(std::size_t size) {
  PermutationSpec spec;
  spec.perm.resize(size);
  std::iota(spec.perm.begin(), spec.perm.end(), 0);
  return spec;
}

PermutationSpec PermutationSpec::from_seed(std::uint64_t seed, std::size_t size) {
  PermutationSpec spec = identity(size);
  spec.seed = seed;
  RngStream rng(seed);
  for (std::size_t i = size; i > 1; --i) {
    const std::size_t j = rng.uniform_int(0, i - 1);
    std::swap(spec.perm[i - 1], spec.perm[j]);
  }
  return spec;
}

PermutationSpec PermutationSpec::inverse() const {
  PermutationSpec inv;
  inv.seed = seed;
  inv.perm.resize(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv.perm[perm[i]] = i;
  return inv;
}

bool PermutationSpec::is_bijection() const {
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t p : perm) {
    if (p >= perm.size() || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

Dataset apply_permutation(const Dataset& dataset, const PermutationSpec& spec) {
  const std::size_t n = spec.perm.size();
  Dataset out = dataset;
  for (std::size_t e = 0; e < dataset.examples.size(); ++e) {
    const SequenceExample& src = dataset.examples[e];
    if (src.length() != n) {
      throw DimensionError("apply_permutation: example " + std::to_string(e) + " has length " +
                           std::to_string(src.length()) + ", permutation covers " +
                           std::to_string(n));
    }
    SequenceExample& dst = out.examples[e];
    if (src.mode == TokenMode::kDiscrete) {
      for (std::size_t i = 0; i < n; ++i) dst.ids[i] = src.ids[spec.perm[i]];
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        auto from = src.values.row(spec.perm[i]);
        std::copy(from.begin(), from.end(), dst.values.row(i).begin());
      }
    }
  }
  return out;
}

}  // namespace auxlstm
