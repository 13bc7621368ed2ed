#include "auxlstm/datasource.hpp"

#include "auxlstm/cifar.hpp"
#include "auxlstm/copy_task.hpp"
#include "auxlstm/idx.hpp"
#include "auxlstm/permutation.hpp"
#include "auxlstm/rng.hpp"
#include "auxlstm/seqfile.hpp"

namespace auxlstm {

namespace {

void keep_prefix(Dataset& ds, std::size_t limit) {
  if (limit > 0 && ds.examples.size() > limit) ds.examples.resize(limit);
}

}  // namespace

DataSplits load_datasets(const ExperimentConfig& config) {
  const DataConfig& d = config.data;
  DataSplits s;
  switch (d.kind) {
    case DatasetKind::kMnist:
    case DatasetKind::kPMnist:
      s.train = load_idx(d.data_dir / "train-images-idx3-ubyte", d.data_dir / "train-labels-idx1-ubyte");
      s.test = load_idx(d.data_dir / "t10k-images-idx3-ubyte", d.data_dir / "t10k-labels-idx1-ubyte");
      break;
    case DatasetKind::kCifar10: {
      std::vector<std::filesystem::path> batches;
      for (int b = 1; b <= 5; ++b) batches.push_back(d.data_dir / ("data_batch_" + std::to_string(b) + ".bin"));
      s.train = load_cifar10_batches(batches);
      s.test = load_cifar10_binary(d.data_dir / "test_batch.bin");
      break;
    }
    case DatasetKind::kCopy: {
      CopyTaskConfig c{d.copy_payload, d.copy_blank, d.copy_alphabet, d.copy_seed};
      s.train = d.copy_train_file.empty() ? gen_copy_memory(c, d.copy_train)
                                          : read_sequence_file(d.copy_train_file);
      c.seed = mix64(d.copy_seed ^ 0x7E57);
      s.test = d.copy_test_file.empty() ? gen_copy_memory(c, d.copy_test)
                                        : read_sequence_file(d.copy_test_file);
      break;
    }
  }
  keep_prefix(s.train, d.train_limit);
  keep_prefix(s.test, d.test_limit);
  if (d.kind == DatasetKind::kPMnist) {
    const auto perm = PermutationSpec::from_seed(d.perm_seed, s.train.examples.front().length());
    s.train = apply_permutation(s.train, perm);
    s.test = apply_permutation(s.test, perm);
  }
  return s;
}

}  // namespace auxlstm
