#pragma once

#include "auxlstm/config.hpp"
#include "auxlstm/dataset.hpp"

namespace auxlstm {

struct DataSplits {
  Dataset train;
  Dataset test;
};

/// Loads or generates the train and test sets named by `config.data`:
/// IDX files under data_dir for mnist/pmnist (pmnist applies the fixed
/// permutation drawn from perm_seed), CIFAR-10 binary batches for cifar10,
/// and the copy task generator (or its sequence files) for copy.
/// train_limit / test_limit keep a prefix of each split.
DataSplits load_datasets(const ExperimentConfig& config);

}  // namespace auxlstm
