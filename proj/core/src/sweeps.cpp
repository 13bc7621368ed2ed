#include "auxlstm/sweeps.hpp"

#include "auxlstm/errors.hpp"
#include "auxlstm/trainer.hpp"

namespace auxlstm {

namespace {

SweepRow run_row(const ExperimentConfig& cfg, const Dataset& train, const Dataset& test,
                 bool write_files, std::ostream* log) {
  auto outcome = run_experiment(cfg, train, test, write_files, {}, log);
  SweepRow row;
  row.supervised_window = cfg.supervised_window;
  row.n = cfg.n;
  row.l = cfg.l;
  row.aux_window = cfg.effective_aux_window();
  row.test_accuracy = outcome.test_accuracy;
  row.train_accuracy = outcome.train_accuracy;
  row.aux_grad_steps = outcome.session.totals.aux_grad_steps;
  row.steps = outcome.session.step;
  return row;
}

}  // namespace

std::string SweepTable::to_csv() const {
  std::string s = "supervised_window,n,l,aux_window,test_accuracy,train_accuracy,aux_grad_steps,steps\n";
  for (const auto& r : rows) {
    s += std::to_string(r.supervised_window) + ',' + std::to_string(r.n) + ',' +
         std::to_string(r.l) + ',' + std::to_string(r.aux_window) + ',' +
         std::to_string(r.test_accuracy) + ',' + std::to_string(r.train_accuracy) + ',' +
         std::to_string(r.aux_grad_steps) + ',' + std::to_string(r.steps) + '\n';
  }
  return s;
}

SweepTable sweep_shrinking_bptt(const ExperimentConfig& config, std::span<const std::size_t> windows,
                                const Dataset& train, const Dataset& test, bool write_files,
                                std::ostream* log) {
  if (windows.empty()) throw ConfigError("sweep_shrinking_bptt: no windows given");
  SweepTable table;
  for (std::size_t w : windows) {
    ExperimentConfig cfg = config;
    cfg.supervised_window = w;
    cfg.out_dir = config.out_dir / ("window_" + std::to_string(w));
    if (log != nullptr) *log << "== supervised_window " << w << "\n";
    table.rows.push_back(run_row(cfg, train, test, write_files, log));
  }
  return table;
}

SweepTable sweep_segments(const ExperimentConfig& config,
                          std::span<const std::pair<std::size_t, std::size_t>> pairs,
                          const Dataset& train, const Dataset& test, bool write_files,
                          std::ostream* log) {
  if (pairs.empty()) throw ConfigError("sweep_segments: no (n, l) pairs given");
  if (!config.has_aux()) throw ConfigError("sweep_segments: needs mode r or p");
  SweepTable table;
  const std::size_t budget = pairs.front().first * pairs.front().second;
  for (const auto& [n, l] : pairs) {
    if (n * l != budget) {
      table.warnings.push_back("pair (" + std::to_string(n) + ", " + std::to_string(l) +
                               ") has n*l = " + std::to_string(n * l) + ", expected " +
                               std::to_string(budget));
      if (log != nullptr) *log << "warning: " << table.warnings.back() << "\n";
    }
    ExperimentConfig cfg = config;
    cfg.n = n;
    cfg.l = l;
    cfg.aux_window = l;
    cfg.out_dir = config.out_dir / ("n" + std::to_string(n) + "_l" + std::to_string(l));
    if (log != nullptr) *log << "== n " << n << " l " << l << "\n";
    table.rows.push_back(run_row(cfg, train, test, write_files, log));
  }
  return table;
}

}  // namespace auxlstm
