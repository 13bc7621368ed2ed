#include "auxlstm/metrics.hpp"

#include <charconv>
#include <sstream>

#include "auxlstm/errors.hpp"

namespace auxlstm {

namespace {

const char* kSchemaLine = "# auxlstm-metrics v1";

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class T>
T parse_cell(const std::string& s) {
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw FormatError("metrics: bad field '" + s + "'");
  }
  return v;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

std::string metrics_header() {
  return "step,epoch,phase,lr,ss_prob,train_supervised,train_auxiliary,train_total,"
         "train_accuracy,test_accuracy,aux_grad_steps,sup_grad_steps,forward_flops";
}

std::string metrics_row(const MetricsRecord& r) {
  std::string s;
  s += std::to_string(r.step) + ',' + std::to_string(r.epoch) + ',' +
       std::string(to_string(r.phase)) + ',' + fmt(r.lr) + ',' + fmt(r.ss_prob) + ',' +
       fmt(r.train_supervised) + ',' + fmt(r.train_auxiliary) + ',' + fmt(r.train_total) + ',' +
       fmt(r.train_accuracy) + ',' + (r.test_accuracy ? fmt(*r.test_accuracy) : std::string()) +
       ',' + std::to_string(r.aux_grad_steps) + ',' + std::to_string(r.sup_grad_steps) + ',' +
       std::to_string(r.forward_flops);
  return s;
}

MetricsRecord parse_metrics_row(const std::string& line) {
  const auto c = split_csv(line);
  if (c.size() != 13) throw FormatError("metrics: expected 13 fields, got " + std::to_string(c.size()));
  MetricsRecord r;
  r.step = parse_cell<std::uint64_t>(c[0]);
  r.epoch = parse_cell<std::uint64_t>(c[1]);
  if (c[2] == "pretrain") r.phase = Phase::kPretrain;
  else if (c[2] == "joint") r.phase = Phase::kJoint;
  else throw FormatError("metrics: bad phase '" + c[2] + "'");
  r.lr = parse_cell<double>(c[3]);
  r.ss_prob = parse_cell<double>(c[4]);
  r.train_supervised = parse_cell<double>(c[5]);
  r.train_auxiliary = parse_cell<double>(c[6]);
  r.train_total = parse_cell<double>(c[7]);
  r.train_accuracy = parse_cell<double>(c[8]);
  if (!c[9].empty()) r.test_accuracy = parse_cell<double>(c[9]);
  r.aux_grad_steps = parse_cell<std::uint64_t>(c[10]);
  r.sup_grad_steps = parse_cell<std::uint64_t>(c[11]);
  r.forward_flops = parse_cell<std::uint64_t>(c[12]);
  return r;
}

MetricsWriter::MetricsWriter(const std::filesystem::path& path, std::optional<std::size_t> keep_rows)
    : path_(path) {
  auto timing_path = path;
  timing_path.replace_extension(".timing.csv");
  if (keep_rows && std::filesystem::exists(path)) {
    auto lines = read_lines(path);
    const std::size_t keep = std::min(lines.size(), *keep_rows + 2);
    if (lines.size() < 2 || lines[0] != kSchemaLine) {
      throw FormatError("metrics: cannot resume " + path.string() + ": not a metrics file");
    }
    lines.resize(keep);
    out_.open(path, std::ios::trunc);
    for (const auto& l : lines) out_ << l << '\n';
    rows_ = keep - 2;
    if (rows_ != *keep_rows) {
      throw FormatError("metrics: " + path.string() + " has fewer rows than the checkpoint");
    }
    timing_.open(timing_path, std::ios::app);
  } else {
    out_.open(path, std::ios::trunc);
    out_ << kSchemaLine << '\n' << metrics_header() << '\n';
    timing_.open(timing_path, std::ios::trunc);
    timing_ << "step,seconds_per_batch,epoch_seconds\n";
  }
  if (!out_) throw FormatError("metrics: cannot write " + path.string());
  out_.flush();
}

void MetricsWriter::append(const MetricsRecord& record) {
  out_ << metrics_row(record) << '\n';
  out_.flush();
  ++rows_;
}

void MetricsWriter::append_timing(std::uint64_t step, double seconds_per_batch, double epoch_seconds) {
  timing_ << step << ',' << fmt(seconds_per_batch) << ',' << fmt(epoch_seconds) << '\n';
  timing_.flush();
}

std::vector<MetricsRecord> read_metrics_file(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.size() < 2 || lines[0] != kSchemaLine || lines[1] != metrics_header()) {
    throw FormatError("metrics: " + path.string() + " lacks the v1 schema and header");
  }
  std::vector<MetricsRecord> out;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    if (!lines[i].empty()) out.push_back(parse_metrics_row(lines[i]));
  }
  return out;
}

}  // namespace auxlstm
