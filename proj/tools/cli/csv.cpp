#include "cli/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace haptiguide::cli {

std::string format_double(double v) { return fmt::format("{}", v); }

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw InvalidInput("not a finite number: '" + std::string(s) + "'");
  }
  return v;
}

std::optional<double> parse_optional_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

CsvTable CsvTable::read(std::istream& in, const std::vector<std::string>& required_columns) {
  CsvTable t;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (t.header_.empty()) {
      t.header_ = split_csv_line(line);
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() != t.header_.size()) {
      throw ParseError(number, "expected " + std::to_string(t.header_.size()) + " fields, got " +
                                   std::to_string(fields.size()));
    }
    t.rows_.push_back(std::move(fields));
    t.lines_.push_back(number);
  }
  if (t.header_.empty()) throw SchemaError("CSV input has no header");
  for (const auto& c : required_columns) {
    if (std::find(t.header_.begin(), t.header_.end(), c) == t.header_.end()) {
      throw SchemaError("CSV input lacks column '" + c + "'");
    }
  }
  return t;
}

const std::string& CsvTable::cell(std::size_t row, const std::string& column) const {
  const auto it = std::find(header_.begin(), header_.end(), column);
  if (it == header_.end()) throw SchemaError("CSV input lacks column '" + column + "'");
  return rows_.at(row)[static_cast<std::size_t>(it - header_.begin())];
}

const std::vector<std::string> kMetricsColumns{
    "subject_id",           "device",
    "sub_block",            "trial_index",
    "shoulder_target_deg",  "knee_target_deg",
    "success",              "confusion_pct",
    "reaching_time_s",      "angular_distance_deg",
    "reaching_velocity_dps", "final_error_pct",
    "confusion_pooled_pct", "path_velocity_dps",
    "shoulder_confusion_pct", "knee_confusion_pct",
    "shoulder_distance_deg", "knee_distance_deg"};

void write_metrics_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  for (std::size_t i = 0; i < kMetricsColumns.size(); ++i) {
    out << (i ? "," : "") << kMetricsColumns[i];
  }
  out << '\n';
  for (const TrialRecord& r : records) {
    const TrialMetrics& m = r.metrics;
    out << r.subject_id << ',' << to_string(r.device) << ',' << to_string(r.sub_block) << ','
        << r.trial_index << ',' << format_optional(r.shoulder_target) << ','
        << format_optional(r.knee_target) << ',' << (m.success ? 1 : 0) << ','
        << format_double(m.confusion_pct) << ',' << format_optional(m.reaching_time_s) << ','
        << format_optional(m.angular_distance_deg) << ',' << format_optional(m.reaching_velocity_dps)
        << ',' << format_optional(m.final_error_pct) << ',' << format_double(m.confusion_pooled_pct)
        << ',' << format_optional(m.path_velocity_dps) << ','
        << format_optional(m.confusion_per_joint[JointId::Shoulder]) << ','
        << format_optional(m.confusion_per_joint[JointId::Knee]) << ','
        << format_optional(m.distance_per_joint[JointId::Shoulder]) << ','
        << format_optional(m.distance_per_joint[JointId::Knee]) << '\n';
  }
}

namespace {

int parse_int(std::string_view s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw InvalidInput("not an integer: '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::vector<TrialRecord> read_metrics_csv(std::istream& in) {
  const std::vector<std::string> required(kMetricsColumns.begin(), kMetricsColumns.begin() + 12);
  const CsvTable t = CsvTable::read(in, required);
  if (t.rows() == 0) throw SchemaError("metrics CSV has no rows");

  auto optional_cell = [&](std::size_t row, const std::string& column) -> std::optional<double> {
    try {
      return parse_optional_double(t.cell(row, column));
    } catch (const SchemaError&) {
      return std::nullopt;  // extended columns are optional
    }
  };

  std::vector<TrialRecord> out;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    try {
      TrialRecord r;
      r.subject_id = parse_int(t.cell(i, "subject_id"));
      r.device = device_from_string(t.cell(i, "device"));
      r.sub_block = sub_block_from_string(t.cell(i, "sub_block"));
      r.trial_index = parse_int(t.cell(i, "trial_index"));
      r.shoulder_target = parse_optional_double(t.cell(i, "shoulder_target_deg"));
      r.knee_target = parse_optional_double(t.cell(i, "knee_target_deg"));
      const std::string& ok = t.cell(i, "success");
      if (ok != "0" && ok != "1") throw InvalidInput("success must be 0 or 1");
      TrialMetrics& m = r.metrics;
      m.success = ok == "1";
      m.confusion_pct = parse_double(t.cell(i, "confusion_pct"));
      m.reaching_time_s = parse_optional_double(t.cell(i, "reaching_time_s"));
      m.angular_distance_deg = parse_optional_double(t.cell(i, "angular_distance_deg"));
      m.reaching_velocity_dps = parse_optional_double(t.cell(i, "reaching_velocity_dps"));
      m.final_error_pct = parse_optional_double(t.cell(i, "final_error_pct"));
      m.confusion_pooled_pct = optional_cell(i, "confusion_pooled_pct").value_or(m.confusion_pct);
      m.path_velocity_dps = optional_cell(i, "path_velocity_dps");
      m.confusion_per_joint[JointId::Shoulder] = optional_cell(i, "shoulder_confusion_pct");
      m.confusion_per_joint[JointId::Knee] = optional_cell(i, "knee_confusion_pct");
      m.distance_per_joint[JointId::Shoulder] = optional_cell(i, "shoulder_distance_deg");
      m.distance_per_joint[JointId::Knee] = optional_cell(i, "knee_distance_deg");
      if (m.success == m.final_error_pct.has_value() || m.success != m.reaching_time_s.has_value()) {
        throw InvalidInput("index group does not match the success flag");
      }
      out.push_back(std::move(r));
    } catch (const InvalidInput& e) {
      throw ParseError(t.line_of(i), e.what());
    }
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<ConditionSummary>& summaries) {
  out << "device,sub_block,subject_id,trials,success_ratio_pct,index,count,mean,std,median,q1,q3,min,"
         "max\n";
  auto row = [&](const ConditionSummary& c, std::string_view index, const Summary& s) {
    out << to_string(c.device) << ',' << to_string(c.sub_block) << ','
        << (c.subject_id ? std::to_string(*c.subject_id) : std::string()) << ',' << c.trials << ','
        << format_double(c.success_ratio) << ',' << index << ',' << s.count << ','
        << format_double(s.mean) << ',' << format_double(s.std) << ',' << format_double(s.median)
        << ',' << format_double(s.q1) << ',' << format_double(s.q3) << ',' << format_double(s.min)
        << ',' << format_double(s.max) << '\n';
  };
  for (const ConditionSummary& c : summaries) {
    for (const auto& [index, s] : c.indices) row(c, to_string(index), s);
    for (JointId j : kAllJoints) {
      if (c.confusion_per_joint[j]) {
        row(c, std::string(to_string(j)) + "_confusion_pct", *c.confusion_per_joint[j]);
      }
      if (c.distance_per_joint[j]) {
        row(c, std::string(to_string(j)) + "_distance_deg", *c.distance_per_joint[j]);
      }
    }
  }
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "index,pair,W,n,method,p,stars\n";
  for (const ComparisonRow& r : rows) {
    out << to_string(r.index) << ',' << r.pair << ',';
    if (r.result) {
      out << format_double(r.result->w_statistic) << ',' << r.result->n_effective << ','
          << to_string(r.result->method) << ',' << format_double(r.result->p_value) << ',' << r.stars;
    } else {
      out << ",," << to_string(r.status) << ",,";
    }
    out << '\n';
  }
}

std::vector<ComparisonRow> read_comparison_csv(std::istream& in) {
  const CsvTable t = CsvTable::read(in, {"index", "pair", "W", "n", "method", "p", "stars"});
  std::vector<ComparisonRow> out;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    try {
      ComparisonRow r;
      r.index = index_from_string(t.cell(i, "index"));
      r.pair = t.cell(i, "pair");
      const std::string& method = t.cell(i, "method");
      if (method == "exact" || method == "normal") {
        WilcoxonResult w;
        w.w_statistic = parse_double(t.cell(i, "W"));
        w.n_effective = static_cast<std::size_t>(parse_int(t.cell(i, "n")));
        w.method = method == "exact" ? PValueMethod::Exact : PValueMethod::NormalApprox;
        w.p_value = parse_double(t.cell(i, "p"));
        r.result = w;
        r.status = ComparisonStatus::Tested;
        r.stars = t.cell(i, "stars");
      } else if (method == "degenerate") {
        r.status = ComparisonStatus::Degenerate;
      } else if (method == "untestable") {
        r.status = ComparisonStatus::Untestable;
      } else {
        throw InvalidInput("unknown method '" + method + "'");
      }
      out.push_back(std::move(r));
    } catch (const InvalidInput& e) {
      throw ParseError(t.line_of(i), e.what());
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace haptiguide::cli
