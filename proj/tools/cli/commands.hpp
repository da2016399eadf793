#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "cli/trial_io.hpp"
#include "haptiguide/metrics.hpp"
#include "haptiguide/stats.hpp"

namespace haptiguide::cli {

struct SimulationOutput {
  std::vector<TrialFile> trials;  // subject-major, execution order within a subject
  std::vector<TrialRecord> records;
  std::vector<ConditionSummary> summaries;
  std::vector<ComparisonRow> comparisons;
  std::vector<std::string> warnings;
};

TrialRecord make_record(int subject_id, int trial_index, const TrialLog& log);

// Runs the full protocol for every configured subject. Subject k (1-based) uses the
// session seed derived from the protocol seed and k.
SimulationOutput simulate(const SessionConfig& config);

// Layout under `out`:
//   trials/subject_XX/trial_YY.csv, metrics.csv, summary.csv, comparison.csv
void write_simulation(const SimulationOutput& sim, const SessionConfig& config,
                      const std::filesystem::path& out);

int cmd_simulate(const SessionConfig& config, const std::filesystem::path& out, std::ostream& msg);

int cmd_replay(const std::filesystem::path& mocap, Device device, const TargetPose& targets,
               const SessionConfig& config, const std::filesystem::path& out, std::ostream& msg);

// Recomputes metrics.csv and summary.csv from a directory of trial logs.
int cmd_metrics(const std::filesystem::path& trials_dir, const std::filesystem::path& out,
                std::ostream& msg);

int cmd_compare(const std::filesystem::path& metrics_csv, const std::filesystem::path& out,
                std::ostream& msg);

// Boxplots from a metrics CSV; significance comes from `comparison_csv` when given,
// otherwise it is computed from the metrics.
int cmd_report(const std::filesystem::path& metrics_csv,
               const std::optional<std::filesystem::path>& comparison_csv,
               const std::filesystem::path& out, std::ostream& msg);

}  // namespace haptiguide::cli
