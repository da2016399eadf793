#include "cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "cli/csv.hpp"
#include "cli/mocap.hpp"
#include "cli/report.hpp"

namespace haptiguide::cli {

namespace fs = std::filesystem;

TrialRecord make_record(int subject_id, int trial_index, const TrialLog& log) {
  TrialRecord r;
  r.subject_id = subject_id;
  r.device = log.spec.device;
  r.sub_block = log.spec.sub_block();
  r.trial_index = trial_index;
  r.shoulder_target = log.spec.targets[JointId::Shoulder];
  r.knee_target = log.spec.targets[JointId::Knee];
  r.metrics = compute_metrics(log);
  return r;
}

SimulationOutput simulate(const SessionConfig& config) {
  config.device.validate();
  for (const auto& s : config.subjects) s.validate();
  if (config.subjects.empty()) throw InvalidInput("no subjects configured");

  const std::size_t n = config.subjects.size();
  std::vector<std::vector<SessionTrial>> per_subject(n);
  const SimClock clock(config.dt);

  auto run_one = [&](std::size_t k) {
    SessionSpec session;
    session.seed = derive_seed(RngSeed{config.protocol_seed}, k + 1);
    session.timeout = config.timeout;
    session.initial_pose = config.initial_pose;
    per_subject[k] = run_session(session, config.subjects[k], config.device, clock);
  };

  unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) run_one(k);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = w; k < n; k += workers) run_one(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  SimulationOutput out;
  for (std::size_t k = 0; k < n; ++k) {
    const int subject_id = static_cast<int>(k) + 1;
    for (SessionTrial& st : per_subject[k]) {
      out.records.push_back(make_record(subject_id, st.plan.ordinal, st.log));
      out.trials.push_back(TrialFile{subject_id, st.plan.ordinal, std::move(st.log)});
    }
  }
  out.summaries = aggregate(out.records, false, &out.warnings);
  out.comparisons = compare_conditions(out.records, default_comparison_plan());
  return out;
}

namespace {

fs::path trial_path(const fs::path& out, int subject_id, int trial_index) {
  return out / "trials" / fmt::format("subject_{:02d}", subject_id) /
         fmt::format("trial_{:02d}.csv", trial_index);
}

template <typename F>
std::string render(F&& write) {
  std::ostringstream ss;
  write(ss);
  return ss.str();
}

std::vector<TrialRecord> load_metrics(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  return read_metrics_csv(in);
}

}  // namespace

void write_simulation(const SimulationOutput& sim, const SessionConfig& config, const fs::path& out) {
  fs::create_directories(out);
  for (const TrialFile& tf : sim.trials) {
    write_file(trial_path(out, tf.subject_id, tf.trial_index),
               render([&](std::ostream& os) { write_trial_log(os, tf, config.device.pulse_period); }));
  }
  write_file(out / "metrics.csv", render([&](std::ostream& os) { write_metrics_csv(os, sim.records); }));
  write_file(out / "summary.csv", render([&](std::ostream& os) { write_summary_csv(os, sim.summaries); }));
  write_file(out / "comparison.csv",
             render([&](std::ostream& os) { write_comparison_csv(os, sim.comparisons); }));
}

int cmd_simulate(const SessionConfig& config, const fs::path& out, std::ostream& msg) {
  const SimulationOutput sim = simulate(config);
  write_simulation(sim, config, out);

  std::size_t successes = 0;
  for (const auto& r : sim.records) successes += r.metrics.success ? 1 : 0;
  msg << fmt::format("simulated {} subjects, {} trials ({} successful) -> {}\n", config.subjects.size(),
                     sim.trials.size(), successes, out.string());
  for (const auto& w : sim.warnings) msg << "warning: " << w << '\n';
  return 0;
}

int cmd_replay(const fs::path& mocap, Device device, const TargetPose& targets,
               const SessionConfig& config, const fs::path& out, std::ostream& msg) {
  std::ifstream in(mocap);
  if (!in) throw Error("cannot read '" + mocap.string() + "'");
  const auto samples = read_mocap(in);
  const SubjectParams rule = config.subjects.empty() ? SubjectParams{} : config.subjects.front();
  const ReplayResult result = replay_mocap(samples, device, targets, config.device, rule);

  fs::create_directories(out);
  const TrialFile tf{0, 0, result.log};
  write_file(out / "replay_cues.csv",
             render([&](std::ostream& os) { write_trial_log(os, tf, config.device.pulse_period); }));
  TrialRecord record;
  record.device = device;
  record.sub_block = sub_block_of(targets);
  record.shoulder_target = targets[JointId::Shoulder];
  record.knee_target = targets[JointId::Knee];
  record.metrics = result.metrics;
  write_file(out / "replay_metrics.csv", render([&](std::ostream& os) { write_metrics_csv(os, {record}); }));
  write_file(out / "replay_bus.jsonl", result.bus_recording);

  msg << fmt::format("replayed {} samples: {}, confusion {:.2f}%\n", result.log.samples.size(),
                     result.metrics.success ? "goal reached" : "goal not reached",
                     result.metrics.confusion_pct);
  return 0;
}

int cmd_metrics(const fs::path& trials_dir, const fs::path& out, std::ostream& msg) {
  if (!fs::is_directory(trials_dir)) throw Error("not a directory: '" + trials_dir.string() + "'");
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(trials_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<TrialRecord> records;
  for (const auto& f : files) {
    std::ifstream in(f);
    TrialFile tf;
    try {
      tf = read_trial_log(in);
    } catch (const Error& e) {
      throw Error(f.string() + ": " + e.what());
    }
    records.push_back(make_record(tf.subject_id, tf.trial_index, tf.log));
  }
  if (records.empty()) throw SchemaError("no trial logs under '" + trials_dir.string() + "'");
  std::sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return std::tie(a.subject_id, a.trial_index) < std::tie(b.subject_id, b.trial_index);
  });

  std::vector<std::string> warnings;
  const auto summaries = aggregate(records, false, &warnings);
  fs::create_directories(out);
  write_file(out / "metrics.csv", render([&](std::ostream& os) { write_metrics_csv(os, records); }));
  write_file(out / "summary.csv", render([&](std::ostream& os) { write_summary_csv(os, summaries); }));
  msg << fmt::format("computed metrics for {} trials -> {}\n", records.size(), out.string());
  for (const auto& w : warnings) msg << "warning: " << w << '\n';
  return 0;
}

int cmd_compare(const fs::path& metrics_csv, const fs::path& out, std::ostream& msg) {
  const auto records = load_metrics(metrics_csv);
  const auto rows = compare_conditions(records, default_comparison_plan());
  fs::create_directories(out);
  write_file(out / "comparison.csv", render([&](std::ostream& os) { write_comparison_csv(os, rows); }));
  for (const auto& r : rows) {
    if (r.result) {
      msg << fmt::format("{:<22} {:<26} W={:<6} n={:<3} p={:.4f} {}\n", to_string(r.index), r.pair,
                         r.result->w_statistic, r.result->n_effective, r.result->p_value, r.stars);
    } else {
      msg << fmt::format("{:<22} {:<26} {}\n", to_string(r.index), r.pair, to_string(r.status));
    }
  }
  return 0;
}

int cmd_report(const fs::path& metrics_csv, const std::optional<fs::path>& comparison_csv,
               const fs::path& out, std::ostream& msg) {
  const auto records = load_metrics(metrics_csv);
  std::vector<ComparisonRow> comparisons;
  if (comparison_csv) {
    std::ifstream in(*comparison_csv);
    if (!in) throw Error("cannot read '" + comparison_csv->string() + "'");
    comparisons = read_comparison_csv(in);
  } else {
    comparisons = compare_conditions(records, default_comparison_plan());
  }
  const auto files = write_report(records, comparisons, out);
  for (const auto& f : files) msg << "wrote " << f.string() << '\n';
  return 0;
}

}  // namespace haptiguide::cli
