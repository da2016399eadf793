#include "haptiguide/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace haptiguide {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

void require_samples(const TrialLog& log) {
  if (log.samples.empty()) throw InvalidInput("trial log has no samples");
}

void require_success(const TrialLog& log, const char* what) {
  require_samples(log);
  if (!log.outcome.success()) throw NotApplicable(std::string(what) + " is defined for successful trials only");
}

}  // namespace

JointMap<ConfusionCounts> confusion_counts(const TrialLog& log) {
  require_samples(log);
  JointMap<ConfusionCounts> counts;
  for (std::size_t i = 0; i + 1 < log.samples.size(); ++i) {
    for (JointId j : kAllJoints) {
      const JointFrame& f = log.samples[i].joints[j];
      if (!f.error || !f.cue || !cue_active(*f.cue)) continue;
      if (!(std::abs(*f.error) > log.goal_tolerance)) continue;
      ++counts[j].active_ticks;
      const double delta = log.samples[i + 1].joints[j].angle - f.angle;
      if (std::abs(delta) > kMotionDeadband && sign_of(delta) == -sign_of(*f.error)) {
        ++counts[j].opposite_ticks;
      }
    }
  }
  return counts;
}

double confusion_index(const TrialLog& log) {
  const auto counts = confusion_counts(log);
  double sum = 0.0;
  int joints = 0;
  for (JointId j : kAllJoints) {
    if (counts[j].active_ticks == 0) continue;
    sum += 100.0 * static_cast<double>(counts[j].opposite_ticks) /
           static_cast<double>(counts[j].active_ticks);
    ++joints;
  }
  return joints == 0 ? 0.0 : sum / joints;
}

double confusion_index_pooled(const TrialLog& log) {
  const auto counts = confusion_counts(log);
  std::size_t active = 0;
  std::size_t opposite = 0;
  for (JointId j : kAllJoints) {
    active += counts[j].active_ticks;
    opposite += counts[j].opposite_ticks;
  }
  return active == 0 ? 0.0 : 100.0 * static_cast<double>(opposite) / static_cast<double>(active);
}

bool success(const TrialLog& log) { return log.outcome.success(); }

Seconds reaching_time(const TrialLog& log) {
  require_success(log, "reaching time");
  return log.outcome.time - log.samples.front().t;
}

Degrees joint_angular_distance(const TrialLog& log, JointId joint) {
  require_samples(log);
  Degrees total = 0.0;
  for (std::size_t i = 1; i < log.samples.size(); ++i) {
    total += std::abs(log.samples[i].joints[joint].angle - log.samples[i - 1].joints[joint].angle);
  }
  return total;
}

Degrees angular_distance(const TrialLog& log) {
  require_success(log, "angular distance");
  Degrees total = 0.0;
  for (JointId j : kAllJoints) {
    if (log.spec.targets.guides(j)) total += joint_angular_distance(log, j);
  }
  return total;
}

namespace {

Degrees required_displacement(const TrialLog& log) {
  Degrees net = 0.0;
  for (JointId j : kAllJoints) {
    if (log.spec.targets.guides(j)) {
      net += std::abs(*log.spec.targets[j] - log.samples.front().joints[j].angle);
    }
  }
  return net;
}

}  // namespace

double reaching_velocity(const TrialLog& log) {
  const Seconds duration = reaching_time(log);
  const Degrees net = required_displacement(log);
  if (net == 0.0) return 0.0;
  return net / duration;
}

double path_velocity(const TrialLog& log) {
  const Seconds duration = reaching_time(log);
  const Degrees path = angular_distance(log);
  if (path == 0.0) return 0.0;
  return path / duration;
}

double final_error(const TrialLog& log) {
  require_samples(log);
  if (log.outcome.success()) throw NotApplicable("final error is defined for failed trials only");
  Degrees remaining = 0.0;
  for (JointId j : kAllJoints) {
    if (log.spec.targets.guides(j)) {
      remaining += std::abs(log.samples.back().joints[j].angle - *log.spec.targets[j]);
    }
  }
  const Degrees required = required_displacement(log);
  if (required == 0.0) return remaining == 0.0 ? 0.0 : 100.0;
  return 100.0 * remaining / required;
}

TrialMetrics compute_metrics(const TrialLog& log) {
  TrialMetrics m;
  m.confusion_pct = confusion_index(log);
  m.confusion_pooled_pct = confusion_index_pooled(log);
  m.success = success(log);
  const auto counts = confusion_counts(log);
  for (JointId j : kAllJoints) {
    if (!log.spec.targets.guides(j)) continue;
    if (counts[j].active_ticks > 0) {
      m.confusion_per_joint[j] = 100.0 * static_cast<double>(counts[j].opposite_ticks) /
                                 static_cast<double>(counts[j].active_ticks);
    } else {
      m.confusion_per_joint[j] = 0.0;
    }
    m.distance_per_joint[j] = joint_angular_distance(log, j);
  }
  if (m.success) {
    m.reaching_time_s = reaching_time(log);
    m.angular_distance_deg = angular_distance(log);
    m.reaching_velocity_dps = reaching_velocity(log);
    m.path_velocity_dps = path_velocity(log);
  } else {
    m.final_error_pct = final_error(log);
  }
  return m;
}

std::string_view to_string(Index index) {
  switch (index) {
    case Index::Confusion: return "confusion_pct";
    case Index::Success: return "success_pct";
    case Index::ReachingTime: return "reaching_time_s";
    case Index::AngularDistance: return "angular_distance_deg";
    case Index::ReachingVelocity: return "reaching_velocity_dps";
    case Index::FinalError: break;
  }
  return "final_error_pct";
}

Index index_from_string(std::string_view s) {
  for (Index i : kAllIndices) {
    if (to_string(i) == s) return i;
  }
  throw InvalidInput("unknown index '" + std::string(s) + "'");
}

std::string_view index_unit(Index index) {
  switch (index) {
    case Index::ReachingTime: return "s";
    case Index::AngularDistance: return "deg";
    case Index::ReachingVelocity: return "deg/s";
    default: break;
  }
  return "%";
}

std::optional<double> index_value(const TrialMetrics& m, Index index) {
  switch (index) {
    case Index::Confusion: return m.confusion_pct;
    case Index::Success: return m.success ? 100.0 : 0.0;
    case Index::ReachingTime: return m.reaching_time_s;
    case Index::AngularDistance: return m.angular_distance_deg;
    case Index::ReachingVelocity: return m.reaching_velocity_dps;
    case Index::FinalError: break;
  }
  return m.final_error_pct;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw InvalidInput("quantile of empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

Summary summarize(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("summary of empty sample");
  std::sort(values.begin(), values.end());
  Summary s;
  s.count = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  s.median = quantile_sorted(values, 0.5);
  s.q1 = quantile_sorted(values, 0.25);
  s.q3 = quantile_sorted(values, 0.75);
  s.min = values.front();
  s.max = values.back();
  return s;
}

std::vector<ConditionSummary> aggregate(const std::vector<TrialRecord>& records, bool by_subject,
                                        std::vector<std::string>* warnings) {
  if (records.empty()) throw InvalidInput("aggregate: no trial records");

  using Key = std::tuple<int, int, int>;  // device, sub-block, subject (or -1)
  std::map<Key, std::vector<const TrialRecord*>> groups;
  for (const TrialRecord& r : records) {
    groups[Key{static_cast<int>(r.device), static_cast<int>(r.sub_block),
               by_subject ? r.subject_id : -1}]
        .push_back(&r);
  }

  std::vector<ConditionSummary> out;
  for (const auto& [key, rows] : groups) {
    ConditionSummary cs;
    cs.device = static_cast<Device>(std::get<0>(key));
    cs.sub_block = static_cast<SubBlock>(std::get<1>(key));
    if (by_subject) cs.subject_id = std::get<2>(key);
    cs.trials = rows.size();

    std::size_t successes = 0;
    for (const TrialRecord* r : rows) successes += r->metrics.success ? 1 : 0;
    cs.success_ratio = 100.0 * static_cast<double>(successes) / static_cast<double>(rows.size());

    for (Index idx : kAllIndices) {
      std::vector<double> values;
      for (const TrialRecord* r : rows) {
        if (auto v = index_value(r->metrics, idx)) values.push_back(*v);
      }
      if (values.empty()) {
        if (warnings) {
          warnings->push_back(std::string(to_string(idx)) + ": no applicable trials in " +
                              std::string(to_string(cs.device)) + "/" +
                              std::string(to_string(cs.sub_block)));
        }
        continue;
      }
      cs.indices.emplace(idx, summarize(std::move(values)));
    }
    for (JointId j : kAllJoints) {
      std::vector<double> conf;
      std::vector<double> dist;
      for (const TrialRecord* r : rows) {
        if (auto v = r->metrics.confusion_per_joint[j]) conf.push_back(*v);
        if (auto v = r->metrics.distance_per_joint[j]) dist.push_back(*v);
      }
      if (!conf.empty()) cs.confusion_per_joint[j] = summarize(std::move(conf));
      if (!dist.empty()) cs.distance_per_joint[j] = summarize(std::move(dist));
    }
    out.push_back(std::move(cs));
  }
  return out;
}

}  // namespace haptiguide
