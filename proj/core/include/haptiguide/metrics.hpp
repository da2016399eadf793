#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "haptiguide/engine.hpp"

namespace haptiguide {

// Per-tick motion below this magnitude does not count as moving.
inline constexpr Degrees kMotionDeadband = 0.01;

struct ConfusionCounts {
  std::size_t active_ticks = 0;
  std::size_t opposite_ticks = 0;
};

// Counts, per guided joint, the ticks with active guidance outside tolerance and
// those among them where the joint moved against the required direction.
JointMap<ConfusionCounts> confusion_counts(const TrialLog& log);

// Percent of guided time spent moving opposite to the guidance, averaged over the
// joints that received guidance. 0 when no joint was guided.
double confusion_index(const TrialLog& log);
// Same ratio with ticks of all joints pooled together.
double confusion_index_pooled(const TrialLog& log);

bool success(const TrialLog& log);

// Success-group indices; throw NotApplicable for failed trials.
Seconds reaching_time(const TrialLog& log);
Degrees angular_distance(const TrialLog& log);
double reaching_velocity(const TrialLog& log);
// Path length over duration, exported next to the net-displacement velocity.
double path_velocity(const TrialLog& log);

// Failure-group index; throws NotApplicable for successful trials.
double final_error(const TrialLog& log);

Degrees joint_angular_distance(const TrialLog& log, JointId joint);

struct TrialMetrics {
  double confusion_pct = 0.0;
  double confusion_pooled_pct = 0.0;
  bool success = false;
  std::optional<Seconds> reaching_time_s;
  std::optional<Degrees> angular_distance_deg;
  std::optional<double> reaching_velocity_dps;
  std::optional<double> path_velocity_dps;
  std::optional<double> final_error_pct;
  JointMap<std::optional<double>> confusion_per_joint;
  JointMap<std::optional<Degrees>> distance_per_joint;

  bool operator==(const TrialMetrics&) const = default;
};

TrialMetrics compute_metrics(const TrialLog& log);

// The six performance indices, in reporting order.
enum class Index { Confusion, Success, ReachingTime, AngularDistance, ReachingVelocity, FinalError };

inline constexpr std::array<Index, 6> kAllIndices{Index::Confusion,       Index::Success,
                                                  Index::ReachingTime,    Index::AngularDistance,
                                                  Index::ReachingVelocity, Index::FinalError};

std::string_view to_string(Index index);
Index index_from_string(std::string_view s);
std::string_view index_unit(Index index);

// Value of one index for a trial; success maps to 100 or 0. Empty when the index
// does not apply to the trial's group.
std::optional<double> index_value(const TrialMetrics& m, Index index);

// One row of the per-trial metrics table.
struct TrialRecord {
  int subject_id = 0;
  Device device = Device::ErgoTac;
  SubBlock sub_block = SubBlock::ShoulderOnly;
  int trial_index = 0;
  std::optional<Degrees> shoulder_target;
  std::optional<Degrees> knee_target;
  TrialMetrics metrics;

  bool operator==(const TrialRecord&) const = default;
};

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// Quantile by linear interpolation between order statistics of sorted values.
double quantile_sorted(const std::vector<double>& sorted, double q);
Summary summarize(std::vector<double> values);

struct ConditionSummary {
  Device device = Device::ErgoTac;
  SubBlock sub_block = SubBlock::ShoulderOnly;
  std::optional<int> subject_id;
  std::size_t trials = 0;
  double success_ratio = 0.0;
  std::map<Index, Summary> indices;
  JointMap<std::optional<Summary>> confusion_per_joint;
  JointMap<std::optional<Summary>> distance_per_joint;
};

// Groups by (device, sub-block), optionally also by subject. Indices with no
// applicable value in a group are left out and reported through `warnings`.
std::vector<ConditionSummary> aggregate(const std::vector<TrialRecord>& records, bool by_subject,
                                        std::vector<std::string>* warnings = nullptr);

}  // namespace haptiguide
