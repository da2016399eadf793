#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "haptiguide/metrics.hpp"

namespace haptiguide {

struct PairedSample {
  std::vector<std::pair<double, double>> pairs;
  std::string label_a;
  std::string label_b;

  std::vector<double> differences() const;
};

enum class PValueMethod { Exact, NormalApprox };

std::string_view to_string(PValueMethod m);

// Samples with at most this many nonzero differences get an exact p-value.
inline constexpr std::size_t kExactWilcoxonLimit = 20;

struct WilcoxonResult {
  double w_statistic = 0.0;  // min(W+, W-)
  double w_plus = 0.0;
  double w_minus = 0.0;
  std::size_t n_effective = 0;
  double p_value = 1.0;  // two-sided
  PValueMethod method = PValueMethod::Exact;
};

// Mid-ranks (1-based) of the values; tied values share the mean of their positions.
std::vector<double> midranks(std::span<const double> values);

// Wilcoxon signed-rank test on paired differences. Zero differences are dropped.
// Throws DegenerateSample if no nonzero difference remains.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences,
                                    std::optional<PValueMethod> force_method = std::nullopt);
WilcoxonResult wilcoxon_signed_rank(const PairedSample& sample,
                                    std::optional<PValueMethod> force_method = std::nullopt);

// "***" below 0.001, "**" below 0.01, "*" below 0.05, otherwise "ns".
std::string_view significance_stars(double p);

struct ConditionKey {
  Device device;
  SubBlock sub_block;
  bool operator==(const ConditionKey&) const = default;
};

std::string condition_label(const ConditionKey& c);

struct PlannedComparison {
  std::string name;
  ConditionKey a;
  ConditionKey b;
};

// CUFF vs ErgoTac for each sub-block, then single- vs multi-joint for each device
// and joint.
std::vector<PlannedComparison> default_comparison_plan();

enum class ComparisonStatus { Tested, Degenerate, Untestable };

struct ComparisonRow {
  Index index = Index::Confusion;
  std::string pair;
  ComparisonStatus status = ComparisonStatus::Untestable;
  std::optional<WilcoxonResult> result;
  std::string stars;
  std::string note;
};

std::string_view to_string(ComparisonStatus s);

// Per-subject condition value: mean of the index over the subject's trials in the
// condition (success becomes the subject's success ratio).
std::optional<double> subject_condition_value(const std::vector<TrialRecord>& records, int subject_id,
                                              const ConditionKey& condition, Index index);

// One row per (index, planned pair); pairs are formed per subject id.
std::vector<ComparisonRow> compare_conditions(const std::vector<TrialRecord>& records,
                                              const std::vector<PlannedComparison>& plan);

}  // namespace haptiguide
