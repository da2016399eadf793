#include "haptiguide/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>

namespace haptiguide {

std::vector<double> PairedSample::differences() const {
  std::vector<double> d;
  d.reserve(pairs.size());
  for (const auto& [a, b] : pairs) d.push_back(a - b);
  return d;
}

std::string_view to_string(PValueMethod m) {
  return m == PValueMethod::Exact ? "exact" : "normal";
}

std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t k = i;
    while (k + 1 < order.size() && values[order[k + 1]] == values[order[i]]) ++k;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(k + 1)) / 2.0;
    for (std::size_t m = i; m <= k; ++m) ranks[order[m]] = rank;
    i = k + 1;
  }
  return ranks;
}

namespace {

// Exact two-sided p: the null distribution of W+ over all 2^n sign assignments is
// built by counting subset sums of the doubled (integer) ranks.
double exact_p(const std::vector<double>& ranks, double w) {
  std::vector<std::int64_t> doubled;
  std::int64_t total = 0;
  for (double r : ranks) {
    doubled.push_back(std::llround(2.0 * r));
    total += doubled.back();
  }
  std::vector<std::uint64_t> count(static_cast<std::size_t>(total) + 1, 0);
  count[0] = 1;
  std::int64_t reach = 0;
  for (std::int64_t r : doubled) {
    for (std::int64_t s = reach; s >= 0; --s) {
      if (count[static_cast<std::size_t>(s)] != 0) {
        count[static_cast<std::size_t>(s + r)] += count[static_cast<std::size_t>(s)];
      }
    }
    reach += r;
  }
  const std::int64_t w2 = std::llround(2.0 * w);
  std::uint64_t extreme = 0;
  for (std::int64_t s = 0; s <= total; ++s) {
    if (std::min(s, total - s) <= w2) extreme += count[static_cast<std::size_t>(s)];
  }
  return static_cast<double>(extreme) / std::ldexp(1.0, static_cast<int>(ranks.size()));
}

double normal_p(const std::vector<double>& abs_diffs, double w) {
  const double n = static_cast<double>(abs_diffs.size());
  const double mean = n * (n + 1.0) / 4.0;
  double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;

  std::vector<double> sorted(abs_diffs);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t k = i;
    while (k < sorted.size() && sorted[k] == sorted[i]) ++k;
    const double t = static_cast<double>(k - i);
    var -= (t * t * t - t) / 48.0;
    i = k;
  }
  if (!(var > 0.0)) return 1.0;
  // W is the smaller rank sum, so it lies at or below the mean.
  const double z = std::min(0.0, (w - mean + 0.5) / std::sqrt(var));
  const double p = std::erfc(-z / std::sqrt(2.0));
  return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences,
                                    std::optional<PValueMethod> force_method) {
  std::vector<double> nonzero;
  for (double d : differences) {
    if (!std::isfinite(d)) throw InvalidInput("wilcoxon: non-finite difference");
    if (d != 0.0) nonzero.push_back(d);
  }
  if (nonzero.empty()) throw DegenerateSample("wilcoxon: all differences are zero");

  std::vector<double> abs_diffs;
  abs_diffs.reserve(nonzero.size());
  for (double d : nonzero) abs_diffs.push_back(std::abs(d));
  const auto ranks = midranks(abs_diffs);

  WilcoxonResult r;
  for (std::size_t i = 0; i < nonzero.size(); ++i) {
    (nonzero[i] > 0.0 ? r.w_plus : r.w_minus) += ranks[i];
  }
  r.w_statistic = std::min(r.w_plus, r.w_minus);
  r.n_effective = nonzero.size();
  r.method = force_method.value_or(r.n_effective <= kExactWilcoxonLimit ? PValueMethod::Exact
                                                                        : PValueMethod::NormalApprox);
  if (r.method == PValueMethod::Exact && r.n_effective > 62) {
    throw InvalidInput("wilcoxon: exact p-value limited to 62 nonzero differences");
  }
  r.p_value = r.method == PValueMethod::Exact ? exact_p(ranks, r.w_statistic)
                                              : normal_p(abs_diffs, r.w_statistic);
  return r;
}

WilcoxonResult wilcoxon_signed_rank(const PairedSample& sample,
                                    std::optional<PValueMethod> force_method) {
  const auto d = sample.differences();
  return wilcoxon_signed_rank(d, force_method);
}

std::string_view significance_stars(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidInput("significance_stars: p outside (0, 1]");
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "ns";
}

std::string condition_label(const ConditionKey& c) {
  return std::string(to_string(c.device)) + ":" + std::string(to_string(c.sub_block));
}

std::vector<PlannedComparison> default_comparison_plan() {
  std::vector<PlannedComparison> plan;
  for (SubBlock b : kAllSubBlocks) {
    plan.push_back({"ergotac_vs_cuff:" + std::string(to_string(b)),
                    {Device::ErgoTac, b},
                    {Device::Cuff, b}});
  }
  for (Device d : kAllDevices) {
    for (SubBlock b : {SubBlock::ShoulderOnly, SubBlock::KneeOnly}) {
      plan.push_back({std::string(to_string(d)) + ":" + std::string(to_string(b)) + "_vs_multi",
                      {d, b},
                      {d, SubBlock::MultiJoint}});
    }
  }
  return plan;
}

std::string_view to_string(ComparisonStatus s) {
  switch (s) {
    case ComparisonStatus::Tested: return "tested";
    case ComparisonStatus::Degenerate: return "degenerate";
    case ComparisonStatus::Untestable: break;
  }
  return "untestable";
}

std::optional<double> subject_condition_value(const std::vector<TrialRecord>& records, int subject_id,
                                              const ConditionKey& condition, Index index) {
  double sum = 0.0;
  int count = 0;
  for (const TrialRecord& r : records) {
    if (r.subject_id != subject_id || r.device != condition.device ||
        r.sub_block != condition.sub_block) {
      continue;
    }
    if (auto v = index_value(r.metrics, index)) {
      sum += *v;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

std::vector<ComparisonRow> compare_conditions(const std::vector<TrialRecord>& records,
                                              const std::vector<PlannedComparison>& plan) {
  std::set<int> subjects;
  for (const TrialRecord& r : records) subjects.insert(r.subject_id);

  std::vector<ComparisonRow> rows;
  for (Index index : kAllIndices) {
    for (const PlannedComparison& pc : plan) {
      ComparisonRow row;
      row.index = index;
      row.pair = pc.name;

      PairedSample sample;
      sample.label_a = condition_label(pc.a);
      sample.label_b = condition_label(pc.b);
      for (int s : subjects) {
        const auto a = subject_condition_value(records, s, pc.a, index);
        const auto b = subject_condition_value(records, s, pc.b, index);
        if (a && b) sample.pairs.emplace_back(*a, *b);
      }

      if (sample.pairs.empty()) {
        row.status = ComparisonStatus::Untestable;
        row.note = "no subject has values for both conditions";
      } else {
        try {
          row.result = wilcoxon_signed_rank(sample);
          row.status = ComparisonStatus::Tested;
          row.stars = std::string(significance_stars(row.result->p_value));
        } catch (const DegenerateSample& e) {
          row.status = ComparisonStatus::Degenerate;
          row.note = e.what();
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace haptiguide
