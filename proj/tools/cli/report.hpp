#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "haptiguide/metrics.hpp"
#include "haptiguide/stats.hpp"

namespace haptiguide::cli {

struct BoxGroup {
  std::string label;
  std::optional<Summary> summary;  // empty when no subject has a value
};

// Significance bracket between two boxes.
struct Bracket {
  std::size_t a = 0;
  std::size_t b = 0;
  std::string stars;
};

std::string render_boxplot_svg(const std::string& title, const std::string& unit,
                               const std::vector<BoxGroup>& groups,
                               const std::vector<Bracket>& brackets);

// One SVG per index with a box per (device, sub-block) over per-subject condition
// values, annotated with the significant comparisons. Returns the written files.
std::vector<std::filesystem::path> write_report(const std::vector<TrialRecord>& records,
                                                const std::vector<ComparisonRow>& comparisons,
                                                const std::filesystem::path& out_dir);

}  // namespace haptiguide::cli
