#include "cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "cli/csv.hpp"

namespace haptiguide::cli {

namespace {

constexpr double kWidth = 680.0;
constexpr double kPlotLeft = 70.0;
constexpr double kPlotRight = 660.0;
constexpr double kPlotBottom = 380.0;
constexpr double kBracketStep = 16.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_boxplot_svg(const std::string& title, const std::string& unit,
                               const std::vector<BoxGroup>& groups,
                               const std::vector<Bracket>& brackets) {
  const double plot_top = 50.0 + kBracketStep * static_cast<double>(brackets.size());
  const double height = kPlotBottom + 50.0;

  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (const auto& g : groups) {
    if (!g.summary) continue;
    lo = any ? std::min(lo, g.summary->min) : g.summary->min;
    hi = any ? std::max(hi, g.summary->max) : g.summary->max;
    any = true;
  }
  if (!any || hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto y_of = [&](double v) { return kPlotBottom - (v - lo) / (hi - lo) * (kPlotBottom - plot_top); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\" font-size=\"11\">\n",
      kWidth, height, kWidth, height);
  svg += fmt::format("<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", kWidth, height);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     kWidth / 2.0, escape(title));

  // axes and ticks
  svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n",
                     kPlotLeft, plot_top, kPlotBottom);
  svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{2:.1f}\" x2=\"{1:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n",
                     kPlotLeft, kPlotRight, kPlotBottom);
  for (int i = 0; i <= 5; ++i) {
    const double v = lo + (hi - lo) * i / 5.0;
    const double y = y_of(v);
    svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\"/>\n",
                       kPlotLeft - 4.0, y, kPlotLeft, y);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.2f}</text>\n",
                       kPlotLeft - 6.0, y + 4.0, v);
  }
  svg += fmt::format(
      "<text x=\"16\" y=\"{0:.1f}\" transform=\"rotate(-90 16 {0:.1f})\" text-anchor=\"middle\">{1}</text>\n",
      (plot_top + kPlotBottom) / 2.0, escape(unit));

  const double slot = (kPlotRight - kPlotLeft) / static_cast<double>(std::max<std::size_t>(groups.size(), 1));
  auto x_of = [&](std::size_t i) { return kPlotLeft + slot * (static_cast<double>(i) + 0.5); };
  const double half = std::min(22.0, slot * 0.3);

  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double x = x_of(i);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", x,
                       kPlotBottom + 16.0, escape(groups[i].label));
    if (!groups[i].summary) {
      svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" fill=\"gray\">n/a</text>\n",
                         x, kPlotBottom - 8.0);
      continue;
    }
    const Summary& s = *groups[i].summary;
    svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n",
                       x, y_of(s.max), y_of(s.q3));
    svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n",
                       x, y_of(s.q1), y_of(s.min));
    for (double v : {s.min, s.max}) {
      svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\"/>\n",
                         x - half / 2.0, y_of(v), x + half / 2.0, y_of(v));
    }
    const std::string fill = groups[i].label.rfind("ergotac", 0) == 0 ? "#9ecae1" : "#fdae6b";
    // A zero-IQR box still gets a visible outline.
    const double top = y_of(s.q3);
    const double box_h = std::max(y_of(s.q1) - top, 1.0);
    svg += fmt::format(
        "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\" stroke=\"black\"/>\n",
        x - half, top, 2.0 * half, box_h, fill);
    svg += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\" stroke-width=\"2\"/>\n",
        x - half, y_of(s.median), x + half, y_of(s.median));
  }

  for (std::size_t k = 0; k < brackets.size(); ++k) {
    const auto& b = brackets[k];
    const double y = plot_top - 8.0 - kBracketStep * static_cast<double>(k);
    const double xa = x_of(b.a);
    const double xb = x_of(b.b);
    svg += fmt::format(
        "<polyline points=\"{0:.1f},{2:.1f} {0:.1f},{3:.1f} {1:.1f},{3:.1f} {1:.1f},{2:.1f}\" "
        "fill=\"none\" stroke=\"black\"/>\n",
        xa, xb, y + 4.0, y);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                       (xa + xb) / 2.0, y - 2.0, escape(b.stars));
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<std::filesystem::path> write_report(const std::vector<TrialRecord>& records,
                                                const std::vector<ComparisonRow>& comparisons,
                                                const std::filesystem::path& out_dir) {
  if (records.empty()) throw SchemaError("report: no trial records");

  std::vector<ConditionKey> conditions;
  for (Device d : kAllDevices) {
    for (SubBlock b : kAllSubBlocks) conditions.push_back({d, b});
  }
  auto slot_of = [&](const ConditionKey& c) {
    return static_cast<std::size_t>(std::find(conditions.begin(), conditions.end(), c) - conditions.begin());
  };

  std::set<int> subjects;
  for (const auto& r : records) subjects.insert(r.subject_id);
  const auto plan = default_comparison_plan();

  std::vector<std::filesystem::path> written;
  for (Index index : kAllIndices) {
    std::vector<BoxGroup> groups;
    for (const ConditionKey& c : conditions) {
      std::vector<double> values;
      for (int s : subjects) {
        if (auto v = subject_condition_value(records, s, c, index)) values.push_back(*v);
      }
      BoxGroup g;
      g.label = condition_label(c);
      if (!values.empty()) g.summary = summarize(std::move(values));
      groups.push_back(std::move(g));
    }

    std::vector<Bracket> brackets;
    for (const ComparisonRow& row : comparisons) {
      if (row.index != index || row.status != ComparisonStatus::Tested || row.stars.empty() ||
          row.stars == "ns") {
        continue;
      }
      const auto it = std::find_if(plan.begin(), plan.end(),
                                   [&](const PlannedComparison& pc) { return pc.name == row.pair; });
      if (it == plan.end()) continue;
      brackets.push_back(Bracket{slot_of(it->a), slot_of(it->b), row.stars});
    }

    const auto path = out_dir / (std::string(to_string(index)) + ".svg");
    write_file(path, render_boxplot_svg(std::string(to_string(index)), std::string(index_unit(index)),
                                        groups, brackets));
    written.push_back(path);
  }
  return written;
}

}  // namespace haptiguide::cli
