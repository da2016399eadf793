#include "cli/trial_io.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "cli/csv.hpp"

namespace haptiguide::cli {

using nlohmann::json;

namespace {

const char* kHeader =
    "t,shoulder_deg,knee_deg,shoulder_error_deg,knee_error_deg,shoulder_cue,knee_cue,"
    "shoulder_intent,knee_intent,shoulder_amplitude_pct,knee_amplitude_pct";

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

std::string encode_cue(const GuidanceCue& cue) {
  if (const auto* e = std::get_if<ErgoTacCommand>(&cue)) {
    return "ergotac/" + std::string(to_string(e->unit.placement)) + "/" +
           std::string(to_string(e->level));
  }
  const auto& c = std::get<CuffCommand>(cue);
  return "cuff/" + std::string(to_string(c.slide)) + "/" + format_double(c.squeeze_force_n);
}

GuidanceCue decode_cue(JointId joint, const std::string& text) {
  const auto a = text.find('/');
  const auto b = a == std::string::npos ? a : text.find('/', a + 1);
  if (b == std::string::npos) throw InvalidInput("malformed cue '" + text + "'");
  const std::string kind = text.substr(0, a);
  const std::string first = text.substr(a + 1, b - a - 1);
  const std::string second = text.substr(b + 1);
  if (kind == "ergotac") {
    return ErgoTacCommand{{joint, placement_from_string(first)}, level_from_string(second)};
  }
  if (kind == "cuff") return CuffCommand{joint, slide_from_string(first), parse_double(second)};
  throw InvalidInput("unknown cue device '" + kind + "'");
}

void write_trial_log(std::ostream& out, const TrialFile& trial, Seconds pulse_period) {
  const TrialLog& log = trial.log;
  const json meta{
      {"subject_id", trial.subject_id},
      {"trial_index", trial.trial_index},
      {"device", to_string(log.spec.device)},
      {"sub_block", to_string(log.spec.sub_block())},
      {"targets",
       {{"shoulder_deg", optional_json(log.spec.targets[JointId::Shoulder])},
        {"knee_deg", optional_json(log.spec.targets[JointId::Knee])}}},
      {"initial_pose",
       {{"shoulder_deg", log.spec.initial_pose[JointId::Shoulder]},
        {"knee_deg", log.spec.initial_pose[JointId::Knee]}}},
      {"timeout_s", log.spec.timeout},
      {"dt_s", log.dt},
      {"goal_tolerance_deg", log.goal_tolerance},
      {"outcome", log.outcome.success() ? "success" : "timeout"},
      {"outcome_time_s", log.outcome.time},
  };
  out << "# " << meta.dump() << '\n' << kHeader << '\n';
  for (const TrialSample& s : log.samples) {
    out << format_double(s.t);
    for (JointId j : kAllJoints) out << ',' << format_double(s.joints[j].angle);
    for (JointId j : kAllJoints) out << ',' << format_optional(s.joints[j].error);
    for (JointId j : kAllJoints) {
      out << ',';
      if (s.joints[j].cue) out << encode_cue(*s.joints[j].cue);
    }
    for (JointId j : kAllJoints) out << ',' << to_string(s.joints[j].intent);
    for (JointId j : kAllJoints) {
      out << ',';
      if (s.joints[j].cue) {
        if (const auto* e = std::get_if<ErgoTacCommand>(&*s.joints[j].cue)) {
          out << format_double(ergotac_pulse(e->level, s.t, pulse_period));
        }
      }
    }
    out << '\n';
  }
}

TrialFile read_trial_log(std::istream& in) {
  std::string first;
  if (!std::getline(in, first) || first.rfind("# ", 0) != 0) {
    throw SchemaError("trial log must start with a '# {meta}' line");
  }
  json meta;
  try {
    meta = json::parse(first.substr(2));
  } catch (const json::parse_error& e) {
    throw ParseError(1, std::string("malformed meta line: ") + e.what());
  }

  TrialFile tf;
  try {
    tf.subject_id = meta.at("subject_id").get<int>();
    tf.trial_index = meta.at("trial_index").get<int>();
    TrialLog& log = tf.log;
    log.spec.device = device_from_string(meta.at("device").get<std::string>());
    log.spec.targets = TargetPose(optional_from(meta.at("targets").at("shoulder_deg")),
                                  optional_from(meta.at("targets").at("knee_deg")));
    log.spec.initial_pose = JointMap<Degrees>{meta.at("initial_pose").at("shoulder_deg").get<double>(),
                                              meta.at("initial_pose").at("knee_deg").get<double>()};
    log.spec.timeout = meta.at("timeout_s").get<double>();
    log.dt = meta.at("dt_s").get<double>();
    log.goal_tolerance = meta.at("goal_tolerance_deg").get<double>();
    const std::string outcome = meta.at("outcome").get<std::string>();
    if (outcome != "success" && outcome != "timeout") throw InvalidInput("unknown outcome");
    log.outcome.kind = outcome == "success" ? TrialOutcome::Kind::Success : TrialOutcome::Kind::Timeout;
    log.outcome.time = meta.at("outcome_time_s").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(1, std::string("bad meta line: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ParseError(1, std::string("bad meta line: ") + e.what());
  }

  const CsvTable t = CsvTable::read(in, split_csv_line(kHeader));
  for (std::size_t i = 0; i < t.rows(); ++i) {
    try {
      TrialSample s;
      s.t = parse_double(t.cell(i, "t"));
      for (JointId j : kAllJoints) {
        const std::string name(to_string(j));
        JointFrame& f = s.joints[j];
        f.angle = parse_double(t.cell(i, name + "_deg"));
        f.error = parse_optional_double(t.cell(i, name + "_error_deg"));
        const std::string& cue = t.cell(i, name + "_cue");
        if (!cue.empty()) f.cue = decode_cue(j, cue);
        f.intent = intent_from_string(t.cell(i, name + "_intent"));
      }
      tf.log.samples.push_back(std::move(s));
    } catch (const InvalidInput& e) {
      // +1 for the meta line consumed before the table
      throw ParseError(t.line_of(i) + 1, e.what());
    }
  }
  return tf;
}

}  // namespace haptiguide::cli
