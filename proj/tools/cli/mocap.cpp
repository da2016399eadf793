#include "cli/mocap.hpp"

#include <cmath>
#include <istream>
#include <sstream>

#include "cli/csv.hpp"
#include "haptiguide/bus.hpp"
#include "haptiguide/nodes.hpp"

namespace haptiguide::cli {

std::vector<MocapSample> read_mocap(std::istream& in) {
  std::vector<MocapSample> out;
  std::string line;
  std::size_t number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (!header) {
      if (fields != std::vector<std::string>{"t_seconds", "shoulder_deg", "knee_deg"}) {
        throw ParseError(number, "expected header 't_seconds,shoulder_deg,knee_deg'");
      }
      header = true;
      continue;
    }
    if (fields.size() != 3) throw ParseError(number, "expected 3 fields");
    MocapSample s;
    try {
      s.t = parse_double(fields[0]);
      s.shoulder = parse_double(fields[1]);
      s.knee = parse_double(fields[2]);
    } catch (const InvalidInput& e) {
      throw ParseError(number, e.what());
    }
    if (!out.empty() && !(s.t > out.back().t)) throw ParseError(number, "time is not strictly increasing");
    out.push_back(s);
  }
  if (!header) throw ParseError(number + 1, "missing header");
  if (out.empty()) throw ParseError(number + 1, "no samples");
  return out;
}

ReplayResult replay_mocap(const std::vector<MocapSample>& samples, Device device,
                          const TargetPose& targets, const DeviceConfig& config,
                          const SubjectParams& declare_rule) {
  if (samples.empty()) throw InvalidInput("replay: no samples");

  Bus bus;
  register_standard_topics(bus);
  std::ostringstream recording;
  Recorder recorder(bus,
                    {std::string(kJointStatesTopic), std::string(kErgoTacCmdTopic),
                     std::string(kCuffCmdTopic)},
                    recording);

  TrialSpec spec;
  spec.device = device;
  spec.targets = targets;
  spec.initial_pose = JointMap<Degrees>{samples.front().shoulder, samples.front().knee};
  spec.timeout = std::max(samples.back().t - samples.front().t, SimClock::kDefaultDt);

  BusTransport transport(bus, spec, config);

  ReplayResult result;
  TrialLog& log = result.log;
  log.spec = spec;
  log.dt = samples.size() > 1 ? samples[1].t - samples[0].t : SimClock::kDefaultDt;
  log.goal_tolerance = config.tolerance(device);

  JointMap<GoalHoldTracker> trackers;
  for (JointId j : kAllJoints) {
    if (targets.guides(j)) {
      trackers[j] = GoalHoldTracker(*targets[j], declare_rule.declare_tolerance, spec.initial_pose[j]);
    }
  }

  std::optional<Seconds> declared;
  for (std::size_t i = 0; i < samples.size() && !declared; ++i) {
    const JointMap<Degrees> angles{samples[i].shoulder, samples[i].knee};
    const CueFrame cues = transport.exchange(samples[i].t, angles);
    const ErrorFrame errors = compute_errors(angles, targets);

    TrialSample s;
    s.t = samples[i].t;
    bool all_held = true;
    for (JointId j : kAllJoints) {
      JointFrame& f = s.joints[j];
      f.angle = angles[j];
      f.error = errors[j];
      f.cue = cues[j];
      if (i + 1 < samples.size()) {
        const double next = j == JointId::Shoulder ? samples[i + 1].shoulder : samples[i + 1].knee;
        const double delta = next - angles[j];
        if (std::abs(delta) > kMotionDeadband) f.intent = delta > 0.0 ? Intent::MoveUp : Intent::MoveDown;
      }
      if (!targets.guides(j)) continue;
      if (i > 0) {
        const double moved = std::abs(angles[j] - log.samples.back().joints[j].angle);
        trackers[j].update(angles[j], samples[i].t - samples[i - 1].t, moved <= kMotionDeadband);
      }
      all_held = all_held && trackers[j].time_in_tolerance() + 1e-9 >= declare_rule.hold_time;
    }
    log.samples.push_back(std::move(s));
    if (all_held) declared = samples[i].t;
  }

  if (declared) {
    log.outcome = TrialOutcome{TrialOutcome::Kind::Success, *declared};
    for (JointId j : kAllJoints) log.samples.back().joints[j].intent = Intent::Hold;
  } else {
    log.outcome = TrialOutcome{TrialOutcome::Kind::Timeout, log.samples.back().t};
  }
  result.metrics = compute_metrics(log);
  result.bus_recording = recording.str();
  return result;
}

}  // namespace haptiguide::cli
