#include "haptiguide/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace haptiguide {

std::string_view to_string(SubBlock b) {
  switch (b) {
    case SubBlock::ShoulderOnly: return "shoulder";
    case SubBlock::KneeOnly: return "knee";
    case SubBlock::MultiJoint: break;
  }
  return "multi";
}

SubBlock sub_block_from_string(std::string_view s) {
  if (s == "shoulder") return SubBlock::ShoulderOnly;
  if (s == "knee") return SubBlock::KneeOnly;
  if (s == "multi") return SubBlock::MultiJoint;
  throw InvalidInput("unknown sub-block '" + std::string(s) + "'");
}

SubBlock sub_block_of(const TargetPose& targets) {
  if (targets.multi_joint()) return SubBlock::MultiJoint;
  return targets.guides(JointId::Shoulder) ? SubBlock::ShoulderOnly : SubBlock::KneeOnly;
}

std::vector<TargetPose> protocol_targets(SubBlock block) {
  switch (block) {
    case SubBlock::ShoulderOnly:
      return {TargetPose::shoulder_only(-10.0), TargetPose::shoulder_only(45.0),
              TargetPose::shoulder_only(90.0)};
    case SubBlock::KneeOnly:
      return {TargetPose::knee_only(30.0), TargetPose::knee_only(80.0),
              TargetPose::knee_only(115.0)};
    case SubBlock::MultiJoint: break;
  }
  return {TargetPose::both(20.0, 110.0), TargetPose::both(55.0, 70.0),
          TargetPose::both(100.0, 40.0)};
}

void TrialSpec::validate() const {
  if (!(timeout > 0.0) || !std::isfinite(timeout)) throw InvalidInput("trial timeout must be positive");
  for (JointId j : kAllJoints) {
    if (!in_joint_range(j, initial_pose[j])) {
      throw InvalidInput("initial " + std::string(to_string(j)) + " angle outside joint range");
    }
  }
}

std::optional<ErgoTacCommand> ergotac_schedule(const ErrorFrame& errors, const SpotThresholds& th,
                                               std::optional<JointId> previous_active) {
  auto outside = [&](JointId j) { return errors[j] && std::abs(*errors[j]) > th.tol; };

  std::optional<JointId> chosen;
  if (previous_active && outside(*previous_active)) {
    chosen = previous_active;
  } else {
    for (JointId j : kAllJoints) {
      if (outside(j) && (!chosen || std::abs(*errors[j]) > std::abs(*errors[*chosen]))) chosen = j;
    }
  }
  if (!chosen) return std::nullopt;
  return ergotac_spot(*chosen, *errors[*chosen], th);
}

std::vector<CuffCommand> cuff_schedule(const ErrorFrame& errors, Degrees tol) {
  std::vector<CuffCommand> out;
  for (JointId j : kAllJoints) {
    if (errors[j]) out.push_back(cuff_command(j, *errors[j], tol));
  }
  return out;
}

GuidancePolicy::GuidancePolicy(Device device, const DeviceConfig& config)
    : device_(device), config_(config) {
  config_.validate();
}

CueFrame GuidancePolicy::compute(const ErrorFrame& errors) {
  CueFrame frame;
  if (device_ == Device::Cuff) {
    for (const CuffCommand& c : cuff_schedule(errors, config_.cuff_tolerance)) frame[c.joint] = c;
    return frame;
  }
  const auto cmd = ergotac_schedule(errors, config_.spot, active_);
  active_.reset();
  if (cmd) active_ = cmd->unit.joint;
  for (JointId j : kAllJoints) {
    if (!errors[j]) continue;
    if (cmd && cmd->unit.joint == j) {
      frame[j] = *cmd;
    } else {
      frame[j] = ErgoTacCommand{{j, Placement::Front}, VibrationLevel::Off};
    }
  }
  return frame;
}

ErrorFrame compute_errors(const JointMap<Degrees>& angles, const TargetPose& targets) {
  ErrorFrame errors;
  for (JointId j : kAllJoints) {
    if (targets.guides(j)) errors[j] = signed_error(angles[j], *targets[j]);
  }
  return errors;
}

DirectTransport::DirectTransport(const TrialSpec& spec, const DeviceConfig& config)
    : targets_(spec.targets), policy_(spec.device, config) {}

CueFrame DirectTransport::exchange(Seconds /*t*/, const JointMap<Degrees>& angles) {
  return policy_.compute(compute_errors(angles, targets_));
}

TrialLog run_trial(const TrialSpec& spec, const SubjectParams& subject,
                   const DeviceConfig& config, const SimClock& clock) {
  DirectTransport transport(spec, config);
  return run_trial(spec, subject, config, clock, transport);
}

TrialLog run_trial(const TrialSpec& spec, const SubjectParams& subject_params,
                   const DeviceConfig& config, const SimClock& clock, CueTransport& transport) {
  spec.validate();
  config.validate();

  SimClock sim(clock.dt());
  SimulatedSubject subject(subject_params, spec.initial_pose, spec.targets, sim.dt());
  const std::uint64_t timeout_ticks = sim.ticks_for(spec.timeout);

  TrialLog log;
  log.spec = spec;
  log.dt = sim.dt();
  log.goal_tolerance = config.tolerance(spec.device);
  log.samples.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(timeout_ticks + 1, 1u << 16)));

  for (;; sim.tick()) {
    const Seconds t = sim.now();
    const JointMap<Degrees> angles = subject.angles();
    const ErrorFrame errors = compute_errors(angles, spec.targets);
    const CueFrame cues = transport.exchange(t, angles);

    TrialSample sample;
    sample.t = t;
    for (JointId j : kAllJoints) {
      if (spec.targets.guides(j)) {
        if (!cues[j]) throw InvalidInput("transport delivered no cue for a guided joint");
        subject.perceive(*cues[j], t);
      }
    }
    subject.advance_to(t);
    for (JointId j : kAllJoints) {
      JointFrame& f = sample.joints[j];
      f.angle = angles[j];
      f.error = errors[j];
      f.cue = cues[j];
      f.intent = subject.intent(j);
    }
    log.samples.push_back(std::move(sample));

    if (subject.declare_done()) {
      log.outcome = TrialOutcome{TrialOutcome::Kind::Success, t};
      break;
    }
    if (sim.ticks() >= timeout_ticks) {
      log.outcome = TrialOutcome{TrialOutcome::Kind::Timeout, t};
      break;
    }
    subject.step(sim.dt());
  }
  return log;
}

namespace {

template <typename T>
void seeded_shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto k = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[k]);
  }
}

}  // namespace

std::vector<PlannedTrial> plan_session(const SessionSpec& session) {
  Rng rng(session.seed);
  std::vector<Device> devices(kAllDevices.begin(), kAllDevices.end());
  seeded_shuffle(devices, rng);

  std::vector<PlannedTrial> plan;
  for (Device d : devices) {
    std::vector<SubBlock> blocks(kAllSubBlocks.begin(), kAllSubBlocks.end());
    seeded_shuffle(blocks, rng);
    for (SubBlock b : blocks) {
      auto targets = protocol_targets(b);
      seeded_shuffle(targets, rng);
      for (const auto& tp : targets) {
        plan.push_back(PlannedTrial{d, b, tp, static_cast<int>(plan.size())});
      }
    }
  }
  return plan;
}

std::vector<SessionTrial> run_session(const SessionSpec& session, const SubjectParams& subject,
                                      const DeviceConfig& config, const SimClock& clock) {
  std::vector<SessionTrial> out;
  for (const PlannedTrial& p : plan_session(session)) {
    TrialSpec spec;
    spec.device = p.device;
    spec.targets = p.targets;
    spec.timeout = session.timeout;
    spec.initial_pose = session.initial_pose;

    SubjectParams params = subject;
    params.seed = derive_seed(subject.seed, static_cast<std::uint64_t>(p.ordinal));
    out.push_back(SessionTrial{p, run_trial(spec, params, config, clock)});
  }
  return out;
}

}  // namespace haptiguide
