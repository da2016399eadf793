#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "haptiguide/core.hpp"
#include "haptiguide/devices.hpp"
#include "haptiguide/subject.hpp"

namespace haptiguide {

enum class SubBlock { ShoulderOnly, KneeOnly, MultiJoint };

inline constexpr std::array<Device, 2> kAllDevices{Device::ErgoTac, Device::Cuff};
inline constexpr std::array<SubBlock, 3> kAllSubBlocks{SubBlock::ShoulderOnly, SubBlock::KneeOnly,
                                                       SubBlock::MultiJoint};

std::string_view to_string(SubBlock b);
SubBlock sub_block_from_string(std::string_view s);
SubBlock sub_block_of(const TargetPose& targets);

// The protocol's target sets, in canonical order.
std::vector<TargetPose> protocol_targets(SubBlock block);

inline const JointMap<Degrees> kDefaultInitialPose{0.0, 60.0};
inline constexpr Seconds kDefaultTimeout = 90.0;

struct TrialSpec {
  Device device = Device::ErgoTac;
  TargetPose targets = TargetPose::shoulder_only(0.0);
  Seconds timeout = kDefaultTimeout;
  JointMap<Degrees> initial_pose = kDefaultInitialPose;

  void validate() const;
  SubBlock sub_block() const { return sub_block_of(targets); }
  bool operator==(const TrialSpec&) const = default;
};

struct JointFrame {
  Degrees angle = 0.0;
  std::optional<Degrees> error;     // guided joints only
  std::optional<GuidanceCue> cue;   // guided joints only
  Intent intent = Intent::Hold;
  bool operator==(const JointFrame&) const = default;
};

struct TrialSample {
  Seconds t = 0.0;
  JointMap<JointFrame> joints;
  bool operator==(const TrialSample&) const = default;
};

struct TrialOutcome {
  enum class Kind { Success, Timeout };
  Kind kind = Kind::Timeout;
  // Declaration time for Success, time of the last sample for Timeout.
  Seconds time = 0.0;

  bool success() const { return kind == Kind::Success; }
  bool operator==(const TrialOutcome&) const = default;
};

struct TrialLog {
  TrialSpec spec;
  Seconds dt = SimClock::kDefaultDt;
  Degrees goal_tolerance = 5.0;
  std::vector<TrialSample> samples;
  TrialOutcome outcome;

  bool operator==(const TrialLog&) const = default;
};

// One joint-error frame in, one cue per guided joint out.
using CueFrame = JointMap<std::optional<GuidanceCue>>;
using ErrorFrame = JointMap<std::optional<Degrees>>;

// At most one ErgoTac command: the joint with the largest |error| outside tolerance,
// except that the previously active joint keeps guidance until it is within tolerance.
std::optional<ErgoTacCommand> ergotac_schedule(const ErrorFrame& errors, const SpotThresholds& th,
                                               std::optional<JointId> previous_active);

// Independent CUFF command for every guided joint.
std::vector<CuffCommand> cuff_schedule(const ErrorFrame& errors, Degrees tol);

// Stateful device policy applied once per tick by the central processor.
class GuidancePolicy {
 public:
  GuidancePolicy(Device device, const DeviceConfig& config);

  CueFrame compute(const ErrorFrame& errors);
  Device device() const { return device_; }
  std::optional<JointId> active_joint() const { return active_; }

 private:
  Device device_;
  DeviceConfig config_;
  std::optional<JointId> active_;
};

ErrorFrame compute_errors(const JointMap<Degrees>& angles, const TargetPose& targets);

// Transport between the processor (errors -> cues) and the subject. Direct wiring calls
// the policy in-process; the bus variant routes the same data through topics.
class CueTransport {
 public:
  virtual ~CueTransport() = default;
  // Publish the current angles at time t and return the cue frame the subject receives.
  virtual CueFrame exchange(Seconds t, const JointMap<Degrees>& angles) = 0;
};

class DirectTransport : public CueTransport {
 public:
  DirectTransport(const TrialSpec& spec, const DeviceConfig& config);
  CueFrame exchange(Seconds t, const JointMap<Degrees>& angles) override;

 private:
  TargetPose targets_;
  GuidancePolicy policy_;
};

// Closed loop: read angles, compute errors and cues, let the subject perceive and
// move, log. Stops on declaration (Success) or once t reaches the timeout.
TrialLog run_trial(const TrialSpec& spec, const SubjectParams& subject,
                   const DeviceConfig& config, const SimClock& clock = SimClock{});

TrialLog run_trial(const TrialSpec& spec, const SubjectParams& subject,
                   const DeviceConfig& config, const SimClock& clock, CueTransport& transport);

struct PlannedTrial {
  Device device;
  SubBlock sub_block;
  TargetPose targets;
  int ordinal = 0;  // position in execution order
};

struct SessionSpec {
  RngSeed seed{};
  Seconds timeout = kDefaultTimeout;
  JointMap<Degrees> initial_pose = kDefaultInitialPose;
};

// Randomized block structure: device block order, sub-block order within each block
// and target order within each sub-block are seeded permutations.
std::vector<PlannedTrial> plan_session(const SessionSpec& session);

struct SessionTrial {
  PlannedTrial plan;
  TrialLog log;
};

// Runs every planned trial in order; trial k of the session uses a subject stream
// derived from the subject seed and k.
std::vector<SessionTrial> run_session(const SessionSpec& session, const SubjectParams& subject,
                                      const DeviceConfig& config,
                                      const SimClock& clock = SimClock{});

}  // namespace haptiguide
