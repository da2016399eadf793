#include "haptiguide/nodes.hpp"

namespace haptiguide {

GuidanceProcessor::GuidanceProcessor(Bus& bus, Device device, const TargetPose& targets,
                                     const DeviceConfig& config)
    : bus_(bus),
      targets_(targets),
      policy_(device, config),
      command_topic_(device == Device::ErgoTac ? kErgoTacCmdTopic : kCuffCmdTopic) {
  listener_ = bus_.listen(std::string(kJointStatesTopic),
                          [this](const Envelope& e) { on_joint_states(e); });
}

void GuidanceProcessor::on_joint_states(const Envelope& e) {
  const auto& msg = std::get<JointStatesMsg>(e.payload);
  const JointMap<Degrees> angles{msg.shoulder_deg, msg.knee_deg};
  const ErrorFrame errors = compute_errors(angles, targets_);
  const CueFrame cues = policy_.compute(errors);
  for (JointId j : kAllJoints) {
    if (cues[j]) bus_.publish(command_topic_, to_payload(*cues[j], errors[j]), e.stamp);
  }
}

BusTransport::BusTransport(Bus& bus, const TrialSpec& spec, const DeviceConfig& config)
    : bus_(bus),
      targets_(spec.targets),
      commands_(bus.subscribe(std::string(spec.device == Device::ErgoTac ? kErgoTacCmdTopic
                                                                         : kCuffCmdTopic))),
      processor_(bus, spec.device, spec.targets, config) {}

CueFrame BusTransport::exchange(Seconds t, const JointMap<Degrees>& angles) {
  bus_.publish(std::string(kJointStatesTopic),
               JointStatesMsg{angles[JointId::Shoulder], angles[JointId::Knee]}, t);
  CueFrame frame;
  for (Envelope& e : commands_.drain()) {
    std::visit(
        [&](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (!std::is_same_v<M, JointStatesMsg>) {
            if (targets_.guides(m.joint)) frame[m.joint] = to_cue(m);
          }
        },
        e.payload);
  }
  return frame;
}

}  // namespace haptiguide
