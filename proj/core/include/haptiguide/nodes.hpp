#pragma once

#include <optional>

#include "haptiguide/bus.hpp"
#include "haptiguide/engine.hpp"

namespace haptiguide {

// Central processor: turns joint states into device commands. Listens on
// /human/joint_states and publishes one command per guided joint on the device's
// command topic, stamped like the joint state that triggered it.
class GuidanceProcessor {
 public:
  GuidanceProcessor(Bus& bus, Device device, const TargetPose& targets, const DeviceConfig& config);

  std::optional<JointId> active_joint() const { return policy_.active_joint(); }

 private:
  void on_joint_states(const Envelope& e);

  Bus& bus_;
  TargetPose targets_;
  GuidancePolicy policy_;
  std::string command_topic_;
  Listener listener_;
};

// Subject-side transport that routes each tick through the bus: publishes the
// subject's joint states and collects the commands the processor sends back.
class BusTransport : public CueTransport {
 public:
  BusTransport(Bus& bus, const TrialSpec& spec, const DeviceConfig& config);

  CueFrame exchange(Seconds t, const JointMap<Degrees>& angles) override;

 private:
  Bus& bus_;
  TargetPose targets_;
  Subscription commands_;
  GuidanceProcessor processor_;
};

}  // namespace haptiguide
