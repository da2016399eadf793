#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "haptiguide/engine.hpp"
#include "haptiguide/metrics.hpp"

namespace haptiguide::cli {

struct MocapSample {
  Seconds t = 0.0;
  Degrees shoulder = 0.0;
  Degrees knee = 0.0;
};

// Header "t_seconds,shoulder_deg,knee_deg" then one row per sample; t strictly
// increasing, angles finite. ParseError carries the offending line number.
std::vector<MocapSample> read_mocap(std::istream& in);

struct ReplayResult {
  TrialLog log;
  TrialMetrics metrics;
  std::string bus_recording;  // every envelope exchanged, in wire format
};

// Open-loop analysis of recorded motion: streams the samples through a bus with a
// guidance processor, logs the cues the device would have emitted, and evaluates the
// indices against the targets. The trial counts as successful at the first sample where
// every guided joint has stayed within declare_tolerance for hold_time.
ReplayResult replay_mocap(const std::vector<MocapSample>& samples, Device device,
                          const TargetPose& targets, const DeviceConfig& config,
                          const SubjectParams& declare_rule);

}  // namespace haptiguide::cli
