#pragma once

#include <optional>
#include <string>
#include <vector>

#include "haptiguide/engine.hpp"

namespace haptiguide::testing {

// Hand-built trial log. Errors and cues are derived from the angle tracks with the
// device's law; unguided joints keep their first angle.
struct FixtureTrack {
  std::optional<Degrees> target;
  std::vector<Degrees> angles;
};

TrialLog make_log(Device device, const FixtureTrack& shoulder, const FixtureTrack& knee, bool success,
                  Seconds t0 = 0.0, Seconds dt = 0.01, Degrees tolerance = 5.0);

struct Fixture {
  std::string name;
  TrialLog log;
};

// Deterministic corpus of at least twenty logs covering both devices, both outcome
// groups, single and multi-joint poses, overshoot, backtracking and idle subjects.
std::vector<Fixture> fixture_corpus();

// 40 guided ticks of which 10 move away from the target.
TrialLog fixture_quarter_confusion();
// Monotone -10 -> 90 shoulder move, then a 10 degree overshoot and return.
TrialLog fixture_overshoot();
// Timed out after covering 50 of the required 100 degrees.
TrialLog fixture_halfway_timeout();

}  // namespace haptiguide::testing
