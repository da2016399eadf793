#include "haptiguide/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace haptiguide {

std::string_view to_string(JointId joint) {
  return joint == JointId::Shoulder ? "shoulder" : "knee";
}

JointId joint_from_string(std::string_view name) {
  if (name == "shoulder") return JointId::Shoulder;
  if (name == "knee") return JointId::Knee;
  throw InvalidInput("unknown joint '" + std::string(name) + "'");
}

bool in_joint_range(JointId joint, Degrees angle) {
  const auto r = joint_range(joint);
  return std::isfinite(angle) && angle >= r.lo && angle <= r.hi;
}

Degrees signed_error(Degrees current, Degrees target) {
  if (!std::isfinite(current) || !std::isfinite(target)) {
    throw InvalidInput("signed_error: non-finite angle");
  }
  return target - current;
}

Degrees clamp_to_joint_range(JointId joint, Degrees angle) {
  const auto r = joint_range(joint);
  return std::clamp(angle, r.lo, r.hi);
}

TargetPose::TargetPose(std::optional<Degrees> shoulder, std::optional<Degrees> knee)
    : targets_(shoulder, knee) {
  if (!shoulder && !knee) throw InvalidInput("target pose guides no joint");
  for (JointId j : kAllJoints) {
    if (targets_[j] && !in_joint_range(j, *targets_[j])) {
      throw InvalidInput("target for " + std::string(to_string(j)) + " outside joint range");
    }
  }
}

SimClock::SimClock(Seconds dt) : dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("SimClock: dt must be positive");
}

std::uint64_t SimClock::ticks_for(Seconds duration) const {
  if (duration <= 0.0) return 0;
  return static_cast<std::uint64_t>(std::ceil(duration / dt_ - 1e-9));
}

RngSeed derive_seed(RngSeed parent, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = parent.value + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return RngSeed{z ^ (z >> 31)};
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidInput("Rng::below: zero bound");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

}  // namespace haptiguide
