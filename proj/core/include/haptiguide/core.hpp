#pragma once

#include <array>
#include <compare>
#include <concepts>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <tuple>
#include <utility>

#include "haptiguide/errors.hpp"

namespace haptiguide {

enum class JointId { Shoulder = 0, Knee = 1 };

inline constexpr std::array<JointId, 2> kAllJoints{JointId::Shoulder, JointId::Knee};

std::string_view to_string(JointId joint);
JointId joint_from_string(std::string_view name);

// Fixed-size map that is total over JointId.
template <typename T>
class JointMap {
 public:
  constexpr JointMap() = default;
  constexpr JointMap(T shoulder, T knee) : values_{std::move(shoulder), std::move(knee)} {}

  constexpr T& operator[](JointId j) { return values_[static_cast<std::size_t>(j)]; }
  constexpr const T& operator[](JointId j) const { return values_[static_cast<std::size_t>(j)]; }

  constexpr bool operator==(const JointMap& other) const
    requires std::equality_comparable<T>
  {
    return values_ == other.values_;
  }

 private:
  std::array<T, 2> values_{};
};

// Sagittal-plane angles in degrees.
using Degrees = double;
using Seconds = double;

struct JointRange {
  Degrees lo;
  Degrees hi;
};

constexpr JointRange joint_range(JointId joint) {
  return joint == JointId::Shoulder ? JointRange{-30.0, 180.0} : JointRange{0.0, 150.0};
}

bool in_joint_range(JointId joint, Degrees angle);

// target - current; positive means the joint has to increase its angle.
Degrees signed_error(Degrees current, Degrees target);

Degrees clamp_to_joint_range(JointId joint, Degrees angle);

// Per-joint optional targets; at least one joint is guided.
class TargetPose {
 public:
  TargetPose(std::optional<Degrees> shoulder, std::optional<Degrees> knee);

  static TargetPose shoulder_only(Degrees shoulder) { return {shoulder, std::nullopt}; }
  static TargetPose knee_only(Degrees knee) { return {std::nullopt, knee}; }
  static TargetPose both(Degrees shoulder, Degrees knee) { return {shoulder, knee}; }

  const std::optional<Degrees>& operator[](JointId j) const { return targets_[j]; }
  bool guides(JointId j) const { return targets_[j].has_value(); }
  bool multi_joint() const { return guides(JointId::Shoulder) && guides(JointId::Knee); }
  int guided_count() const { return static_cast<int>(guides(JointId::Shoulder)) + guides(JointId::Knee); }

  bool operator==(const TargetPose&) const = default;
  auto operator<=>(const TargetPose& other) const {
    return std::tie(targets_[JointId::Shoulder], targets_[JointId::Knee]) <=>
           std::tie(other.targets_[JointId::Shoulder], other.targets_[JointId::Knee]);
  }

 private:
  JointMap<std::optional<Degrees>> targets_;
};

// Fixed-step simulation clock. Time is tick count times dt so that runs replay bit-exactly.
class SimClock {
 public:
  static constexpr Seconds kDefaultDt = 0.01;

  explicit SimClock(Seconds dt = kDefaultDt);

  Seconds dt() const { return dt_; }
  std::uint64_t ticks() const { return ticks_; }
  Seconds now() const { return static_cast<double>(ticks_) * dt_; }
  void tick() { ++ticks_; }

  // Number of ticks needed to cover `duration`, tolerant to round-off in duration/dt.
  std::uint64_t ticks_for(Seconds duration) const;

 private:
  Seconds dt_;
  std::uint64_t ticks_ = 0;
};

struct RngSeed {
  std::uint64_t value = 0;
  bool operator==(const RngSeed&) const = default;
};

// Derive a decorrelated child seed; used to give every trial its own stream.
RngSeed derive_seed(RngSeed parent, std::uint64_t stream);

// Deterministic random stream. Draws are computed from raw engine output so the
// sequence does not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(RngSeed seed) : engine_(seed.value) {}

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  // Uniform integer in [0, bound), bound > 0, unbiased.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace haptiguide
