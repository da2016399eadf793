#pragma once

#include <deque>
#include <span>
#include <string_view>

#include "haptiguide/core.hpp"
#include "haptiguide/devices.hpp"

namespace haptiguide {

struct SubjectParams {
  Seconds reaction_delay = 0.3;
  double angular_speed = 30.0;  // degrees per second
  double misread_prob = 0.05;
  Degrees declare_tolerance = 5.0;
  Seconds hold_time = 1.0;
  RngSeed seed{};

  void validate() const;
  bool operator==(const SubjectParams&) const = default;
};

enum class Intent { Hold, MoveUp, MoveDown };

std::string_view to_string(Intent intent);
Intent intent_from_string(std::string_view s);

// Tracks whether a joint has reached its goal and for how long it has stayed there.
// A joint counts as "reached" once its angle touches or crosses the target (or the
// joint rests inside the band); the counter runs while it then stays within the
// tolerance band and resets when it leaves.
class GoalHoldTracker {
 public:
  GoalHoldTracker() = default;
  GoalHoldTracker(Degrees target, Degrees tolerance, Degrees initial_angle);

  // Advance by `elapsed` seconds, the joint having moved to `angle`. `resting`
  // tells whether the joint is deliberately held still.
  void update(Degrees angle, Seconds elapsed, bool resting);

  Seconds time_in_tolerance() const { return held_; }
  bool reached() const { return reached_; }

 private:
  Degrees target_ = 0.0;
  Degrees tolerance_ = 0.0;
  Degrees last_error_ = 0.0;
  bool reached_ = false;
  Seconds held_ = 0.0;
};

// Simulated human subject. Perceives cues with a reaction delay and occasional
// misreads, moves guided joints at constant speed, and declares the goal once every
// guided joint has been held within tolerance for hold_time.
class SimulatedSubject {
 public:
  SimulatedSubject(const SubjectParams& params, const JointMap<Degrees>& initial_pose,
                   const TargetPose& targets, Seconds dt);

  // Register the cue presented at time t. A change in the cue's direction is queued
  // and becomes the joint's intent reaction_delay later; a nonzero direction is
  // inverted with probability misread_prob.
  void perceive(const GuidanceCue& cue, Seconds t);

  // Apply every queued intent change due at or before t.
  void advance_to(Seconds t);

  // One Euler step of length dt (must equal the construction dt).
  void step(Seconds dt);

  bool declare_done() const;
  bool declare_done(std::span<const JointId> joints) const;

  Degrees angle(JointId j) const { return angles_[j]; }
  const JointMap<Degrees>& angles() const { return angles_; }
  Intent intent(JointId j) const { return intents_[j]; }
  Seconds time_in_tolerance(JointId j) const { return trackers_[j].time_in_tolerance(); }
  std::size_t pending(JointId j) const { return queue_[j].size(); }
  const SubjectParams& params() const { return params_; }

 private:
  struct PendingIntent {
    Seconds due;
    Intent intent;
  };

  SubjectParams params_;
  TargetPose targets_;
  Seconds dt_;
  Rng rng_;
  JointMap<Degrees> angles_;
  JointMap<Intent> intents_{Intent::Hold, Intent::Hold};
  JointMap<int> last_direction_{0, 0};
  JointMap<std::deque<PendingIntent>> queue_;
  JointMap<GoalHoldTracker> trackers_;
};

}  // namespace haptiguide
