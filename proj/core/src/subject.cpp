#include "haptiguide/subject.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace haptiguide {

namespace {

constexpr double kTimeEps = 1e-9;

Intent intent_for(int direction) {
  if (direction > 0) return Intent::MoveUp;
  if (direction < 0) return Intent::MoveDown;
  return Intent::Hold;
}

}  // namespace

void SubjectParams::validate() const {
  if (!(reaction_delay >= 0.0) || !std::isfinite(reaction_delay)) {
    throw InvalidInput("reaction_delay must be nonnegative");
  }
  if (!(angular_speed > 0.0) || !std::isfinite(angular_speed)) {
    throw InvalidInput("angular_speed must be positive");
  }
  if (!(misread_prob >= 0.0 && misread_prob <= 1.0)) {
    throw InvalidInput("misread_prob must lie in [0, 1]");
  }
  if (!(declare_tolerance >= 0.0)) throw InvalidInput("declare_tolerance must be nonnegative");
  if (!(hold_time >= 0.0) || !std::isfinite(hold_time)) {
    throw InvalidInput("hold_time must be nonnegative");
  }
}

std::string_view to_string(Intent intent) {
  switch (intent) {
    case Intent::MoveUp: return "up";
    case Intent::MoveDown: return "down";
    case Intent::Hold: break;
  }
  return "hold";
}

Intent intent_from_string(std::string_view s) {
  if (s == "up") return Intent::MoveUp;
  if (s == "down") return Intent::MoveDown;
  if (s == "hold") return Intent::Hold;
  throw InvalidInput("unknown intent '" + std::string(s) + "'");
}

GoalHoldTracker::GoalHoldTracker(Degrees target, Degrees tolerance, Degrees initial_angle)
    : target_(target), tolerance_(tolerance), last_error_(target - initial_angle) {
  reached_ = last_error_ == 0.0;
}

void GoalHoldTracker::update(Degrees angle, Seconds elapsed, bool resting) {
  const Degrees err = target_ - angle;
  const bool in_band = std::abs(err) <= tolerance_;
  if (!in_band) {
    reached_ = false;
    held_ = 0.0;
    last_error_ = err;
    return;
  }
  const bool crossed = err == 0.0 || (err > 0.0) != (last_error_ > 0.0);
  if (crossed || resting) reached_ = true;
  last_error_ = err;
  if (reached_) held_ += elapsed;
}

SimulatedSubject::SimulatedSubject(const SubjectParams& params,
                                   const JointMap<Degrees>& initial_pose,
                                   const TargetPose& targets, Seconds dt)
    : params_(params), targets_(targets), dt_(dt), rng_(params.seed), angles_(initial_pose) {
  params_.validate();
  if (!(dt > 0.0)) throw InvalidInput("subject: dt must be positive");
  for (JointId j : kAllJoints) {
    if (!std::isfinite(angles_[j])) throw InvalidInput("subject: non-finite initial angle");
    angles_[j] = clamp_to_joint_range(j, angles_[j]);
    if (targets_.guides(j)) {
      trackers_[j] = GoalHoldTracker(*targets_[j], params_.declare_tolerance, angles_[j]);
    }
  }
}

void SimulatedSubject::perceive(const GuidanceCue& cue, Seconds t) {
  const JointId j = cue_joint(cue);
  if (!targets_.guides(j)) {
    throw InvalidInput("cue addressed to unguided joint " + std::string(to_string(j)));
  }
  advance_to(t);
  const int direction = cue_direction(cue);
  if (direction == last_direction_[j]) return;
  last_direction_[j] = direction;

  int interpreted = direction;
  if (direction != 0 && rng_.uniform() < params_.misread_prob) interpreted = -direction;
  queue_[j].push_back(PendingIntent{t + params_.reaction_delay, intent_for(interpreted)});
  advance_to(t);
}

void SimulatedSubject::advance_to(Seconds t) {
  for (JointId j : kAllJoints) {
    auto& q = queue_[j];
    while (!q.empty() && q.front().due <= t + kTimeEps) {
      intents_[j] = q.front().intent;
      q.pop_front();
    }
  }
}

void SimulatedSubject::step(Seconds dt) {
  if (dt != dt_) throw InvalidInput("subject: step dt differs from the simulation dt");
  for (JointId j : kAllJoints) {
    const Intent in = intents_[j];
    if (in != Intent::Hold) {
      const double delta = params_.angular_speed * dt * (in == Intent::MoveUp ? 1.0 : -1.0);
      angles_[j] = clamp_to_joint_range(j, angles_[j] + delta);
    }
    if (targets_.guides(j)) trackers_[j].update(angles_[j], dt, in == Intent::Hold);
  }
}

bool SimulatedSubject::declare_done(std::span<const JointId> joints) const {
  for (JointId j : joints) {
    if (!targets_.guides(j)) throw InvalidInput("declare_done: joint has no target");
    if (trackers_[j].time_in_tolerance() + kTimeEps < params_.hold_time) return false;
  }
  return true;
}

bool SimulatedSubject::declare_done() const {
  std::vector<JointId> guided;
  for (JointId j : kAllJoints) {
    if (targets_.guides(j)) guided.push_back(j);
  }
  return declare_done(guided);
}

}  // namespace haptiguide
