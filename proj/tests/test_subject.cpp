#include <cmath>

#include <gtest/gtest.h>

#include "haptiguide/subject.hpp"

using namespace haptiguide;

namespace {

SubjectParams deterministic() {
  SubjectParams p;
  p.misread_prob = 0.0;
  return p;
}

const JointMap<Degrees> kStart{0.0, 60.0};

}  // namespace

TEST(SubjectParams, Validation) {
  EXPECT_NO_THROW(SubjectParams{}.validate());
  SubjectParams p;
  p.misread_prob = 1.5;
  EXPECT_THROW(p.validate(), InvalidInput);
  p = SubjectParams{};
  p.angular_speed = 0.0;
  EXPECT_THROW(p.validate(), InvalidInput);
  p = SubjectParams{};
  p.reaction_delay = -0.1;
  EXPECT_THROW(p.validate(), InvalidInput);
}

TEST(Subject, RepulsiveCueBecomesIntentAfterDelay) {
  SimulatedSubject s(deterministic(), kStart, TargetPose::shoulder_only(90.0), 0.01);
  s.perceive(ergotac_spot(JointId::Shoulder, 90.0), 0.0);
  s.advance_to(0.29);
  EXPECT_EQ(s.intent(JointId::Shoulder), Intent::Hold);
  s.advance_to(0.3);
  EXPECT_EQ(s.intent(JointId::Shoulder), Intent::MoveUp);
}

TEST(Subject, MisreadInvertsDirection) {
  SubjectParams p = deterministic();
  p.misread_prob = 1.0;
  SimulatedSubject s(p, kStart, TargetPose::knee_only(115.0), 0.01);
  s.perceive(cuff_command(JointId::Knee, 55.0, 5.0), 0.0);
  s.advance_to(0.3);
  EXPECT_EQ(s.intent(JointId::Knee), Intent::MoveDown);
}

TEST(Subject, OffCueMeansHold) {
  SubjectParams p = deterministic();
  p.misread_prob = 1.0;
  SimulatedSubject s(p, kStart, TargetPose::shoulder_only(45.0), 0.01);
  s.perceive(ergotac_spot(JointId::Shoulder, 30.0), 0.0);
  s.advance_to(0.3);
  ASSERT_NE(s.intent(JointId::Shoulder), Intent::Hold);
  s.perceive(ergotac_spot(JointId::Shoulder, 0.0), 0.5);
  s.advance_to(0.8);
  EXPECT_EQ(s.intent(JointId::Shoulder), Intent::Hold);
}

TEST(Subject, UnguidedJointRejected) {
  SimulatedSubject s(deterministic(), kStart, TargetPose::shoulder_only(45.0), 0.01);
  EXPECT_THROW(s.perceive(cuff_command(JointId::Knee, 10.0, 5.0), 0.0), InvalidInput);
}

TEST(Subject, EulerStep) {
  SimulatedSubject s(deterministic(), kStart, TargetPose::shoulder_only(90.0), 0.01);
  s.perceive(cuff_command(JointId::Shoulder, 90.0, 5.0), 0.0);
  s.advance_to(0.3);
  s.step(0.01);
  EXPECT_DOUBLE_EQ(s.angle(JointId::Shoulder), 0.3);
  EXPECT_EQ(s.angle(JointId::Knee), 60.0);
  EXPECT_THROW(s.step(0.02), InvalidInput);
}

TEST(Subject, ClampsAtJointLimit) {
  SubjectParams p = deterministic();
  p.misread_prob = 1.0;
  SimulatedSubject s(p, JointMap<Degrees>{0.0, 2.0}, TargetPose::knee_only(30.0), 0.01);
  s.perceive(cuff_command(JointId::Knee, 28.0, 5.0), 0.0);
  for (int k = 0; k < 200; ++k) {
    s.advance_to(k * 0.01);
    s.step(0.01);
  }
  EXPECT_EQ(s.angle(JointId::Knee), 0.0);
}

TEST(GoalHoldTracker, AccumulatesAndResets) {
  GoalHoldTracker tr(90.0, 5.0, 80.0);
  tr.update(86.0, 0.01, false);
  EXPECT_FALSE(tr.reached());
  EXPECT_EQ(tr.time_in_tolerance(), 0.0);
  tr.update(90.5, 0.01, false);
  EXPECT_TRUE(tr.reached());
  EXPECT_NEAR(tr.time_in_tolerance(), 0.01, 1e-15);
  for (int i = 0; i < 10; ++i) tr.update(91.0, 0.01, false);
  EXPECT_NEAR(tr.time_in_tolerance(), 0.11, 1e-12);
  tr.update(96.0, 0.01, false);
  EXPECT_EQ(tr.time_in_tolerance(), 0.0);
}

TEST(GoalHoldTracker, RestingInsideBandCounts) {
  GoalHoldTracker tr(45.0, 5.0, 45.0);
  tr.update(45.0, 0.01, true);
  EXPECT_TRUE(tr.reached());
  EXPECT_NEAR(tr.time_in_tolerance(), 0.01, 1e-15);
}

namespace {

// Closed loop with a CUFF-style law and no engine, for the subject invariants.
struct LoopResult {
  double declared_at = -1.0;
  bool monotone = true;
};

LoopResult drive(const SubjectParams& p, Degrees target, Degrees start, double timeout = 30.0) {
  SimulatedSubject s(p, JointMap<Degrees>{start, 60.0}, TargetPose::shoulder_only(target), 0.01);
  LoopResult r;
  double best = std::abs(target - start);
  bool perceived = false;
  for (std::uint64_t n = 0;; ++n) {
    const double t = static_cast<double>(n) * 0.01;
    const double e = target - s.angle(JointId::Shoulder);
    const auto cue = cuff_command(JointId::Shoulder, e, 5.0);
    s.perceive(cue, t);
    s.advance_to(t);
    perceived |= s.intent(JointId::Shoulder) != Intent::Hold;
    const double dist = std::abs(e);
    if (perceived && dist > best + 1e-9 && dist > 5.0) r.monotone = false;
    best = std::min(best, dist);
    if (s.declare_done()) {
      r.declared_at = t;
      return r;
    }
    if (t >= timeout) return r;
    s.step(0.01);
  }
}

}  // namespace

TEST(SubjectProperty, DeterministicSubjectApproachesAndDeclaresInTime) {
  const SubjectParams p = deterministic();
  for (Degrees start : {-30.0, -10.0, 0.0, 33.0, 90.0, 180.0}) {
    for (Degrees target : {-10.0, 20.0, 45.0, 55.0, 90.0, 100.0, 170.0}) {
      const auto r = drive(p, target, start);
      ASSERT_GE(r.declared_at, 0.0) << start << " -> " << target;
      EXPECT_TRUE(r.monotone) << start << " -> " << target;
      const double bound = std::abs(target - start) / p.angular_speed + p.reaction_delay + p.hold_time;
      EXPECT_LE(r.declared_at, bound + 0.02) << start << " -> " << target;
    }
  }
}

TEST(SubjectProperty, AlwaysMisreadingSubjectPinsAtLimit) {
  SubjectParams p = deterministic();
  p.misread_prob = 1.0;
  const auto r = drive(p, 90.0, 0.0, 20.0);
  EXPECT_LT(r.declared_at, 0.0);
}

TEST(SubjectProperty, BitExactDeterminism) {
  SubjectParams p;
  p.misread_prob = 0.3;
  p.seed = RngSeed{99};
  auto run = [&] {
    SimulatedSubject s(p, kStart, TargetPose::both(100.0, 40.0), 0.01);
    std::vector<double> trace;
    for (int n = 0; n < 3000; ++n) {
      const double t = n * 0.01;
      for (JointId j : kAllJoints) {
        const double target = j == JointId::Shoulder ? 100.0 : 40.0;
        s.perceive(cuff_command(j, target - s.angle(j), 5.0), t);
      }
      s.advance_to(t);
      s.step(0.01);
      trace.push_back(s.angle(JointId::Shoulder));
      trace.push_back(s.angle(JointId::Knee));
    }
    return trace;
  };
  EXPECT_EQ(run(), run());
}
