#include <cmath>

#include <gtest/gtest.h>

#include "haptiguide/devices.hpp"
#include "support/oracles.hpp"

using namespace haptiguide;

TEST(ErgoTacSpot, Examples) {
  const auto high = ergotac_spot(JointId::Shoulder, 90.0);
  EXPECT_EQ(high.unit.placement, Placement::Back);
  EXPECT_EQ(high.level, VibrationLevel::High);

  EXPECT_EQ(ergotac_spot(JointId::Knee, 0.0).level, VibrationLevel::Off);
  EXPECT_FALSE(ergotac_spot(JointId::Knee, 0.0).active());

  const auto medium = ergotac_spot(JointId::Knee, -30.0);
  EXPECT_EQ(medium.unit.placement, Placement::Front);
  EXPECT_EQ(medium.unit.joint, JointId::Knee);
  EXPECT_EQ(medium.level, VibrationLevel::Medium);
}

TEST(ErgoTacSpot, ThresholdEdgesAreInclusive) {
  EXPECT_EQ(ergotac_spot(JointId::Knee, 5.0).level, VibrationLevel::Off);
  EXPECT_EQ(ergotac_spot(JointId::Knee, 5.01).level, VibrationLevel::Low);
  EXPECT_EQ(ergotac_spot(JointId::Knee, 15.0).level, VibrationLevel::Low);
  EXPECT_EQ(ergotac_spot(JointId::Knee, -15.01).level, VibrationLevel::Medium);
  EXPECT_EQ(ergotac_spot(JointId::Knee, 45.0).level, VibrationLevel::Medium);
  EXPECT_EQ(ergotac_spot(JointId::Knee, 45.01).level, VibrationLevel::High);
}

TEST(ErgoTacSpot, RepulsionSweep) {
  for (int e = -180; e <= 180; ++e) {
    const auto cmd = ergotac_spot(JointId::Shoulder, e);
    EXPECT_EQ(amplitude_percent(cmd.level), oracle::spot_amplitude(e)) << e;
    const int side = oracle::spot_side(e);
    EXPECT_EQ(cmd.active(), side != 0) << e;
    if (side != 0) {
      EXPECT_EQ(cmd.unit.placement, side > 0 ? Placement::Back : Placement::Front) << e;
      EXPECT_EQ(cue_direction(GuidanceCue{cmd}), e > 0 ? 1 : -1) << e;
    }
  }
}

TEST(ErgoTacSpot, LevelMonotoneInMagnitude) {
  for (double a = 0.0; a <= 180.0; a += 0.25) {
    for (double b = a; b <= 180.0; b += 7.75) {
      EXPECT_LE(ergotac_spot(JointId::Knee, a).level, ergotac_spot(JointId::Knee, -b).level);
    }
  }
}

TEST(ErgoTacSpot, AmplitudesAndCarrier) {
  EXPECT_EQ(amplitude_percent(VibrationLevel::Off), 0);
  EXPECT_EQ(amplitude_percent(VibrationLevel::Low), 30);
  EXPECT_EQ(amplitude_percent(VibrationLevel::Medium), 60);
  EXPECT_EQ(amplitude_percent(VibrationLevel::High), 100);
  EXPECT_EQ(kErgoTacCarrierHz, 121.0);
}

TEST(SpotThresholds, Validation) {
  EXPECT_NO_THROW(SpotThresholds{}.validate());
  EXPECT_THROW((SpotThresholds{0.0, 15.0, 45.0}.validate()), InvalidInput);
  EXPECT_THROW((SpotThresholds{5.0, 5.0, 45.0}.validate()), InvalidInput);
  EXPECT_THROW((SpotThresholds{5.0, 50.0, 45.0}.validate()), InvalidInput);
}

TEST(ErgoTacPulse, Examples) {
  EXPECT_EQ(ergotac_pulse(VibrationLevel::High, 0.1), 100.0);
  EXPECT_EQ(ergotac_pulse(VibrationLevel::High, 0.5), 0.0);
  for (double t : {0.0, 0.1, 0.39, 0.5, 1.7, 80.0}) EXPECT_EQ(ergotac_pulse(VibrationLevel::Off, t), 0.0);
  EXPECT_EQ(ergotac_pulse(VibrationLevel::Medium, 0.85), 60.0);
  EXPECT_EQ(ergotac_pulse(VibrationLevel::Low, 1.25), 0.0);
  EXPECT_THROW(ergotac_pulse(VibrationLevel::Low, -0.1), InvalidInput);
}

TEST(CuffSqueezeForce, Examples) {
  EXPECT_EQ(cuff_squeeze_force(0.0), 3.0);
  EXPECT_EQ(cuff_squeeze_force(90.0), 20.0);
  EXPECT_EQ(cuff_squeeze_force(135.0), 20.0);
  EXPECT_DOUBLE_EQ(cuff_squeeze_force(45.0), 11.5);
  EXPECT_THROW(cuff_squeeze_force(-1.0), InvalidInput);
}

TEST(CuffSqueezeForce, BoundedMonotoneLipschitz) {
  double prev = cuff_squeeze_force(0.0);
  for (int i = 0; i <= 1800; ++i) {
    const double e = 0.1 * i;
    const double f = cuff_squeeze_force(e);
    EXPECT_NEAR(f, oracle::squeeze_force(e), 1e-12);
    EXPECT_GE(f, 3.0);
    EXPECT_LE(f, 20.0);
    EXPECT_GE(f, prev);
    EXPECT_LE(f - prev, 17.0 / 90.0 * 0.1 + 1e-12);
    prev = f;
  }
}

TEST(CuffCommand, Examples) {
  const auto fwd = cuff_command(JointId::Shoulder, 60.0, 5.0);
  EXPECT_EQ(fwd.slide, Slide::Forward);
  EXPECT_NEAR(fwd.squeeze_force_n, 3.0 + 17.0 * 60.0 / 90.0, 1e-12);
  EXPECT_NEAR(fwd.squeeze_force_n, 14.33, 0.005);

  const auto none = cuff_command(JointId::Knee, 0.0, 5.0);
  EXPECT_EQ(none.slide, Slide::None);
  EXPECT_EQ(none.squeeze_force_n, 3.0);

  const auto back = cuff_command(JointId::Knee, -100.0, 5.0);
  EXPECT_EQ(back.slide, Slide::Backward);
  EXPECT_EQ(back.squeeze_force_n, 20.0);
}

TEST(CuffCommand, MirrorSymmetry) {
  for (double e = -180.0; e <= 180.0; e += 0.5) {
    const auto a = cuff_command(JointId::Knee, e, 5.0);
    const auto b = cuff_command(JointId::Knee, -e, 5.0);
    EXPECT_EQ(a.squeeze_force_n, b.squeeze_force_n);
    EXPECT_EQ(cue_direction(GuidanceCue{a}), -cue_direction(GuidanceCue{b}));
    EXPECT_EQ(a.slide == Slide::None, std::abs(e) <= 5.0);
  }
}

TEST(CuffMotors, Examples) {
  const auto cal = cuff_calibrate(0.0, 2.0, 10.0);
  EXPECT_TRUE(cal.calibrated());

  const auto rest = cuff_motor_positions({JointId::Knee, Slide::None, 3.0}, cal);
  EXPECT_EQ(rest.gamma1, 0.0);
  EXPECT_EQ(rest.gamma2, 0.0);

  const auto fwd = cuff_motor_positions({JointId::Knee, Slide::Forward, 20.0}, cal);
  EXPECT_DOUBLE_EQ(fwd.gamma1, 44.0);
  EXPECT_DOUBLE_EQ(fwd.gamma2, -24.0);
  EXPECT_DOUBLE_EQ(fwd.differential(), 34.0);
  EXPECT_DOUBLE_EQ(fwd.common_mode(0.0), 10.0);

  const auto back = cuff_motor_positions({JointId::Knee, Slide::Backward, 3.0}, cal);
  EXPECT_EQ(back.gamma1, -10.0);
  EXPECT_EQ(back.gamma2, -10.0);
}

TEST(CuffCalibrate, Examples) {
  EXPECT_THROW(cuff_calibrate(0.0, -1.0, 10.0), InvalidInput);
  EXPECT_THROW(cuff_calibrate(0.0, 2.0, 0.0), InvalidInput);
  const auto cal = cuff_calibrate(5.0, 2.0, 10.0);
  const auto m = cuff_motor_positions({JointId::Shoulder, Slide::None, 3.0}, cal);
  EXPECT_EQ(m.gamma1, 5.0);
  EXPECT_EQ(m.gamma2, 5.0);
}

TEST(CuffMotors, RequiresCalibration) {
  EXPECT_FALSE(CuffCalibration{}.calibrated());
  EXPECT_THROW(cuff_motor_positions({JointId::Knee, Slide::Forward, 10.0}, CuffCalibration{}),
               CalibrationRequired);
}

TEST(CuffMotors, DecompositionRoundTrip) {
  Rng rng(RngSeed{11});
  for (int i = 0; i < 500; ++i) {
    const auto cal = cuff_calibrate(-50.0 + 100.0 * rng.uniform(), 0.5 + 4.0 * rng.uniform(),
                                    1.0 + 20.0 * rng.uniform());
    const double e = -180.0 + 360.0 * rng.uniform();
    const auto cmd = cuff_command(JointId::Shoulder, e, 5.0);
    const auto back = cuff_command_from_motors(JointId::Shoulder, cuff_motor_positions(cmd, cal), cal);
    EXPECT_EQ(back.slide, cmd.slide);
    EXPECT_NEAR(back.squeeze_force_n, cmd.squeeze_force_n, 1e-9);
  }
}

TEST(Cue, Helpers) {
  const GuidanceCue e = ergotac_spot(JointId::Knee, -20.0);
  EXPECT_EQ(cue_joint(e), JointId::Knee);
  EXPECT_TRUE(cue_active(e));
  EXPECT_EQ(cue_direction(e), -1);
  const GuidanceCue c = cuff_command(JointId::Shoulder, 2.0, 5.0);
  EXPECT_FALSE(cue_active(c));
  EXPECT_EQ(cue_direction(c), 0);
}

TEST(DeviceConfig, Validation) {
  DeviceConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.tolerance(Device::ErgoTac), 5.0);
  EXPECT_EQ(cfg.tolerance(Device::Cuff), 5.0);
  cfg.pulse_period = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = DeviceConfig{};
  cfg.cuff_calibration = CuffCalibration{};
  EXPECT_THROW(cfg.validate(), InvalidInput);
}

TEST(DeviceNames, RoundTrip) {
  for (Device d : {Device::ErgoTac, Device::Cuff}) EXPECT_EQ(device_from_string(to_string(d)), d);
  for (auto l : {VibrationLevel::Off, VibrationLevel::Low, VibrationLevel::Medium, VibrationLevel::High}) {
    EXPECT_EQ(level_from_string(to_string(l)), l);
  }
  for (auto s : {Slide::Forward, Slide::Backward, Slide::None}) EXPECT_EQ(slide_from_string(to_string(s)), s);
  EXPECT_THROW(device_from_string("glove"), InvalidInput);
}
