#include "haptiguide/devices.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace haptiguide {

void SpotThresholds::validate() const {
  if (!(0.0 < tol && tol < low_hi && low_hi < med_hi)) {
    throw InvalidInput("SPOT thresholds must satisfy 0 < tol < low_hi < med_hi");
  }
}

ErgoTacCommand ergotac_spot(JointId joint, Degrees error, const SpotThresholds& th) {
  const double mag = std::abs(error);
  if (!(mag > th.tol)) return ErgoTacCommand{{joint, Placement::Front}, VibrationLevel::Off};

  // Repulsive cue: vibrate on the side away from the movement.
  const Placement unit = error > 0.0 ? Placement::Back : Placement::Front;
  VibrationLevel level = VibrationLevel::High;
  if (mag <= th.low_hi) {
    level = VibrationLevel::Low;
  } else if (mag <= th.med_hi) {
    level = VibrationLevel::Medium;
  }
  return ErgoTacCommand{{joint, unit}, level};
}

double ergotac_pulse(VibrationLevel level, Seconds t, Seconds period) {
  if (t < 0.0) throw InvalidInput("ergotac_pulse: negative time");
  if (!(period > 0.0)) throw InvalidInput("ergotac_pulse: period must be positive");
  const double phase = std::fmod(t, period);
  return phase < period / 2.0 ? amplitude_percent(level) : 0.0;
}

double cuff_squeeze_force(Degrees abs_error) {
  if (!(abs_error >= 0.0)) throw InvalidInput("cuff_squeeze_force: negative or NaN error");
  const double ramp = std::min(abs_error, kCuffSaturationError) / kCuffSaturationError;
  return kCuffMinForceN + (kCuffMaxForceN - kCuffMinForceN) * ramp;
}

CuffCommand cuff_command(JointId joint, Degrees error, Degrees tol) {
  if (!(tol > 0.0)) throw InvalidInput("cuff_command: tolerance must be positive");
  Slide slide = Slide::None;
  if (error > tol) {
    slide = Slide::Forward;
  } else if (error < -tol) {
    slide = Slide::Backward;
  }
  return CuffCommand{joint, slide, cuff_squeeze_force(std::abs(error))};
}

CuffCalibration cuff_calibrate(double baseline_gamma0, double k_force, double k_slide) {
  if (!std::isfinite(baseline_gamma0)) throw InvalidInput("cuff_calibrate: non-finite baseline");
  if (!(k_force > 0.0) || !(k_slide > 0.0) || !std::isfinite(k_force) || !std::isfinite(k_slide)) {
    throw InvalidInput("cuff_calibrate: gains must be positive");
  }
  return CuffCalibration{baseline_gamma0, k_force, k_slide};
}

namespace {

double slide_sign(Slide s) {
  switch (s) {
    case Slide::Forward: return 1.0;
    case Slide::Backward: return -1.0;
    case Slide::None: break;
  }
  return 0.0;
}

}  // namespace

MotorPositions cuff_motor_positions(const CuffCommand& cmd, const CuffCalibration& cal) {
  if (!cal.calibrated()) throw CalibrationRequired("CUFF is not calibrated");
  const double squeeze = cal.k_force * (cmd.squeeze_force_n - kCuffMinForceN);
  const double slide = cal.k_slide * slide_sign(cmd.slide);
  return MotorPositions{cal.gamma0 + squeeze + slide, cal.gamma0 - squeeze + slide};
}

CuffCommand cuff_command_from_motors(JointId joint, const MotorPositions& m,
                                     const CuffCalibration& cal) {
  if (!cal.calibrated()) throw CalibrationRequired("CUFF is not calibrated");
  const double slide = m.common_mode(cal.gamma0) / cal.k_slide;
  Slide s = Slide::None;
  if (slide > 0.5) {
    s = Slide::Forward;
  } else if (slide < -0.5) {
    s = Slide::Backward;
  }
  return CuffCommand{joint, s, kCuffMinForceN + m.differential() / cal.k_force};
}

JointId cue_joint(const GuidanceCue& cue) {
  if (const auto* e = std::get_if<ErgoTacCommand>(&cue)) return e->unit.joint;
  return std::get<CuffCommand>(cue).joint;
}

bool cue_active(const GuidanceCue& cue) {
  return std::visit([](const auto& c) { return c.active(); }, cue);
}

int cue_direction(const GuidanceCue& cue) {
  if (const auto* e = std::get_if<ErgoTacCommand>(&cue)) {
    if (!e->active()) return 0;
    return e->unit.placement == Placement::Back ? 1 : -1;
  }
  return static_cast<int>(slide_sign(std::get<CuffCommand>(cue).slide));
}

void DeviceConfig::validate() const {
  spot.validate();
  if (!(pulse_period > 0.0)) throw InvalidInput("pulse period must be positive");
  if (!(cuff_tolerance > 0.0)) throw InvalidInput("CUFF tolerance must be positive");
  if (!cuff_calibration.calibrated()) throw InvalidInput("CUFF calibration gains must be positive");
}

std::string_view to_string(Device d) { return d == Device::ErgoTac ? "ergotac" : "cuff"; }

std::string_view to_string(Placement p) { return p == Placement::Front ? "front" : "back"; }

std::string_view to_string(VibrationLevel level) {
  switch (level) {
    case VibrationLevel::Low: return "low";
    case VibrationLevel::Medium: return "medium";
    case VibrationLevel::High: return "high";
    case VibrationLevel::Off: break;
  }
  return "off";
}

std::string_view to_string(Slide s) {
  switch (s) {
    case Slide::Forward: return "forward";
    case Slide::Backward: return "backward";
    case Slide::None: break;
  }
  return "none";
}

Device device_from_string(std::string_view s) {
  if (s == "ergotac") return Device::ErgoTac;
  if (s == "cuff") return Device::Cuff;
  throw InvalidInput("unknown device '" + std::string(s) + "'");
}

Placement placement_from_string(std::string_view s) {
  if (s == "front") return Placement::Front;
  if (s == "back") return Placement::Back;
  throw InvalidInput("unknown unit placement '" + std::string(s) + "'");
}

VibrationLevel level_from_string(std::string_view s) {
  if (s == "off") return VibrationLevel::Off;
  if (s == "low") return VibrationLevel::Low;
  if (s == "medium") return VibrationLevel::Medium;
  if (s == "high") return VibrationLevel::High;
  throw InvalidInput("unknown vibration level '" + std::string(s) + "'");
}

Slide slide_from_string(std::string_view s) {
  if (s == "forward") return Slide::Forward;
  if (s == "backward") return Slide::Backward;
  if (s == "none") return Slide::None;
  throw InvalidInput("unknown slide direction '" + std::string(s) + "'");
}

}  // namespace haptiguide
