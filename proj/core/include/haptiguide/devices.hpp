#pragma once

#include <string_view>
#include <variant>

#include "haptiguide/core.hpp"

namespace haptiguide {

// ---------------------------------------------------------------------------
// ErgoTac: vibrotactile units, two per guided joint, SPOT (repulsive) modality.
// ---------------------------------------------------------------------------

enum class Placement { Front, Back };

struct ErgoTacUnit {
  JointId joint = JointId::Shoulder;
  Placement placement = Placement::Front;
  bool operator==(const ErgoTacUnit&) const = default;
};

// Ordered: Off < Low < Medium < High.
enum class VibrationLevel { Off = 0, Low = 1, Medium = 2, High = 3 };

inline constexpr double kErgoTacCarrierHz = 121.0;

constexpr int amplitude_percent(VibrationLevel level) {
  switch (level) {
    case VibrationLevel::Low: return 30;
    case VibrationLevel::Medium: return 60;
    case VibrationLevel::High: return 100;
    case VibrationLevel::Off: break;
  }
  return 0;
}

struct ErgoTacCommand {
  ErgoTacUnit unit;
  VibrationLevel level = VibrationLevel::Off;

  // Off stops both units of the joint; the placement is then irrelevant.
  bool active() const { return level != VibrationLevel::Off; }
  bool operator==(const ErgoTacCommand&) const = default;
};

struct SpotThresholds {
  Degrees tol = 5.0;
  Degrees low_hi = 15.0;
  Degrees med_hi = 45.0;

  // Throws InvalidInput unless 0 < tol < low_hi < med_hi.
  void validate() const;
  bool operator==(const SpotThresholds&) const = default;
};

// Maps one joint's error to a command for its unit pair. The unit opposite to the
// required movement vibrates; the level grows with |error|.
ErgoTacCommand ergotac_spot(JointId joint, Degrees error, const SpotThresholds& th = {});

inline constexpr Seconds kDefaultPulsePeriod = 0.8;

// Instantaneous amplitude (percent) of the square pulse train: on for the first
// half of each period, off for the second.
double ergotac_pulse(VibrationLevel level, Seconds t, Seconds period = kDefaultPulsePeriod);

// ---------------------------------------------------------------------------
// CUFF: fabric band driven by two motors. Common-mode motion slides the band
// (direction cue), differential motion squeezes it (magnitude cue).
// ---------------------------------------------------------------------------

inline constexpr double kCuffMinForceN = 3.0;
inline constexpr double kCuffMaxForceN = 20.0;
inline constexpr Degrees kCuffSaturationError = 90.0;

enum class Slide { Forward, Backward, None };

struct CuffCommand {
  JointId joint = JointId::Shoulder;
  Slide slide = Slide::None;
  double squeeze_force_n = kCuffMinForceN;

  bool active() const { return slide != Slide::None; }
  bool operator==(const CuffCommand&) const = default;
};

// 3 N at zero error rising linearly to 20 N at 90 degrees, saturated beyond.
double cuff_squeeze_force(Degrees abs_error);

CuffCommand cuff_command(JointId joint, Degrees error, Degrees tol);

struct MotorPositions {
  double gamma1 = 0.0;
  double gamma2 = 0.0;

  // Common-mode (slide) component relative to the contact baseline.
  double common_mode(double gamma0) const { return (gamma1 + gamma2) / 2.0 - gamma0; }
  // Differential (squeeze) component.
  double differential() const { return (gamma1 - gamma2) / 2.0; }
  bool operator==(const MotorPositions&) const = default;
};

// Default-constructed calibrations are "uncalibrated"; use cuff_calibrate().
struct CuffCalibration {
  double gamma0 = 0.0;
  double k_force = 0.0;  // encoder degrees per newton above the baseline force
  double k_slide = 0.0;  // encoder degrees per unit slide cue

  bool calibrated() const { return k_force > 0.0 && k_slide > 0.0; }
  bool operator==(const CuffCalibration&) const = default;
};

CuffCalibration cuff_calibrate(double baseline_gamma0, double k_force, double k_slide);

MotorPositions cuff_motor_positions(const CuffCommand& cmd, const CuffCalibration& cal);

// Inverse of cuff_motor_positions.
CuffCommand cuff_command_from_motors(JointId joint, const MotorPositions& m,
                                     const CuffCalibration& cal);

// ---------------------------------------------------------------------------
// Device-agnostic cue handling.
// ---------------------------------------------------------------------------

enum class Device { ErgoTac, Cuff };

using GuidanceCue = std::variant<ErgoTacCommand, CuffCommand>;

JointId cue_joint(const GuidanceCue& cue);
bool cue_active(const GuidanceCue& cue);
// +1 when the cue asks for an increase of the joint angle, -1 for a decrease, 0 for none.
int cue_direction(const GuidanceCue& cue);

struct DeviceConfig {
  SpotThresholds spot;
  Seconds pulse_period = kDefaultPulsePeriod;
  Degrees cuff_tolerance = 5.0;
  CuffCalibration cuff_calibration = CuffCalibration{0.0, 2.0, 10.0};

  void validate() const;
  // Goal tolerance applied by the device's feedback law.
  Degrees tolerance(Device device) const {
    return device == Device::ErgoTac ? spot.tol : cuff_tolerance;
  }
  bool operator==(const DeviceConfig&) const = default;
};

std::string_view to_string(Device d);
std::string_view to_string(Placement p);
std::string_view to_string(VibrationLevel level);
std::string_view to_string(Slide s);
Device device_from_string(std::string_view s);
Placement placement_from_string(std::string_view s);
VibrationLevel level_from_string(std::string_view s);
Slide slide_from_string(std::string_view s);

}  // namespace haptiguide
