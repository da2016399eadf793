#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "haptiguide/devices.hpp"

namespace haptiguide {

struct JointStatesMsg {
  Degrees shoulder_deg = 0.0;
  Degrees knee_deg = 0.0;
  bool operator==(const JointStatesMsg&) const = default;
};

struct ErgoTacCmdMsg {
  JointId joint = JointId::Shoulder;
  Placement unit_placement = Placement::Front;
  VibrationLevel level = VibrationLevel::Off;
  std::optional<Degrees> signed_error_deg;
  bool operator==(const ErgoTacCmdMsg&) const = default;
};

// The processor resolves the signed error into slide and force before publishing;
// the raw error travels along for logging.
struct CuffCmdMsg {
  JointId joint = JointId::Shoulder;
  Slide slide = Slide::None;
  double squeeze_force_n = kCuffMinForceN;
  std::optional<Degrees> signed_error_deg;
  bool operator==(const CuffCmdMsg&) const = default;
};

using Payload = std::variant<JointStatesMsg, ErgoTacCmdMsg, CuffCmdMsg>;

enum class MessageType { JointStates = 0, ErgoTacCmd = 1, CuffCmd = 2 };

MessageType type_of(const Payload& p);
std::string_view to_string(MessageType t);

// Schema-tagged object: {"type": "...", fields...}. Throws SchemaError on mismatch.
nlohmann::json payload_to_json(const Payload& p);
Payload payload_from_json(const nlohmann::json& j);

GuidanceCue to_cue(const ErgoTacCmdMsg& m);
GuidanceCue to_cue(const CuffCmdMsg& m);
Payload to_payload(const GuidanceCue& cue, std::optional<Degrees> signed_error = std::nullopt);

struct Envelope {
  std::string topic;
  double stamp = 0.0;
  std::uint64_t seq = 0;
  Payload payload;
  bool operator==(const Envelope&) const = default;
};

// One line of the wire/log format (no trailing newline):
// {"topic":"/x","stamp":1.230000,"seq":7,"payload":{...}}
std::string encode_envelope(const Envelope& e);
// Throws SchemaError on malformed input.
Envelope decode_envelope(std::string_view line);

inline constexpr std::string_view kJointStatesTopic = "/human/joint_states";
inline constexpr std::string_view kErgoTacCmdTopic = "/feedback/ergotac/cmd";
inline constexpr std::string_view kCuffCmdTopic = "/feedback/cuff/cmd";
inline constexpr std::string_view kCuffCalibrateService = "/cuff/calibrate";

}  // namespace haptiguide
