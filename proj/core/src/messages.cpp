#include "haptiguide/messages.hpp"

#include <cmath>
#include <cstdio>

namespace haptiguide {

using nlohmann::json;

MessageType type_of(const Payload& p) { return static_cast<MessageType>(p.index()); }

std::string_view to_string(MessageType t) {
  switch (t) {
    case MessageType::JointStates: return "joint_states";
    case MessageType::ErgoTacCmd: return "ergotac_cmd";
    case MessageType::CuffCmd: break;
  }
  return "cuff_cmd";
}

namespace {

struct PayloadWriter {
  json operator()(const JointStatesMsg& m) const {
    return json{{"type", "joint_states"}, {"shoulder_deg", m.shoulder_deg}, {"knee_deg", m.knee_deg}};
  }
  json operator()(const ErgoTacCmdMsg& m) const {
    json j{{"type", "ergotac_cmd"},
           {"joint", to_string(m.joint)},
           {"unit_placement", to_string(m.unit_placement)},
           {"level", to_string(m.level)}};
    if (m.signed_error_deg) j["signed_error_deg"] = *m.signed_error_deg;
    return j;
  }
  json operator()(const CuffCmdMsg& m) const {
    json j{{"type", "cuff_cmd"},
           {"joint", to_string(m.joint)},
           {"slide", to_string(m.slide)},
           {"squeeze_force_n", m.squeeze_force_n}};
    if (m.signed_error_deg) j["signed_error_deg"] = *m.signed_error_deg;
    return j;
  }
};

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field '") + key + "'");
  return *it;
}

double number_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw SchemaError(std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(std::string("field '") + key + "' must be finite");
  return d;
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw SchemaError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return number_field(j, key);
}

void expect_keys(const json& j, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw SchemaError("unexpected field '" + k + "'");
  }
}

template <typename F>
auto enum_field(const json& j, const char* key, F parse) {
  try {
    return parse(string_field(j, key));
  } catch (const InvalidInput& e) {
    throw SchemaError(e.what());
  }
}

}  // namespace

json payload_to_json(const Payload& p) { return std::visit(PayloadWriter{}, p); }

Payload payload_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("payload must be an object");
  const std::string type = string_field(j, "type");
  if (type == "joint_states") {
    expect_keys(j, {"type", "shoulder_deg", "knee_deg"});
    return JointStatesMsg{number_field(j, "shoulder_deg"), number_field(j, "knee_deg")};
  }
  if (type == "ergotac_cmd") {
    expect_keys(j, {"type", "joint", "unit_placement", "level", "signed_error_deg"});
    ErgoTacCmdMsg m;
    m.joint = enum_field(j, "joint", joint_from_string);
    m.unit_placement = enum_field(j, "unit_placement", placement_from_string);
    m.level = enum_field(j, "level", level_from_string);
    m.signed_error_deg = optional_number(j, "signed_error_deg");
    return m;
  }
  if (type == "cuff_cmd") {
    expect_keys(j, {"type", "joint", "slide", "squeeze_force_n", "signed_error_deg"});
    CuffCmdMsg m;
    m.joint = enum_field(j, "joint", joint_from_string);
    m.slide = enum_field(j, "slide", slide_from_string);
    m.squeeze_force_n = number_field(j, "squeeze_force_n");
    m.signed_error_deg = optional_number(j, "signed_error_deg");
    return m;
  }
  throw SchemaError("unknown payload type '" + type + "'");
}

GuidanceCue to_cue(const ErgoTacCmdMsg& m) {
  return ErgoTacCommand{{m.joint, m.unit_placement}, m.level};
}

GuidanceCue to_cue(const CuffCmdMsg& m) { return CuffCommand{m.joint, m.slide, m.squeeze_force_n}; }

Payload to_payload(const GuidanceCue& cue, std::optional<Degrees> signed_error) {
  if (const auto* e = std::get_if<ErgoTacCommand>(&cue)) {
    return ErgoTacCmdMsg{e->unit.joint, e->unit.placement, e->level, signed_error};
  }
  const auto& c = std::get<CuffCommand>(cue);
  return CuffCmdMsg{c.joint, c.slide, c.squeeze_force_n, signed_error};
}

std::string encode_envelope(const Envelope& e) {
  char stamp[64];
  std::snprintf(stamp, sizeof stamp, "%.6f", e.stamp);
  std::string line = "{\"topic\":";
  line += json(e.topic).dump();
  line += ",\"stamp\":";
  line += stamp;
  line += ",\"seq\":";
  line += std::to_string(e.seq);
  line += ",\"payload\":";
  line += payload_to_json(e.payload).dump();
  line += '}';
  return line;
}

Envelope decode_envelope(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& ex) {
    throw SchemaError(std::string("malformed JSON: ") + ex.what());
  }
  if (!j.is_object()) throw SchemaError("envelope must be an object");
  expect_keys(j, {"topic", "stamp", "seq", "payload"});
  Envelope e;
  e.topic = string_field(j, "topic");
  e.stamp = number_field(j, "stamp");
  const json& seq = field(j, "seq");
  if (!seq.is_number_unsigned()) throw SchemaError("field 'seq' must be an unsigned integer");
  e.seq = seq.get<std::uint64_t>();
  e.payload = payload_from_json(field(j, "payload"));
  return e;
}

}  // namespace haptiguide
