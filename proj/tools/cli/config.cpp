#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace haptiguide::cli {

using nlohmann::json;

namespace {

// Walks one JSON object, tracking its dotted path and rejecting unknown keys.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  // Rejects keys that were never asked for.
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail(key, "unknown key");
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "expected a finite number");
    return d;
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned()) fail(key, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const std::string where = key.empty() ? (path_.empty() ? "<root>" : path_) : child(key);
    throw ConfigError("field '" + where + "': " + what);
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename F>
void validate_at(const std::string& path, F&& check) {
  try {
    check();
  } catch (const InvalidInput& e) {
    throw ConfigError("field '" + path + "': " + e.what());
  }
}

SubjectParams read_subject(const json& j, const std::string& path, SubjectParams base,
                           std::optional<std::uint64_t> default_seed) {
  ObjectReader r(j, path);
  base.reaction_delay = r.number("reaction_delay_s", base.reaction_delay);
  base.angular_speed = r.number("angular_speed_dps", base.angular_speed);
  base.misread_prob = r.number("misread_prob", base.misread_prob);
  base.declare_tolerance = r.number("declare_tolerance_deg", base.declare_tolerance);
  base.hold_time = r.number("hold_time_s", base.hold_time);
  base.seed.value = r.unsigned_integer("seed", default_seed.value_or(base.seed.value));
  r.finish();
  validate_at(path, [&] { base.validate(); });
  return base;
}

json subject_json(const SubjectParams& s) {
  return json{{"reaction_delay_s", s.reaction_delay}, {"angular_speed_dps", s.angular_speed},
              {"misread_prob", s.misread_prob},       {"declare_tolerance_deg", s.declare_tolerance},
              {"hold_time_s", s.hold_time},           {"seed", s.seed.value}};
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

}  // namespace

SessionConfig default_config() {
  SessionConfig c;
  for (int i = 0; i < kDefaultSubjectCount; ++i) {
    SubjectParams s;
    s.seed.value = kDefaultSubjectSeed + static_cast<std::uint64_t>(i);
    c.subjects.push_back(s);
  }
  return c;
}

SessionConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte is 1-based and points just past the offending character
    const std::size_t line = line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError("line " + std::to_string(line) + ": " + e.what());
  }

  SessionConfig c;
  ObjectReader r(root, "");
  c.protocol_seed = r.unsigned_integer("protocol_seed", c.protocol_seed);
  c.output_dir = r.string("output_dir", c.output_dir.string());
  c.dt = r.number("dt_s", c.dt);
  if (!(c.dt > 0.0)) r.fail("dt_s", "must be positive");
  c.timeout = r.number("timeout_s", c.timeout);
  if (!(c.timeout > 0.0)) r.fail("timeout_s", "must be positive");
  c.threads = static_cast<unsigned>(r.unsigned_integer("threads", c.threads));

  if (r.has("initial_pose")) {
    ObjectReader p(r.at("initial_pose"), "initial_pose");
    c.initial_pose[JointId::Shoulder] = p.number("shoulder_deg", c.initial_pose[JointId::Shoulder]);
    c.initial_pose[JointId::Knee] = p.number("knee_deg", c.initial_pose[JointId::Knee]);
    for (JointId j : kAllJoints) {
      if (!in_joint_range(j, c.initial_pose[j])) {
        p.fail(std::string(to_string(j)) + "_deg", "outside the joint range");
      }
    }
    p.finish();
  }

  if (r.has("device")) {
    ObjectReader d(r.at("device"), "device");
    if (d.has("spot")) {
      ObjectReader s(d.at("spot"), "device.spot");
      c.device.spot.tol = s.number("tol_deg", c.device.spot.tol);
      c.device.spot.low_hi = s.number("low_hi_deg", c.device.spot.low_hi);
      c.device.spot.med_hi = s.number("med_hi_deg", c.device.spot.med_hi);
      s.finish();
      validate_at("device.spot", [&] { c.device.spot.validate(); });
    }
    c.device.pulse_period = d.number("pulse_period_s", c.device.pulse_period);
    c.device.cuff_tolerance = d.number("cuff_tolerance_deg", c.device.cuff_tolerance);
    if (d.has("cuff_calibration")) {
      ObjectReader k(d.at("cuff_calibration"), "device.cuff_calibration");
      const double g0 = k.number("gamma0", c.device.cuff_calibration.gamma0);
      const double kf = k.number("k_force", c.device.cuff_calibration.k_force);
      const double ks = k.number("k_slide", c.device.cuff_calibration.k_slide);
      k.finish();
      validate_at("device.cuff_calibration", [&] { c.device.cuff_calibration = cuff_calibrate(g0, kf, ks); });
    }
    d.finish();
    validate_at("device", [&] { c.device.validate(); });
  }

  SubjectParams defaults;
  defaults.seed.value = kDefaultSubjectSeed;
  if (r.has("subject_defaults")) {
    defaults = read_subject(r.at("subject_defaults"), "subject_defaults", defaults, std::nullopt);
  }

  const std::uint64_t base_seed = defaults.seed.value;
  if (r.has("subjects")) {
    const json& list = r.at("subjects");
    if (!list.is_array() || list.empty()) r.fail("subjects", "expected a nonempty array");
    if (r.has("subject_count")) r.fail("subject_count", "cannot be combined with 'subjects'");
    for (std::size_t i = 0; i < list.size(); ++i) {
      c.subjects.push_back(read_subject(list[i], "subjects[" + std::to_string(i) + "]", defaults,
                                        base_seed + i));
    }
  } else {
    const std::uint64_t count = r.unsigned_integer("subject_count", kDefaultSubjectCount);
    if (count == 0) r.fail("subject_count", "must be at least 1");
    for (std::uint64_t i = 0; i < count; ++i) {
      SubjectParams s = defaults;
      s.seed.value = base_seed + i;
      c.subjects.push_back(s);
    }
  }
  r.finish();
  return c;
}

SessionConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const SessionConfig& c) {
  json subjects = json::array();
  for (const auto& s : c.subjects) subjects.push_back(subject_json(s));
  json j{
      {"protocol_seed", c.protocol_seed},
      {"output_dir", c.output_dir.string()},
      {"dt_s", c.dt},
      {"timeout_s", c.timeout},
      {"threads", c.threads},
      {"initial_pose",
       {{"shoulder_deg", c.initial_pose[JointId::Shoulder]}, {"knee_deg", c.initial_pose[JointId::Knee]}}},
      {"device",
       {{"spot",
         {{"tol_deg", c.device.spot.tol},
          {"low_hi_deg", c.device.spot.low_hi},
          {"med_hi_deg", c.device.spot.med_hi}}},
        {"pulse_period_s", c.device.pulse_period},
        {"cuff_tolerance_deg", c.device.cuff_tolerance},
        {"cuff_calibration",
         {{"gamma0", c.device.cuff_calibration.gamma0},
          {"k_force", c.device.cuff_calibration.k_force},
          {"k_slide", c.device.cuff_calibration.k_slide}}}}},
      {"subjects", subjects},
  };
  return j.dump(2) + "\n";
}

}  // namespace haptiguide::cli
