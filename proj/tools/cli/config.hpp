#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "haptiguide/devices.hpp"
#include "haptiguide/engine.hpp"
#include "haptiguide/subject.hpp"

namespace haptiguide::cli {

// Raised for unreadable or invalid configuration; the message names the line
// (syntax errors) or the dotted field path (semantic errors).
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct SessionConfig {
  std::uint64_t protocol_seed = 1;
  std::filesystem::path output_dir = "out";
  Seconds dt = SimClock::kDefaultDt;
  Seconds timeout = kDefaultTimeout;
  JointMap<Degrees> initial_pose = kDefaultInitialPose;
  DeviceConfig device;
  std::vector<SubjectParams> subjects;
  unsigned threads = 0;  // 0: one per hardware thread
};

inline constexpr int kDefaultSubjectCount = 12;
inline constexpr std::uint64_t kDefaultSubjectSeed = 1000;

// Twelve default subjects with seeds 1000..1011.
SessionConfig default_config();

SessionConfig parse_config(const std::string& text);
SessionConfig load_config(const std::filesystem::path& path);

// Canonical JSON rendering of a configuration (parse_config reads it back).
std::string dump_config(const SessionConfig& config);

}  // namespace haptiguide::cli
