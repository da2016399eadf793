#pragma once

#include <iosfwd>
#include <string>

#include "haptiguide/engine.hpp"

namespace haptiguide::cli {

// A trial log plus the bookkeeping needed to place it in a session.
struct TrialFile {
  int subject_id = 0;
  int trial_index = 0;
  TrialLog log;
};

// First line "# {json meta}", then a CSV header and one row per sample:
// t,shoulder_deg,knee_deg,shoulder_error_deg,knee_error_deg,shoulder_cue,knee_cue,
// shoulder_intent,knee_intent,shoulder_amplitude_pct,knee_amplitude_pct
// Cues are written as "ergotac/<placement>/<level>" or "cuff/<slide>/<force_n>".
// The amplitude columns hold the instantaneous ErgoTac pulse amplitude.
void write_trial_log(std::ostream& out, const TrialFile& trial, Seconds pulse_period);
TrialFile read_trial_log(std::istream& in);

std::string encode_cue(const GuidanceCue& cue);
GuidanceCue decode_cue(JointId joint, const std::string& text);

}  // namespace haptiguide::cli
