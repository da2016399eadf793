#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace haptiguide::testing {

namespace {

std::vector<Degrees> ramp(Degrees from, Degrees to, Degrees step) {
  std::vector<Degrees> out{from};
  const double dir = to >= from ? 1.0 : -1.0;
  Degrees a = from;
  while (std::abs(to - a) > step) {
    a += dir * step;
    out.push_back(a);
  }
  out.push_back(to);
  return out;
}

std::vector<Degrees> hold(Degrees at, std::size_t n) { return std::vector<Degrees>(n, at); }

std::vector<Degrees> concat(std::vector<Degrees> a, const std::vector<Degrees>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Bounded random walk with a drift towards `to`.
std::vector<Degrees> walk(Rng& rng, JointId joint, Degrees from, Degrees to, std::size_t n, double wrong) {
  std::vector<Degrees> out{from};
  Degrees a = from;
  for (std::size_t i = 1; i < n; ++i) {
    const double toward = to > a ? 1.0 : -1.0;
    const double step = 0.4 * rng.uniform();
    const double dir = rng.uniform() < wrong ? -toward : toward;
    a = clamp_to_joint_range(joint, a + dir * step);
    out.push_back(a);
  }
  return out;
}

}  // namespace

TrialLog make_log(Device device, const FixtureTrack& shoulder, const FixtureTrack& knee, bool success,
                  Seconds t0, Seconds dt, Degrees tolerance) {
  const std::size_t n = std::max(shoulder.angles.size(), knee.angles.size());
  auto angle_at = [](const FixtureTrack& tr, std::size_t i) {
    return tr.angles.empty() ? 0.0 : tr.angles[std::min(i, tr.angles.size() - 1)];
  };

  TrialLog log;
  log.spec.device = device;
  log.spec.targets = TargetPose(shoulder.target, knee.target);
  log.spec.initial_pose = JointMap<Degrees>(angle_at(shoulder, 0), angle_at(knee, 0));
  log.spec.timeout = 90.0;
  log.dt = dt;
  log.goal_tolerance = tolerance;

  SpotThresholds th;
  th.tol = tolerance;
  const JointMap<const FixtureTrack*> tracks(&shoulder, &knee);
  for (std::size_t i = 0; i < n; ++i) {
    TrialSample s;
    s.t = t0 + static_cast<double>(i) * dt;
    for (JointId j : kAllJoints) {
      JointFrame& f = s.joints[j];
      f.angle = angle_at(*tracks[j], i);
      if (!tracks[j]->target) continue;
      const Degrees e = *tracks[j]->target - f.angle;
      f.error = e;
      if (device == Device::Cuff) {
        f.cue = cuff_command(j, e, tolerance);
      } else {
        f.cue = ergotac_spot(j, e, th);
      }
    }
    log.samples.push_back(s);
  }
  log.outcome.kind = success ? TrialOutcome::Kind::Success : TrialOutcome::Kind::Timeout;
  log.outcome.time = log.samples.back().t;
  return log;
}

TrialLog fixture_quarter_confusion() {
  std::vector<Degrees> a{0.0};
  for (int i = 0; i < 40; ++i) a.push_back(a.back() + (i % 4 == 3 ? -0.5 : 1.0));
  return make_log(Device::Cuff, {90.0, a}, {std::nullopt, {60.0}}, false);
}

TrialLog fixture_overshoot() {
  auto a = concat(ramp(-10.0, 90.0, 0.3), ramp(90.0, 100.0, 0.3));
  a = concat(a, ramp(100.0, 90.0, 0.3));
  a = concat(a, hold(90.0, 100));
  return make_log(Device::Cuff, {90.0, a}, {std::nullopt, {60.0}}, true);
}

TrialLog fixture_halfway_timeout() {
  const auto a = concat(ramp(-10.0, 40.0, 0.3), hold(40.0, 500));
  return make_log(Device::ErgoTac, {90.0, a}, {std::nullopt, {60.0}}, false);
}

std::vector<Fixture> fixture_corpus() {
  std::vector<Fixture> out;
  out.push_back({"quarter_confusion", fixture_quarter_confusion()});
  out.push_back({"overshoot", fixture_overshoot()});
  out.push_back({"halfway_timeout", fixture_halfway_timeout()});

  out.push_back({"monotone_shoulder",
                 make_log(Device::Cuff, {90.0, concat(ramp(-10.0, 90.0, 0.3), hold(90.0, 100))},
                          {std::nullopt, {60.0}}, true)});
  out.push_back({"two_joints_50_each",
                 make_log(Device::Cuff, {50.0, concat(ramp(0.0, 50.0, 0.3), hold(50.0, 100))},
                          {110.0, concat(ramp(60.0, 110.0, 0.3), hold(110.0, 100))}, true)});
  out.push_back({"at_goal", make_log(Device::ErgoTac, {45.0, hold(45.0, 101)}, {std::nullopt, {60.0}}, true)});
  out.push_back({"never_moved", make_log(Device::ErgoTac, {std::nullopt, {0.0}}, {115.0, hold(60.0, 900)}, false)});
  out.push_back({"degenerate_failed_at_target",
                 make_log(Device::Cuff, {45.0, hold(45.0, 50)}, {std::nullopt, {60.0}}, false)});
  out.push_back({"degenerate_failed_drifted",
                 make_log(Device::Cuff, {45.0, concat(hold(45.0, 10), ramp(45.0, 47.0, 0.2))},
                          {std::nullopt, {60.0}}, false)});
  out.push_back({"fled_to_limit",
                 make_log(Device::ErgoTac, {std::nullopt, {0.0}}, {115.0, concat(ramp(60.0, 0.0, 0.3), hold(0.0, 300))},
                          false)});
  out.push_back({"knee_down_shifted",
                 make_log(Device::Cuff, {std::nullopt, {0.0}}, {30.0, concat(ramp(60.0, 30.0, 0.3), hold(30.0, 100))},
                          true, 12.5)});
  out.push_back({"sequential_multi",
                 make_log(Device::ErgoTac, {100.0, concat(ramp(0.0, 100.0, 0.3), hold(100.0, 300))},
                          {40.0, concat(hold(60.0, 340), ramp(60.0, 40.0, 0.3))}, true)});
  out.push_back({"deadband_edge",
                 make_log(Device::Cuff, {90.0, concat(ramp(0.0, 1.0, 0.01), ramp(1.0, 0.5, 0.005))},
                          {std::nullopt, {60.0}}, false)});
  out.push_back({"coarse_dt",
                 make_log(Device::ErgoTac, {-10.0, concat(ramp(0.0, -10.0, 0.6), hold(-10.0, 20))},
                          {std::nullopt, {60.0}}, true, 0.0, 0.02)});
  out.push_back({"wide_tolerance",
                 make_log(Device::Cuff, {20.0, concat(ramp(0.0, 14.0, 0.3), hold(14.0, 50))},
                          {70.0, concat(ramp(60.0, 65.0, 0.3), hold(65.0, 80))}, true, 0.0, 0.01, 8.0)});

  Rng rng(RngSeed{20240611});
  const std::vector<std::pair<Degrees, Degrees>> pairs{{20.0, 110.0}, {55.0, 70.0}, {100.0, 40.0}};
  for (int k = 0; k < 12; ++k) {
    const Device device = k % 2 == 0 ? Device::ErgoTac : Device::Cuff;
    const bool ok = k % 3 != 0;
    const double wrong = 0.05 * (k % 5);
    const std::size_t n = 200 + static_cast<std::size_t>(rng.below(600));
    const auto [ts, tk] = pairs[static_cast<std::size_t>(k) % pairs.size()];
    FixtureTrack sh{std::nullopt, {0.0}};
    FixtureTrack kn{std::nullopt, {60.0}};
    if (k % 4 != 1) sh = {ts, walk(rng, JointId::Shoulder, 0.0, ts, n, wrong)};
    if (k % 4 != 2) kn = {tk, walk(rng, JointId::Knee, 60.0, tk, n, wrong)};
    out.push_back({"random_walk_" + std::to_string(k), make_log(device, sh, kn, ok, 0.01 * k)});
  }
  return out;
}

}  // namespace haptiguide::testing
