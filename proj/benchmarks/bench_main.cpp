#include <benchmark/benchmark.h>

#include "haptiguide/bus.hpp"
#include "haptiguide/metrics.hpp"
#include "haptiguide/nodes.hpp"
#include "haptiguide/stats.hpp"

using namespace haptiguide;

namespace {

TrialSpec multi_spec(Device d) {
  TrialSpec spec;
  spec.device = d;
  spec.targets = TargetPose::both(100.0, 40.0);
  return spec;
}

void BM_RunTrial(benchmark::State& state) {
  const TrialSpec spec = multi_spec(state.range(0) == 0 ? Device::ErgoTac : Device::Cuff);
  SubjectParams p;
  p.misread_prob = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(run_trial(spec, p, DeviceConfig{}));
}
BENCHMARK(BM_RunTrial)->Arg(0)->Arg(1);

void BM_RunTrialTimeout(benchmark::State& state) {
  TrialSpec spec = multi_spec(Device::Cuff);
  SubjectParams p;
  p.misread_prob = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(run_trial(spec, p, DeviceConfig{}));
}
BENCHMARK(BM_RunTrialTimeout)->Unit(benchmark::kMillisecond);

void BM_RunTrialOverBus(benchmark::State& state) {
  const TrialSpec spec = multi_spec(Device::Cuff);
  SubjectParams p;
  p.misread_prob = 0.0;
  for (auto _ : state) {
    Bus bus;
    register_standard_topics(bus);
    BusTransport transport(bus, spec, DeviceConfig{});
    benchmark::DoNotOptimize(run_trial(spec, p, DeviceConfig{}, SimClock{}, transport));
  }
}
BENCHMARK(BM_RunTrialOverBus);

void BM_ComputeMetrics(benchmark::State& state) {
  SubjectParams p;
  p.misread_prob = 0.3;
  TrialSpec spec = multi_spec(Device::ErgoTac);
  spec.timeout = 30.0;
  const TrialLog log = run_trial(spec, p, DeviceConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(compute_metrics(log));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(log.samples.size()));
}
BENCHMARK(BM_ComputeMetrics);

void BM_WilcoxonExact(benchmark::State& state) {
  std::vector<double> d;
  for (int i = 1; i <= state.range(0); ++i) d.push_back(i % 3 == 0 ? -0.5 * i : 0.5 * i);
  for (auto _ : state) benchmark::DoNotOptimize(wilcoxon_signed_rank(d, PValueMethod::Exact));
}
BENCHMARK(BM_WilcoxonExact)->Arg(12)->Arg(20);

void BM_BusPublish(benchmark::State& state) {
  Bus bus;
  register_standard_topics(bus);
  const std::string topic(kJointStatesTopic);
  std::vector<Subscription> subs;
  for (int i = 0; i < state.range(0); ++i) subs.push_back(bus.subscribe(topic));
  double t = 0.0;
  for (auto _ : state) {
    bus.publish(topic, JointStatesMsg{10.0, 20.0}, t);
    t += 0.01;
    for (auto& s : subs) benchmark::DoNotOptimize(s.try_next());
  }
}
BENCHMARK(BM_BusPublish)->Arg(1)->Arg(4);

void BM_EncodeDecodeEnvelope(benchmark::State& state) {
  const Envelope e{std::string(kCuffCmdTopic), 12.34, 99, CuffCmdMsg{JointId::Knee, Slide::Forward, 12.5, 48.0}};
  for (auto _ : state) benchmark::DoNotOptimize(decode_envelope(encode_envelope(e)));
}
BENCHMARK(BM_EncodeDecodeEnvelope);

}  // namespace

BENCHMARK_MAIN();
