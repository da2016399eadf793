#include <sstream>
#include <thread>

#include <sys/socket.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "haptiguide/bus.hpp"
#include "haptiguide/nodes.hpp"
#include "haptiguide/stream.hpp"

using namespace haptiguide;

namespace {

const std::string kStates(kJointStatesTopic);
const std::string kErgo(kErgoTacCmdTopic);
const std::string kCuff(kCuffCmdTopic);

Payload states(double s, double k) { return JointStatesMsg{s, k}; }

}  // namespace

TEST(Bus, FanoutExactlyOnce) {
  Bus bus;
  register_standard_topics(bus);
  std::vector<Subscription> subs;
  for (int i = 0; i < 4; ++i) subs.push_back(bus.subscribe(kStates));
  bus.publish(kStates, states(1.0, 2.0), 0.0);
  for (auto& s : subs) {
    EXPECT_EQ(s.drain().size(), 1u);
    EXPECT_FALSE(s.try_next());
  }
}

TEST(Bus, OrderAndSequence) {
  Bus bus;
  register_standard_topics(bus);
  auto a = bus.subscribe(kStates);
  auto b = bus.subscribe(kStates);
  for (int i = 0; i < 3; ++i) bus.publish(kStates, states(i, i), 0.01 * i);
  const auto ea = a.drain();
  const auto eb = b.drain();
  ASSERT_EQ(ea.size(), 3u);
  EXPECT_EQ(ea, eb);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(ea[i].seq, i);
}

TEST(Bus, LateSubscriberMissesHistory) {
  Bus bus;
  register_standard_topics(bus);
  bus.publish(kStates, states(0, 0), 0.0);
  auto s = bus.subscribe(kStates);
  EXPECT_EQ(s.pending(), 0u);
  bus.publish(kStates, states(0, 0), 0.1);
  EXPECT_EQ(s.try_next()->seq, 1u);
}

TEST(Bus, RegistryAndSchemaErrors) {
  Bus bus;
  register_standard_topics(bus);
  EXPECT_THROW(bus.publish("/nowhere", states(0, 0), 0.0), RegistryError);
  EXPECT_THROW(bus.subscribe("/nowhere"), RegistryError);
  EXPECT_THROW(bus.publish(kStates, ErgoTacCmdMsg{}, 0.0), SchemaError);
  EXPECT_THROW(bus.register_topic(kStates, MessageType::CuffCmd), RegistryError);
  EXPECT_NO_THROW(bus.register_topic(kStates, MessageType::JointStates));
  EXPECT_THROW(bus.register_topic("no-slash", MessageType::CuffCmd), RegistryError);
  EXPECT_THROW(bus.register_topic("/a//b", MessageType::CuffCmd), RegistryError);
}

TEST(Bus, StampsMustNotDecrease) {
  Bus bus;
  register_standard_topics(bus);
  bus.publish(kStates, states(0, 0), 1.0);
  EXPECT_THROW(bus.publish(kStates, states(0, 0), 0.5), InvalidInput);
}

TEST(Bus, ListenerDetachesOnDestruction) {
  Bus bus;
  register_standard_topics(bus);
  int calls = 0;
  {
    auto l = bus.listen(kStates, [&](const Envelope&) { ++calls; });
    bus.publish(kStates, states(0, 0), 0.0);
  }
  bus.publish(kStates, states(0, 0), 0.0);
  EXPECT_EQ(calls, 1);
}

TEST(Bus, ConcurrentPublishersKeepPerTopicOrder) {
  Bus bus;
  register_standard_topics(bus);
  auto a = bus.subscribe(kStates);
  auto b = bus.subscribe(kStates);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&bus] {
      for (int i = 0; i < 250; ++i) bus.publish(kStates, JointStatesMsg{0.0, 0.0}, 0.0);
    });
  }
  for (auto& t : threads) t.join();
  const auto ea = a.drain();
  ASSERT_EQ(ea.size(), 1000u);
  for (std::size_t i = 0; i < ea.size(); ++i) EXPECT_EQ(ea[i].seq, i);
  EXPECT_EQ(ea, b.drain());
}

TEST(Bus, WaitNextAcrossThreads) {
  Bus bus;
  register_standard_topics(bus);
  auto s = bus.subscribe(kStates);
  std::thread producer([&] { bus.publish(kStates, states(5, 6), 0.0); });
  const auto e = s.wait_next(std::chrono::milliseconds(2000));
  producer.join();
  ASSERT_TRUE(e);
  EXPECT_EQ(std::get<JointStatesMsg>(e->payload).knee_deg, 6.0);
  EXPECT_FALSE(s.wait_next(std::chrono::milliseconds(1)));
}

TEST(Service, CuffCalibration) {
  Bus bus;
  CuffCalibrationStore store;
  register_cuff_calibration_service(bus, store);
  const std::string svc(kCuffCalibrateService);
  const auto resp = bus.call_service(svc, {{"joint", "knee"}, {"gamma0", 5.0}, {"k_force", 2.0}, {"k_slide", 10.0}});
  EXPECT_EQ(resp["ok"], true);
  EXPECT_EQ(store.get(JointId::Knee), cuff_calibrate(5.0, 2.0, 10.0));
  EXPECT_FALSE(store.get(JointId::Shoulder).calibrated());

  bus.call_service(svc, {{"gamma0", 0.0}, {"k_force", 1.0}, {"k_slide", 3.0}});
  EXPECT_TRUE(store.get(JointId::Shoulder).calibrated());

  EXPECT_THROW(bus.call_service("/cuff/missing", {}), ServiceUnavailable);
  EXPECT_THROW(bus.call_service(svc, {{"gamma0", "zero"}}), SchemaError);
  EXPECT_THROW(bus.call_service(svc, {{"gamma0", 0.0}, {"k_force", 1.0}, {"k_slide", 3.0}, {"x", 1}}), SchemaError);
  EXPECT_THROW(bus.call_service(svc, {{"gamma0", 0.0}, {"k_force", -1.0}, {"k_slide", 3.0}}), ServiceError);
}

TEST(Messages, EnvelopeRoundTrip) {
  const Envelope e{kCuff, 1.25, 7, CuffCmdMsg{JointId::Knee, Slide::Backward, 14.5, -42.0}};
  const auto line = encode_envelope(e);
  EXPECT_NE(line.find("\"stamp\":1.250000"), std::string::npos);
  EXPECT_EQ(decode_envelope(line), e);

  const Envelope g{kErgo, 0.5, 0, ErgoTacCmdMsg{JointId::Shoulder, Placement::Back, VibrationLevel::High, 80.0}};
  EXPECT_EQ(decode_envelope(encode_envelope(g)), g);
  EXPECT_THROW(decode_envelope("{\"topic\":\"/x\"}"), SchemaError);
  EXPECT_THROW(decode_envelope("not json"), SchemaError);
  EXPECT_THROW(payload_from_json({{"type", "joint_states"}, {"shoulder_deg", 1}, {"knee_deg", 2}, {"hip", 3}}),
               SchemaError);
}

namespace {

std::string record_session(Bus& bus, const std::function<void()>& body) {
  std::ostringstream out;
  {
    Recorder rec(bus, {kStates, kErgo, kCuff}, out);
    body();
  }
  return out.str();
}

}  // namespace

TEST(RecordReplay, RoundTripIsLossless) {
  Bus source;
  register_standard_topics(source);
  const auto first = record_session(source, [&] {
    for (int i = 0; i < 50; ++i) {
      source.publish(kStates, states(i * 0.3, 60.0 - i * 0.1), i * 0.01);
      source.publish(kCuff, CuffCmdMsg{JointId::Knee, Slide::Forward, 3.0 + i * 0.1, 30.0 - i}, i * 0.01);
    }
  });

  Bus sink;
  register_standard_topics(sink);
  std::size_t published = 0;
  const auto second = record_session(sink, [&] {
    std::istringstream in(first);
    published = replay(in, sink);
  });
  EXPECT_EQ(published, 100u);
  EXPECT_EQ(first, second);

  std::istringstream a(first), b(second);
  EXPECT_EQ(read_recording(a), read_recording(b));
}

TEST(RecordReplay, SpeedScalesIntervals) {
  std::vector<Envelope> rec;
  for (int i = 0; i < 5; ++i) rec.push_back({kStates, 0.5 * i, static_cast<std::uint64_t>(i), JointStatesMsg{}});
  Bus bus;
  register_standard_topics(bus);
  auto sub = bus.subscribe(kStates);
  std::vector<double> sleeps;
  ReplayOptions opts;
  opts.speed = 2.0;
  opts.sleep = [&](std::chrono::duration<double> d) { sleeps.push_back(d.count()); };
  replay(rec, bus, opts);
  EXPECT_EQ(sleeps, (std::vector<double>(4, 0.25)));
  const auto got = sub.drain();
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].stamp, 0.5 * i);
}

TEST(RecordReplay, EmptyAndCorrupt) {
  Bus bus;
  register_standard_topics(bus);
  auto sub = bus.subscribe(kStates);
  std::istringstream empty("");
  EXPECT_EQ(replay(empty, bus), 0u);
  EXPECT_EQ(sub.pending(), 0u);

  const Envelope e{kStates, 0.0, 0, JointStatesMsg{}};
  std::istringstream corrupt(encode_envelope(e) + "\n" + "{broken\n");
  try {
    read_recording(corrupt);
    FAIL() << "expected ParseError";
  } catch (const ParseError& err) {
    EXPECT_EQ(err.line(), 2u);
  }
}

TEST(RecordReplay, RepublishRequiresIncreasingSeq) {
  Bus bus;
  register_standard_topics(bus);
  bus.republish({kStates, 0.0, 4, JointStatesMsg{}});
  EXPECT_THROW(bus.republish({kStates, 0.1, 4, JointStatesMsg{}}), InvalidInput);
}

TEST(StreamLink, ForwardsAcrossSocketPair) {
  int fds[2];
  ASSERT_EQ(::socketpair(AF_UNIX, SOCK_STREAM, 0, fds), 0);
  Bus local;
  Bus remote;
  register_standard_topics(local);
  register_standard_topics(remote);
  auto received = remote.subscribe(kStates);

  StreamLink sender(fds[0]);
  StreamLink receiver(fds[1]);
  sender.forward(local, {kStates});
  std::size_t pumped = 0;
  std::thread pump([&] { pumped = receiver.pump_into(remote); });
  for (int i = 0; i < 20; ++i) local.publish(kStates, states(i, -i + 100.0), 0.01 * i);
  sender.shutdown_send();
  pump.join();

  EXPECT_EQ(pumped, 20u);
  const auto got = received.drain();
  ASSERT_EQ(got.size(), 20u);
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].seq, i);
    EXPECT_DOUBLE_EQ(std::get<JointStatesMsg>(got[i].payload).shoulder_deg, static_cast<double>(i));
  }
}

TEST(StreamLink, TcpLoopback) {
  std::uint16_t port = 0;
  const int listener = tcp_listen(0, &port);
  std::thread client([port] {
    StreamLink link(tcp_connect("127.0.0.1", port));
    link.send({kStates, 0.25, 3, JointStatesMsg{1.0, 2.0}});
    link.shutdown_send();
  });
  StreamLink server(tcp_accept(listener));
  const auto e = server.receive();
  client.join();
  ::close(listener);
  ASSERT_TRUE(e);
  EXPECT_EQ(e->seq, 3u);
  EXPECT_EQ(e->stamp, 0.25);
  EXPECT_FALSE(server.receive());
}

TEST(StreamLink, CorruptLineReportsPosition) {
  int fds[2];
  ASSERT_EQ(::socketpair(AF_UNIX, SOCK_STREAM, 0, fds), 0);
  StreamLink receiver(fds[1]);
  const std::string good = encode_envelope({kStates, 0.0, 0, JointStatesMsg{}}) + "\n";
  const std::string data = good + good + "garbage\n";
  ASSERT_EQ(::write(fds[0], data.data(), data.size()), static_cast<ssize_t>(data.size()));
  ::close(fds[0]);
  EXPECT_TRUE(receiver.receive());
  EXPECT_TRUE(receiver.receive());
  try {
    receiver.receive();
    FAIL() << "expected ParseError";
  } catch (const ParseError& err) {
    EXPECT_EQ(err.line(), 3u);
  }
}

TEST(BusTransparency, IdenticalTrialLogs) {
  SubjectParams p;
  p.misread_prob = 0.2;
  for (Device d : kAllDevices) {
    for (SubBlock b : kAllSubBlocks) {
      for (const auto& targets : protocol_targets(b)) {
        TrialSpec spec;
        spec.device = d;
        spec.targets = targets;
        spec.timeout = 30.0;
        p.seed = RngSeed{static_cast<std::uint64_t>(targets.guided_count() * 10 + static_cast<int>(d))};
        const auto direct = run_trial(spec, p, DeviceConfig{});
        Bus bus;
        register_standard_topics(bus);
        BusTransport transport(bus, spec, DeviceConfig{});
        const auto routed = run_trial(spec, p, DeviceConfig{}, SimClock{}, transport);
        EXPECT_EQ(direct, routed) << to_string(d) << " " << to_string(b);
      }
    }
  }
}

TEST(GuidanceProcessor, PublishesOneCommandPerGuidedJoint) {
  Bus bus;
  register_standard_topics(bus);
  auto cmds = bus.subscribe(kCuff);
  GuidanceProcessor proc(bus, Device::Cuff, TargetPose::both(100.0, 40.0), DeviceConfig{});
  bus.publish(kStates, states(0.0, 60.0), 0.5);
  const auto got = cmds.drain();
  ASSERT_EQ(got.size(), 2u);
  const auto& sh = std::get<CuffCmdMsg>(got[0].payload);
  EXPECT_EQ(sh.joint, JointId::Shoulder);
  EXPECT_EQ(sh.slide, Slide::Forward);
  EXPECT_EQ(sh.signed_error_deg, 100.0);
  EXPECT_EQ(got[0].stamp, 0.5);
  EXPECT_EQ(std::get<CuffCmdMsg>(got[1].payload).slide, Slide::Backward);
}
