#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "haptiguide/messages.hpp"

namespace haptiguide {

namespace detail {
struct Sink;
struct Topic;
}  // namespace detail

// Queue-backed subscription. Envelopes arrive in per-topic sequence order; the
// subscription detaches from the bus when destroyed.
class Subscription {
 public:
  Subscription(Subscription&&) noexcept = default;
  Subscription& operator=(Subscription&&) noexcept;
  ~Subscription();

  const std::string& topic() const;
  std::optional<Envelope> try_next();
  std::optional<Envelope> wait_next(std::chrono::milliseconds timeout);
  std::vector<Envelope> drain();
  std::size_t pending() const;

 private:
  friend class Bus;
  explicit Subscription(std::shared_ptr<detail::Sink> sink) : sink_(std::move(sink)) {}
  std::shared_ptr<detail::Sink> sink_;
};

// Callback attachment; the callback runs on the publishing thread while the topic is
// locked, so it must not publish to the same topic.
class Listener {
 public:
  Listener() = default;
  Listener(Listener&&) noexcept = default;
  Listener& operator=(Listener&&) noexcept;
  ~Listener();

  void detach();

 private:
  friend class Bus;
  explicit Listener(std::shared_ptr<detail::Sink> sink) : sink_(std::move(sink)) {}
  std::shared_ptr<detail::Sink> sink_;
};

using ServiceHandler = std::function<nlohmann::json(const nlohmann::json&)>;

// In-process publish/subscribe and request/reply bus. Topics carry a fixed payload
// type; per-topic sequence numbers are strictly increasing and every subscriber
// sees the same order. Late subscribers do not receive history.
class Bus {
 public:
  Bus();
  ~Bus();
  Bus(const Bus&) = delete;
  Bus& operator=(const Bus&) = delete;

  // Idempotent for the same type; RegistryError if the path exists with another type
  // or is not a valid slash-separated path.
  void register_topic(const std::string& path, MessageType type);
  std::optional<MessageType> topic_type(const std::string& path) const;
  std::vector<std::string> topics() const;

  Envelope publish(const std::string& topic, Payload payload, double stamp);
  // Publishes an envelope keeping its sequence number, which must exceed the
  // topic's last one. Used by replay.
  Envelope republish(const Envelope& envelope);

  Subscription subscribe(const std::string& topic);
  Listener listen(const std::string& topic, std::function<void(const Envelope&)> callback);

  void register_service(const std::string& path, ServiceHandler handler);
  // ServiceUnavailable without a handler; SchemaError from the handler passes through,
  // any other failure becomes ServiceError.
  nlohmann::json call_service(const std::string& path, const nlohmann::json& request);

 private:
  std::shared_ptr<detail::Topic> find_topic(const std::string& path) const;
  Envelope deliver(detail::Topic& topic, Envelope envelope, bool keep_seq);

  mutable std::shared_mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<detail::Topic>> topics_;
  std::mutex services_mutex_;
  std::map<std::string, ServiceHandler> services_;
};

// Registers /human/joint_states, /feedback/ergotac/cmd and /feedback/cuff/cmd.
void register_standard_topics(Bus& bus);

// Thread-safe per-joint CUFF calibration storage behind the calibration service.
class CuffCalibrationStore {
 public:
  void set(JointId joint, const CuffCalibration& cal);
  CuffCalibration get(JointId joint) const;  // uncalibrated if never set

 private:
  mutable std::mutex mutex_;
  JointMap<CuffCalibration> calibrations_;
};

// Request {"joint": "shoulder"|"knee" (optional, default both), "gamma0", "k_force",
// "k_slide"}; response {"ok": true, "joints": [...]}.
void register_cuff_calibration_service(Bus& bus, CuffCalibrationStore& store);

// Writes every envelope on the given topics as one line to `out`.
class Recorder {
 public:
  Recorder(Bus& bus, const std::vector<std::string>& topics, std::ostream& out);
  ~Recorder() = default;

  std::size_t count() const;

 private:
  struct State {
    std::mutex mutex;
    std::ostream* out;
    std::size_t count = 0;
  };
  std::shared_ptr<State> state_;
  std::vector<Listener> listeners_;
};

// Parses a recording; ParseError carries the 1-based line number of a corrupt line.
std::vector<Envelope> read_recording(std::istream& in);

struct ReplayOptions {
  // Playback speed factor; 0 disables pacing.
  double speed = 0.0;
  std::function<void(std::chrono::duration<double>)> sleep;  // defaults to sleep_for
};

// Republishes a recording with its original stamps and sequence numbers. Returns the
// number of envelopes published.
std::size_t replay(std::istream& in, Bus& bus, const ReplayOptions& options = {});
std::size_t replay(const std::vector<Envelope>& recording, Bus& bus, const ReplayOptions& options = {});

}  // namespace haptiguide
