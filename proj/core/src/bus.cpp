#include "haptiguide/bus.hpp"

#include <atomic>
#include <istream>
#include <ostream>
#include <thread>

namespace haptiguide {

namespace detail {

struct Sink {
  std::string topic;
  std::function<void(const Envelope&)> callback;  // empty for queue sinks
  std::atomic<bool> closed{false};

  mutable std::mutex mutex;
  std::condition_variable cv;
  std::deque<Envelope> queue;

  void push(const Envelope& e) {
    if (callback) {
      callback(e);
      return;
    }
    {
      std::lock_guard lock(mutex);
      queue.push_back(e);
    }
    cv.notify_one();
  }
};

struct Topic {
  std::string path;
  MessageType type;
  std::mutex mutex;
  bool published = false;
  std::uint64_t last_seq = 0;
  double last_stamp = 0.0;
  std::vector<std::shared_ptr<Sink>> sinks;
};

}  // namespace detail

namespace {

bool valid_path(const std::string& path) {
  if (path.size() < 2 || path.front() != '/' || path.back() == '/') return false;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (path[i] == '/' && path[i - 1] == '/') return false;
  }
  return true;
}

}  // namespace

Subscription& Subscription::operator=(Subscription&& other) noexcept {
  if (this != &other) {
    if (sink_) sink_->closed = true;
    sink_ = std::move(other.sink_);
  }
  return *this;
}

Subscription::~Subscription() {
  if (sink_) sink_->closed = true;
}

const std::string& Subscription::topic() const { return sink_->topic; }

std::optional<Envelope> Subscription::try_next() {
  std::lock_guard lock(sink_->mutex);
  if (sink_->queue.empty()) return std::nullopt;
  Envelope e = std::move(sink_->queue.front());
  sink_->queue.pop_front();
  return e;
}

std::optional<Envelope> Subscription::wait_next(std::chrono::milliseconds timeout) {
  std::unique_lock lock(sink_->mutex);
  if (!sink_->cv.wait_for(lock, timeout, [&] { return !sink_->queue.empty(); })) return std::nullopt;
  Envelope e = std::move(sink_->queue.front());
  sink_->queue.pop_front();
  return e;
}

std::vector<Envelope> Subscription::drain() {
  std::lock_guard lock(sink_->mutex);
  std::vector<Envelope> out(std::make_move_iterator(sink_->queue.begin()),
                            std::make_move_iterator(sink_->queue.end()));
  sink_->queue.clear();
  return out;
}

std::size_t Subscription::pending() const {
  std::lock_guard lock(sink_->mutex);
  return sink_->queue.size();
}

Listener& Listener::operator=(Listener&& other) noexcept {
  if (this != &other) {
    detach();
    sink_ = std::move(other.sink_);
  }
  return *this;
}

Listener::~Listener() { detach(); }

void Listener::detach() {
  if (sink_) sink_->closed = true;
  sink_.reset();
}

Bus::Bus() = default;
Bus::~Bus() = default;

void Bus::register_topic(const std::string& path, MessageType type) {
  if (!valid_path(path)) throw RegistryError("invalid topic path '" + path + "'");
  std::unique_lock lock(registry_mutex_);
  auto it = topics_.find(path);
  if (it != topics_.end()) {
    if (it->second->type != type) {
      throw RegistryError("topic '" + path + "' already registered with type " +
                          std::string(to_string(it->second->type)));
    }
    return;
  }
  auto topic = std::make_shared<detail::Topic>();
  topic->path = path;
  topic->type = type;
  topics_.emplace(path, std::move(topic));
}

std::optional<MessageType> Bus::topic_type(const std::string& path) const {
  std::shared_lock lock(registry_mutex_);
  auto it = topics_.find(path);
  if (it == topics_.end()) return std::nullopt;
  return it->second->type;
}

std::vector<std::string> Bus::topics() const {
  std::shared_lock lock(registry_mutex_);
  std::vector<std::string> out;
  for (const auto& [path, t] : topics_) out.push_back(path);
  return out;
}

std::shared_ptr<detail::Topic> Bus::find_topic(const std::string& path) const {
  std::shared_lock lock(registry_mutex_);
  auto it = topics_.find(path);
  if (it == topics_.end()) throw RegistryError("unregistered topic '" + path + "'");
  return it->second;
}

Envelope Bus::deliver(detail::Topic& topic, Envelope envelope, bool keep_seq) {
  if (type_of(envelope.payload) != topic.type) {
    throw SchemaError("topic '" + topic.path + "' carries " + std::string(to_string(topic.type)) +
                      ", got " + std::string(to_string(type_of(envelope.payload))));
  }
  std::lock_guard lock(topic.mutex);
  if (topic.published && envelope.stamp < topic.last_stamp) {
    throw InvalidInput("stamp goes backwards on topic '" + topic.path + "'");
  }
  if (keep_seq) {
    if (topic.published && envelope.seq <= topic.last_seq) {
      throw InvalidInput("sequence number does not increase on topic '" + topic.path + "'");
    }
  } else {
    envelope.seq = topic.published ? topic.last_seq + 1 : 0;
  }
  topic.published = true;
  topic.last_seq = envelope.seq;
  topic.last_stamp = envelope.stamp;

  std::erase_if(topic.sinks, [](const auto& s) { return s->closed.load(); });
  for (const auto& sink : topic.sinks) sink->push(envelope);
  return envelope;
}

Envelope Bus::publish(const std::string& topic, Payload payload, double stamp) {
  auto t = find_topic(topic);
  return deliver(*t, Envelope{topic, stamp, 0, std::move(payload)}, false);
}

Envelope Bus::republish(const Envelope& envelope) {
  auto t = find_topic(envelope.topic);
  return deliver(*t, envelope, true);
}

Subscription Bus::subscribe(const std::string& topic) {
  auto t = find_topic(topic);
  auto sink = std::make_shared<detail::Sink>();
  sink->topic = topic;
  std::lock_guard lock(t->mutex);
  t->sinks.push_back(sink);
  return Subscription(std::move(sink));
}

Listener Bus::listen(const std::string& topic, std::function<void(const Envelope&)> callback) {
  if (!callback) throw InvalidInput("listen: empty callback");
  auto t = find_topic(topic);
  auto sink = std::make_shared<detail::Sink>();
  sink->topic = topic;
  sink->callback = std::move(callback);
  std::lock_guard lock(t->mutex);
  t->sinks.push_back(sink);
  return Listener(std::move(sink));
}

void Bus::register_service(const std::string& path, ServiceHandler handler) {
  if (!valid_path(path)) throw RegistryError("invalid service path '" + path + "'");
  if (!handler) throw RegistryError("empty handler for service '" + path + "'");
  std::lock_guard lock(services_mutex_);
  if (!services_.emplace(path, std::move(handler)).second) {
    throw RegistryError("service '" + path + "' already has a handler");
  }
}

nlohmann::json Bus::call_service(const std::string& path, const nlohmann::json& request) {
  ServiceHandler handler;
  {
    std::lock_guard lock(services_mutex_);
    auto it = services_.find(path);
    if (it == services_.end()) throw ServiceUnavailable("no handler for service '" + path + "'");
    handler = it->second;
  }
  try {
    return handler(request);
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw ServiceError("service '" + path + "' failed: " + e.what());
  }
}

void register_standard_topics(Bus& bus) {
  bus.register_topic(std::string(kJointStatesTopic), MessageType::JointStates);
  bus.register_topic(std::string(kErgoTacCmdTopic), MessageType::ErgoTacCmd);
  bus.register_topic(std::string(kCuffCmdTopic), MessageType::CuffCmd);
}

void CuffCalibrationStore::set(JointId joint, const CuffCalibration& cal) {
  std::lock_guard lock(mutex_);
  calibrations_[joint] = cal;
}

CuffCalibration CuffCalibrationStore::get(JointId joint) const {
  std::lock_guard lock(mutex_);
  return calibrations_[joint];
}

void register_cuff_calibration_service(Bus& bus, CuffCalibrationStore& store) {
  bus.register_service(std::string(kCuffCalibrateService), [&store](const nlohmann::json& req) {
    if (!req.is_object()) throw SchemaError("calibration request must be an object");
    for (const auto& [key, value] : req.items()) {
      if (key != "joint" && key != "gamma0" && key != "k_force" && key != "k_slide") {
        throw SchemaError("unexpected field '" + key + "' in calibration request");
      }
    }
    auto number = [&](const char* key) {
      if (!req.contains(key) || !req[key].is_number()) {
        throw SchemaError(std::string("calibration request needs numeric '") + key + "'");
      }
      return req[key].get<double>();
    };
    const CuffCalibration cal = cuff_calibrate(number("gamma0"), number("k_force"), number("k_slide"));

    std::vector<JointId> joints(kAllJoints.begin(), kAllJoints.end());
    if (req.contains("joint")) {
      if (!req["joint"].is_string()) throw SchemaError("'joint' must be a string");
      try {
        joints = {joint_from_string(req["joint"].get<std::string>())};
      } catch (const InvalidInput& e) {
        throw SchemaError(e.what());
      }
    }
    nlohmann::json names = nlohmann::json::array();
    for (JointId j : joints) {
      store.set(j, cal);
      names.push_back(to_string(j));
    }
    return nlohmann::json{{"ok", true}, {"joints", names}};
  });
}

Recorder::Recorder(Bus& bus, const std::vector<std::string>& topics, std::ostream& out)
    : state_(std::make_shared<State>()) {
  state_->out = &out;
  for (const auto& topic : topics) {
    listeners_.push_back(bus.listen(topic, [state = state_](const Envelope& e) {
      std::lock_guard lock(state->mutex);
      *state->out << encode_envelope(e) << '\n';
      ++state->count;
    }));
  }
}

std::size_t Recorder::count() const {
  std::lock_guard lock(state_->mutex);
  return state_->count;
}

std::vector<Envelope> read_recording(std::istream& in) {
  std::vector<Envelope> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      out.push_back(decode_envelope(line));
    } catch (const SchemaError& e) {
      throw ParseError(number, e.what());
    }
  }
  return out;
}

std::size_t replay(const std::vector<Envelope>& recording, Bus& bus, const ReplayOptions& options) {
  auto sleep = options.sleep;
  if (!sleep) {
    sleep = [](std::chrono::duration<double> d) { std::this_thread::sleep_for(d); };
  }
  std::optional<double> previous;
  for (const Envelope& e : recording) {
    if (options.speed > 0.0 && previous) {
      const double gap = (e.stamp - *previous) / options.speed;
      if (gap > 0.0) sleep(std::chrono::duration<double>(gap));
    }
    previous = e.stamp;
    bus.republish(e);
  }
  return recording.size();
}

std::size_t replay(std::istream& in, Bus& bus, const ReplayOptions& options) {
  return replay(read_recording(in), bus, options);
}

}  // namespace haptiguide
