#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "haptiguide/bus.hpp"

namespace haptiguide {

// Carries envelopes over a connected stream socket using the line format of
// encode_envelope(), so out-of-process sensors and feedback devices can join a bus.
class StreamLink {
 public:
  // Takes ownership of `fd`.
  explicit StreamLink(int fd);
  ~StreamLink();
  StreamLink(const StreamLink&) = delete;
  StreamLink& operator=(const StreamLink&) = delete;

  void send(const Envelope& e);
  // Blocks for the next envelope; nullopt at end of stream. ParseError carries the
  // 1-based line number within this stream.
  std::optional<Envelope> receive();

  // Sends every envelope published on `topics` to the peer.
  void forward(Bus& bus, const std::vector<std::string>& topics);
  // Publishes each received envelope on the local bus (local sequence numbers, remote
  // stamps) until the peer closes. Returns the number of envelopes published.
  std::size_t pump_into(Bus& bus);

  // Half-close the sending side so the peer sees end of stream.
  void shutdown_send();

 private:
  int fd_;
  std::mutex send_mutex_;
  std::string buffer_;
  std::size_t lines_read_ = 0;
  std::vector<Listener> listeners_;
};

// Minimal TCP helpers (IPv4). All return owned file descriptors and throw Error on failure.
int tcp_listen(std::uint16_t port, std::uint16_t* bound_port = nullptr);
int tcp_accept(int listen_fd);
int tcp_connect(const std::string& host, std::uint16_t port);

}  // namespace haptiguide
