#include "haptiguide/stream.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

namespace haptiguide {

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
  throw Error(what + ": " + std::strerror(errno));
}

}  // namespace

StreamLink::StreamLink(int fd) : fd_(fd) {
  if (fd_ < 0) throw InvalidInput("StreamLink: invalid descriptor");
}

StreamLink::~StreamLink() {
  listeners_.clear();
  ::close(fd_);
}

void StreamLink::send(const Envelope& e) {
  const std::string line = encode_envelope(e) + '\n';
  std::lock_guard lock(send_mutex_);
  std::size_t off = 0;
  while (off < line.size()) {
    const ssize_t n = ::send(fd_, line.data() + off, line.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("StreamLink::send");
    }
    off += static_cast<std::size_t>(n);
  }
}

std::optional<Envelope> StreamLink::receive() {
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      ++lines_read_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      try {
        return decode_envelope(line);
      } catch (const SchemaError& e) {
        throw ParseError(lines_read_, e.what());
      }
    }
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("StreamLink::receive");
    }
    if (n == 0) {
      if (buffer_.empty()) return std::nullopt;
      buffer_ += '\n';  // final line without terminator
      continue;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void StreamLink::forward(Bus& bus, const std::vector<std::string>& topics) {
  for (const auto& topic : topics) {
    listeners_.push_back(bus.listen(topic, [this](const Envelope& e) { send(e); }));
  }
}

std::size_t StreamLink::pump_into(Bus& bus) {
  std::size_t count = 0;
  while (auto e = receive()) {
    bus.publish(e->topic, std::move(e->payload), e->stamp);
    ++count;
  }
  return count;
}

void StreamLink::shutdown_send() { ::shutdown(fd_, SHUT_WR); }

int tcp_listen(std::uint16_t port, std::uint16_t* bound_port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw_errno("socket");
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(fd, 8) < 0) {
    const int saved = errno;
    ::close(fd);
    errno = saved;
    throw_errno("tcp_listen");
  }
  if (bound_port) {
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    *bound_port = ntohs(addr.sin_port);
  }
  return fd;
}

int tcp_accept(int listen_fd) {
  for (;;) {
    const int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd >= 0) return fd;
    if (errno != EINTR) throw_errno("tcp_accept");
  }
}

int tcp_connect(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw InvalidInput("tcp_connect: expected an IPv4 address, got '" + host + "'");
  }
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw_errno("socket");
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    const int saved = errno;
    ::close(fd);
    errno = saved;
    throw_errno("tcp_connect");
  }
  return fd;
}

}  // namespace haptiguide
