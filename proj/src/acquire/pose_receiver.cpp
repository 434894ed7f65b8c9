#include "whed/acquire/pose_receiver.hpp"

#include "whed/core/error.hpp"
#include "whed/wire/pose_record.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace whed::acquire {

namespace {

constexpr int kPollTimeoutMs = 50;

[[noreturn]] void throw_errno(const std::string& what) {
  throw IoError(what + ": " + std::strerror(errno));
}

sockaddr_in loopback(std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  return addr;
}

}  // namespace

FileDescriptor::~FileDescriptor() {
  if (fd_ >= 0) ::close(fd_);
}

FileDescriptor& FileDescriptor::operator=(FileDescriptor&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.release();
  }
  return *this;
}

PoseStreamReceiver::PoseStreamReceiver(DualRateBuffer& buffer, const SessionClock& clock,
                                       std::uint16_t port)
    : buffer_(&buffer), stamper_(clock) {
  listener_ = FileDescriptor(::socket(AF_INET, SOCK_STREAM, 0));
  if (!listener_.valid()) throw_errno("socket");
  const int one = 1;
  ::setsockopt(listener_.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr = loopback(port);
  if (::bind(listener_.get(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    throw_errno("bind 127.0.0.1:" + std::to_string(port));
  }
  if (::listen(listener_.get(), 4) != 0) throw_errno("listen");
  socklen_t len = sizeof addr;
  if (::getsockname(listener_.get(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    throw_errno("getsockname");
  }
  port_ = ntohs(addr.sin_port);
  thread_ = std::thread([this] { run(); });
}

PoseStreamReceiver::~PoseStreamReceiver() { stop(); }

void PoseStreamReceiver::stop() {
  stopping_.store(true);
  if (thread_.joinable()) thread_.join();
}

PoseStreamReceiver::Stats PoseStreamReceiver::stats() const {
  return Stats{accepted_.load(), rejected_.load(), connections_.load()};
}

void PoseStreamReceiver::run() {
  while (!stopping_.load()) {
    pollfd pfd{listener_.get(), POLLIN, 0};
    const int ready = ::poll(&pfd, 1, kPollTimeoutMs);
    if (ready <= 0) continue;
    FileDescriptor client(::accept(listener_.get(), nullptr, nullptr));
    if (!client.valid()) continue;
    ++connections_;
    serve(std::move(client));
  }
}

void PoseStreamReceiver::serve(FileDescriptor client) {
  wire::LineSplitter splitter;
  char chunk[4096];
  while (!stopping_.load()) {
    pollfd pfd{client.get(), POLLIN, 0};
    const int ready = ::poll(&pfd, 1, kPollTimeoutMs);
    if (ready <= 0) continue;
    const ssize_t n = ::recv(client.get(), chunk, sizeof chunk, 0);
    if (n <= 0) return;
    for (const auto& line : splitter.feed(std::string_view(chunk, static_cast<std::size_t>(n)))) {
      try {
        const auto record = wire::decode_pose_record(line);
        buffer_->push(record, stamper_.stamp());
        ++accepted_;
      } catch (const wire::PoseDecodeError&) {
        ++rejected_;
      }
    }
  }
}

void send_pose_lines(std::uint16_t port, std::span<const std::string> lines) {
  FileDescriptor fd(::socket(AF_INET, SOCK_STREAM, 0));
  if (!fd.valid()) throw_errno("socket");
  sockaddr_in addr = loopback(port);
  if (::connect(fd.get(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    throw_errno("connect 127.0.0.1:" + std::to_string(port));
  }
  for (const auto& line : lines) {
    std::size_t sent = 0;
    while (sent < line.size()) {
      const ssize_t n = ::send(fd.get(), line.data() + sent, line.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw_errno("send");
      }
      sent += static_cast<std::size_t>(n);
    }
  }
}

}  // namespace whed::acquire
