#pragma once

#include "whed/acquire/clock.hpp"
#include "whed/acquire/dual_rate_buffer.hpp"

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <thread>

namespace whed::acquire {

/// Owns a POSIX file descriptor.
class FileDescriptor {
 public:
  FileDescriptor() = default;
  explicit FileDescriptor(int fd) : fd_(fd) {}
  ~FileDescriptor();
  FileDescriptor(FileDescriptor&& other) noexcept : fd_(other.release()) {}
  FileDescriptor& operator=(FileDescriptor&& other) noexcept;
  FileDescriptor(const FileDescriptor&) = delete;
  FileDescriptor& operator=(const FileDescriptor&) = delete;

  int get() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release() {
    const int fd = fd_;
    fd_ = -1;
    return fd;
  }

 private:
  int fd_ = -1;
};

/// TCP listener on 127.0.0.1 that feeds newline-delimited pose records into
/// a DualRateBuffer from a dedicated receive thread.
class PoseStreamReceiver {
 public:
  struct Stats {
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    std::uint64_t connections = 0;
  };

  /// port 0 picks an ephemeral port; see port().
  PoseStreamReceiver(DualRateBuffer& buffer, const SessionClock& clock, std::uint16_t port = 0);
  ~PoseStreamReceiver();
  PoseStreamReceiver(const PoseStreamReceiver&) = delete;
  PoseStreamReceiver& operator=(const PoseStreamReceiver&) = delete;

  std::uint16_t port() const { return port_; }
  Stats stats() const;
  void stop();

 private:
  void run();
  void serve(FileDescriptor client);

  DualRateBuffer* buffer_;
  ReceiptStamper stamper_;
  FileDescriptor listener_;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> accepted_{0};
  std::atomic<std::uint64_t> rejected_{0};
  std::atomic<std::uint64_t> connections_{0};
  std::thread thread_;
};

/// Client side: connects to 127.0.0.1:port and writes the lines verbatim.
void send_pose_lines(std::uint16_t port, std::span<const std::string> lines);

}  // namespace whed::acquire
