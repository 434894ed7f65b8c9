#pragma once

#include "whed/core/error.hpp"
#include "whed/core/rigid_transform.hpp"
#include "whed/core/time.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace whed::wire {

/// One AR pose sample as sent by the phone. t is the device clock.
struct PoseWireRecord {
  Timestamp t{};
  RigidTransform pose;
};

enum class PoseRejectReason { FieldCount, NonNumeric, QuaternionNorm };

const char* to_string(PoseRejectReason reason);

class PoseDecodeError : public DataError {
 public:
  PoseDecodeError(PoseRejectReason reason, const std::string& detail);
  PoseRejectReason reason() const noexcept { return reason_; }

 private:
  PoseRejectReason reason_;
};

/// `t_ns px py pz qw qx qy qz\n`, single spaces, shortest round-trip floats.
std::string encode_pose_record(const PoseWireRecord& record);

/// Accepts the line with or without its trailing newline. Rejects wrong field
/// counts, non-numeric fields and quaternions more than 1e-3 from unit norm;
/// accepted quaternions are renormalized.
PoseWireRecord decode_pose_record(std::string_view line);

/// Reassembles newline-delimited records from arbitrary byte-stream chunks.
class LineSplitter {
 public:
  std::vector<std::string> feed(std::string_view chunk);
  std::size_t pending_bytes() const { return pending_.size(); }

 private:
  std::string pending_;
};

}  // namespace whed::wire
