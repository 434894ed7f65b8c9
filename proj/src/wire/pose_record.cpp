#include "whed/wire/pose_record.hpp"

#include <fmt/format.h>

#include <array>
#include <charconv>
#include <cmath>

namespace whed::wire {

const char* to_string(PoseRejectReason reason) {
  switch (reason) {
    case PoseRejectReason::FieldCount:
      return "field count";
    case PoseRejectReason::NonNumeric:
      return "non-numeric field";
    case PoseRejectReason::QuaternionNorm:
      return "quaternion norm";
  }
  return "unknown";
}

PoseDecodeError::PoseDecodeError(PoseRejectReason reason, const std::string& detail)
    : DataError(std::string("pose record rejected (") + to_string(reason) + "): " + detail),
      reason_(reason) {}

std::string encode_pose_record(const PoseWireRecord& record) {
  const Vec3& p = record.pose.translation();
  const Quaternion& q = record.pose.rotation();
  return fmt::format("{} {} {} {} {} {} {} {}\n", record.t.count(), p.x(), p.y(), p.z(), q.w(),
                     q.x(), q.y(), q.z());
}

PoseWireRecord decode_pose_record(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);

  std::array<std::string_view, 8> fields;
  std::size_t count = 0;
  std::size_t pos = 0;
  while (true) {
    const auto sp = line.find(' ', pos);
    const auto field = line.substr(pos, sp == std::string_view::npos ? line.npos : sp - pos);
    if (count < fields.size()) fields[count] = field;
    ++count;
    if (sp == std::string_view::npos) break;
    pos = sp + 1;
  }
  if (count != fields.size()) {
    throw PoseDecodeError(PoseRejectReason::FieldCount,
                          "expected 8 fields, got " + std::to_string(count));
  }

  std::int64_t t_ns = 0;
  {
    const auto f = fields[0];
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), t_ns);
    if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
      throw PoseDecodeError(PoseRejectReason::NonNumeric, "t_ns '" + std::string(f) + "'");
    }
  }
  std::array<double, 7> v{};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto f = fields[i + 1];
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v[i]);
    if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v[i])) {
      throw PoseDecodeError(PoseRejectReason::NonNumeric,
                            "field " + std::to_string(i + 2) + " '" + std::string(f) + "'");
    }
  }
  const double norm = std::sqrt(v[3] * v[3] + v[4] * v[4] + v[5] * v[5] + v[6] * v[6]);
  if (std::abs(norm - 1.0) > 1e-3) {
    throw PoseDecodeError(PoseRejectReason::QuaternionNorm, fmt::format("|q| = {}", norm));
  }
  return PoseWireRecord{Timestamp{t_ns}, RigidTransform(Quaternion(v[3], v[4], v[5], v[6]),
                                                        Vec3(v[0], v[1], v[2]))};
}

std::vector<std::string> LineSplitter::feed(std::string_view chunk) {
  pending_.append(chunk);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (true) {
    const auto nl = pending_.find('\n', start);
    if (nl == std::string::npos) break;
    lines.emplace_back(pending_, start, nl - start);
    start = nl + 1;
  }
  pending_.erase(0, start);
  return lines;
}

}  // namespace whed::wire
