#pragma once

#include "whed/core/quaternion.hpp"
#include "whed/core/rigid_transform.hpp"

#include <filesystem>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace whed {

/// Flat `key = value` text configuration. '#' starts a comment; list values
/// are separated by spaces and/or commas.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::string_view text, const std::string& source = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key, std::size_t expected_size,
                               const std::vector<double>& fallback) const;
  Vec3 get_vec3(const std::string& key, const Vec3& fallback) const;
  /// Seven numbers: px py pz qw qx qy qz.
  RigidTransform get_pose(const std::string& key, const RigidTransform& fallback) const;

  /// Throws DataError naming the first key not in `known`.
  void require_known(std::initializer_list<std::string_view> known) const;

  const std::map<std::string, std::string>& entries() const { return values_; }
  std::string source() const { return source_; }

 private:
  std::map<std::string, std::string> values_;
  std::string source_ = "<config>";
};

/// Parses "px py pz qw qx qy qz" (spaces or commas). Throws DataError.
RigidTransform parse_pose_text(std::string_view text);
std::string format_pose_text(const RigidTransform& pose);

/// Splits on spaces/commas and parses each token as a double. Throws DataError.
std::vector<double> parse_number_list(std::string_view text);

}  // namespace whed
