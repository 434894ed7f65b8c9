#include "whed/core/kvconfig.hpp"

#include "whed/core/csv.hpp"
#include "whed/core/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace whed {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto start = text.find_first_not_of(" \t,", pos);
    if (start == std::string_view::npos) break;
    auto end = text.find_first_of(" \t,", start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view token = text.substr(start, end - start);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
      throw DataError("not a finite number: '" + std::string(token) + "'");
    }
    out.push_back(v);
    pos = end;
  }
  return out;
}

RigidTransform parse_pose_text(std::string_view text) {
  const auto v = parse_number_list(text);
  if (v.size() != 7) {
    throw DataError("pose needs 7 numbers (px py pz qw qx qy qz), got " + std::to_string(v.size()));
  }
  try {
    return RigidTransform(Quaternion(v[3], v[4], v[5], v[6]), Vec3(v[0], v[1], v[2]));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid pose: ") + e.what());
  }
}

std::string format_pose_text(const RigidTransform& pose) {
  std::string out;
  for (const auto& f : csv::pose_fields(pose)) {
    if (!out.empty()) out += ' ';
    out += f;
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, const std::string& source) {
  KeyValueConfig cfg;
  cfg.source_ = source;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DataError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw DataError(source + ":" + std::to_string(line_no) + ": empty key");
    if (cfg.values_.count(key)) {
      throw DataError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    cfg.values_[key] = std::string(trim(line.substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto v = get_list(key, 1, {fallback});
  return v[0];
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::int64_t v = 0;
  const std::string& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError(source_ + ": key '" + key + "' expects an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::uint64_t v = 0;
  const std::string& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError(source_ + ": key '" + key + "' expects an unsigned integer, got '" + s + "'");
  }
  return v;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& s = it->second;
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw DataError(source_ + ": key '" + key + "' expects a boolean, got '" + s + "'");
}

std::vector<double> KeyValueConfig::get_list(const std::string& key, std::size_t expected_size,
                                             const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> v;
  try {
    v = parse_number_list(it->second);
  } catch (const DataError& e) {
    throw DataError(source_ + ": key '" + key + "': " + e.what());
  }
  if (v.size() != expected_size) {
    throw DataError(source_ + ": key '" + key + "' expects " + std::to_string(expected_size) +
                    " value(s), got " + std::to_string(v.size()));
  }
  return v;
}

Vec3 KeyValueConfig::get_vec3(const std::string& key, const Vec3& fallback) const {
  const auto v = get_list(key, 3, {fallback.x(), fallback.y(), fallback.z()});
  return {v[0], v[1], v[2]};
}

RigidTransform KeyValueConfig::get_pose(const std::string& key,
                                        const RigidTransform& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return parse_pose_text(it->second);
  } catch (const DataError& e) {
    throw DataError(source_ + ": key '" + key + "': " + e.what());
  }
}

void KeyValueConfig::require_known(std::initializer_list<std::string_view> known) const {
  for (const auto& [key, value] : values_) {
    bool found = false;
    for (auto k : known) found = found || k == key;
    if (!found) throw DataError(source_ + ": unknown key '" + key + "'");
  }
}

}  // namespace whed
