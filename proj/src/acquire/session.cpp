#include "whed/acquire/session.hpp"

#include "whed/core/csv.hpp"
#include "whed/core/error.hpp"

#include <fstream>
#include <system_error>

namespace whed::acquire {

namespace fs = std::filesystem;

namespace {

void write_meta(const fs::path& path, const SessionMeta& meta) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& [key, value] : meta) out << key << " = " << value << '\n';
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

void persist_session(const SessionBuffers& buffers, const fs::path& directory,
                     const SessionMeta& meta) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec || !fs::is_directory(directory)) {
    throw IoError("cannot create session directory " + directory.string() +
                  (ec ? ": " + ec.message() : ""));
  }

  std::vector<fs::path> written;
  auto track = [&](const fs::path& p) {
    written.push_back(p);
    return p;
  };
  try {
    csv::write_encoders(track(directory / "encoders.csv"), buffers.encoders);
    csv::write_poses(track(directory / "poses.csv"), buffers.poses);
    csv::write_video(track(directory / "video.csv"), buffers.video);
    write_meta(track(directory / "meta.txt"), meta);
  } catch (const std::exception& e) {
    for (const auto& p : written) fs::remove(p, ec);
    throw IoError(std::string("session not persisted: ") + e.what());
  }
}

SessionBuffers load_session(const fs::path& directory) {
  SessionBuffers b;
  b.encoders = csv::read_encoders(directory / "encoders.csv");
  b.poses = csv::read_poses(directory / "poses.csv");
  b.video = csv::read_video(directory / "video.csv");
  return b;
}

KeyValueConfig load_session_meta(const fs::path& directory) {
  const fs::path p = directory / "meta.txt";
  if (!fs::exists(p)) return {};
  return KeyValueConfig::load(p);
}

}  // namespace whed::acquire
