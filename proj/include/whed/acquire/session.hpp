#pragma once

#include "whed/core/kvconfig.hpp"
#include "whed/core/series.hpp"
#include "whed/core/types.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace whed::acquire {

/// In-memory streams of one collection session. Nothing touches disk until
/// persist_session is called after collection stops.
struct SessionBuffers {
  Series<AdcChannels> encoders;
  Series<RigidTransform> poses;
  Series<std::int64_t> video;
};

/// Ordered key/value pairs written to meta.txt.
using SessionMeta = std::vector<std::pair<std::string, std::string>>;

/// Writes encoders.csv, poses.csv, video.csv and meta.txt into `directory`
/// (created if missing). On failure every file written so far is removed and
/// IoError is thrown.
void persist_session(const SessionBuffers& buffers, const std::filesystem::path& directory,
                     const SessionMeta& meta = {});

/// Reads the three stream files back. Throws SchemaError / IoError.
SessionBuffers load_session(const std::filesystem::path& directory);

/// meta.txt as a config; empty when the file does not exist.
KeyValueConfig load_session_meta(const std::filesystem::path& directory);

}  // namespace whed::acquire
