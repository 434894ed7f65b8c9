#pragma once

#include "whed/core/rigid_transform.hpp"
#include "whed/core/series.hpp"
#include "whed/core/types.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace whed::csv {

enum class ColumnType { Integer, Real };

struct Column {
  std::string name;
  ColumnType type;
};

/// Header and per-column types of one CSV file kind.
struct Schema {
  std::string name;
  std::vector<Column> columns;

  std::string header() const;
};

const Schema& encoders_schema();
const Schema& poses_schema();
const Schema& video_schema();
const Schema& synced_schema();
/// Every schema the toolkit writes, keyed by its file-kind name.
std::span<const Schema* const> all_schemas();
const Schema* find_schema(std::string_view name);

/// Shortest text for a real value: 9 significant digits.
std::string format_real(double value);

struct Row {
  std::size_t line = 0;
  std::vector<std::int64_t> integers;  ///< filled for Integer columns
  std::vector<double> reals;           ///< filled for every column

  std::int64_t integer(std::size_t column) const { return integers[column]; }
  double real(std::size_t column) const { return reals[column]; }
};

/// Reads and validates a whole file: header must match exactly, every field
/// must parse as its column type. Throws SchemaError with line/column.
std::vector<Row> read(const std::filesystem::path& path, const Schema& schema);

/// Parses in-memory text; `source` names it in diagnostics.
std::vector<Row> parse(std::string_view text, const Schema& schema, const std::string& source);

/// Validates an existing file against a schema without keeping the rows.
void validate_file(const std::filesystem::path& path, const Schema& schema);

/// Line-oriented writer. Emits the header on construction; LF line endings.
class Writer {
 public:
  Writer(const std::filesystem::path& path, const Schema& schema);

  void write_row(std::span<const std::string> fields);
  void close();

 private:
  std::filesystem::path path_;
  std::size_t columns_;
  std::ofstream out_;
};

// Schema-level helpers shared across modules.

void write_encoders(const std::filesystem::path& path, const Series<AdcChannels>& encoders);
Series<AdcChannels> read_encoders(const std::filesystem::path& path);

void write_poses(const std::filesystem::path& path, const Series<RigidTransform>& poses);
Series<RigidTransform> read_poses(const std::filesystem::path& path);

void write_video(const std::filesystem::path& path, const Series<std::int64_t>& video);
Series<std::int64_t> read_video(const std::filesystem::path& path);

/// Raw (integer-valued) channels are printed as integers; fractional values
/// with 9 significant digits.
void write_synced(const std::filesystem::path& path, std::span<const SyncedRecord> records);
std::vector<SyncedRecord> read_synced(const std::filesystem::path& path);

/// Pose fields in poses.csv order: px,py,pz,qw,qx,qy,qz.
std::vector<std::string> pose_fields(const RigidTransform& pose);
/// Rebuilds a pose from seven consecutive real columns starting at `first`.
RigidTransform pose_from_row(const Row& row, std::size_t first, const std::string& source);

}  // namespace whed::csv
