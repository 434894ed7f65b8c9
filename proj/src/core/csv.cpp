#include "whed/core/csv.hpp"

#include "whed/core/error.hpp"

#include <fmt/format.h>

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace whed::csv {

namespace {

Schema make_schema(std::string name, std::initializer_list<std::pair<const char*, ColumnType>> cols) {
  Schema s{std::move(name), {}};
  for (const auto& [n, t] : cols) s.columns.push_back(Column{n, t});
  return s;
}

constexpr auto I = ColumnType::Integer;
constexpr auto R = ColumnType::Real;

const Schema kEncoders = make_schema(
    "encoders", {{"t_ns", I}, {"ch0", I}, {"ch1", I}, {"ch2", I}, {"ch3", I}, {"ch4", I}, {"ch5", I}});
const Schema kPoses = make_schema(
    "poses", {{"t_ns", I}, {"px", R}, {"py", R}, {"pz", R}, {"qw", R}, {"qx", R}, {"qy", R}, {"qz", R}});
const Schema kVideo = make_schema("video", {{"t_ns", I}, {"frame_idx", I}});
const Schema kSynced = make_schema(
    "synced", {{"t_ns", I}, {"frame_idx", I}, {"ch0", R}, {"ch1", R}, {"ch2", R}, {"ch3", R},
               {"ch4", R}, {"ch5", R}, {"px", R}, {"py", R}, {"pz", R}, {"qw", R}, {"qx", R},
               {"qy", R}, {"qz", R}});
const Schema kCalibration =
    make_schema("calibration", {{"channel", I}, {"open_raw", I}, {"closed_raw", I}, {"gain", R}});
const Schema kPlan = make_schema(
    "plan", {{"t_ns", I}, {"cmd0", I}, {"cmd1", I}, {"cmd2", I}, {"cmd3", I}, {"cmd4", I},
             {"cmd5", I}, {"px", R}, {"py", R}, {"pz", R}, {"qw", R}, {"qx", R}, {"qy", R},
             {"qz", R}});
const Schema kErrors = make_schema("errors", {{"t_ns", I}, {"pos_err", R}, {"ang_err", R}});
const Schema kWobble = make_schema(
    "wobble", {{"px", R}, {"py", R}, {"pz", R}, {"qw", R}, {"qx", R}, {"qy", R}, {"qz", R},
               {"res_d", R}, {"res_m", R}});

const std::array<const Schema*, 8> kAll = {&kEncoders, &kPoses,  &kVideo,  &kSynced,
                                           &kCalibration, &kPlan, &kErrors, &kWobble};

bool parse_integer(std::string_view field, std::int64_t& out) {
  if (field.empty()) return false;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_real(std::string_view field, double& out) {
  if (field.empty()) return false;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

std::string Schema::header() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i].name;
  }
  return out;
}

const Schema& encoders_schema() { return kEncoders; }
const Schema& poses_schema() { return kPoses; }
const Schema& video_schema() { return kVideo; }
const Schema& synced_schema() { return kSynced; }

std::span<const Schema* const> all_schemas() { return kAll; }

const Schema* find_schema(std::string_view name) {
  for (const Schema* s : kAll) {
    if (s->name == name) return s;
  }
  return nullptr;
}

std::string format_real(double value) { return fmt::format("{:.9g}", value); }

std::vector<Row> parse(std::string_view text, const Schema& schema, const std::string& source) {
  std::vector<Row> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;
  const std::size_t ncols = schema.columns.size();

  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (!saw_header) {
      if (line != schema.header()) {
        throw SchemaError(source, line_no, 0,
                          "expected header '" + schema.header() + "' for " + schema.name +
                              " file, found '" + std::string(line) + "'");
      }
      saw_header = true;
      continue;
    }
    if (line.empty()) throw SchemaError(source, line_no, 0, "empty line");

    Row row;
    row.line = line_no;
    row.integers.assign(ncols, 0);
    row.reals.assign(ncols, 0.0);
    std::size_t col = 0;
    std::size_t fpos = 0;
    while (true) {
      std::size_t comma = line.find(',', fpos);
      const bool last = comma == std::string_view::npos;
      if (last) comma = line.size();
      if (col >= ncols) {
        throw SchemaError(source, line_no, col + 1,
                          "too many fields (expected " + std::to_string(ncols) + ")");
      }
      const std::string_view field = line.substr(fpos, comma - fpos);
      const Column& c = schema.columns[col];
      if (c.type == ColumnType::Integer) {
        if (!parse_integer(field, row.integers[col])) {
          throw SchemaError(source, line_no, col + 1,
                            "column '" + c.name + "' expects an integer, got '" +
                                std::string(field) + "'");
        }
        row.reals[col] = static_cast<double>(row.integers[col]);
      } else if (!parse_real(field, row.reals[col])) {
        throw SchemaError(source, line_no, col + 1,
                          "column '" + c.name + "' expects a finite number, got '" +
                              std::string(field) + "'");
      }
      ++col;
      if (last) break;
      fpos = comma + 1;
    }
    if (col != ncols) {
      throw SchemaError(source, line_no, col,
                        "too few fields (expected " + std::to_string(ncols) + ", got " +
                            std::to_string(col) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (!saw_header) throw SchemaError(source, 1, 0, "missing header row");
  return rows;
}

std::vector<Row> read(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), schema, path.string());
}

void validate_file(const std::filesystem::path& path, const Schema& schema) {
  (void)read(path, schema);
}

Writer::Writer(const std::filesystem::path& path, const Schema& schema)
    : path_(path), columns_(schema.columns.size()), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot write " + path.string());
  out_ << schema.header() << '\n';
}

void Writer::write_row(std::span<const std::string> fields) {
  if (fields.size() != columns_) {
    throw std::logic_error("csv row has " + std::to_string(fields.size()) + " fields, schema has " +
                           std::to_string(columns_));
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_.put(',');
    out_ << fields[i];
  }
  out_.put('\n');
}

void Writer::close() {
  out_.flush();
  if (!out_) throw IoError("write failed for " + path_.string());
  out_.close();
}

std::vector<std::string> pose_fields(const RigidTransform& pose) {
  const Vec3& p = pose.translation();
  const Quaternion& q = pose.rotation();
  return {format_real(p.x()), format_real(p.y()), format_real(p.z()), format_real(q.w()),
          format_real(q.x()), format_real(q.y()), format_real(q.z())};
}

RigidTransform pose_from_row(const Row& row, std::size_t first, const std::string& source) {
  try {
    return RigidTransform(Quaternion(row.real(first + 3), row.real(first + 4), row.real(first + 5),
                                     row.real(first + 6)),
                          Vec3(row.real(first), row.real(first + 1), row.real(first + 2)));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(source, row.line, first + 4, e.what());
  }
}

namespace {

template <class T>
void push_checked(Series<T>& series, Timestamp t, T value, const std::string& source,
                  std::size_t line) {
  try {
    series.push_back(t, std::move(value));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(source, line, 1, e.what());
  }
}

}  // namespace

void write_encoders(const std::filesystem::path& path, const Series<AdcChannels>& encoders) {
  Writer w(path, kEncoders);
  std::vector<std::string> fields(kEncoders.columns.size());
  for (const auto& s : encoders) {
    fields[0] = std::to_string(s.t.count());
    for (std::size_t i = 0; i < kChannelCount; ++i) fields[i + 1] = std::to_string(s.value[i]);
    w.write_row(fields);
  }
  w.close();
}

Series<AdcChannels> read_encoders(const std::filesystem::path& path) {
  const std::string source = path.string();
  Series<AdcChannels> out;
  const auto rows = read(path, kEncoders);
  out.reserve(rows.size());
  for (const Row& row : rows) {
    AdcChannels ch{};
    for (std::size_t i = 0; i < kChannelCount; ++i) {
      const std::int64_t v = row.integer(i + 1);
      if (v < 0 || v > 4095) {
        throw SchemaError(source, row.line, i + 2,
                          "ADC count " + std::to_string(v) + " outside [0, 4095]");
      }
      ch[i] = static_cast<std::uint16_t>(v);
    }
    push_checked(out, Timestamp{row.integer(0)}, ch, source, row.line);
  }
  return out;
}

void write_poses(const std::filesystem::path& path, const Series<RigidTransform>& poses) {
  Writer w(path, kPoses);
  std::vector<std::string> fields;
  for (const auto& s : poses) {
    fields = pose_fields(s.value);
    fields.insert(fields.begin(), std::to_string(s.t.count()));
    w.write_row(fields);
  }
  w.close();
}

Series<RigidTransform> read_poses(const std::filesystem::path& path) {
  const std::string source = path.string();
  Series<RigidTransform> out;
  const auto rows = read(path, kPoses);
  out.reserve(rows.size());
  for (const Row& row : rows) {
    push_checked(out, Timestamp{row.integer(0)}, pose_from_row(row, 1, source), source, row.line);
  }
  return out;
}

void write_video(const std::filesystem::path& path, const Series<std::int64_t>& video) {
  Writer w(path, kVideo);
  std::array<std::string, 2> fields;
  for (const auto& s : video) {
    fields[0] = std::to_string(s.t.count());
    fields[1] = std::to_string(s.value);
    w.write_row(fields);
  }
  w.close();
}

Series<std::int64_t> read_video(const std::filesystem::path& path) {
  const std::string source = path.string();
  Series<std::int64_t> out;
  const auto rows = read(path, kVideo);
  out.reserve(rows.size());
  for (const Row& row : rows) {
    push_checked(out, Timestamp{row.integer(0)}, row.integer(1), source, row.line);
  }
  return out;
}

void write_synced(const std::filesystem::path& path, std::span<const SyncedRecord> records) {
  Writer w(path, kSynced);
  std::vector<std::string> fields;
  for (const SyncedRecord& r : records) {
    fields.clear();
    fields.push_back(std::to_string(r.t.count()));
    fields.push_back(std::to_string(r.frame_idx));
    for (double c : r.channels) fields.push_back(format_real(c));
    for (auto& f : pose_fields(r.pose)) fields.push_back(std::move(f));
    w.write_row(fields);
  }
  w.close();
}

std::vector<SyncedRecord> read_synced(const std::filesystem::path& path) {
  const std::string source = path.string();
  std::vector<SyncedRecord> out;
  const auto rows = read(path, kSynced);
  out.reserve(rows.size());
  for (const Row& row : rows) {
    SyncedRecord r;
    r.t = Timestamp{row.integer(0)};
    if (!out.empty() && r.t <= out.back().t) {
      throw SchemaError(source, row.line, 1, "t_ns must be strictly increasing");
    }
    r.frame_idx = row.integer(1);
    for (std::size_t i = 0; i < kChannelCount; ++i) r.channels[i] = row.real(i + 2);
    r.pose = pose_from_row(row, 8, source);
    out.push_back(r);
  }
  return out;
}

}  // namespace whed::csv
