#include "iraloc/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace iraloc {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r' || c == '\n'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::string_view strip_plus(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  return field;
}

template <typename T>
T parse_number(std::string_view field, std::string_view what) {
  std::string_view digits = strip_plus(field);
  T value{};
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw Error(ErrorCode::MalformedLine, "bad " + std::string(what) + " '" + std::string(field) + "'");
  }
  return value;
}

bool is_blank_or_comment(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t' && c != '\r' && c != ',') return false;
  }
  return true;
}

}  // namespace

IraRecord parse_line(std::string_view line, FracUnit unit) {
  const auto fields = split_fields(line);
  if (fields.size() != 6) {
    throw Error(ErrorCode::MalformedLine, "expected 6 fields, got " + std::to_string(fields.size()));
  }
  IraRecord r;
  r.epoch_s = parse_number<std::int64_t>(fields[0], "time");
  if (fields[1].size() > 9) throw Error(ErrorCode::MalformedLine, "time fraction wider than 9 digits");
  r.frac = parse_number<std::uint32_t>(fields[1], "time fraction");
  r.frac_unit = unit;
  r.sat_id = parse_number<int>(fields[2], "satellite id");
  r.beam_id = parse_number<int>(fields[3], "beam id");
  const double lat = parse_number<double>(fields[4], "latitude");
  const double lon = parse_number<double>(fields[5], "longitude");
  if (!is_valid_sat_id(r.sat_id)) throw Error(ErrorCode::InvalidSatId, std::to_string(r.sat_id));
  if (r.beam_id < 0 || r.beam_id > kBeamCount) throw Error(ErrorCode::InvalidBeamId, std::to_string(r.beam_id));
  if (std::abs(lon) > 360.0) throw Error(ErrorCode::InvalidCoordinate, "longitude " + std::string(fields[5]));
  r.ground = GeoPoint(lat, lon);
  return r;
}

std::string format_line(const IraRecord& record, const LineFormat& format) {
  char buf[160];
  const char d = format.delimiter;
  std::snprintf(buf, sizeof buf, "%lld%c%09u%c%d%c%d%c%+.*f%c%+0*.*f", static_cast<long long>(record.epoch_s), d,
                record.frac, d, record.sat_id, d, record.beam_id, d, format.decimals, record.ground.lat_deg(), d,
                format.decimals + 5, format.decimals, record.ground.lon_deg());
  return buf;
}

std::size_t IngestReport::quarantined_total() const {
  std::size_t total = 0;
  for (const auto& [code, count] : quarantined_by_code) total += count;
  return total;
}

IngestResult parse_stream(std::istream& in, FracUnit unit) {
  IngestResult result;
  std::string line;
  while (std::getline(in, line)) {
    auto& rep = result.report;
    ++rep.lines;
    if (is_blank_or_comment(line)) {
      ++rep.blank;
      continue;
    }
    try {
      result.records.push_back(parse_line(line, unit));
      ++rep.accepted;
    } catch (const Error& e) {
      ++rep.quarantined_by_code[e.code()];
      rep.quarantined.push_back({rep.lines, e.code(), line});
    }
  }
  if (in.bad()) throw Error(ErrorCode::IoFailure, "read error");
  std::stable_sort(result.records.begin(), result.records.end(), earlier);
  return result;
}

IngestResult parse_file(const std::filesystem::path& path, FracUnit unit) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return parse_stream(in, unit);
}

void write_stream(std::ostream& out, const std::vector<IraRecord>& records, const LineFormat& format) {
  for (const auto& r : records) out << format_line(r, format) << '\n';
  if (!out) throw Error(ErrorCode::IoFailure, "write error");
}

std::vector<Pass> segment_passes(const std::vector<IraRecord>& records, double gap_threshold_s) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records to segment");
  const int sat = records.front().sat_id;
  if (std::any_of(records.begin(), records.end(), [sat](const IraRecord& r) { return r.sat_id != sat; })) {
    throw Error(ErrorCode::InvalidConfig, "segment_passes expects a single satellite");
  }
  std::vector<IraRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(), earlier);

  std::vector<Pass> passes;
  auto close = [&passes](Pass& p) {
    std::vector<const IraRecord*> track;
    for (const auto& r : p.records) {
      if (r.is_sub_satellite()) track.push_back(&r);
    }
    if (track.size() < 2) {
      track.clear();
      for (const auto& r : p.records) track.push_back(&r);
    }
    p.direction = direction_from_track(track.front()->ground.lat_deg(), track.back()->ground.lat_deg());
    p.duration_min = seconds_between(p.records.front(), p.records.back()) / 60.0;
    passes.push_back(std::move(p));
  };

  Pass current;
  current.sat_id = sat;
  for (const auto& r : sorted) {
    if (!current.records.empty() && seconds_between(current.records.back(), r) > gap_threshold_s) {
      close(current);
      current = Pass{};
      current.sat_id = sat;
    }
    current.records.push_back(r);
  }
  close(current);
  return passes;
}

std::vector<Pass> segment_all_passes(const std::vector<IraRecord>& records, double gap_threshold_s) {
  std::map<int, std::vector<IraRecord>> by_sat;
  for (const auto& r : records) by_sat[r.sat_id].push_back(r);
  std::vector<Pass> all;
  for (auto& [sat, recs] : by_sat) {
    auto passes = segment_passes(recs, gap_threshold_s);
    all.insert(all.end(), std::make_move_iterator(passes.begin()), std::make_move_iterator(passes.end()));
  }
  return all;
}

}  // namespace iraloc
