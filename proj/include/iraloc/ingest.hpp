#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "iraloc/error.hpp"
#include "iraloc/model.hpp"

namespace iraloc {

/// Parses one log line: time_s, time_frac, sat_id, beam_id, lat, lon,
/// separated by whitespace and/or commas. Signs and leading zeros accepted.
/// Throws Error with MalformedLine, InvalidSatId, InvalidBeamId or
/// InvalidCoordinate.
IraRecord parse_line(std::string_view line, FracUnit unit = FracUnit::Microseconds);

struct LineFormat {
  int decimals = 6;  // the published excerpt uses 2
  char delimiter = ' ';
};

/// Inverse of parse_line for records whose coordinates carry at most
/// `decimals` fractional digits.
std::string format_line(const IraRecord& record, const LineFormat& format = {});

struct QuarantinedLine {
  std::size_t line_no = 0;
  ErrorCode code = ErrorCode::MalformedLine;
  std::string text;
};

struct IngestReport {
  std::size_t lines = 0;
  std::size_t accepted = 0;
  std::size_t blank = 0;  // empty lines and '#' comments
  std::map<ErrorCode, std::size_t> quarantined_by_code;
  std::vector<QuarantinedLine> quarantined;

  std::size_t quarantined_total() const;
  bool reconciles() const { return accepted + blank + quarantined_total() == lines; }
};

struct IngestResult {
  std::vector<IraRecord> records;  // sorted by time
  IngestReport report;
};

IngestResult parse_stream(std::istream& in, FracUnit unit = FracUnit::Microseconds);
/// Throws Error{IoFailure} when the file cannot be opened or read.
IngestResult parse_file(const std::filesystem::path& path, FracUnit unit = FracUnit::Microseconds);

void write_stream(std::ostream& out, const std::vector<IraRecord>& records, const LineFormat& format = {});

inline constexpr double kDefaultGapThresholdS = 600.0;

/// Splits one satellite's time-sorted records into passes wherever the gap
/// between consecutive records exceeds gap_threshold_s.
/// Throws Error{EmptyInput} for no records, Error{InvalidConfig} when more
/// than one satellite is present.
std::vector<Pass> segment_passes(const std::vector<IraRecord>& records,
                                 double gap_threshold_s = kDefaultGapThresholdS);

/// Groups by satellite, then segments each. Output ordered by sat_id, then time.
std::vector<Pass> segment_all_passes(const std::vector<IraRecord>& records,
                                     double gap_threshold_s = kDefaultGapThresholdS);

}  // namespace iraloc
