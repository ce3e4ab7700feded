#include <doctest.h>

#include <random>
#include <sstream>

#include "iraloc/error.hpp"
#include "iraloc/ingest.hpp"
#include "iraloc/simulator.hpp"
#include "support.hpp"

using namespace iraloc;

namespace {

const char* const kTableRows[] = {
    "1580712040 000000739 115 0  +29.81 +046.10", "1580712040 000004519 115 44 +23.06 +049.81",
    "1580712040 000005059 115 46 +25.95 +051.69", "1580712040 000005599 115 47 +26.94 +047.71",
    "1580712040 000008839 115 0  +30.29 +046.13", "1580712040 000013159 115 44 +23.56 +049.80",
    "1580712040 000013699 115 46 +26.46 +051.72",
};

struct Expected {
  std::uint32_t frac;
  int beam;
  double lat;
  double lon;
};
const Expected kTableValues[] = {{739, 0, 29.81, 46.10},   {4519, 44, 23.06, 49.81}, {5059, 46, 25.95, 51.69},
                                 {5599, 47, 26.94, 47.71}, {8839, 0, 30.29, 46.13},  {13159, 44, 23.56, 49.80},
                                 {13699, 46, 26.46, 51.72}};

ErrorCode code_of(std::string_view line) {
  try {
    parse_line(line);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("line parsed unexpectedly: " << line);
  return ErrorCode::InvalidConfig;
}

}  // namespace

TEST_CASE("table rows parse exactly") {
  for (std::size_t i = 0; i < 7; ++i) {
    const IraRecord r = parse_line(kTableRows[i]);
    CHECK(r.epoch_s == 1580712040);
    CHECK(r.frac == kTableValues[i].frac);
    CHECK(r.sat_id == 115);
    CHECK(r.beam_id == kTableValues[i].beam);
    CHECK(r.ground.lat_deg() == kTableValues[i].lat);
    CHECK(r.ground.lon_deg() == kTableValues[i].lon);
  }
  const IraRecord first = parse_line(kTableRows[0]);
  CHECK(first.is_sub_satellite());
  CHECK(parse_line("1580712040,000000739,115,0,+29.81,+046.10") == first);
  CHECK(parse_line("  1580712040\t000000739 , 115, 0, 29.81, 46.10  ") == first);
}

TEST_CASE("parse errors are classified") {
  CHECK(code_of("1580712040 000000739 115 49 +29.81 +046.10") == ErrorCode::InvalidBeamId);
  CHECK(code_of("1580712040 000000739 115 -1 +29.81 +046.10") == ErrorCode::InvalidBeamId);
  CHECK(code_of("1580712040 000000739 1 0 +29.81 +046.10") == ErrorCode::InvalidSatId);
  CHECK(code_of("1580712040 000000739 115 0 +91.00 +046.10") == ErrorCode::InvalidCoordinate);
  CHECK(code_of("1580712040 000000739 115 0 +29.81") == ErrorCode::MalformedLine);
  CHECK(code_of("1580712040 000000739 115 0 +29.81 +046.10 7") == ErrorCode::MalformedLine);
  CHECK(code_of("1580712040 0000x0739 115 0 +29.81 +046.10") == ErrorCode::MalformedLine);
  CHECK(code_of("1580712040 0000000739 115 0 +29.81 +046.10") == ErrorCode::MalformedLine);
}

TEST_CASE("stream parsing and quarantine") {
  SUBCASE("empty") {
    std::istringstream in("");
    const auto res = parse_stream(in);
    CHECK(res.records.empty());
    CHECK(res.report.lines == 0);
    CHECK(res.report.accepted == 0);
    CHECK(res.report.quarantined_total() == 0);
  }
  SUBCASE("seven table rows") {
    std::string text;
    for (auto* row : kTableRows) text += std::string(row) + "\n";
    std::istringstream in(text);
    const auto res = parse_stream(in);
    CHECK(res.records.size() == 7);
    CHECK(res.report.quarantined_total() == 0);
    CHECK(res.report.reconciles());
  }
  SUBCASE("one corrupted row") {
    std::string text;
    for (std::size_t i = 0; i < 7; ++i) text += (i == 3 ? std::string("1580712040 000005599 115 47 +26.94") : kTableRows[i]) + std::string("\n");
    std::istringstream in(text);
    const auto res = parse_stream(in);
    CHECK(res.records.size() == 6);
    CHECK(res.report.quarantined_total() == 1);
    CHECK(res.report.quarantined_by_code.at(ErrorCode::MalformedLine) == 1);
    REQUIRE(res.report.quarantined.size() == 1);
    CHECK(res.report.quarantined[0].line_no == 4);
    CHECK(res.report.reconciles());
  }
  SUBCASE("out of order input is sorted, comments counted") {
    std::istringstream in(std::string("# header\n") + kTableRows[4] + "\n\n" + kTableRows[0] + "\n");
    const auto res = parse_stream(in);
    REQUIRE(res.records.size() == 2);
    CHECK(res.records[0].frac == 739);
    CHECK(res.report.blank == 2);
    CHECK(res.report.reconciles());
  }
  CHECK_THROWS_AS(parse_file("/nonexistent/iraloc/file.txt"), Error);
}

TEST_CASE("property: format/parse round trip") {
  std::mt19937_64 rng(31);
  const std::vector<int> ids(valid_sat_ids().begin(), valid_sat_ids().end());
  std::uniform_int_distribution<int> micro_lat(-90'000'000, 90'000'000);
  std::uniform_int_distribution<int> micro_lon(-179'999'999, 180'000'000);
  for (int i = 0; i < 3000; ++i) {
    IraRecord r;
    r.epoch_s = 1'500'000'000 + static_cast<std::int64_t>(rng() % 100'000'000);
    r.frac = static_cast<std::uint32_t>(rng() % 1'000'000'000);
    r.sat_id = ids[rng() % ids.size()];
    r.beam_id = static_cast<int>(rng() % 49);
    r.ground = GeoPoint(micro_lat(rng) / 1e6, micro_lon(rng) / 1e6);
    const std::string line = format_line(r);
    CHECK(parse_line(line) == r);
    CHECK(parse_line(format_line(r, {6, ','})) == r);
  }
  // The two-decimal layout of the published excerpt survives too.
  const IraRecord t = parse_line(kTableRows[1]);
  CHECK(format_line(t, {2, ' '}) == "1580712040 000004519 115 44 +23.06 +049.81");
}

TEST_CASE("pass segmentation") {
  SUBCASE("single record") {
    const auto passes = segment_passes({test::rec_at(0, 78, 0, 10, 10)});
    REQUIRE(passes.size() == 1);
    CHECK(passes[0].duration_min == 0.0);
  }
  SUBCASE("gap above threshold splits") {
    const auto passes = segment_passes({test::rec_at(0, 78, 0, 10, 10), test::rec_at(700, 78, 0, 12, 10)});
    CHECK(passes.size() == 2);
    const auto joined = segment_passes({test::rec_at(0, 78, 0, 10, 10), test::rec_at(600, 78, 0, 12, 10)});
    CHECK(joined.size() == 1);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(segment_passes({}), Error);
    CHECK_THROWS_AS(segment_passes({test::rec_at(0, 78, 0, 10, 10), test::rec_at(1, 2, 0, 10, 10)}), Error);
  }
  SUBCASE("synthetic overhead pass of 7.59 minutes") {
    // An overhead pass spans a chord of 2 * radius at ground speed, so this
    // radius yields a 7.59 min sighting.
    sim::SimConfig cfg;
    cfg.n_sats = 1;
    cfg.n_planes = 1;
    cfg.coverage_radius_km = 7.59 * 60.0 * cfg.ground_speed_kms / 2.0;
    cfg.duration_s = 2000.0;
    const double t_mid = 1000.0;
    const sim::Scenario sc{MotionProfile(sim::propagate_one(cfg, 0, t_mid).sub_point, 0, 0), std::nullopt};
    const auto stream = sim::emit_stream(cfg, sc);
    const auto passes = segment_passes(stream);
    REQUIRE(passes.size() == 1);
    CHECK(std::abs(passes[0].duration_min - 7.59) < 0.01);
    CHECK(passes[0].records.size() == stream.size());
  }
}

TEST_CASE("property: segmentation conserves records and labels direction") {
  sim::SimConfig cfg;
  cfg.duration_s = 6 * 3600.0;
  cfg.per = 0.9;
  cfg.seed = 5;
  const sim::Scenario sc{MotionProfile(GeoPoint(20, 10), 0, 0), std::nullopt};
  const auto stream = sim::emit_stream(cfg, sc);
  REQUIRE(!stream.empty());
  for (double gap : {60.0, 600.0, 3600.0}) {
    const auto passes = segment_all_passes(stream, gap);
    std::size_t total = 0;
    for (const auto& p : passes) {
      total += p.records.size();
      for (std::size_t i = 1; i < p.records.size(); ++i) CHECK(seconds_between(p.records[i - 1], p.records[i]) > 0.0);
      std::vector<const IraRecord*> track;
      for (const auto& r : p.records) {
        if (r.is_sub_satellite()) track.push_back(&r);
      }
      if (p.direction == Direction::Upward && track.size() >= 2) {
        CHECK(track.back()->ground.lat_deg() >= track.front()->ground.lat_deg());
      }
    }
    CHECK(total == stream.size());
  }
}
