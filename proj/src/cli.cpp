#include "iraloc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "iraloc/analytics.hpp"
#include "iraloc/detector.hpp"
#include "iraloc/error.hpp"
#include "iraloc/evaluation.hpp"
#include "iraloc/ingest.hpp"
#include "iraloc/scenario_file.hpp"
#include "iraloc/simulator.hpp"

namespace iraloc::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string num(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

// Rounded so that summaries are stable text.
double round_to(double v, int digits = 9) {
  const double scale = std::pow(10.0, digits);
  return std::round(v * scale) / scale;
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(what, "expected comma-separated numbers, got '" + text + "'");
    }
  }
  if (expected != 0 && out.size() != expected) {
    throw CLI::ValidationError(what, "expected " + std::to_string(expected) + " values, got '" + text + "'");
  }
  return out;
}

fs::path report_dir(const std::string& flag_value, bool required) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv(kReportDirEnv); env && *env) return env;
  if (required) throw CLI::RequiredError(std::string("--report (or ") + kReportDirEnv + ")");
  return {};
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_histogram(const fs::path& path, const analytics::Histogram& h, const std::string& unit, int precision) {
  auto out = open_out(path);
  out << "bin_lo_" << unit << "\tbin_hi_" << unit << "\tcount\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out << num(h.bin_lo(i), precision) << '\t' << num(h.bin_lo(i) + h.bin_width, precision) << '\t' << h.counts[i]
        << '\n';
  }
}

Json ingest_json(const IngestReport& rep) {
  Json q = Json::object();
  for (const auto& [code, count] : rep.quarantined_by_code) q[std::string(to_string(code))] = count;
  return Json{{"lines", rep.lines},
              {"accepted", rep.accepted},
              {"blank", rep.blank},
              {"quarantined", rep.quarantined_total()},
              {"quarantined_by_class", q}};
}

// ---------------------------------------------------------------- ingest

struct IngestOpts {
  std::string input;
  std::string frac_unit = "us";
  std::string report;
  std::string normalized;
};

int cmd_ingest(const IngestOpts& o, std::ostream& out) {
  const auto result = parse_file(o.input, parse_frac_unit(o.frac_unit));
  const auto& rep = result.report;
  out << "lines=" << rep.lines << " accepted=" << rep.accepted << " blank=" << rep.blank
      << " quarantined=" << rep.quarantined_total() << '\n';
  for (const auto& [code, count] : rep.quarantined_by_code) out << "  " << to_string(code) << '=' << count << '\n';
  if (!o.normalized.empty()) {
    auto f = open_out(o.normalized);
    write_stream(f, result.records);
  }
  const fs::path dir = report_dir(o.report, false);
  if (!dir.empty()) {
    write_json(dir / "ingest_report.json", ingest_json(rep));
    auto q = open_out(dir / "quarantine.tsv");
    q << "line\tclass\ttext\n";
    for (const auto& l : rep.quarantined) q << l.line_no << '\t' << to_string(l.code) << '\t' << l.text << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOpts {
  std::string input;
  std::string report;
  std::string frac_unit = "us";
  std::string receiver;
  double gap_threshold_s = kDefaultGapThresholdS;
  double max_dt_s = std::numeric_limits<double>::infinity();
  double speed_bin = 0.05;
  double interarrival_bin = 0.1;
  double base_interarrival = analytics::kBaseInterarrivalS;
  double coverage_bin = 25.0;
  std::size_t min_pass_records = 2;
  double max_bracket_s = 20.0;
};

int cmd_analyze(const AnalyzeOpts& o, std::ostream& out) {
  const fs::path dir = report_dir(o.report, true);
  const auto ingested = parse_file(o.input, parse_frac_unit(o.frac_unit));
  const auto& records = ingested.records;
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no valid records in " + o.input);

  Json summary;
  summary["input"] = fs::path(o.input).filename().string();
  summary["ingest"] = ingest_json(ingested.report);

  const auto passes = segment_all_passes(records, o.gap_threshold_s);

  const auto speeds = analytics::ground_speeds(records, {o.gap_threshold_s, o.max_dt_s});
  const auto speed_values = analytics::speeds_kms(speeds);
  const auto speed_hist = analytics::make_histogram(speed_values, o.speed_bin);
  write_histogram(dir / "speed_hist.tsv", speed_hist, "kms", 4);
  summary["speed"] = {{"samples", speeds.size()}, {"mode_kms", round_to(speed_hist.mode())}};

  const auto ia = analytics::interarrival_stats(records, o.base_interarrival, o.interarrival_bin);
  write_histogram(dir / "interarrival_hist.tsv", ia.histogram, "s", 4);
  summary["interarrival"] = {{"samples", ia.durations.size()},
                             {"mode_s", round_to(ia.mode_s)},
                             {"log_mode_s", round_to(ia.log_mode_s)},
                             {"on_grid_fraction", round_to(ia.on_grid_fraction(1e-4))},
                             {"delivery_ratio", round_to(analytics::packet_delivery_ratio(records, o.base_interarrival))}};

  {
    auto f = open_out(dir / "passes.tsv");
    f << "sat_id\tfirst_epoch_s\tfirst_frac\trecords\ttrack_records\tdirection\tduration_min\n";
    std::size_t up = 0;
    for (const auto& p : passes) {
      up += p.direction == Direction::Upward;
      char frac[16];
      std::snprintf(frac, sizeof frac, "%09u", p.records.front().frac);
      f << p.sat_id << '\t' << p.records.front().epoch_s << '\t' << frac << '\t' << p.records.size() << '\t'
        << p.track_size() << '\t' << to_string(p.direction) << '\t' << num(p.duration_min, 4) << '\n';
    }
    summary["passes"] = {{"count", passes.size()}, {"upward", up}, {"downward", passes.size() - up}};
  }

  const auto durations = analytics::pass_durations_min(passes, o.min_pass_records);
  try {
    const auto evd = analytics::fit_evd(durations);
    summary["evd"] = {{"samples", durations.size()}, {"mu_min", round_to(evd.mu())}, {"sigma_min", round_to(evd.sigma())}};
  } catch (const Error& e) {
    summary["evd"] = {{"samples", durations.size()}, {"skipped", e.what()}};
  }

  try {
    const auto beams = analytics::beam_constellation(passes, {o.max_bracket_s});
    const auto& bc = beams.constellation;
    auto f = open_out(dir / "beams.tsv");
    f << "beam_id\tsamples\teast_km\tnorth_km\tradius_km\tring\n";
    for (int b = 1; b <= kBeamCount; ++b) {
      const auto& c = bc.centroid(b);
      if (!c) continue;
      f << b << '\t' << bc.samples[b - 1] << '\t' << num(c->east_km, 4) << '\t' << num(c->north_km, 4) << '\t'
        << num(c->norm(), 4) << '\t' << bc.ring_of_beam[b - 1] << '\n';
    }
    summary["beams"] = {{"used", beams.used},
                        {"unbracketed", beams.unbracketed},
                        {"populated", bc.populated()},
                        {"ring_radii_km",
                         {round_to(bc.ring_radii_km[0]), round_to(bc.ring_radii_km[1]), round_to(bc.ring_radii_km[2])}}};
  } catch (const Error& e) {
    summary["beams"] = {{"skipped", e.what()}};
  }

  if (!o.receiver.empty()) {
    const auto ll = parse_list(o.receiver, 2, "--receiver");
    const GeoPoint rx(ll[0], ll[1]);
    const auto cov = analytics::coverage_extent(records, rx, o.coverage_bin);
    write_histogram(dir / "coverage_hist.tsv", cov.histogram, "km", 2);
    const auto boundary = analytics::coverage_boundary(records, rx);
    auto f = open_out(dir / "coverage_boundary.tsv");
    f << "east_km\tnorth_km\n";
    for (const auto& p : boundary) f << num(p.x, 3) << '\t' << num(p.y, 3) << '\n';
    Json cj{{"max_km", round_to(cov.max_km)},
            {"hull_area_km2", round_to(cov.hull_area_km2, 3)},
            {"distance_mode_km", round_to(cov.histogram.mode())}};
    try {
      const auto fit = analytics::pratt_circle_fit(boundary);
      cj["pratt_radius_km"] = round_to(fit.radius);
    } catch (const Error& e) {
      cj["pratt_radius_km"] = nullptr;
    }
    summary["coverage"] = cj;
  }

  write_json(dir / "summary.json", summary);
  out << "records=" << records.size() << " passes=" << passes.size() << " speed_mode_kms=" << num(speed_hist.mode(), 3)
      << " interarrival_mode_s=" << num(ia.mode_s, 3) << " report=" << dir.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  std::string scenario;
  std::vector<std::string> settings;
  std::optional<double> per;
  std::optional<double> duration;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_sats;
  std::string receiver;
  std::optional<double> course;
  std::optional<double> speed;
  std::string ship_class;
  std::string spoof;
  std::string loss_model;
  bool earth_rotation = false;
  std::string output;
  std::string gnss_output;
  double gnss_step_s = 10.0;
  std::string report;
};

sim::ScenarioFile build_scenario(const SimulateOpts& o) {
  sim::ScenarioFile file;
  if (!o.scenario.empty()) file = sim::load_scenario(o.scenario);
  auto set = [&file](std::string_view key, const std::string& value) { sim::apply_setting(file, key, value); };
  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
    set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  auto fmt = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  if (o.per) set("per", fmt(*o.per));
  if (o.duration) set("duration_s", fmt(*o.duration));
  if (o.seed) set("seed", std::to_string(*o.seed));
  if (o.n_sats) set("n_sats", std::to_string(*o.n_sats));
  if (!o.loss_model.empty()) set("loss_model", o.loss_model);
  if (o.earth_rotation) set("earth_rotation", "true");
  if (!o.receiver.empty()) set("receiver", o.receiver);
  if (!o.ship_class.empty()) set("ship_class", o.ship_class);
  if (o.course) set("receiver_course_deg", fmt(*o.course));
  if (o.speed) set("receiver_speed_kmh", fmt(*o.speed));
  if (!o.spoof.empty()) {
    const auto v = parse_list(o.spoof, 3, "--spoof");
    set("spoof_start_s", fmt(v[0]));
    set("spoof_course_deg", fmt(v[1]));
    set("spoof_speed_kmh", fmt(v[2]));
  }
  file.config.validate();
  return file;
}

int cmd_simulate(const SimulateOpts& o, std::ostream& out) {
  const auto file = build_scenario(o);
  const fs::path dir = report_dir(o.report, false);
  fs::path output = o.output;
  if (output.empty()) {
    if (dir.empty()) throw CLI::RequiredError("--output (or --report)");
    output = dir / "stream.txt";
  }
  const auto stream = sim::emit_stream(file.config, file.scenario);
  {
    auto f = open_out(output);
    write_stream(f, stream);
  }
  if (!o.gnss_output.empty()) {
    if (!(o.gnss_step_s > 0.0)) throw CLI::ValidationError("--gnss-step", "must be positive");
    auto f = open_out(o.gnss_output);
    const auto steps = static_cast<long long>(std::floor(file.config.duration_s / o.gnss_step_s));
    for (long long i = 0; i <= steps; ++i) {
      const double t = static_cast<double>(i) * o.gnss_step_s;
      const GeoPoint p = sim::apply_spoof(file.scenario, t);
      f << num(static_cast<double>(file.config.start_epoch_s) + t, 3) << ' ' << num(p.lat_deg(), 6) << ' '
        << num(p.lon_deg(), 6) << '\n';
    }
  }
  if (!dir.empty()) {
    fs::create_directories(dir);
    {
      auto f = open_out(dir / "scenario.txt");
      sim::write_scenario(f, file);
    }
    std::size_t beams = 0;
    for (const auto& r : stream) beams += !r.is_sub_satellite();
    Json summary{{"records", stream.size()},
                 {"beam_records", beams},
                 {"sub_satellite_records", stream.size() - beams},
                 {"seed", file.config.seed},
                 {"per", file.config.per},
                 {"duration_s", file.config.duration_s}};
    if (!stream.empty()) summary["delivery_ratio"] = round_to(analytics::packet_delivery_ratio(stream));
    write_json(dir / "summary.json", summary);
  }
  out << "records=" << stream.size() << " output=" << output.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- detect

struct DetectOpts {
  std::string input;
  std::string frac_unit = "us";
  double threshold_km = 20.0;
  std::size_t window_n = 6100;
  std::size_t stride = 0;
  std::string motion = "0,0,0,0";
  std::string gnss_track;
  std::string gnss_pos;
  std::string report;
};

class GnssTrack {
 public:
  static GnssTrack load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    GnssTrack track;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::replace(line.begin(), line.end(), ',', ' ');
      if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t\r")] == '#') continue;
      std::istringstream ss(line);
      double t, lat, lon;
      if (!(ss >> t >> lat >> lon)) {
        throw Error(ErrorCode::MalformedLine, path.string() + ":" + std::to_string(line_no));
      }
      track.samples_.push_back({t, GeoPoint(lat, lon)});
    }
    if (track.samples_.empty()) throw Error(ErrorCode::EmptyInput, "empty GNSS track " + path.string());
    std::stable_sort(track.samples_.begin(), track.samples_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    return track;
  }

  // Linear in time; clamped to the first/last fix outside the track.
  GeoPoint at(double t) const {
    if (t <= samples_.front().first) return samples_.front().second;
    if (t >= samples_.back().first) return samples_.back().second;
    const auto hi = std::upper_bound(samples_.begin(), samples_.end(), t,
                                     [](double v, const auto& s) { return v < s.first; });
    const auto lo = hi - 1;
    const double f = (t - lo->first) / (hi->first - lo->first);
    const GeoPoint& a = lo->second;
    const GeoPoint& b = hi->second;
    return GeoPoint(a.lat_deg() + f * (b.lat_deg() - a.lat_deg()),
                    a.lon_deg() + f * normalize_lon(b.lon_deg() - a.lon_deg()));
  }

 private:
  std::vector<std::pair<double, GeoPoint>> samples_;
};

int cmd_detect(const DetectOpts& o, std::ostream& out) {
  if (o.gnss_track.empty() == o.gnss_pos.empty()) {
    throw CLI::ValidationError("--gnss-track/--gnss-pos", "exactly one GNSS source is required");
  }
  DetectorConfig config;
  config.threshold_km = o.threshold_km;
  config.window_n = o.window_n;
  config.validate();
  const auto m = parse_list(o.motion, 4, "--motion");
  const MotionProfile motion(GeoPoint(m[0], m[1]), m[2], m[3]);
  std::optional<GnssTrack> track;
  std::optional<GeoPoint> fixed;
  if (!o.gnss_track.empty()) {
    track = GnssTrack::load(o.gnss_track);
  } else {
    const auto ll = parse_list(o.gnss_pos, 2, "--gnss-pos");
    fixed = GeoPoint(ll[0], ll[1]);
  }

  const auto ingested = parse_file(o.input, parse_frac_unit(o.frac_unit));
  const std::size_t stride = o.stride == 0 ? config.window_n : o.stride;

  detector::StreamingDetector det(config, motion);
  struct Row {
    detector::PositionEstimate est;
    GeoPoint g_pos;
    detector::DetectionOutcome outcome;
  };
  std::vector<Row> rows;
  std::size_t since_last = 0;
  for (const auto& r : ingested.records) {
    if (r.is_sub_satellite()) continue;
    det.push(r);
    ++since_last;
    if (!det.ready() || (since_last < stride && !rows.empty()) || (rows.empty() && since_last < config.window_n)) continue;
    since_last = 0;
    const auto est = *det.latest();
    const GeoPoint g = track ? track->at(est.last.time_s()) : *fixed;
    rows.push_back({est, g, detector::detect(est, g, config)});
  }
  if (rows.empty()) {
    throw Error(ErrorCode::InsufficientData, "input holds " + std::to_string(det.size()) + " beam records, window needs " +
                                                 std::to_string(config.window_n));
  }

  std::size_t alarms = 0;
  for (const auto& row : rows) alarms += row.outcome.alarm;
  const fs::path dir = report_dir(o.report, false);
  if (!dir.empty()) {
    auto f = open_out(dir / "detections.tsv");
    f << "window\tfirst_epoch_s\tlast_epoch_s\tn_used\ti_lat\ti_lon\tg_lat\tg_lon\tdeviation_km\tthreshold_km\talarm\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      f << i << '\t' << num(row.est.first.time_s(), 3) << '\t' << num(row.est.last.time_s(), 3) << '\t'
        << row.est.n_used << '\t' << num(row.est.i_pos.lat_deg()) << '\t' << num(row.est.i_pos.lon_deg()) << '\t'
        << num(row.g_pos.lat_deg()) << '\t' << num(row.g_pos.lon_deg()) << '\t' << num(row.outcome.deviation_km, 3)
        << '\t' << num(config.threshold_km, 3) << '\t' << (row.outcome.alarm ? 1 : 0) << '\n';
    }
    write_json(dir / "summary.json", Json{{"windows", rows.size()},
                                          {"alarms", alarms},
                                          {"threshold_km", config.threshold_km},
                                          {"window_n", config.window_n},
                                          {"last_deviation_km", round_to(rows.back().outcome.deviation_km)}});
  }
  out << "windows=" << rows.size() << " alarms=" << alarms
      << " last_deviation_km=" << num(rows.back().outcome.deviation_km, 3)
      << (rows.back().outcome.alarm ? " ALARM" : "") << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOpts {
  std::string thresholds = "10,15,20";
  std::string n_values = "10,30,100,300,1000,3000,6100,10000";
  std::size_t windows = 100;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  double campaign_days = 365.0;
  std::string receiver;
  std::string scenario;
  std::string report;
};

int cmd_evaluate(const EvaluateOpts& o, std::ostream& out) {
  const fs::path dir = report_dir(o.report, true);
  sim::ScenarioFile file;
  if (!o.scenario.empty()) file = sim::load_scenario(o.scenario);
  file.config.earth_rotation = true;
  file.config.duration_s = o.campaign_days * 86400.0;
  file.config.per = 0.0;  // subsampling makes loss irrelevant
  file.scenario.spoof.reset();
  if (!o.receiver.empty()) {
    const auto ll = parse_list(o.receiver, 2, "--receiver");
    file.scenario.receiver = MotionProfile(GeoPoint(ll[0], ll[1]), 0.0, 0.0);
  }
  file.config.validate();

  const auto thresholds = parse_list(o.thresholds, 0, "--thresholds");
  std::vector<std::size_t> ns;
  for (double v : parse_list(o.n_values, 0, "--n-values")) {
    if (!(v >= 1.0) || v != std::floor(v)) throw CLI::ValidationError("--n-values", "counts must be positive integers");
    ns.push_back(static_cast<std::size_t>(v));
  }
  if (o.windows < 100) {
    throw Error(ErrorCode::InsufficientWindows, "at least 100 windows per cell are required, got " +
                                                    std::to_string(o.windows));
  }
  const unsigned workers = o.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.workers;

  const auto devs = evaluation::campaign_deviations(file.config, file.scenario, ns, o.windows, o.seed, workers);
  const auto cells = detector::evaluate_fp_deviations(devs, thresholds);
  const auto fp_fit = detector::fit_fp_table(cells);
  const auto sweep = evaluation::summarize_localization_error(devs);

  {
    auto f = open_out(dir / "fp.tsv");
    f << "n\tthreshold_km\twindows\talarms\trate\tmean_error_km\n";
    for (const auto& c : cells) {
      f << c.n << '\t' << num(c.threshold_km, 3) << '\t' << c.windows << '\t' << c.alarms << '\t' << num(c.rate())
        << '\t' << num(c.mean_error_km, 4) << '\n';
    }
  }
  {
    auto f = open_out(dir / "fp_fit.tsv");
    f << "threshold_km\tm\tq\n";
    for (const auto& [thr, c] : fp_fit) f << num(thr, 3) << '\t' << num(c.m, 10) << '\t' << num(c.q, 6) << '\n';
  }
  {
    auto f = open_out(dir / "loc_err.tsv");
    f << "n\tmean_error_km\n";
    for (const auto& p : sweep.points) f << p.n << '\t' << num(p.mean_error_km, 4) << '\n';
  }
  Json fits = Json::object();
  for (const auto& [thr, c] : fp_fit) fits[num(thr, 1)] = {{"m", c.m}, {"q", round_to(c.q)}};
  write_json(dir / "summary.json",
             Json{{"windows_per_cell", o.windows},
                  {"seed", o.seed},
                  {"campaign_days", o.campaign_days},
                  {"loc_err_fit", {{"m", round_to(sweep.fit.m)}, {"q", round_to(sweep.fit.q)}}},
                  {"loc_err_at_6100_km", round_to(detector::loc_err_model(6100.0, sweep.fit))},
                  {"fp_fit", fits}});
  out << "loc_err m=" << num(sweep.fit.m, 4) << " q=" << num(sweep.fit.q, 4)
      << " err@6100=" << num(detector::loc_err_model(6100.0, sweep.fit), 2) << "km report=" << dir.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- wiring

struct AllOpts {
  IngestOpts ingest;
  AnalyzeOpts analyze;
  SimulateOpts simulate;
  DetectOpts detect;
  EvaluateOpts evaluate;
};

std::unique_ptr<CLI::App> make_app(AllOpts& o) {
  auto app = std::make_unique<CLI::App>("Iridium Ring Alert analytics, simulation and GNSS position verification", "iraloc");
  app->require_subcommand(1);

  auto* ing = app->add_subcommand("ingest", "Parse and validate an IRA log, reporting quarantined lines");
  ing->add_option("--input", o.ingest.input, "IRA log file (time_s frac sat beam lat lon)")->required();
  ing->add_option("--frac-unit", o.ingest.frac_unit, "Unit of the sub-second column: us, tenus or ns")
      ->check(CLI::IsMember({"us", "tenus", "ns"}));
  ing->add_option("--report", o.ingest.report, "Directory for ingest_report.json and quarantine.tsv");
  ing->add_option("--normalized", o.ingest.normalized, "Write accepted records, time-sorted, to this file");

  auto* ana = app->add_subcommand("analyze", "Constellation statistics from an IRA log");
  ana->add_option("--input", o.analyze.input, "IRA log file")->required();
  ana->add_option("--report", o.analyze.report, "Report directory (default from IRALOC_REPORT_DIR)");
  ana->add_option("--frac-unit", o.analyze.frac_unit, "Unit of the sub-second column: us, tenus or ns")
      ->check(CLI::IsMember({"us", "tenus", "ns"}));
  ana->add_option("--receiver", o.analyze.receiver, "Receiver position lat,lon; enables coverage analysis");
  ana->add_option("--gap-threshold-s", o.analyze.gap_threshold_s, "Gap that splits two passes, seconds");
  ana->add_option("--max-dt-s", o.analyze.max_dt_s, "Drop speed samples spanning more than this many seconds");
  ana->add_option("--speed-bin", o.analyze.speed_bin, "Speed histogram bin width, km/s");
  ana->add_option("--interarrival-bin", o.analyze.interarrival_bin, "Interarrival histogram bin width, seconds");
  ana->add_option("--base-interarrival", o.analyze.base_interarrival, "Aggregate IRA slot, seconds");
  ana->add_option("--coverage-bin", o.analyze.coverage_bin, "Receiver distance histogram bin width, km");
  ana->add_option("--min-pass-records", o.analyze.min_pass_records, "Minimum records for a pass to enter the EVD fit");
  ana->add_option("--max-bracket-s", o.analyze.max_bracket_s, "Longest track bracket used to place a beam, seconds");

  auto* sim = app->add_subcommand("simulate", "Generate a synthetic IRA stream");
  sim->add_option("--scenario", o.simulate.scenario, "Scenario file (key = value lines)");
  sim->add_option("--set", o.simulate.settings, "Override one scenario key, key=value (repeatable)");
  sim->add_option("--per", o.simulate.per, "Packet error rate in [0, 1)");
  sim->add_option("--duration", o.simulate.duration, "Simulated duration, seconds");
  sim->add_option("--seed", o.simulate.seed, "Random seed");
  sim->add_option("--n-sats", o.simulate.n_sats, "Number of satellites (1-66)");
  sim->add_option("--receiver", o.simulate.receiver, "Receiver start position lat,lon");
  sim->add_option("--course", o.simulate.course, "Receiver course, degrees clockwise from north");
  sim->add_option("--speed-kmh", o.simulate.speed, "Receiver speed, km/h");
  sim->add_option("--ship-class", o.simulate.ship_class, "Ship class preset S1-S5 (sets the speed to the class midpoint)");
  sim->add_option("--spoof", o.simulate.spoof, "GNSS spoof start_s,course_deg,speed_kmh");
  sim->add_option("--loss-model", o.simulate.loss_model, "bernoulli or gilbert_elliott")
      ->check(CLI::IsMember({"bernoulli", "gilbert_elliott"}));
  sim->add_flag("--earth-rotation", o.simulate.earth_rotation, "Let ground tracks drift with Earth rotation");
  sim->add_option("--output", o.simulate.output, "Stream output file (default <report>/stream.txt)");
  sim->add_option("--gnss-output", o.simulate.gnss_output, "Also write the GNSS-reported track (epoch lat lon)");
  sim->add_option("--gnss-step", o.simulate.gnss_step_s, "GNSS track sampling step, seconds");
  sim->add_option("--report", o.simulate.report, "Directory for summary.json and the effective scenario");

  auto* det = app->add_subcommand("detect", "Centroid position check of a GNSS track against an IRA stream");
  det->add_option("--input", o.detect.input, "IRA log file")->required();
  det->add_option("--frac-unit", o.detect.frac_unit, "Unit of the sub-second column: us, tenus or ns")
      ->check(CLI::IsMember({"us", "tenus", "ns"}));
  det->add_option("--threshold-km", o.detect.threshold_km, "Alarm when |I_pos - G_pos| exceeds this, km");
  det->add_option("--window-n", o.detect.window_n, "Beam records per position estimate");
  det->add_option("--stride", o.detect.stride, "Beam records between evaluations (default: window size)");
  det->add_option("--motion", o.detect.motion, "Receiver motion lat,lon,course_deg,speed_kmh for compensation");
  det->add_option("--gnss-track", o.detect.gnss_track, "GNSS track file (epoch_s lat lon per line)");
  det->add_option("--gnss-pos", o.detect.gnss_pos, "Fixed GNSS position lat,lon");
  det->add_option("--report", o.detect.report, "Directory for detections.tsv and summary.json");

  auto* ev = app->add_subcommand("evaluate", "Monte Carlo localization error and false-positive evaluation");
  ev->add_option("--thresholds", o.evaluate.thresholds, "Comma-separated alarm thresholds, km");
  ev->add_option("--n-values", o.evaluate.n_values, "Comma-separated window sizes (messages)");
  ev->add_option("--windows", o.evaluate.windows, "Independent windows per window size (>= 100)");
  ev->add_option("--seed", o.evaluate.seed, "Random seed");
  ev->add_option("--workers", o.evaluate.workers, "Worker threads (0 = hardware concurrency)");
  ev->add_option("--campaign-days", o.evaluate.campaign_days, "Length of the sampled campaign, days");
  ev->add_option("--receiver", o.evaluate.receiver, "Receiver position lat,lon");
  ev->add_option("--scenario", o.evaluate.scenario, "Scenario file for the constellation settings");
  ev->add_option("--report", o.evaluate.report, "Report directory (default from IRALOC_REPORT_DIR)");
  return app;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  AllOpts opts;
  auto app = make_app(opts);
  std::vector<const char*> argv{"iraloc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app->parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app->help("", CLI::AppFormatMode::Normal);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // Subcommand --help is reported as a success with its own text.
      for (auto* sub : app->get_subcommands()) out << sub->help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (app->got_subcommand("ingest")) return cmd_ingest(opts.ingest, out);
    if (app->got_subcommand("analyze")) return cmd_analyze(opts.analyze, out);
    if (app->got_subcommand("simulate")) return cmd_simulate(opts.simulate, out);
    if (app->got_subcommand("detect")) return cmd_detect(opts.detect, out);
    if (app->got_subcommand("evaluate")) return cmd_evaluate(opts.evaluate, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

std::map<std::string, std::vector<std::pair<std::string, std::string>>> flag_catalog() {
  AllOpts opts;
  auto app = make_app(opts);
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> out;
  for (auto* sub : app->get_subcommands({})) {
    auto& flags = out[sub->get_name()];
    for (const auto* opt : sub->get_options()) {
      if (opt->get_name() == "--help") continue;
      flags.emplace_back(opt->get_name(), opt->get_description());
    }
  }
  return out;
}

}  // namespace iraloc::cli
