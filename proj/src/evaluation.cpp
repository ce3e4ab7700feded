#include "iraloc/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "iraloc/error.hpp"

namespace iraloc::evaluation {

double scenario_time(const sim::SimConfig& config, const IraRecord& record) {
  return static_cast<double>(record.epoch_s - config.start_epoch_s) + record.frac * frac_unit_seconds(record.frac_unit);
}

std::map<std::size_t, std::vector<double>> campaign_deviations(const sim::SimConfig& config,
                                                               const sim::Scenario& scenario,
                                                               std::span<const std::size_t> n_values,
                                                               std::size_t windows, std::uint64_t seed,
                                                               unsigned workers) {
  struct Job {
    std::size_t n;
    std::size_t w;
  };
  std::vector<Job> jobs;
  for (std::size_t n : n_values) {
    for (std::size_t w = 0; w < windows; ++w) jobs.push_back({n, w});
  }
  std::vector<double> results(jobs.size());

  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t j = begin; j < jobs.size(); j += step) {
      std::mt19937_64 rng(sim::mix_seed(seed, jobs[j].n * 1000003ULL + jobs[j].w));
      const auto records = sim::sample_campaign_window(config, scenario, jobs[j].n, rng);
      const auto est = detector::estimate_position(records, scenario.receiver);
      const GeoPoint g_pos = sim::apply_spoof(scenario, scenario_time(config, est.last));
      results[j] = great_circle_km(est.i_pos, g_pos).km();
    }
  };

  workers = std::max(1u, workers);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t, workers);
    for (auto& th : pool) th.join();
  }

  std::map<std::size_t, std::vector<double>> out;
  for (std::size_t j = 0; j < jobs.size(); ++j) out[jobs[j].n].push_back(results[j]);
  return out;
}

LocErrSweep summarize_localization_error(const std::map<std::size_t, std::vector<double>>& deviations) {
  LocErrSweep sweep;
  std::vector<double> xs, ys;
  for (const auto& [n, devs] : deviations) {
    if (devs.empty()) continue;
    const double mean = std::accumulate(devs.begin(), devs.end(), 0.0) / static_cast<double>(devs.size());
    sweep.points.push_back({n, mean});
    xs.push_back(static_cast<double>(n));
    ys.push_back(mean);
  }
  sweep.fit = detector::fit_power_law(xs, ys, detector::FitSpace::LogLog);
  return sweep;
}

SpoofTrial run_detection_trial(const sim::SimConfig& config, const sim::Scenario& scenario,
                               const DetectorConfig& detector_config) {
  detector_config.validate();
  const auto stream = sim::emit_stream(config, scenario);
  detector::StreamingDetector det(detector_config, scenario.receiver);
  for (const auto& r : stream) det.push(r);
  if (!det.ready()) {
    throw Error(ErrorCode::InsufficientData, "stream holds " + std::to_string(det.size()) + " beam records, need " +
                                                 std::to_string(detector_config.window_n));
  }
  SpoofTrial trial;
  trial.stream_records = stream.size();
  trial.estimate = *det.latest();
  const double t_ref = scenario_time(config, trial.estimate.last);
  trial.g_pos = sim::apply_spoof(scenario, t_ref);
  trial.truth = scenario.truth_at(t_ref);
  trial.outcome = detector::detect(trial.estimate, trial.g_pos, detector_config);
  return trial;
}

}  // namespace iraloc::evaluation
