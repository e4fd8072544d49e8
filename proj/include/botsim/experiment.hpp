#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "botsim/config.hpp"
#include "botsim/engine.hpp"
#include "botsim/metrics.hpp"
#include "botsim/svg.hpp"

namespace botsim {

// One model/seed/baseline combination of the experiment sweep.
struct RunSpec {
  std::string name;  // directory name, e.g. "ebay_seed0" or "baseline_seed0"
  SimConfig config;
  bool baseline = false;
};

struct ExperimentSpec {
  SimConfig base;
  std::vector<trust::TrustModel> models;
  std::vector<std::uint64_t> seeds;
  bool with_baseline = false;
  std::filesystem::path output_dir;
};

struct CompletedRun {
  RunSpec spec;
  RunResult result;
};

inline std::vector<RunSpec> expand_runs(const ExperimentSpec& spec) {
  std::vector<RunSpec> runs;
  for (std::uint64_t seed : spec.seeds) {
    if (spec.with_baseline) {
      RunSpec r;
      r.name = "baseline_seed" + std::to_string(seed);
      r.config = spec.base;
      r.config.seed = seed;
      r.config.protocol.trust_enabled = false;
      r.baseline = true;
      runs.push_back(std::move(r));
    }
    for (auto model : spec.models) {
      RunSpec r;
      r.name = std::string(trust::model_name(model)) + "_seed" +
               std::to_string(seed);
      r.config = spec.base;
      r.config.seed = seed;
      r.config.protocol.trust_enabled = true;
      r.config.protocol.trust.model = model;
      r.config.protocol.trust.threshold = trust::default_threshold(model);
      runs.push_back(std::move(r));
    }
  }
  return runs;
}

namespace expdetail {

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

inline std::string opt_str(const std::optional<double>& v) {
  return v ? detail::fmt_real(*v) : std::string();
}

inline std::string summary_text(const RunSummary& s) {
  std::string out;
  out += "final_mean_sensor_in_degree: " +
         detail::fmt_real(s.final_mean_sensor_in_degree) + "\n";
  out += "baseline_final_mean_in_degree: " +
         opt_str(s.baseline_final_mean_in_degree) + "\n";
  out += "reduction_pct: " + opt_str(s.reduction_pct) + "\n";
  out += "precision: " + opt_str(s.precision) + "\n";
  out += "recall: " + opt_str(s.recall) + "\n";
  out += "total_blacklist_events: " + std::to_string(s.total_blacklist_events) +
         "\n";
  out += "messages_sent: " + std::to_string(s.messages_sent) + "\n";
  out += "runtime_wall_clock_s: " + detail::fmt_real(s.runtime_wall_clock) +
         "\n";
  return out;
}

}  // namespace expdetail

inline PlotSeries to_series(const std::string& label,
                            const std::vector<MetricsSample>& samples) {
  PlotSeries s;
  s.label = label;
  for (const auto& m : samples) {
    s.x.push_back(m.time / 86400.0);
    s.y.push_back(m.mean_sensor_in_degree);
  }
  return s;
}

// Runs the whole sweep and writes per-run metrics.csv / events.csv /
// summary.txt plus the experiment-level comparison.csv and plot.svg.
inline std::vector<CompletedRun> run_experiment(const ExperimentSpec& spec,
                                                bool quiet = true) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(spec.output_dir, ec);
  if (ec || !fs::is_directory(spec.output_dir))
    throw std::runtime_error("output dir not writable: " +
                             spec.output_dir.string());
  {  // fail before simulating if the directory cannot take files
    const auto probe = spec.output_dir / ".write_probe";
    std::ofstream test(probe);
    if (!test) throw std::runtime_error("output dir not writable: " +
                                        spec.output_dir.string());
    test.close();
    fs::remove(probe);
  }

  std::vector<CompletedRun> completed;
  for (const auto& rs : expand_runs(spec)) {
    if (!quiet)
      std::fprintf(stderr, "running %s...\n", rs.name.c_str());
    CompletedRun cr{rs, run(rs.config)};
    completed.push_back(std::move(cr));
  }

  // Pair each trust run with the baseline of the same seed, when present.
  for (auto& cr : completed) {
    if (cr.spec.baseline) continue;
    for (const auto& other : completed) {
      if (other.spec.baseline && other.spec.config.seed == cr.spec.config.seed) {
        const double base = other.result.summary.final_mean_sensor_in_degree;
        cr.result.summary.baseline_final_mean_in_degree = base;
        if (base > 0.0)
          cr.result.summary.reduction_pct =
              100.0 * (1.0 - cr.result.summary.final_mean_sensor_in_degree /
                                 base);
        break;
      }
    }
  }

  for (const auto& cr : completed) {
    const auto dir = spec.output_dir / cr.spec.name;
    fs::create_directories(dir);
    expdetail::write_file(dir / "metrics.csv",
                          metrics_to_csv(cr.result.samples, cr.result.n_sensors));
    expdetail::write_file(dir / "events.csv", events_to_csv(cr.result.events));
    expdetail::write_file(dir / "summary.txt",
                          expdetail::summary_text(cr.result.summary));
  }

  std::string comparison =
      "run,model,seed,final_mean_in_degree,baseline_final,reduction_pct,"
      "precision,recall,blacklist_events\n";
  for (const auto& cr : completed) {
    const auto& s = cr.result.summary;
    comparison += cr.spec.name + ",";
    comparison += cr.spec.baseline
                      ? "baseline"
                      : trust::model_name(cr.spec.config.protocol.trust.model);
    comparison += "," + std::to_string(cr.spec.config.seed);
    comparison += "," + detail::fmt_real(s.final_mean_sensor_in_degree);
    comparison += "," + expdetail::opt_str(s.baseline_final_mean_in_degree);
    comparison += "," + expdetail::opt_str(s.reduction_pct);
    comparison += "," + expdetail::opt_str(s.precision);
    comparison += "," + expdetail::opt_str(s.recall);
    comparison += "," + std::to_string(s.total_blacklist_events) + "\n";
  }
  expdetail::write_file(spec.output_dir / "comparison.csv", comparison);

  // One series per run; baselines first so colors stay stable.
  std::vector<PlotSeries> series;
  for (const auto& cr : completed)
    if (cr.spec.baseline)
      series.push_back(to_series(cr.spec.name, cr.result.samples));
  for (const auto& cr : completed)
    if (!cr.spec.baseline)
      series.push_back(to_series(cr.spec.name, cr.result.samples));
  expdetail::write_file(spec.output_dir / "plot.svg", render_plot(series));

  return completed;
}

}  // namespace botsim
