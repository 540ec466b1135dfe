#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fedmec/federation.hpp"

namespace fedmec {

// metrics.csv schema, version 1. Consumers parse by header name.
inline constexpr const char* kMetricsHeader =
    "scheme,sweep_variable,sweep_value,seed,episode,utility,latency_s,energy_j,"
    "drop_rate,deadline_violation_rate,loss";

struct MetricsRow {
  std::string scheme;
  std::string sweep_variable;  // "none" when not sweeping
  double sweep_value = 0.0;
  std::uint64_t seed = 0;
  int episode = 0;
  double utility = 0.0;
  double latency_s = 0.0;
  double energy_j = 0.0;
  double drop_rate = 0.0;
  double deadline_rate = 0.0;
  double loss = 0.0;
};

// summary.csv schema, version 1.
inline constexpr const char* kSummaryHeader =
    "scheme,sweep_variable,sweep_value,final_utility_mean,final_utility_stderr,"
    "num_seeds";

struct SummaryRow {
  std::string scheme;
  std::string sweep_variable;
  double sweep_value = 0.0;
  double final_utility_mean = 0.0;
  double final_utility_stderr = 0.0;
  int num_seeds = 0;
};

std::string format_double(double v);  // deterministic %.12g

std::string render_metrics_csv(const std::vector<MetricsRow>& rows);
std::string render_summary_csv(const std::vector<SummaryRow>& rows);

// Mean utility over the trailing 10% (at least one episode).
double final_window_utility(const std::vector<EpisodeMetrics>& episodes);
double first_window_loss(const std::vector<EpisodeMetrics>& episodes);
double final_window_loss(const std::vector<EpisodeMetrics>& episodes);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace fedmec
