#include "fedmec/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fedmec {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string render_metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out{kMetricsHeader};
  out.push_back('\n');
  for (const MetricsRow& r : rows) {
    out += r.scheme;
    out.push_back(',');
    out += r.sweep_variable;
    out.push_back(',');
    out += format_double(r.sweep_value);
    out.push_back(',');
    out += std::to_string(r.seed);
    out.push_back(',');
    out += std::to_string(r.episode);
    out.push_back(',');
    out += format_double(r.utility);
    out.push_back(',');
    out += format_double(r.latency_s);
    out.push_back(',');
    out += format_double(r.energy_j);
    out.push_back(',');
    out += format_double(r.drop_rate);
    out.push_back(',');
    out += format_double(r.deadline_rate);
    out.push_back(',');
    out += format_double(r.loss);
    out.push_back('\n');
  }
  return out;
}

std::string render_summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out{kSummaryHeader};
  out.push_back('\n');
  for (const SummaryRow& r : rows) {
    out += r.scheme;
    out.push_back(',');
    out += r.sweep_variable;
    out.push_back(',');
    out += format_double(r.sweep_value);
    out.push_back(',');
    out += format_double(r.final_utility_mean);
    out.push_back(',');
    out += format_double(r.final_utility_stderr);
    out.push_back(',');
    out += std::to_string(r.num_seeds);
    out.push_back('\n');
  }
  return out;
}

namespace {

std::size_t window_len(std::size_t n) {
  return std::max<std::size_t>(1, n / 10);
}

}  // namespace

double final_window_utility(const std::vector<EpisodeMetrics>& episodes) {
  if (episodes.empty()) throw std::invalid_argument("final_window_utility: no episodes");
  const std::size_t w = window_len(episodes.size());
  double sum = 0.0;
  for (std::size_t i = episodes.size() - w; i < episodes.size(); ++i) {
    sum += episodes[i].utility;
  }
  return sum / static_cast<double>(w);
}

double first_window_loss(const std::vector<EpisodeMetrics>& episodes) {
  if (episodes.empty()) throw std::invalid_argument("first_window_loss: no episodes");
  const std::size_t w = window_len(episodes.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < w; ++i) sum += episodes[i].loss;
  return sum / static_cast<double>(w);
}

double final_window_loss(const std::vector<EpisodeMetrics>& episodes) {
  if (episodes.empty()) throw std::invalid_argument("final_window_loss: no episodes");
  const std::size_t w = window_len(episodes.size());
  double sum = 0.0;
  for (std::size_t i = episodes.size() - w; i < episodes.size(); ++i) {
    sum += episodes[i].loss;
  }
  return sum / static_cast<double>(w);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace fedmec
