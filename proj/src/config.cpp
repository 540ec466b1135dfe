#include "fedmec/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace fedmec {

ExperimentConfig default_config() { return ExperimentConfig{}; }

double noise_power_w(double psd_dbm_hz, double bandwidth_hz) {
  return std::pow(10.0, psd_dbm_hz / 10.0) * 1e-3 * bandwidth_hz;
}

int state_dim(const ScenarioConfig& s) { return s.num_bs + 5; }
int action_count(const ScenarioConfig& s) { return s.num_bs + 1; }

namespace {

std::string trim(std::string_view sv) {
  const auto first = sv.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return "";
  const auto last = sv.find_last_not_of(" \t\r");
  return std::string(sv.substr(first, last - first + 1));
}

bool parse_double(const std::string& text, double& out) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') return false;
  out = v;
  return true;
}

bool parse_int(const std::string& text, int& out) {
  double v;
  if (!parse_double(text, v)) return false;
  if (v != std::floor(v) || std::abs(v) > 2e9) return false;
  out = static_cast<int>(v);
  return true;
}

bool parse_bool(const std::string& text, bool& out) {
  if (text == "true" || text == "1") {
    out = true;
    return true;
  }
  if (text == "false" || text == "0") {
    out = false;
    return true;
  }
  return false;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) items.push_back(t);
  }
  return items;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

using Setter = std::function<bool(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    const auto dbl = [](double ScenarioConfig::* field) {
      return [field](ExperimentConfig& c, const std::string& v) {
        return parse_double(v, c.scenario.*field);
      };
    };
    const auto num = [](int ScenarioConfig::* field) {
      return [field](ExperimentConfig& c, const std::string& v) {
        return parse_int(v, c.scenario.*field);
      };
    };
    const auto tdbl = [](double TrainingConfig::* field) {
      return [field](ExperimentConfig& c, const std::string& v) {
        return parse_double(v, c.training.*field);
      };
    };
    const auto tnum = [](int TrainingConfig::* field) {
      return [field](ExperimentConfig& c, const std::string& v) {
        return parse_int(v, c.training.*field);
      };
    };

    t["scenario.num_bs"] = num(&ScenarioConfig::num_bs);
    t["scenario.num_devices"] = num(&ScenarioConfig::num_devices);
    t["scenario.bandwidth_hz"] = dbl(&ScenarioConfig::bandwidth_hz);
    t["scenario.edge_freq_hz"] = dbl(&ScenarioConfig::edge_freq_hz);
    t["scenario.tx_power_w"] = dbl(&ScenarioConfig::tx_power_w);
    t["scenario.noise_psd_dbm_hz"] = dbl(&ScenarioConfig::noise_psd_dbm_hz);
    t["scenario.deadline_min_s"] = dbl(&ScenarioConfig::deadline_min_s);
    t["scenario.deadline_max_s"] = dbl(&ScenarioConfig::deadline_max_s);
    t["scenario.antenna_gain_device"] = dbl(&ScenarioConfig::antenna_gain_device);
    t["scenario.antenna_gain_bs"] = dbl(&ScenarioConfig::antenna_gain_bs);
    t["scenario.arena_m"] = dbl(&ScenarioConfig::arena_m);
    t["scenario.mobility_sigma_m"] = dbl(&ScenarioConfig::mobility_sigma_m);
    t["scenario.arrival_prob"] = dbl(&ScenarioConfig::arrival_prob);
    t["scenario.queue_cap"] = num(&ScenarioConfig::queue_cap);
    t["scenario.lambda"] = dbl(&ScenarioConfig::lambda);
    t["scenario.chip_coeff"] = dbl(&ScenarioConfig::chip_coeff);
    t["scenario.device_freq_hz"] = dbl(&ScenarioConfig::device_freq_hz);
    t["scenario.device_energy_j"] = dbl(&ScenarioConfig::device_energy_j);
    t["scenario.path_loss_exponent"] = dbl(&ScenarioConfig::path_loss_exponent);
    t["scenario.path_loss_ref_db"] = dbl(&ScenarioConfig::path_loss_ref_db);
    t["scenario.slot_s"] = dbl(&ScenarioConfig::slot_s);
    t["scenario.err_prob"] = dbl(&ScenarioConfig::err_prob);
    t["scenario.max_attempts"] = num(&ScenarioConfig::max_attempts);
    t["scenario.zero_rate_cap_s"] = dbl(&ScenarioConfig::zero_rate_cap_s);
    t["scenario.bits_min"] = dbl(&ScenarioConfig::bits_min);
    t["scenario.bits_max"] = dbl(&ScenarioConfig::bits_max);
    t["scenario.cycles_per_bit"] = dbl(&ScenarioConfig::cycles_per_bit);
    t["scenario.energy_includes_cycles"] = [](ExperimentConfig& c, const std::string& v) {
      return parse_bool(v, c.scenario.energy_includes_cycles);
    };
    t["scenario.fading_clip"] = dbl(&ScenarioConfig::fading_clip);

    t["training.learning_rate"] = tdbl(&TrainingConfig::learning_rate);
    t["training.gamma"] = tdbl(&TrainingConfig::gamma);
    t["training.epsilon_start"] = tdbl(&TrainingConfig::epsilon_start);
    t["training.epsilon_end"] = tdbl(&TrainingConfig::epsilon_end);
    t["training.epsilon_decay_frac"] = tdbl(&TrainingConfig::epsilon_decay_frac);
    t["training.batch_size"] = tnum(&TrainingConfig::batch_size);
    t["training.buffer_capacity"] = tnum(&TrainingConfig::buffer_capacity);
    t["training.target_sync_every"] = tnum(&TrainingConfig::target_sync_every);
    t["training.episodes"] = tnum(&TrainingConfig::episodes);
    t["training.steps_per_episode"] = tnum(&TrainingConfig::steps_per_episode);
    t["training.k_fraction"] = tdbl(&TrainingConfig::k_fraction);
    t["training.hidden1"] = tnum(&TrainingConfig::hidden1);
    t["training.hidden2"] = tnum(&TrainingConfig::hidden2);
    t["training.train_every"] = tnum(&TrainingConfig::train_every);
    t["training.select_window"] = tnum(&TrainingConfig::select_window);

    t["sweep.variable"] = [](ExperimentConfig& c, const std::string& v) {
      c.sweep.variable = v;
      return true;
    };
    t["sweep.values"] = [](ExperimentConfig& c, const std::string& v) {
      c.sweep.values.clear();
      for (const auto& item : split_list(v)) {
        double x;
        if (!parse_double(item, x)) return false;
        c.sweep.values.push_back(x);
      }
      return true;
    };
    t["seeds"] = [](ExperimentConfig& c, const std::string& v) {
      c.seeds.clear();
      for (const auto& item : split_list(v)) {
        double x;
        if (!parse_double(item, x) || x < 0 || x != std::floor(x)) return false;
        c.seeds.push_back(static_cast<std::uint64_t>(x));
      }
      return true;
    };
    t["schemes"] = [](ExperimentConfig& c, const std::string& v) {
      c.schemes = split_list(v);
      return true;
    };
    t["workers"] = [](ExperimentConfig& c, const std::string& v) {
      return parse_int(v, c.workers);
    };
    return t;
  }();
  return table;
}

std::string nearest_key(const std::string& key) {
  std::string best;
  std::size_t best_dist = std::string::npos;
  for (const auto& [known, _] : key_table()) {
    const std::size_t d = edit_distance(key, known);
    if (d < best_dist) {
      best_dist = d;
      best = known;
    }
  }
  return best;
}

}  // namespace

ConfigParseResult parse_config_text(std::string_view text) {
  ConfigParseResult result;
  ExperimentConfig cfg = default_config();

  std::size_t line_no = 0;
  std::stringstream stream{std::string(text)};
  std::string line;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      result.errors.push_back("line " + std::to_string(line_no) +
                              ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto& table = key_table();
    const auto it = table.find(key);
    if (it == table.end()) {
      result.errors.push_back(key + ": unknown key (closest known key: " +
                              nearest_key(key) + ")");
      continue;
    }
    if (!it->second(cfg, value)) {
      result.errors.push_back(key + ": cannot parse value '" + value + "'");
    }
  }

  for (auto& err : validate(cfg)) result.errors.push_back(std::move(err));
  if (result.errors.empty()) result.config = std::move(cfg);
  return result;
}

ConfigParseResult load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ConfigParseResult result;
    result.errors.push_back(path + ": cannot open config file");
    return result;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> errors;
  const auto require = [&errors](bool ok, const std::string& key,
                                 const std::string& why) {
    if (!ok) errors.push_back(key + ": " + why);
  };
  const ScenarioConfig& s = cfg.scenario;
  const TrainingConfig& t = cfg.training;

  require(s.num_bs >= 1, "scenario.num_bs", "must be at least 1");
  require(s.num_devices >= 1, "scenario.num_devices", "must be at least 1");
  require(s.bandwidth_hz > 0, "scenario.bandwidth_hz", "must be positive");
  require(s.edge_freq_hz > 0, "scenario.edge_freq_hz", "must be positive");
  require(s.tx_power_w > 0, "scenario.tx_power_w", "must be positive");
  require(s.deadline_min_s > 0, "scenario.deadline_min_s", "must be positive");
  require(s.deadline_max_s >= s.deadline_min_s, "scenario.deadline_max_s",
          "must be >= scenario.deadline_min_s");
  require(s.antenna_gain_device > 0, "scenario.antenna_gain_device", "must be positive");
  require(s.antenna_gain_bs > 0, "scenario.antenna_gain_bs", "must be positive");
  require(s.arena_m > 0, "scenario.arena_m", "must be positive");
  require(s.mobility_sigma_m >= 0, "scenario.mobility_sigma_m", "must be non-negative");
  require(s.arrival_prob >= 0 && s.arrival_prob <= 1, "scenario.arrival_prob",
          "must be a probability");
  require(s.queue_cap >= 1, "scenario.queue_cap", "must be at least 1");
  require(s.lambda >= 0, "scenario.lambda", "must be non-negative");
  require(s.chip_coeff > 0, "scenario.chip_coeff", "must be positive");
  require(s.device_freq_hz > 0, "scenario.device_freq_hz", "must be positive");
  require(s.device_energy_j > 0, "scenario.device_energy_j", "must be positive");
  require(s.path_loss_exponent > 0, "scenario.path_loss_exponent", "must be positive");
  require(s.slot_s > 0, "scenario.slot_s", "must be positive");
  require(s.err_prob >= 0 && s.err_prob <= 1, "scenario.err_prob",
          "must be a probability");
  require(s.max_attempts >= 1, "scenario.max_attempts", "must be at least 1");
  require(s.zero_rate_cap_s > 0, "scenario.zero_rate_cap_s", "must be positive");
  require(s.bits_min > 0, "scenario.bits_min", "must be positive");
  require(s.bits_max >= s.bits_min, "scenario.bits_max", "must be >= scenario.bits_min");
  require(s.cycles_per_bit > 0, "scenario.cycles_per_bit", "must be positive");
  require(s.fading_clip > 0, "scenario.fading_clip", "must be positive");

  require(t.learning_rate > 0, "training.learning_rate", "must be positive");
  require(t.gamma > 0 && t.gamma < 1, "training.gamma", "must be in (0, 1)");
  require(t.epsilon_start >= 0 && t.epsilon_start <= 1, "training.epsilon_start",
          "must be a probability");
  require(t.epsilon_end >= 0 && t.epsilon_end <= t.epsilon_start,
          "training.epsilon_end", "must be in [0, epsilon_start]");
  require(t.epsilon_decay_frac > 0 && t.epsilon_decay_frac <= 1,
          "training.epsilon_decay_frac", "must be in (0, 1]");
  require(t.batch_size >= 1, "training.batch_size", "must be at least 1");
  require(t.buffer_capacity >= t.batch_size, "training.buffer_capacity",
          "must hold at least one batch");
  require(t.target_sync_every >= 1, "training.target_sync_every", "must be at least 1");
  require(t.episodes >= 1, "training.episodes", "must be at least 1");
  require(t.steps_per_episode >= 1, "training.steps_per_episode", "must be at least 1");
  require(t.k_fraction > 0 && t.k_fraction <= 1, "training.k_fraction",
          "must be in (0, 1]");
  require(t.hidden1 >= 1 && t.hidden2 >= 1, "training.hidden1", "hidden sizes must be positive");
  require(t.train_every >= 1, "training.train_every", "must be at least 1");
  require(t.select_window >= 2, "training.select_window", "must be at least 2");

  const bool sweep_known = cfg.sweep.variable == "none" ||
                           cfg.sweep.variable == "f_max" ||
                           cfg.sweep.variable == "bandwidth" ||
                           cfg.sweep.variable == "devices";
  require(sweep_known, "sweep.variable",
          "must be one of none, f_max, bandwidth, devices");
  if (cfg.sweep.variable != "none") {
    require(!cfg.sweep.values.empty(), "sweep.values",
            "must list at least one value");
    for (const double v : cfg.sweep.values) {
      require(v > 0, "sweep.values", "values must be positive");
      if (cfg.sweep.variable == "devices") {
        require(v == std::floor(v), "sweep.values",
                "device counts must be integers");
      }
    }
  }

  require(!cfg.seeds.empty(), "seeds", "must list at least one seed");
  require(!cfg.schemes.empty(), "schemes", "must list at least one scheme");
  bool has_b2 = false;
  for (const auto& scheme : cfg.schemes) {
    const bool known = scheme == "fdrl" || scheme == "b1" || scheme == "b2" ||
                       scheme == "random";
    require(known, "schemes", scheme + " is not one of fdrl, b1, b2, random");
    if (scheme == "b2") has_b2 = true;
  }
  if (has_b2) {
    // the centralized scheme concatenates all device states; keep it desk-scale
    require(s.num_devices <= 40, "scenario.num_devices",
            "must be <= 40 when scheme b2 is enabled");
    if (cfg.sweep.variable == "devices") {
      for (const double v : cfg.sweep.values) {
        require(v <= 40, "sweep.values", "device sweep capped at 40 for scheme b2");
      }
    }
  }
  require(cfg.workers >= 1, "workers", "must be at least 1");
  return errors;
}

}  // namespace fedmec
