#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "botsim/engine.hpp"

namespace botsim {

class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& key, int line, const std::string& what)
      : std::runtime_error("config error at line " + std::to_string(line) +
                           ", key '" + key + "': " + what) {}
};

namespace cfgdetail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline double parse_real(const std::string& key, int line,
                         const std::string& v) {
  try {
    std::size_t pos = 0;
    const double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return r;
  } catch (...) {
    throw ConfigError(key, line, "not a number: '" + v + "'");
  }
}

inline std::uint64_t parse_count(const std::string& key, int line,
                                 const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long r = std::stoll(v, &pos);
    if (pos != v.size() || r < 0) throw std::invalid_argument("");
    return static_cast<std::uint64_t>(r);
  } catch (...) {
    throw ConfigError(key, line, "not a non-negative integer: '" + v + "'");
  }
}

// Durations accept unit suffixes s/m/h/d; a bare number means seconds.
inline double parse_duration(const std::string& key, int line,
                             const std::string& v) {
  if (v.empty()) throw ConfigError(key, line, "empty duration");
  double mult = 1.0;
  std::string num = v;
  switch (v.back()) {
    case 's': mult = 1.0; num = v.substr(0, v.size() - 1); break;
    case 'm': mult = 60.0; num = v.substr(0, v.size() - 1); break;
    case 'h': mult = 3600.0; num = v.substr(0, v.size() - 1); break;
    case 'd': mult = 86400.0; num = v.substr(0, v.size() - 1); break;
    default: break;
  }
  const double value = parse_real(key, line, trim(num)) * mult;
  if (value <= 0) throw ConfigError(key, line, "duration must be > 0");
  return value;
}

inline double parse_probability(const std::string& key, int line,
                                const std::string& v) {
  const double p = parse_real(key, line, v);
  if (p < 0.0 || p > 1.0)
    throw ConfigError(key, line, "must be in [0,1]");
  return p;
}

inline bool parse_bool(const std::string& key, int line, const std::string& v) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw ConfigError(key, line, "not a boolean: '" + v + "'");
}

}  // namespace cfgdetail

inline trust::TrustModel parse_model_name(const std::string& v,
                                          const std::string& key = "model",
                                          int line = 0) {
  if (v == "ebay") return trust::TrustModel::Ebay;
  if (v == "beta") return trust::TrustModel::Beta;
  if (v == "sl" || v == "subjective_logic") return trust::TrustModel::SubjectiveLogic;
  if (v == "ct" || v == "certain_trust") return trust::TrustModel::CertainTrust;
  throw ConfigError(key, line, "unknown trust model: '" + v + "'");
}

inline SensorStrategy parse_strategy_name(const std::string& v,
                                          const std::string& key = "strategy",
                                          int line = 0) {
  if (v == "echo") return SensorStrategy::EchoSameId;
  if (v == "silent") return SensorStrategy::Silent;
  if (v == "corrupt") return SensorStrategy::CorruptPayload;
  throw ConfigError(key, line, "unknown sensor strategy: '" + v + "'");
}

// Flat key = value document; '#' starts a comment; unknown keys are errors.
// An empty document yields the shipped defaults.
inline SimConfig parse_config(const std::string& text) {
  using namespace cfgdetail;
  SimConfig cfg;
  bool threshold_set = false;
  double threshold_value = 0.0;

  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    std::string s = raw;
    if (auto hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(s, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (val.empty()) throw ConfigError(key, line, "empty value");

    if (key == "n_bots") {
      cfg.n_bots = static_cast<std::uint32_t>(parse_count(key, line, val));
      if (cfg.n_bots < 2) throw ConfigError(key, line, "must be >= 2");
    } else if (key == "n_sensors") {
      cfg.n_sensors = static_cast<std::uint32_t>(parse_count(key, line, val));
    } else if (key == "sensor_strategy") {
      cfg.sensor_strategy = parse_strategy_name(val, key, line);
    } else if (key == "trust_model") {
      if (val == "none") {
        cfg.protocol.trust_enabled = false;
      } else {
        cfg.protocol.trust_enabled = true;
        cfg.protocol.trust.model = parse_model_name(val, key, line);
      }
    } else if (key == "threshold") {
      threshold_value = parse_real(key, line, val);
      threshold_set = true;
    } else if (key == "min_experiences") {
      cfg.protocol.trust.min_experiences =
          static_cast<std::uint32_t>(parse_count(key, line, val));
      if (cfg.protocol.trust.min_experiences < 1)
        throw ConfigError(key, line, "must be >= 1");
    } else if (key == "base_rate") {
      cfg.protocol.trust.base_rate = parse_probability(key, line, val);
    } else if (key == "ct_max_evidence") {
      cfg.protocol.trust.max_evidence_N =
          static_cast<std::uint32_t>(parse_count(key, line, val));
      if (cfg.protocol.trust.max_evidence_N < 1)
        throw ConfigError(key, line, "must be >= 1");
    } else if (key == "ct_initial_f") {
      cfg.protocol.trust.initial_f = parse_probability(key, line, val);
    } else if (key == "duration") {
      cfg.duration = parse_duration(key, line, val);
    } else if (key == "mm_cycle") {
      cfg.protocol.mm_cycle = parse_duration(key, line, val);
    } else if (key == "inactivity_timeout") {
      cfg.protocol.inactivity_timeout = parse_duration(key, line, val);
    } else if (key == "response_timeout") {
      cfg.protocol.response_timeout = parse_duration(key, line, val);
    } else if (key == "latency") {
      cfg.latency = parse_duration(key, line, val);
    } else if (key == "nl_capacity") {
      cfg.protocol.nl_capacity =
          static_cast<std::uint32_t>(parse_count(key, line, val));
    } else if (key == "nl_low_watermark") {
      cfg.protocol.nl_low_watermark =
          static_cast<std::uint32_t>(parse_count(key, line, val));
    } else if (key == "nl_reply_max") {
      cfg.protocol.nl_reply_max =
          static_cast<std::uint32_t>(parse_count(key, line, val));
    } else if (key == "bcs_rate") {
      cfg.protocol.bcs_rate = parse_probability(key, line, val);
    } else if (key == "delta_min") {
      cfg.protocol.delta_min = parse_count(key, line, val);
    } else if (key == "delta_max") {
      cfg.protocol.delta_max = parse_count(key, line, val);
    } else if (key == "churn_enabled") {
      cfg.churn.enabled = parse_bool(key, line, val);
    } else if (key == "mean_online") {
      cfg.churn.mean_online = parse_duration(key, line, val);
    } else if (key == "mean_offline") {
      cfg.churn.mean_offline = parse_duration(key, line, val);
    } else if (key == "p_loss") {
      cfg.noise.p_loss = parse_probability(key, line, val);
    } else if (key == "p_corrupt") {
      cfg.noise.p_corrupt = parse_probability(key, line, val);
    } else if (key == "command_interval") {
      cfg.schedule.interval = parse_duration(key, line, val);
    } else if (key == "seed_fraction") {
      cfg.schedule.seed_fraction = parse_probability(key, line, val);
    } else if (key == "seed") {
      cfg.seed = parse_count(key, line, val);
    } else if (key == "announcement_k") {
      cfg.announcement_k = static_cast<std::uint32_t>(parse_count(key, line, val));
    } else {
      throw ConfigError(key, line, "unknown key");
    }
  }

  cfg.protocol.trust.threshold =
      threshold_set ? threshold_value
                    : trust::default_threshold(cfg.protocol.trust.model);
  validate(cfg);
  return cfg;
}

}  // namespace botsim
