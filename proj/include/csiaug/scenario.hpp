#pragma once

#include "csiaug/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <string>
#include <tuple>
#include <utility>

namespace csiaug {

/// Parametric multipath scenario. Delays are in delay bins (1/bandwidth),
/// angles in radians from broadside of a half-wavelength ULA.
struct ScenarioSpec {
  std::uint32_t nc = 1024;
  std::uint32_t nt = 32;
  std::uint32_t paths = 3;
  double delay_min = 0.0;
  double delay_max = 8.0;
  double angle_min = -0.4;
  double angle_max = 0.4;
  double gain_decay = 1.0;
  std::uint64_t seed = 0;

  void validate() const {
    auto fail = [](const std::string& what) { throw InvalidInput("invalid scenario: " + what); };
    if (nc < 1 || nt < 1) {
      fail("nc and nt must be >= 1");
    }
    if (paths < 1) {
      fail("paths must be >= 1");
    }
    if (!std::isfinite(delay_min) || !std::isfinite(delay_max) || delay_min < 0.0 ||
        delay_min > delay_max || delay_max >= nc) {
      fail("delay_range must satisfy 0 <= min <= max < nc");
    }
    constexpr double half_pi = std::numbers::pi / 2;
    if (!std::isfinite(angle_min) || !std::isfinite(angle_max) || angle_min < -half_pi ||
        angle_min > angle_max || angle_max > half_pi) {
      fail("angle_range must satisfy -pi/2 <= min <= max <= pi/2");
    }
    if (!std::isfinite(gain_decay) || gain_decay < 0.0) {
      fail("gain_decay must be finite and >= 0");
    }
  }

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

inline nlohmann::json to_json_value(const ScenarioSpec& spec) {
  return {
      {"nc", spec.nc},
      {"nt", spec.nt},
      {"paths", spec.paths},
      {"delay_range", {spec.delay_min, spec.delay_max}},
      {"angle_range", {spec.angle_min, spec.angle_max}},
      {"gain_decay", spec.gain_decay},
      {"seed", spec.seed},
  };
}

/// Strict parse: every field required, unknown fields rejected, then validated.
inline ScenarioSpec scenario_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {"nc",          "nt",         "paths", "delay_range",
                                              "angle_range", "gain_decay", "seed"};
  if (!j.is_object()) {
    throw InvalidInput("scenario must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw InvalidInput("unknown scenario field '" + key + "'");
    }
  }
  for (const auto& key : known) {
    if (!j.contains(key)) {
      throw InvalidInput("missing scenario field '" + key + "'");
    }
  }
  auto range = [&](const char* key) {
    const auto& r = j.at(key);
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
      throw InvalidInput(std::string("scenario field '") + key + "' must be [min, max]");
    }
    return std::pair{r[0].get<double>(), r[1].get<double>()};
  };
  auto unsigned_field = [&](const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number_unsigned()) {
      throw InvalidInput(std::string("scenario field '") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  };

  ScenarioSpec spec;
  const auto narrow = [&](const char* key) {
    const std::uint64_t v = unsigned_field(key);
    if (v > UINT32_MAX) {
      throw InvalidInput(std::string("scenario field '") + key + "' out of range");
    }
    return static_cast<std::uint32_t>(v);
  };
  spec.nc = narrow("nc");
  spec.nt = narrow("nt");
  spec.paths = narrow("paths");
  std::tie(spec.delay_min, spec.delay_max) = range("delay_range");
  std::tie(spec.angle_min, spec.angle_max) = range("angle_range");
  if (!j.at("gain_decay").is_number()) {
    throw InvalidInput("scenario field 'gain_decay' must be a number");
  }
  spec.gain_decay = j.at("gain_decay").get<double>();
  spec.seed = unsigned_field("seed");
  spec.validate();
  return spec;
}

} // namespace csiaug
