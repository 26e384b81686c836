#pragma once

// Scenario description: devices, UAVs, base station, channel constants and the
// per-round limits of the data-collection mission. Configs are plain values;
// once validated they are never mutated by the simulation.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aou/random.hpp"

namespace aou {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Position3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Position3&, const Position3&) = default;
  Position3 operator-(const Position3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Position3 operator+(const Position3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Position3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Position3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
  double operator[](int c) const { return c == 0 ? x : (c == 1 ? y : z); }
};

struct DeviceSpec {
  std::size_t id = 0;
  Position3 position;
  double tx_power = 0.0;   // W
  double bandwidth = 0.0;  // Hz
  friend bool operator==(const DeviceSpec&, const DeviceSpec&) = default;
};

/// Rotary-wing propulsion constants. parasite_coeff lumps 0.5 * d0 * rho * s * A.
struct RotorParams {
  double blade_profile_power = 79.86;  // W
  double induced_power = 88.63;        // W
  double tip_speed = 120.0;            // m/s
  double mean_rotor_velocity = 4.03;   // m/s
  double parasite_coeff = 0.5 * 0.6 * 1.225 * 0.05 * 0.503;  // kg/m
  friend bool operator==(const RotorParams&, const RotorParams&) = default;
};

struct UavSpec {
  std::size_t id = 0;
  Position3 initial_position;
  double tx_power = 0.0;       // W
  double bandwidth = 0.0;      // Hz
  double energy_budget = 0.0;  // J per round
  double speed = 0.0;          // m/s
  RotorParams rotor;
  friend bool operator==(const UavSpec&, const UavSpec&) = default;
};

struct Box {
  std::array<double, 2> x{0.0, 100.0};
  std::array<double, 2> y{0.0, 100.0};
  std::array<double, 2> z{1.0, 100.0};

  const std::array<double, 2>& axis(int c) const { return c == 0 ? x : (c == 1 ? y : z); }
  bool contains(const Position3& p) const {
    return p.x >= x[0] && p.x <= x[1] && p.y >= y[0] && p.y <= y[1] && p.z >= z[0] && p.z <= z[1];
  }
  Position3 center() const { return {(x[0] + x[1]) / 2, (y[0] + y[1]) / 2, (z[0] + z[1]) / 2}; }
  friend bool operator==(const Box&, const Box&) = default;
};

enum class FadingMode { expected, sampled };

struct ScenarioConfig {
  std::vector<DeviceSpec> devices;
  std::vector<UavSpec> uavs;
  Position3 bs_position;
  std::size_t horizon = 10;         // K
  double slot_duration = 1.0;       // tau, s
  double rician_factor = 10.0;      // Omega
  double ref_gain = 1e-3;           // beta_0 at 1 m
  double noise_power = 1e-10;       // sigma^2, W
  double pathloss_exponent = 2.0;   // alpha
  double rate_threshold_device = 0.0;  // bit/s
  double rate_threshold_uav = 0.0;     // bit/s
  double min_separation = 0.0;         // m
  Box box;
  std::uint64_t seed = 1;
  std::size_t i2u_resolution = 10;
  FadingMode fading_mode = FadingMode::expected;
  double device_weight = 1.0;  // weight of the device-level freshness term

  std::size_t num_devices() const { return devices.size(); }
  std::size_t num_uavs() const { return uavs.size(); }
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

namespace detail {

inline void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

inline void require_positive(double v, const std::string& field) {
  require(std::isfinite(v) && v > 0.0, field, "must be finite and > 0");
}

inline void require_position(const Position3& p, const std::string& field) {
  require(p.finite(), field, "coordinates must be finite");
}

}  // namespace detail

/// Checks every field invariant; throws ConfigError naming the first offending field.
/// Geometry of the initial UAV placement is checked separately by validate_geometry.
inline void validate_fields(const ScenarioConfig& cfg) {
  using detail::require;
  using detail::require_positive;
  require(!cfg.devices.empty(), "devices", "at least one device required");
  require(!cfg.uavs.empty(), "uavs", "at least one UAV required");
  require(cfg.horizon >= 1, "horizon", "must be >= 1");
  require_positive(cfg.slot_duration, "slot_duration");
  require(std::isfinite(cfg.rician_factor) && cfg.rician_factor >= 0.0, "rician_factor",
          "must be finite and >= 0");
  require_positive(cfg.ref_gain, "ref_gain");
  require_positive(cfg.noise_power, "noise_power");
  require_positive(cfg.pathloss_exponent, "pathloss_exponent");
  require_positive(cfg.rate_threshold_device, "rate_threshold_device");
  require_positive(cfg.rate_threshold_uav, "rate_threshold_uav");
  require_positive(cfg.min_separation, "min_separation");
  require(cfg.i2u_resolution >= 1, "i2u_resolution", "must be >= 1");
  require(std::isfinite(cfg.device_weight) && cfg.device_weight >= 0.0, "device_weight",
          "must be finite and >= 0");
  detail::require_position(cfg.bs_position, "bs_position");
  for (int c = 0; c < 3; ++c) {
    const auto& ax = cfg.box.axis(c);
    const std::string name = std::string("box.") + "xyz"[c];
    require(std::isfinite(ax[0]) && std::isfinite(ax[1]) && ax[0] < ax[1], name,
            "bounds must be finite with min < max");
  }
  require(cfg.box.z[0] > 0.0, "box.z", "minimum altitude must be > 0");

  for (std::size_t i = 0; i < cfg.devices.size(); ++i) {
    const auto& d = cfg.devices[i];
    const std::string p = "devices[" + std::to_string(i) + "].";
    detail::require_position(d.position, p + "position");
    require(d.position.z == 0.0, p + "position", "devices sit on the ground (z = 0)");
    require_positive(d.tx_power, p + "tx_power");
    require_positive(d.bandwidth, p + "bandwidth");
  }
  for (std::size_t u = 0; u < cfg.uavs.size(); ++u) {
    const auto& s = cfg.uavs[u];
    const std::string p = "uavs[" + std::to_string(u) + "].";
    detail::require_position(s.initial_position, p + "initial_position");
    require_positive(s.tx_power, p + "tx_power");
    require_positive(s.bandwidth, p + "bandwidth");
    require_positive(s.energy_budget, p + "energy_budget");
    require_positive(s.speed, p + "speed");
    require_positive(s.rotor.blade_profile_power, p + "rotor.blade_profile_power");
    require_positive(s.rotor.induced_power, p + "rotor.induced_power");
    require_positive(s.rotor.tip_speed, p + "rotor.tip_speed");
    require_positive(s.rotor.mean_rotor_velocity, p + "rotor.mean_rotor_velocity");
    require_positive(s.rotor.parasite_coeff, p + "rotor.parasite_coeff");
  }
}

/// Initial UAV positions must lie in the box and be pairwise >= min_separation apart.
inline void validate_geometry(const ScenarioConfig& cfg) {
  for (std::size_t u = 0; u < cfg.uavs.size(); ++u) {
    const auto& p = cfg.uavs[u].initial_position;
    if (!cfg.box.contains(p)) {
      std::ostringstream os;
      os << "uavs[" << u << "].initial_position: (" << p.x << ", " << p.y << ", " << p.z
         << ") lies outside the box";
      throw ConfigError(os.str());
    }
  }
  for (std::size_t u = 0; u < cfg.uavs.size(); ++u) {
    for (std::size_t v = u + 1; v < cfg.uavs.size(); ++v) {
      const double d = (cfg.uavs[u].initial_position - cfg.uavs[v].initial_position).norm();
      if (d < cfg.min_separation) {
        std::ostringstream os;
        os << "uavs[" << u << "], uavs[" << v << "]: initial distance " << d
           << " m is below min_separation " << cfg.min_separation << " m";
        throw ConfigError(os.str());
      }
    }
  }
}

inline void validate(const ScenarioConfig& cfg) {
  validate_fields(cfg);
  validate_geometry(cfg);
}

// ---------------------------------------------------------------------------
// JSON mapping. Keys match the field names above; positions are [x, y, z].

namespace detail {

using nlohmann::json;

inline const json& member(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(ctx + key + ": missing required field");
  return *it;
}

inline double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field + ": expected a number");
  return j.get<double>();
}

inline std::uint64_t count(const json& j, const std::string& field) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw ConfigError(field + ": expected a non-negative integer");
  if (j.is_number_integer() && j.get<std::int64_t>() < 0)
    throw ConfigError(field + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

inline double number_or(const json& j, const std::string& key, double fallback,
                        const std::string& ctx) {
  auto it = j.find(key);
  return it == j.end() ? fallback : number(*it, ctx + key);
}

inline Position3 position(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(field + ": expected [x, y, z]");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]"), number(j[2], field + "[2]")};
}

inline std::array<double, 2> interval(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(field + ": expected [min, max]");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

inline json to_json(const Position3& p) { return json::array({p.x, p.y, p.z}); }

}  // namespace detail

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  using namespace detail;
  ScenarioConfig cfg;
  const std::string top;

  const json& devices = member(j, "devices", top);
  if (!devices.is_array()) throw ConfigError("devices: expected an array");
  for (std::size_t i = 0; i < devices.size(); ++i) {
    const std::string ctx = "devices[" + std::to_string(i) + "].";
    const json& d = devices[i];
    DeviceSpec spec;
    spec.id = d.contains("id") ? count(d["id"], ctx + "id") : i;
    spec.position = position(member(d, "position", ctx), ctx + "position");
    spec.tx_power = number(member(d, "tx_power", ctx), ctx + "tx_power");
    spec.bandwidth = number(member(d, "bandwidth", ctx), ctx + "bandwidth");
    cfg.devices.push_back(spec);
  }

  const json& uavs = member(j, "uavs", top);
  if (!uavs.is_array()) throw ConfigError("uavs: expected an array");
  for (std::size_t u = 0; u < uavs.size(); ++u) {
    const std::string ctx = "uavs[" + std::to_string(u) + "].";
    const json& s = uavs[u];
    UavSpec spec;
    spec.id = s.contains("id") ? count(s["id"], ctx + "id") : u;
    spec.initial_position = position(member(s, "initial_position", ctx), ctx + "initial_position");
    spec.tx_power = number(member(s, "tx_power", ctx), ctx + "tx_power");
    spec.bandwidth = number(member(s, "bandwidth", ctx), ctx + "bandwidth");
    spec.energy_budget = number(member(s, "energy_budget", ctx), ctx + "energy_budget");
    spec.speed = number(member(s, "speed", ctx), ctx + "speed");
    if (auto it = s.find("rotor"); it != s.end()) {
      const std::string rc = ctx + "rotor.";
      const RotorParams dflt;
      spec.rotor.blade_profile_power =
          number_or(*it, "blade_profile_power", dflt.blade_profile_power, rc);
      spec.rotor.induced_power = number_or(*it, "induced_power", dflt.induced_power, rc);
      spec.rotor.tip_speed = number_or(*it, "tip_speed", dflt.tip_speed, rc);
      spec.rotor.mean_rotor_velocity =
          number_or(*it, "mean_rotor_velocity", dflt.mean_rotor_velocity, rc);
      spec.rotor.parasite_coeff = number_or(*it, "parasite_coeff", dflt.parasite_coeff, rc);
    }
    cfg.uavs.push_back(spec);
  }

  cfg.bs_position = position(member(j, "bs_position", top), "bs_position");
  cfg.horizon = count(member(j, "horizon", top), "horizon");
  cfg.slot_duration = number(member(j, "slot_duration", top), "slot_duration");
  cfg.rician_factor = number(member(j, "rician_factor", top), "rician_factor");
  cfg.ref_gain = number(member(j, "ref_gain", top), "ref_gain");
  cfg.noise_power = number(member(j, "noise_power", top), "noise_power");
  cfg.pathloss_exponent = number_or(j, "pathloss_exponent", 2.0, top);
  cfg.rate_threshold_device =
      number(member(j, "rate_threshold_device", top), "rate_threshold_device");
  cfg.rate_threshold_uav = number(member(j, "rate_threshold_uav", top), "rate_threshold_uav");
  cfg.min_separation = number(member(j, "min_separation", top), "min_separation");

  const json& box = member(j, "box", top);
  cfg.box.x = interval(member(box, "x", "box."), "box.x");
  cfg.box.y = interval(member(box, "y", "box."), "box.y");
  cfg.box.z = interval(member(box, "z", "box."), "box.z");

  cfg.seed = count(member(j, "seed", top), "seed");
  if (auto it = j.find("i2u_resolution"); it != j.end())
    cfg.i2u_resolution = count(*it, "i2u_resolution");
  if (auto it = j.find("fading_mode"); it != j.end()) {
    if (!it->is_string()) throw ConfigError("fading_mode: expected \"expected\" or \"sampled\"");
    const auto mode = it->get<std::string>();
    if (mode == "expected")
      cfg.fading_mode = FadingMode::expected;
    else if (mode == "sampled")
      cfg.fading_mode = FadingMode::sampled;
    else
      throw ConfigError("fading_mode: unknown mode \"" + mode + "\"");
  }
  cfg.device_weight = number_or(j, "device_weight", 1.0, top);
  return cfg;
}

inline nlohmann::json config_to_json(const ScenarioConfig& cfg) {
  using nlohmann::json;
  using detail::to_json;
  json j;
  j["devices"] = json::array();
  for (const auto& d : cfg.devices) {
    j["devices"].push_back({{"id", d.id},
                            {"position", to_json(d.position)},
                            {"tx_power", d.tx_power},
                            {"bandwidth", d.bandwidth}});
  }
  j["uavs"] = json::array();
  for (const auto& s : cfg.uavs) {
    j["uavs"].push_back({{"id", s.id},
                         {"initial_position", to_json(s.initial_position)},
                         {"tx_power", s.tx_power},
                         {"bandwidth", s.bandwidth},
                         {"energy_budget", s.energy_budget},
                         {"speed", s.speed},
                         {"rotor",
                          {{"blade_profile_power", s.rotor.blade_profile_power},
                           {"induced_power", s.rotor.induced_power},
                           {"tip_speed", s.rotor.tip_speed},
                           {"mean_rotor_velocity", s.rotor.mean_rotor_velocity},
                           {"parasite_coeff", s.rotor.parasite_coeff}}}});
  }
  j["bs_position"] = to_json(cfg.bs_position);
  j["horizon"] = cfg.horizon;
  j["slot_duration"] = cfg.slot_duration;
  j["rician_factor"] = cfg.rician_factor;
  j["ref_gain"] = cfg.ref_gain;
  j["noise_power"] = cfg.noise_power;
  j["pathloss_exponent"] = cfg.pathloss_exponent;
  j["rate_threshold_device"] = cfg.rate_threshold_device;
  j["rate_threshold_uav"] = cfg.rate_threshold_uav;
  j["min_separation"] = cfg.min_separation;
  j["box"] = {{"x", cfg.box.x}, {"y", cfg.box.y}, {"z", cfg.box.z}};
  j["seed"] = cfg.seed;
  j["i2u_resolution"] = cfg.i2u_resolution;
  j["fading_mode"] = cfg.fading_mode == FadingMode::expected ? "expected" : "sampled";
  j["device_weight"] = cfg.device_weight;
  return j;
}

/// Parses and validates a config document. Parse errors carry line:column.
inline ScenarioConfig parse_config(const std::string& text, const std::string& origin = "<config>") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << origin << ":" << line << ":" << col << ": parse error: " << e.what();
    throw ConfigError(os.str());
  }
  ScenarioConfig cfg = config_from_json(j);
  validate(cfg);
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

inline void write_config(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path + ": cannot open for writing");
  out << config_to_json(cfg).dump(2) << "\n";
  if (!out) throw ConfigError(path + ": write failed");
}

/// Scatters `count` devices uniformly over the ground footprint of the box.
inline std::vector<DeviceSpec> scatter_devices(std::size_t count, const Box& box,
                                               std::uint64_t seed, double tx_power,
                                               double bandwidth) {
  RandomStream rng(seed, {0, StreamPurpose::scatter, 0});
  std::vector<DeviceSpec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = box.x[0] + (box.x[1] - box.x[0]) * rng.uniform();
    const double y = box.y[0] + (box.y[1] - box.y[0]) * rng.uniform();
    out.push_back({i, {x, y, 0.0}, tx_power, bandwidth});
  }
  return out;
}

/// Draws `count` UAV positions uniformly in the box, pairwise at least `min_separation` apart.
inline std::vector<Position3> scatter_uavs(std::size_t count, const Box& box, double min_separation,
                                           std::uint64_t seed, std::size_t max_attempts = 100000) {
  RandomStream rng(seed, {0, StreamPurpose::scatter, 1});
  std::vector<Position3> out;
  for (std::size_t attempt = 0; out.size() < count; ++attempt) {
    if (attempt >= max_attempts) throw ConfigError("scatter_uavs: could not place UAVs");
    Position3 p{box.x[0] + (box.x[1] - box.x[0]) * rng.uniform(),
                box.y[0] + (box.y[1] - box.y[0]) * rng.uniform(),
                box.z[0] + (box.z[1] - box.z[0]) * rng.uniform()};
    bool ok = true;
    for (const auto& q : out) ok = ok && (p - q).norm() >= min_separation;
    if (ok) out.push_back(p);
  }
  return out;
}

}  // namespace aou
