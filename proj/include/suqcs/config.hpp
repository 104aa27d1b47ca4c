// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace suqcs {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Config {
  double q = 0.0;
  int m_max = 60;
  int guard = 16;
  int K = 2;
  int level = 1;
  int N = 2;
  std::uint64_t seed = 12345;
  std::string phi1_route = "symbolic";
  std::map<std::string, double> tolerances{{"relations", 1e-12}, {"residue", 1e-3}, {"stationary", 1e-10}};
  std::string out;

  void validate() const {
    if (!(q >= 0.0 && q < 1.0)) throw ConfigError("q must lie in [0, 1), got " + std::to_string(q));
    if (guard < 2) throw ConfigError("guard must be at least 2");
    if (m_max < 1) throw ConfigError("m_max must be positive");
    if (m_max - guard < 24)
      throw ConfigError("m_max " + std::to_string(m_max) + " too small for guard " + std::to_string(guard) +
                        " (need m_max - guard >= 24)");
    if (m_max > 400) throw ConfigError("m_max above 400 is not supported");
    if (K < 0 || K > 16) throw ConfigError("K must lie in [0, 16]");
    if (level == 0) throw ConfigError("level must be nonzero");
    if (N < 1 || N > 4) throw ConfigError("N must lie in [1, 4]");
    if (phi1_route != "symbolic" && phi1_route != "cm") throw ConfigError("route must be symbolic or cm");
    for (const auto& [k, v] : tolerances)
      if (!(v > 0.0)) throw ConfigError("tolerance '" + k + "' must be positive");
  }

  nlohmann::json to_json() const {
    return {{"q", q},         {"m_max", m_max}, {"guard", guard}, {"K", K},
            {"level", level}, {"N", N},         {"seed", seed},   {"phi1_route", phi1_route},
            {"tolerances", tolerances},         {"out", out}};
  }

  static Config from_json(const nlohmann::json& j) {
    Config c;
    for (const auto& [k, v] : j.items()) {
      if (k == "q") c.q = v.get<double>();
      else if (k == "m_max") c.m_max = v.get<int>();
      else if (k == "guard") c.guard = v.get<int>();
      else if (k == "K") c.K = v.get<int>();
      else if (k == "level") c.level = v.get<int>();
      else if (k == "N") c.N = v.get<int>();
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "phi1_route") c.phi1_route = v.get<std::string>();
      else if (k == "tolerances")
        for (const auto& [tk, tv] : v.items()) c.tolerances[tk] = tv.get<double>();
      else if (k == "out") c.out = v.get<std::string>();
      else throw ConfigError("unknown config key '" + k + "'");
    }
    c.validate();
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config " + path + ": " + e.what());
    }
    return from_json(j);
  }
};

}  // namespace suqcs
