// Copyright 2026 The stigma-welfare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stigma/distributions.hpp"
#include "stigma/errors.hpp"
#include "stigma/params.hpp"
#include "stigma/welfare.hpp"

namespace stigma {

// Malformed or inconsistent configuration. key() names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what),
        key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct RunConfig {
  ModelParams params;
  Convention convention = Convention::kCorrected;
  bool M_defaulted = false;
  int grid = 101;
  double tol = 1e-8;
  std::uint64_t pairs = 500000;
  std::uint64_t seed = 1;
  bool strict = false;
  bool svg = false;
  std::filesystem::path out_dir = ".";
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return value;
}

inline std::vector<Knot> read_knot_csv(const std::filesystem::path& path,
                                       const std::string& key) {
  std::ifstream in(path);
  if (!in) throw ConfigError(key, "cannot open " + path.string());
  std::vector<Knot> knots;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos) {
      throw ConfigError(key, path.string() + ":" + std::to_string(line_no) +
                                 ": expected two columns x,p");
    }
    const auto x = parse_double(row.substr(0, comma));
    const auto p = parse_double(row.substr(comma + 1));
    if (!x || !p) {
      if (knots.empty() && trim(row.substr(0, comma)) == "x") continue;
      throw ConfigError(key, path.string() + ":" + std::to_string(line_no) +
                                 ": malformed number");
    }
    knots.push_back({*x, *p});
  }
  return knots;
}

}  // namespace detail

// Accepts "uniform(lo,hi)" or "piecewise:<csv path>"; relative paths are
// resolved against base_dir.
inline Distribution parse_distribution(std::string_view text,
                                       const std::string& key,
                                       const std::filesystem::path& base_dir) {
  text = detail::trim(text);
  try {
    constexpr std::string_view kUniform = "uniform(";
    constexpr std::string_view kPiecewise = "piecewise:";
    if (text.starts_with(kUniform) && text.ends_with(")")) {
      const auto body =
          text.substr(kUniform.size(), text.size() - kUniform.size() - 1);
      const auto comma = body.find(',');
      if (comma == std::string_view::npos) {
        throw ConfigError(key, "uniform needs two bounds");
      }
      const auto lo = detail::parse_double(body.substr(0, comma));
      const auto hi = detail::parse_double(body.substr(comma + 1));
      if (!lo || !hi) throw ConfigError(key, "malformed uniform bounds");
      return Distribution::uniform(*lo, *hi);
    }
    if (text.starts_with(kPiecewise)) {
      std::filesystem::path path{std::string(
          detail::trim(text.substr(kPiecewise.size())))};
      if (path.is_relative()) path = base_dir / path;
      return Distribution::piecewise(detail::read_knot_csv(path, key));
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(key, e.what());
  }
  throw ConfigError(key, "expected uniform(lo,hi) or piecewise:<path>");
}

// Parses a flat `key = value` file with `#` comments. All model fields are
// required except M (default 1), tau_true (default 0) and convention
// (default corrected). Model ranges and the testing-participation
// assumption are checked here.
inline RunConfig parse_config(std::istream& in,
                              const std::filesystem::path& base_dir = ".") {
  static const std::set<std::string, std::less<>> kRequired = {
      "theta_L", "theta_H", "v", "c", "c_h", "z", "u", "tau_hat",
      "dist_beta", "dist_y"};
  static const std::set<std::string, std::less<>> kOptional = {
      "M", "tau_true", "convention"};

  std::map<std::string, std::string, std::less<>> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = line;
    if (const auto hash = row.find('#'); hash != std::string_view::npos) {
      row = row.substr(0, hash);
    }
    row = detail::trim(row);
    if (row.empty()) continue;
    const auto eq = row.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) +
                                ": expected key = value");
    }
    std::string key{detail::trim(row.substr(0, eq))};
    const std::string value{detail::trim(row.substr(eq + 1))};
    if (!kRequired.contains(key) && !kOptional.contains(key)) {
      throw ConfigError(key, "unknown key");
    }
    if (entries.contains(key)) throw ConfigError(key, "duplicate key");
    if (value.empty()) throw ConfigError(key, "missing value");
    entries.emplace(std::move(key), value);
  }
  for (const auto& key : kRequired) {
    if (!entries.contains(key)) throw ConfigError(key, "missing key");
  }

  auto number = [&](const std::string& key) {
    const auto v = detail::parse_double(entries.at(key));
    if (!v) throw ConfigError(key, "malformed number '" + entries.at(key) + "'");
    return *v;
  };

  RunConfig cfg;
  ModelParams& p = cfg.params;
  p.theta_L = number("theta_L");
  p.theta_H = number("theta_H");
  p.v = number("v");
  p.c = number("c");
  p.c_h = number("c_h");
  p.z = number("z");
  p.u = number("u");
  p.tau_hat = number("tau_hat");
  cfg.M_defaulted = !entries.contains("M");
  p.M = cfg.M_defaulted ? 1.0 : number("M");
  p.tau_true = entries.contains("tau_true") ? number("tau_true") : 0.0;
  p.dist_beta = parse_distribution(entries.at("dist_beta"), "dist_beta", base_dir);
  p.dist_y = parse_distribution(entries.at("dist_y"), "dist_y", base_dir);
  if (entries.contains("convention")) {
    const std::string& conv = entries.at("convention");
    if (conv == "corrected") {
      cfg.convention = Convention::kCorrected;
    } else if (conv == "paper" || conv == "paper_literal") {
      cfg.convention = Convention::kPaperLiteral;
    } else {
      throw ConfigError("convention", "expected paper or corrected");
    }
  }

  try {
    p.validate();
  } catch (const AssumptionViolation& e) {
    throw ConfigError("c", e.what());
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(": ");
    if (colon == std::string::npos) throw ConfigError("", msg);
    throw ConfigError(msg.substr(0, colon), msg.substr(colon + 2));
  }
  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config " + path.string());
  return parse_config(in, path.parent_path());
}

}  // namespace stigma
