#pragma once

// Flat sectioned key-value configuration. Every key a command consumes is
// mandatory; there are no hidden file-level defaults.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sgarz/errors.hpp"
#include "sgarz/model.hpp"
#include "sgarz/monte_carlo.hpp"
#include "sgarz/riemann.hpp"
#include "sgarz/solver.hpp"

namespace sgarz {

class ConfigFile {
 public:
  using Section = std::map<std::string, std::string>;

  static ConfigFile from_string(const std::string& text,
                                const std::string& origin = "<string>") {
    ConfigFile cfg;
    cfg.origin_ = origin;
    cfg.text_ = text;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          throw ConfigError(origin + ":" + std::to_string(line_no) +
                            ": malformed section header");
        }
        section = trim(line.substr(1, line.size() - 2));
        cfg.sections_[section];
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos || section.empty()) {
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": expected key = value inside a section");
      }
      cfg.sections_[section][trim(line.substr(0, eq))] =
          trim(line.substr(eq + 1));
    }
    return cfg;
  }

  static ConfigFile load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return from_string(text.str(), path);
  }

  const std::string& text() const { return text_; }

  const std::string& get(const std::string& section,
                         const std::string& key) const {
    const auto sec = sections_.find(section);
    if (sec == sections_.end()) {
      throw ConfigError(origin_ + ": missing section [" + section + "]");
    }
    const auto entry = sec->second.find(key);
    if (entry == sec->second.end()) {
      throw ConfigError(origin_ + ": missing key '" + key + "' in [" +
                        section + "]");
    }
    return entry->second;
  }

  double get_double(const std::string& section, const std::string& key) const {
    return parse_double(get(section, key), section, key);
  }

  long long get_int(const std::string& section, const std::string& key) const {
    const std::string& value = get(section, key);
    std::size_t used = 0;
    long long parsed = 0;
    try {
      parsed = std::stoll(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size()) {
      throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                        "] is not an integer: " + value);
    }
    return parsed;
  }

  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key) const {
    std::vector<double> values;
    std::istringstream in(get(section, key));
    std::string item;
    while (std::getline(in, item, ',')) {
      values.push_back(parse_double(trim(item), section, key));
    }
    return values;
  }

 private:
  static std::string trim(const std::string& s) {
    std::size_t begin = 0, end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
  }

  double parse_double(const std::string& value, const std::string& section,
                      const std::string& key) const {
    std::size_t used = 0;
    double parsed = 0.0;
    try {
      parsed = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size()) {
      throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                        "] is not a number: " + value);
    }
    return parsed;
  }

  std::string origin_;
  std::string text_;
  std::map<std::string, Section> sections_;
};

/// Fully parsed experiment description.
struct SimulationSetup {
  ModelConfig model;  // tau set to the first relaxation entry
  std::vector<std::optional<double>> relaxation_values;
  Grid grid;
  SolverConfig solver;
  RiemannProblem problem;
  int level = 0;
  ReferenceTarget target = ReferenceTarget::arz_homogeneous;
  long long samples = 0;
  std::uint64_t seed = 0;

  static SimulationSetup parse(const ConfigFile& cfg) {
    SimulationSetup setup;

    const std::string closure = cfg.get("model", "closure");
    if (closure == "greenshields") {
      setup.model.closure = Closure::greenshields;
    } else if (closure == "linear_lwr") {
      setup.model.closure = Closure::linear_lwr;
    } else {
      throw ConfigError("unknown closure '" + closure + "'");
    }
    setup.model.gamma = static_cast<int>(cfg.get_int("model", "gamma"));
    setup.model.v_max = cfg.get_double("model", "v_max");
    setup.model.rho_max = cfg.get_double("model", "rho_max");

    const std::string relaxation = cfg.get("model", "relaxation");
    if (relaxation == "none") {
      setup.relaxation_values = {std::nullopt};
    } else {
      for (double tau : cfg.get_double_list("model", "relaxation")) {
        if (tau < 0.0) throw ConfigError("relaxation times must be >= 0");
        setup.relaxation_values.push_back(tau);
      }
      if (setup.relaxation_values.empty()) {
        throw ConfigError("relaxation list is empty");
      }
    }
    setup.model.tau = setup.relaxation_values.front();
    setup.model.validate();

    setup.grid.x_end = cfg.get_double("grid", "x_end");
    setup.grid.cells = static_cast<int>(cfg.get_int("grid", "cells"));
    setup.grid.validate();

    setup.solver.cfl = cfg.get_double("solver", "cfl");
    setup.solver.t_end = cfg.get_double("solver", "t_end");
    const std::string boundary = cfg.get("solver", "boundary");
    if (boundary != "zero_gradient") {
      throw ConfigError("unknown boundary treatment '" + boundary + "'");
    }
    setup.solver.boundary = Boundary::zero_gradient;
    setup.solver.snapshot_times = cfg.get_double_list("solver", "snapshots");
    setup.solver.validate();

    setup.level = static_cast<int>(cfg.get_int("uncertainty", "level"));
    setup.problem.rho_left_min = cfg.get_double("uncertainty", "rho_left_min");
    setup.problem.rho_left_max = cfg.get_double("uncertainty", "rho_left_max");
    setup.problem.v_left = cfg.get_double("uncertainty", "v_left");
    setup.problem.rho_right = cfg.get_double("uncertainty", "rho_right");
    setup.problem.v_right = cfg.get_double("uncertainty", "v_right");
    setup.problem.jump_position = cfg.get_double("uncertainty", "jump");
    setup.problem.validate(setup.model);

    const std::string target = cfg.get("reference", "target");
    if (target == "arz") {
      setup.target = ReferenceTarget::arz_homogeneous;
    } else if (target == "lwr") {
      setup.target = ReferenceTarget::lwr_equilibrium;
    } else {
      throw ConfigError("unknown reference target '" + target + "'");
    }
    setup.samples = cfg.get_int("reference", "samples");
    if (setup.samples < 1) throw ConfigError("samples must be positive");
    setup.seed = static_cast<std::uint64_t>(cfg.get_int("reference", "seed"));

    return setup;
  }
};

}  // namespace sgarz
