#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace memwave {

/// Fully validated experiment description parsed from a JSON config file.
struct ExperimentConfig {
  struct Kernel {
    std::string variant = "zero";  // exponential | power-law | zero
    double amplitude = 1.0;        // exponential c
    double rate = 1.0;             // exponential gamma
    double alpha = 0.5;            // power-law exponent
    double scale = 1.0;            // power-law c
    double horizon = 1.0;          // validation horizon T
    bool operator==(const Kernel&) const = default;
  };
  struct Space {
    std::string kind = "fem";  // fem | spectral
    int degree = 1;
    int elements = 8;
    int modes = 4;
    int levels = 4;
    bool operator==(const Space&) const = default;
  };
  struct Problem {
    std::string family = "sine-cos";  // sine-cos | standing-wave
    int wave_number = 1;
    double final_time = 1.0;
    bool operator==(const Problem&) const = default;
  };
  struct Solver {
    std::string scheme = "newmark";  // newmark | trapezoidal
    int steps = 256;
    double tol = 1e-10;
    int max_iters = 60;
    bool operator==(const Solver&) const = default;
  };

  std::string command;  // validate-kernel | solve | picard-certify | convergence
  Kernel kernel;
  Space space;
  Problem problem;
  Solver solver;
  bool operator==(const ExperimentConfig&) const = default;
};

struct ConfigParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;
  bool ok() const { return config.has_value() && errors.empty(); }
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
  return nlohmann::json{
      {"command", c.command},
      {"kernel",
       {{"variant", c.kernel.variant},
        {"amplitude", c.kernel.amplitude},
        {"rate", c.kernel.rate},
        {"alpha", c.kernel.alpha},
        {"scale", c.kernel.scale},
        {"horizon", c.kernel.horizon}}},
      {"space",
       {{"kind", c.space.kind},
        {"degree", c.space.degree},
        {"elements", c.space.elements},
        {"modes", c.space.modes},
        {"levels", c.space.levels}}},
      {"problem",
       {{"family", c.problem.family},
        {"wave_number", c.problem.wave_number},
        {"final_time", c.problem.final_time}}},
      {"solver",
       {{"scheme", c.solver.scheme},
        {"steps", c.solver.steps},
        {"tol", c.solver.tol},
        {"max_iters", c.solver.max_iters}}}};
}

/// Parse and validate a config. Every unknown key, duplicate key, and
/// out-of-range value is reported, not just the first.
inline ConfigParseResult parse_config(const std::string& text) {
  using nlohmann::json;
  ConfigParseResult res;

  // duplicate-key detection during parsing
  std::vector<std::set<std::string>> key_stack;
  auto cb = [&](int /*depth*/, json::parse_event_t event, json& parsed) {
    if (event == json::parse_event_t::object_start) key_stack.emplace_back();
    else if (event == json::parse_event_t::object_end) key_stack.pop_back();
    else if (event == json::parse_event_t::key) {
      const std::string k = parsed.get<std::string>();
      if (!key_stack.back().insert(k).second)
        res.errors.push_back("duplicate key: " + k);
    }
    return true;
  };

  json j;
  try {
    j = json::parse(text, cb);
  } catch (const json::exception& ex) {
    res.errors.push_back(std::string("json parse error: ") + ex.what());
    return res;
  }
  if (!j.is_object()) {
    res.errors.push_back("config root must be a JSON object");
    return res;
  }

  ExperimentConfig c;
  auto err = [&](const std::string& msg) { res.errors.push_back(msg); };

  auto check_keys = [&](const json& obj, const std::string& where,
                        const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!known.count(it.key()))
        err("unknown key: " + (where.empty() ? "" : where + ".") + it.key());
  };
  auto get_num = [&](const json& obj, const char* key, const std::string& where,
                     double& out) {
    if (!obj.contains(key)) return;
    if (!obj[key].is_number()) err(where + "." + key + " must be a number");
    else out = obj[key].get<double>();
  };
  auto get_int = [&](const json& obj, const char* key, const std::string& where,
                     int& out) {
    if (!obj.contains(key)) return;
    if (!obj[key].is_number_integer()) err(where + "." + key + " must be an integer");
    else out = obj[key].get<int>();
  };
  auto get_str = [&](const json& obj, const char* key, const std::string& where,
                     std::string& out) {
    if (!obj.contains(key)) return;
    if (!obj[key].is_string()) err(where + "." + key + " must be a string");
    else out = obj[key].get<std::string>();
  };

  check_keys(j, "", {"command", "kernel", "space", "problem", "solver"});
  get_str(j, "command", "config", c.command);
  static const std::set<std::string> commands{"validate-kernel", "solve",
                                              "picard-certify", "convergence"};
  if (!commands.count(c.command))
    err("command must be one of validate-kernel, solve, picard-certify, convergence");

  if (j.contains("kernel")) {
    const json& k = j["kernel"];
    check_keys(k, "kernel", {"variant", "amplitude", "rate", "alpha", "scale", "horizon"});
    get_str(k, "variant", "kernel", c.kernel.variant);
    get_num(k, "amplitude", "kernel", c.kernel.amplitude);
    get_num(k, "rate", "kernel", c.kernel.rate);
    get_num(k, "alpha", "kernel", c.kernel.alpha);
    get_num(k, "scale", "kernel", c.kernel.scale);
    get_num(k, "horizon", "kernel", c.kernel.horizon);
    if (c.kernel.variant != "exponential" && c.kernel.variant != "power-law" &&
        c.kernel.variant != "zero")
      err("unknown kernel variant: " + c.kernel.variant);
    if (c.kernel.variant == "power-law" &&
        !(c.kernel.alpha > 0.0 && c.kernel.alpha < 1.0))
      err("alpha must lie in (0,1)");
    if (c.kernel.variant == "exponential" &&
        (c.kernel.amplitude <= 0.0 || c.kernel.rate <= 0.0))
      err("exponential kernel needs amplitude > 0 and rate > 0");
    if (c.kernel.variant == "power-law" && c.kernel.scale <= 0.0)
      err("power-law kernel needs scale > 0");
    if (c.kernel.horizon <= 0.0) err("kernel.horizon must be positive");
  }

  if (j.contains("space")) {
    const json& s = j["space"];
    check_keys(s, "space", {"kind", "degree", "elements", "modes", "levels"});
    get_str(s, "kind", "space", c.space.kind);
    get_int(s, "degree", "space", c.space.degree);
    get_int(s, "elements", "space", c.space.elements);
    get_int(s, "modes", "space", c.space.modes);
    get_int(s, "levels", "space", c.space.levels);
    if (c.space.kind != "fem" && c.space.kind != "spectral")
      err("space.kind must be fem or spectral");
    if (c.space.degree != 1 && c.space.degree != 2)
      err("space.degree must be 1 or 2");
    if (c.space.elements < 2) err("space.elements must be >= 2");
    if (c.space.modes < 1) err("space.modes must be >= 1");
    if (c.command == "convergence" && c.space.levels < 3)
      err("space.levels must be >= 3 for convergence studies");
  }

  if (j.contains("problem")) {
    const json& p = j["problem"];
    check_keys(p, "problem", {"family", "wave_number", "final_time"});
    get_str(p, "family", "problem", c.problem.family);
    get_int(p, "wave_number", "problem", c.problem.wave_number);
    get_num(p, "final_time", "problem", c.problem.final_time);
    if (c.problem.family != "sine-cos" && c.problem.family != "standing-wave")
      err("unknown manufactured family: " + c.problem.family);
    if (c.problem.wave_number < 1) err("problem.wave_number must be >= 1");
    if (c.problem.final_time <= 0.0) err("problem.final_time must be positive");
  }

  if (j.contains("solver")) {
    const json& s = j["solver"];
    check_keys(s, "solver", {"scheme", "steps", "tol", "max_iters"});
    get_str(s, "scheme", "solver", c.solver.scheme);
    get_int(s, "steps", "solver", c.solver.steps);
    get_num(s, "tol", "solver", c.solver.tol);
    get_int(s, "max_iters", "solver", c.solver.max_iters);
    if (c.solver.scheme != "newmark" && c.solver.scheme != "trapezoidal")
      err("solver.scheme must be newmark or trapezoidal");
    if (c.solver.steps < 8) err("solver.steps must be >= 8");
    if (c.solver.tol <= 0.0) err("solver.tol must be positive");
    if (c.solver.max_iters < 1) err("solver.max_iters must be >= 1");
  }

  if (res.errors.empty()) res.config = c;
  return res;
}

}  // namespace memwave
