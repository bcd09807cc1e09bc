#pragma once

#include <ostream>

#include <json.hpp>

#include "memwave/convergence.hpp"
#include "memwave/kernels.hpp"
#include "memwave/picard.hpp"
#include "memwave/timestep.hpp"

namespace memwave {

inline nlohmann::json to_json(const KernelValidationReport& r) {
  nlohmann::json j;
  j["kappa"] = r.kappa;
  j["admissible"] = r.admissible;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back(
        {{"property", c.property}, {"passed", c.passed}, {"detail", c.detail}});
  return j;
}

inline nlohmann::json to_json(const PicardCertificate& c) {
  nlohmann::json j;
  j["Z"] = c.Z;
  j["Z0"] = c.Z0;
  j["iterations"] = nlohmann::json::array();
  for (const auto& it : c.iterations)
    j["iterations"].push_back(
        {{"n", it.n}, {"measured", it.measured}, {"bound", it.bound}});
  return j;
}

inline nlohmann::json to_json(const ConvergenceReport& r) {
  nlohmann::json j;
  j["target_l"] = r.target_l;
  j["levels"] = nlohmann::json::array();
  for (const auto& lv : r.levels) {
    nlohmann::json e{{"level", lv.level}, {"h", lv.h},     {"steps", lv.steps},
                     {"ok", lv.ok},       {"e_L2", lv.e_l2}, {"e_H1", lv.e_h1},
                     {"e_vel", lv.e_vel}, {"sup_L2", lv.sup_l2}};
    if (!lv.ok) e["error"] = lv.error;
    if (std::isfinite(lv.rate_l2)) {
      e["rate_L2"] = lv.rate_l2;
      e["rate_H1"] = lv.rate_h1;
      e["rate_vel"] = lv.rate_vel;
    }
    j["levels"].push_back(e);
  }
  return j;
}

/// CSV trajectory: time column followed by the coefficient entries.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  const int m = static_cast<int>(tr.alpha.front().size());
  os << "t";
  for (int j = 0; j < m; ++j) os << ",alpha" << j;
  for (int j = 0; j < m; ++j) os << ",alphadot" << j;
  os << "\n";
  os.precision(15);
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    os << tr.t[i];
    for (int j = 0; j < m; ++j) os << "," << tr.alpha[i][j];
    for (int j = 0; j < m; ++j) os << "," << tr.alphadot[i][j];
    os << "\n";
  }
}

/// CSV of a Picard state trajectory D = [alpha; alphadot] on its grid.
inline void write_trajectory_csv(std::ostream& os, const PicardResult& res) {
  const int m2 = static_cast<int>(res.trajectory.front().size());
  const int m = m2 / 2;
  os << "t";
  for (int j = 0; j < m; ++j) os << ",alpha" << j;
  for (int j = 0; j < m; ++j) os << ",alphadot" << j;
  os << "\n";
  os.precision(15);
  for (std::size_t i = 0; i < res.grid.size(); ++i) {
    os << res.grid[i];
    for (int j = 0; j < m2; ++j) os << "," << res.trajectory[i][j];
    os << "\n";
  }
}

}  // namespace memwave
