#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

#include "memwave/config.hpp"
#include "memwave/convergence.hpp"
#include "memwave/manufactured.hpp"
#include "memwave/picard.hpp"
#include "memwave/reporting.hpp"

namespace memwave {

/// Exit codes of the experiment runner.
enum ExitCode {
  kOk = 0,
  kValidationFailure = 1,
  kSolverNonConvergence = 2,
  kConfigError = 3,
};

namespace detail {

inline MemoryKernel make_kernel(const ExperimentConfig::Kernel& k, double horizon) {
  if (k.variant == "exponential")
    return MemoryKernel::exponential(k.amplitude, k.rate, horizon);
  if (k.variant == "power-law")
    return MemoryKernel::power_law(k.alpha, k.scale, horizon);
  return MemoryKernel::zero(horizon);
}

inline void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream os(p);
  os << body;
}

/// Galerkin system for the configured manufactured problem.
inline SemidiscreteSystem make_system(const ExperimentConfig& c,
                                      const ManufacturedProblem& prob,
                                      GalerkinSpace& sp_out) {
  if (c.space.kind == "spectral")
    sp_out = GalerkinSpace::spectral(c.space.modes);
  else
    sp_out = GalerkinSpace::fem_1d(Mesh1D::uniform(0.0, 1.0, c.space.elements),
                                   c.space.degree);
  const GalerkinSpace& sp = sp_out;
  SemidiscreteSystem sys;
  sys.pair = assemble(sp, EllipticForm::scalar_laplace());
  sys.kernel = prob.kernel();
  sys.T = c.problem.final_time;
  const bool spectral = sp.kind() == SpaceKind::Spectral;
  auto [a0, v0] = initial_coefficients(
      sp, sys.pair,
      {prob.initial_displacement(), prob.initial_displacement_gradient()},
      {prob.initial_velocity(), nullptr},
      spectral ? InitialProjection::Fourier : InitialProjection::Ritz,
      spectral ? InitialProjection::Fourier : InitialProjection::L2);
  sys.alpha0 = a0;
  sys.alphadot0 = v0;
  sys.load = [&sp, &prob](double t) {
    return assemble_load(sp, [&prob, t](double x, double) { return prob.f(x, t); });
  };
  return sys;
}

}  // namespace detail

/// Execute a parsed config; artifacts land in `out_dir`, a run summary goes
/// to `log` unless quiet.
inline int run(const ExperimentConfig& c, const std::filesystem::path& out_dir,
               std::uint64_t seed, bool quiet, std::ostream& log) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto say = [&](const std::string& s) {
    if (!quiet) log << s << "\n";
  };

  if (c.command == "validate-kernel") {
    const MemoryKernel kernel = detail::make_kernel(c.kernel, c.kernel.horizon);
    const KernelValidationReport rep = validate(kernel, c.kernel.horizon);
    nlohmann::json j = to_json(rep);
    if (rep.admissible && kernel.variant() != KernelVariant::Zero) {
      // seeded positive-type spot check on random piecewise-linear functions
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      const XiFunction xi(kernel);
      double worst = 0.0;
      for (int trial = 0; trial < 8; ++trial) {
        SampledFunction phi;
        phi.T = c.kernel.horizon;
        phi.values.resize(17);
        for (auto& v : phi.values) v = dist(rng);
        worst = std::min(worst, positive_type_check(xi, phi, 64));
      }
      j["positive_type_min"] = worst;
    }
    detail::write_file(out_dir / "report.json", j.dump(2));
    say(rep.summary());
    return rep.admissible ? kOk : kValidationFailure;
  }

  const MemoryKernel kernel = detail::make_kernel(c.kernel, c.problem.final_time);
  const KernelValidationReport krep = validate(kernel, c.problem.final_time);
  if (!krep.admissible) {
    say("kernel not admissible on [0,T]:\n" + krep.summary());
    detail::write_file(out_dir / "report.json", to_json(krep).dump(2));
    return kValidationFailure;
  }
  const ManufacturedProblem prob =
      ManufacturedProblem::family(c.problem.family, kernel, c.problem.wave_number);

  if (c.command == "solve") {
    GalerkinSpace sp = GalerkinSpace::spectral(1);
    const SemidiscreteSystem sys = detail::make_system(c, prob, sp);
    const TimeScheme scheme = c.solver.scheme == "trapezoidal"
                                  ? TimeScheme::Trapezoidal
                                  : TimeScheme::Newmark;
    const Trajectory tr = time_step_solve(sys, c.solver.steps, scheme);
    {
      std::ofstream os(out_dir / "trajectory.csv");
      write_trajectory_csv(os, tr);
    }
    const ErrorNorms en =
        error_norms(sp, tr.alpha.back(), tr.alphadot.back(), prob, sys.T);
    nlohmann::json j{{"e_L2", en.l2_displacement},
                     {"e_H1", en.energy_displacement},
                     {"e_vel", en.l2_velocity},
                     {"steps", c.solver.steps},
                     {"dim", sp.dimension()}};
    detail::write_file(out_dir / "report.json", j.dump(2));
    say("solve: dim=" + std::to_string(sp.dimension()) +
        " e_L2=" + std::to_string(en.l2_displacement));
    return kOk;
  }

  if (c.command == "picard-certify") {
    GalerkinSpace sp = GalerkinSpace::spectral(1);
    const SemidiscreteSystem sys = detail::make_system(c, prob, sp);
    const VolterraIE ie(sys);
    PicardOptions opt;
    opt.max_iters = c.solver.max_iters;
    opt.tol = c.solver.tol;
    const PicardResult res = picard_solve(ie, c.solver.steps, opt);
    detail::write_file(out_dir / "certificate.json",
                       to_json(res.certificate).dump(2));
    {
      std::ofstream os(out_dir / "trajectory.csv");
      write_trajectory_csv(os, res);
    }
    say("picard: iterations=" + std::to_string(res.iterations) +
        " last_increment=" + std::to_string(res.last_increment) +
        (res.certificate.dominated() ? " certificate=dominated"
                                     : " certificate=VIOLATED"));
    if (!res.converged) {
      say("picard iteration did not reach tol");
      return kSolverNonConvergence;
    }
    return kOk;
  }

  if (c.command == "convergence") {
    ConvergenceOptions opt;
    opt.degree = c.space.degree;
    opt.levels = c.space.levels;
    opt.base_elements = c.space.elements;
    opt.T = c.problem.final_time;
    opt.scheme = c.solver.scheme == "trapezoidal" ? TimeScheme::Trapezoidal
                                                  : TimeScheme::Newmark;
    if (kernel.variant() == KernelVariant::PowerLaw) {
      opt.dt_policy = DtPolicy::Fixed;
      opt.fixed_steps = 2048;
    } else {
      opt.dt_policy = opt.degree == 1 ? DtPolicy::MatchH : DtPolicy::HPow32;
    }
    const ConvergenceReport rep = run_convergence(prob, opt);
    {
      std::ofstream os(out_dir / "report.csv");
      rep.write_csv(os);
    }
    detail::write_file(out_dir / "report.json", to_json(rep).dump(2));
    if (!quiet) rep.write_csv(log);
    return kOk;
  }

  say("unknown command: " + c.command);
  return kConfigError;
}

}  // namespace memwave
