#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "selfaccel/families.hpp"
#include "selfaccel/potential.hpp"

namespace selfaccel {

struct ResidualReport {
  double l_inf = 0.0;
  /// Grid-measure weighted: (sum |r|^2 step)^(1/2).
  double l2 = 0.0;
  std::size_t sample_count = 0;
  std::size_t skipped = 0;
  double grid_step = 0.0;
  /// "analytic" or "centered-fd"
  std::string derivative_scheme = "analytic";
  int fd_order = 0;
  double fd_step = 0.0;
  std::optional<double> convergence_order;
};

/// r(q) = G^2 - psi^3 (psi'' + 2 (mu - a q - V_R) psi).
ResidualReport ode_residual_G(const EnvelopeProfile& psi, const AuxiliaryG& g, const RealFn& v_real,
                              const FrameParams& frame, std::span<const double> samples);

/// r(q) = V_I - G' / (2 psi^2). Samples with |psi| < psi_floor are skipped and counted.
ResidualReport ode_residual_VI(const AuxiliaryG& g, const EnvelopeProfile& psi, const RealFn& v_imag,
                               std::span<const double> samples, double psi_floor = 1e-8);

/// Space-time sampler Psi(x, t).
using WaveFn = std::function<Complex(double, double)>;

/// r(x) = i dPsi/dt - [-1/2 d2Psi/dx2 + (V_R + i V_I + sigma |Psi|^p) Psi] on grid points,
/// with centred differences of the given order (2 or 4), step dx in space and dt_probe in time.
ResidualReport pde_residual(const WaveFn& wave, const ComovingPotential& potential,
                            const std::optional<NonlinearTerm>& nonlinear, const Grid1D& grid, double t,
                            double dt_probe, int order = 2);

struct LadderSpec {
  double x_min = -3.0;
  double x_max = 3.0;
  int n0 = 600;
  double t = 0.5;
  double dt_probe0 = 4e-3;
  int levels = 4;
  int order = 2;
};

struct LadderLevel {
  double dx = 0.0;
  double dt_probe = 0.0;
  ResidualReport report;
};

struct ResidualLadder {
  std::vector<LadderLevel> levels;
  double observed_order = 0.0;
  double final_residual = 0.0;
  /// Final L-inf residual < 1e-4 and observed order within 0.5 of the scheme order.
  bool converges = false;
};

/// pde_residual under simultaneous halving of dx and dt_probe; order from a log-log fit.
ResidualLadder residual_ladder(const WaveFn& wave, const ComovingPotential& potential,
                               const std::optional<NonlinearTerm>& nonlinear, const LadderSpec& spec);

struct PdeSetup {
  WaveFn wave;
  ComovingPotential potential;
  std::optional<NonlinearTerm> nonlinear;
};

struct DecisionRecord {
  std::string claim;
  double candidate_a = 0.0;
  double candidate_b = 0.0;
  ResidualLadder ladder_a;
  ResidualLadder ladder_b;
  std::optional<double> selected;
  /// "selected" or "inconclusive"
  std::string status;
};

/// Picks the candidate whose residual ladder converges to zero at the scheme order.
/// Inconclusive when both or neither converge (A == B selects A).
DecisionRecord adjudicate(const std::string& claim, double candidate_a, double candidate_b,
                          const std::function<PdeSetup(double)>& build, const LadderSpec& spec);

/// Dark soliton mu in {+sigma^2, -sigma^2}; the candidate enters through S(t).
DecisionRecord adjudicate_dark_soliton_mu(double sigma = 1.0, double a = 1.0, const LadderSpec& spec = {});

/// Coefficient c in mu' = mu + c sigma_nl for the inverted-harmonic constant-intensity wave.
DecisionRecord adjudicate_nonlinear_shift(double v0 = 1.0, double a = 1.0, double mu = 0.25, double sigma_nl = 0.1,
                                          double p = 2.0, double candidate_a = 1.0, double candidate_b = 2.0,
                                          const LadderSpec& spec = {});

}  // namespace selfaccel
