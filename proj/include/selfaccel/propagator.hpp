#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "selfaccel/errors.hpp"
#include "selfaccel/potential.hpp"

namespace selfaccel {

enum class Scheme { SplitStep, CrankNicolson };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);

/// Imaginary sink -i s ramp^4 over the outer layer_width at both domain edges.
struct Absorber {
  double layer_width = 0.0;
  double strength = 5.0;

  bool operator==(const Absorber&) const = default;
};

struct PropagatorConfig {
  double dt = 1e-3;
  int n_steps = 0;
  Scheme scheme = Scheme::SplitStep;
  std::optional<Absorber> absorber;
  int record_stride = 1;
  bool store_fields = true;
  double t0 = 0.0;
  double overflow_ceiling = 1e12;
  double norm_floor = 1e-12;

  bool operator==(const PropagatorConfig&) const = default;
};

struct StepFailure {
  ErrorCode code;
  std::string message;
  int step = 0;
};

/// Snapshots and scalar diagnostics of one run, valid up to the failing step if any.
struct PropagationRecord {
  Grid1D grid;
  std::vector<double> times;
  std::vector<double> norms;
  std::vector<std::optional<double>> centroids;
  std::vector<double> peaks;
  std::vector<double> max_abs;
  std::vector<ComplexWaveField> fields;
  int completed_steps = 0;
  std::vector<std::string> warnings;
  std::optional<StepFailure> failure;
};

/// Spectral workspace for split-step steps on a fixed grid. Not shareable across threads.
class SplitStepWorkspace {
 public:
  explicit SplitStepWorkspace(const Grid1D& grid);
  ~SplitStepWorkspace();
  SplitStepWorkspace(SplitStepWorkspace&&) noexcept;
  SplitStepWorkspace& operator=(SplitStepWorkspace&&) noexcept;
  SplitStepWorkspace(const SplitStepWorkspace&) = delete;
  SplitStepWorkspace& operator=(const SplitStepWorkspace&) = delete;

  /// exp(-i k^2 dt / 2) in spectral space.
  void kinetic(std::vector<Complex>& values, double dt);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One Strang step: half potential (with gain factor exp(+V_I dt/2)), full kinetic, half potential.
/// The potential is frozen at t + dt/2. Throws Overflow past the ceiling.
ComplexWaveField step_splitstep(const ComplexWaveField& field, const ComovingPotential& potential,
                                const std::optional<NonlinearTerm>& nonlinear, double t, double dt,
                                double overflow_ceiling = 1e12);

/// (1 + i dt/2 H) Psi_new = (1 - i dt/2 H) Psi_old with the 3-point Laplacian, periodic closure.
/// Nonlinear term lagged on Psi_old. Throws SolveFailure on a singular system.
ComplexWaveField step_crank_nicolson(const ComplexWaveField& field, const ComovingPotential& potential,
                                     const std::optional<NonlinearTerm>& nonlinear, double t, double dt,
                                     double overflow_ceiling = 1e12);

PropagationRecord propagate(const ComplexWaveField& initial, const ComovingPotential& potential,
                            const std::optional<NonlinearTerm>& nonlinear, const PropagatorConfig& config);

/// Solves a cyclic tridiagonal system: sub[i] A(i,i-1), diag[i], super[i] A(i,i+1), with
/// A(0,n-1) = sub[0] and A(n-1,0) = super[n-1]. Throws SolveFailure when singular.
std::vector<Complex> solve_cyclic_tridiagonal(const std::vector<Complex>& sub, const std::vector<Complex>& diag,
                                              const std::vector<Complex>& super, const std::vector<Complex>& rhs);

}  // namespace selfaccel
