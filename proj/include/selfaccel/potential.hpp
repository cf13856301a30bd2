#pragma once

#include <optional>
#include <string>

#include "selfaccel/families.hpp"
#include "selfaccel/grid.hpp"

namespace selfaccel {

/// V_R(q) + i V_I(q) riding with the frame: U(x, t) = V(x - a t^2 / 2).
struct ComovingPotential {
  RealFn v_real;
  RealFn v_imag;
  /// dV_R/dq, used for the Ehrenfest force. May be empty.
  RealFn v_real_d1;
  FrameParams frame;
  std::string description;

  Complex lab(double x, double t) const;
  double lab_force_gradient(double x, double t) const;
};

ComovingPotential comoving_potential(const SolutionFamily& f);
/// Time-independent lab-frame potential (a = 0).
ComovingPotential static_potential(RealFn v_real, RealFn v_imag, RealFn v_real_d1, std::string description);
ComovingPotential uniform_potential(double v_real, double v_imag);

/// sigma_nl |Psi|^p added to V_R.
struct NonlinearTerm {
  double sigma = 0.0;
  double p = 2.0;

  bool operator==(const NonlinearTerm&) const = default;
};

NonlinearTerm make_nonlinear(double sigma, double p);

/// Psi(x, t) = exp(i (a t q + int_0^q G/psi^2 + S(t))) psi(q), q = x - a t^2 / 2.
Complex lab_frame_value(const SolutionFamily& f, double x, double t);
/// Same with S(t) evaluated at a different frame constant (nonlinear shift, adjudication candidates).
Complex lab_frame_value(const SolutionFamily& f, double x, double t, double mu_for_phase);

ComplexWaveField assemble_lab_frame(const SolutionFamily& f, const Grid1D& grid, double t);
ComplexWaveField assemble_lab_frame(const SolutionFamily& f, const Grid1D& grid, double t, double mu_for_phase);

}  // namespace selfaccel
