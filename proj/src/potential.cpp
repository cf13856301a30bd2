#include "selfaccel/potential.hpp"

#include <cmath>

#include "selfaccel/errors.hpp"

namespace selfaccel {

Complex ComovingPotential::lab(double x, double t) const {
  const double q = comoving_coordinate(frame, x, t);
  return {v_real(q), v_imag(q)};
}

double ComovingPotential::lab_force_gradient(double x, double t) const {
  if (!v_real_d1) throw Error(ErrorCode::InvalidArgument, "potential has no V_R derivative");
  return v_real_d1(comoving_coordinate(frame, x, t));
}

ComovingPotential comoving_potential(const SolutionFamily& f) {
  ComovingPotential p;
  p.v_real = v_real_profile(f);
  p.v_imag = v_imag_profile(f);
  p.v_real_d1 = [f](double q) { return v_real_d1(f, q); };
  p.frame = f.frame();
  p.description = std::string(to_string(f.tag())) + " comoving potential";
  return p;
}

ComovingPotential static_potential(RealFn v_real, RealFn v_imag, RealFn v_real_d1, std::string description) {
  ComovingPotential p;
  p.v_real = std::move(v_real);
  p.v_imag = std::move(v_imag);
  p.v_real_d1 = std::move(v_real_d1);
  p.frame = FrameParams{0.0, 0.0};
  p.description = std::move(description);
  return p;
}

ComovingPotential uniform_potential(double vr, double vi) {
  return static_potential([vr](double) { return vr; }, [vi](double) { return vi; }, [](double) { return 0.0; },
                          "uniform V_R = " + std::to_string(vr) + ", V_I = " + std::to_string(vi));
}

NonlinearTerm make_nonlinear(double sigma, double p) {
  if (!std::isfinite(sigma)) throw Error(ErrorCode::ValidationError, "nonlinear strength must be finite");
  if (!(p > 0) || !std::isfinite(p)) throw Error(ErrorCode::ValidationError, "nonlinear exponent p must be positive");
  return NonlinearTerm{sigma, p};
}

Complex lab_frame_value(const SolutionFamily& f, double x, double t, double mu_for_phase) {
  const auto& fr = f.frame();
  const double q = comoving_coordinate(fr, x, t);
  const double amplitude = psi(f, q);
  const double phase = comoving_velocity(fr, t) * q + phase_integral(f, q) + s_of_t(FrameParams{fr.a, mu_for_phase}, t);
  return std::polar(1.0, phase) * amplitude;
}

Complex lab_frame_value(const SolutionFamily& f, double x, double t) {
  return lab_frame_value(f, x, t, f.frame().mu);
}

ComplexWaveField assemble_lab_frame(const SolutionFamily& f, const Grid1D& grid, double t, double mu_for_phase) {
  ComplexWaveField field(grid);
  for (int j = 0; j < grid.size(); ++j) field.values[j] = lab_frame_value(f, grid.x(j), t, mu_for_phase);
  return field;
}

ComplexWaveField assemble_lab_frame(const SolutionFamily& f, const Grid1D& grid, double t) {
  return assemble_lab_frame(f, grid, t, f.frame().mu);
}

}  // namespace selfaccel
