#pragma once

#include <optional>
#include <string>
#include <vector>

#include "selfaccel/families.hpp"
#include "selfaccel/grid.hpp"
#include "selfaccel/propagator.hpp"

namespace selfaccel {

/// L2 mass sum |Psi|^2 dx.
double norm(const ComplexWaveField& field);

/// <x> = sum x |Psi|^2 dx / N. Throws NormFloor when N <= floor: the
/// centre of mass of a vanishing (or non-normalisable, truncated-away) field is undefined.
double centroid(const ComplexWaveField& field, double floor = 1e-12);

struct PeakResult {
  double position = 0.0;
  int index = 0;
  /// Set when the three largest samples agree to within 1e-12.
  bool degenerate = false;
};

/// argmax |Psi|^2, leftmost on ties, refined by a 3-point parabola.
PeakResult peak_position(const ComplexWaveField& field);
/// argmin |Psi|^2 with the same machinery (dark-soliton notch tracking).
PeakResult trough_position(const ComplexWaveField& field);
/// Local maximum of |Psi|^2 nearest to guess within +-radius (main-lobe tracking).
PeakResult local_peak_position(const ComplexWaveField& field, double guess, double radius);
/// Local minimum of |Psi|^2 within guess +- radius (notch tracking away from absorbed edges).
PeakResult local_trough_position(const ComplexWaveField& field, double guess, double radius);
/// Same search over arbitrary samples living on the grid.
PeakResult local_sample_minimum(std::vector<double> samples, const Grid1D& grid, double guess, double radius);

struct Trajectory {
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<double> norms;
  std::string source;
};

struct ParabolaFit {
  double x0 = 0.0;
  double v0 = 0.0;
  double acc = 0.0;
  double rms_residual = 0.0;
};

/// Least squares x(t) = x0 + v0 t + acc t^2 / 2 via an orthogonalised basis.
/// Throws DegenerateTimes with fewer than three distinct times.
ParabolaFit fit_parabola(const Trajectory& traj);

struct EhrenfestSeries {
  std::vector<double> times;
  std::vector<double> residuals;
  std::vector<double> centroid_acceleration;
};

/// r(t_i) = d^2<x>/dt^2 + <dV_R/dx>/N at interior recorded times. Needs stored fields.
/// Uniform records use centred second differences; otherwise a local parabola refit.
EhrenfestSeries ehrenfest_residual(const PropagationRecord& record, const ComovingPotential& potential,
                                   double norm_floor = 1e-12);

/// max over [x_lo, x_hi] of | |Psi|^2 - target |.
double intensity_flatness(const ComplexWaveField& field, double x_lo, double x_hi, double target);

struct AnalyticComparison {
  double l2 = 0.0;
  double l_inf = 0.0;
  bool phase_aligned = false;
  double removed_phase = 0.0;
};

/// Error norms of the field against reference samples, optionally after removing the
/// global phase that maximises the overlap. Restricted to [x_lo, x_hi] when given.
AnalyticComparison compare_fields(const ComplexWaveField& field, const ComplexWaveField& reference, bool align_phase,
                                  std::optional<std::pair<double, double>> window = std::nullopt);
AnalyticComparison compare_to_analytic(const ComplexWaveField& field, const SolutionFamily& family, double t,
                                       bool align_phase = false,
                                       std::optional<std::pair<double, double>> window = std::nullopt);

/// Local wavenumber Im(conj(Psi) dPsi/dx) / |Psi|^2 with a spectral derivative.
std::vector<double> local_wavenumber(const ComplexWaveField& field);

}  // namespace selfaccel
