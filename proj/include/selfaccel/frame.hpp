#pragma once

#include <functional>

namespace selfaccel {

using RealFn = std::function<double(double)>;

/// Accelerating frame: x_c(t) = a t^2 / 2 and the real frame constant mu.
struct FrameParams {
  double a = 0.0;
  double mu = 0.0;

  bool operator==(const FrameParams&) const = default;
};

/// Validating constructor; rejects non-finite values.
FrameParams make_frame(double a, double mu);

inline double comoving_center(const FrameParams& f, double t) { return 0.5 * f.a * t * t; }
inline double comoving_velocity(const FrameParams& f, double t) { return f.a * t; }
inline double comoving_coordinate(const FrameParams& f, double x, double t) {
  return x - comoving_center(f, t);
}

/// Global phase S(t) = a^2 t^3 / 6 - mu t, with S(0) = 0.
double s_of_t(const FrameParams& frame, double t);

/// Real envelope psi with its first two derivatives.
struct EnvelopeProfile {
  enum class Scheme { Analytic, CenteredDifference };

  RealFn value;
  RealFn d1;
  RealFn d2;
  Scheme scheme = Scheme::Analytic;
  double fd_step = 0.0;

  static EnvelopeProfile analytic(RealFn value, RealFn d1, RealFn d2);
  /// Derivatives by second-order centered differences with step h.
  static EnvelopeProfile from_function(RealFn value, double h = 1e-4);
};

}  // namespace selfaccel
