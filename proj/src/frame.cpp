#include "selfaccel/frame.hpp"

#include <cmath>
#include <utility>

#include "selfaccel/errors.hpp"

namespace selfaccel {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidRegion: return "InvalidRegion";
    case ErrorCode::DivisionNearZero: return "DivisionNearZero";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::NormFloor: return "NormFloor";
    case ErrorCode::DegenerateTimes: return "DegenerateTimes";
    case ErrorCode::NormalizationError: return "NormalizationError";
    case ErrorCode::IOFailure: return "IOFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

FrameParams make_frame(double a, double mu) {
  if (!std::isfinite(a)) throw Error(ErrorCode::ValidationError, "acceleration a must be finite");
  if (!std::isfinite(mu)) throw Error(ErrorCode::ValidationError, "frame constant mu must be finite and real");
  return FrameParams{a, mu};
}

double s_of_t(const FrameParams& frame, double t) {
  return frame.a * frame.a * t * t * t / 6.0 - frame.mu * t;
}

EnvelopeProfile EnvelopeProfile::analytic(RealFn value, RealFn d1, RealFn d2) {
  EnvelopeProfile p;
  p.value = std::move(value);
  p.d1 = std::move(d1);
  p.d2 = std::move(d2);
  p.scheme = Scheme::Analytic;
  return p;
}

EnvelopeProfile EnvelopeProfile::from_function(RealFn value, double h) {
  if (!(h > 0)) throw Error(ErrorCode::InvalidArgument, "finite-difference step must be positive");
  EnvelopeProfile p;
  p.value = value;
  p.d1 = [f = value, h](double q) { return (f(q + h) - f(q - h)) / (2 * h); };
  p.d2 = [f = value, h](double q) { return (f(q + h) - 2 * f(q) + f(q - h)) / (h * h); };
  p.scheme = Scheme::CenteredDifference;
  p.fd_step = h;
  return p;
}

}  // namespace selfaccel
