#pragma once

#include <memory>
#include <string>
#include <vector>

#include "selfaccel/frame.hpp"

namespace selfaccel {

/// How the sign of G = +-sqrt(radicand) was chosen.
struct BranchRule {
  std::string kind;  // "zero", "positive-root", "negative-root", "smooth-signed", "closed-form"
  int sign_at_right = +1;
  std::vector<double> flip_points;

  bool operator==(const BranchRule&) const = default;
};

/// Signed auxiliary function G(q) and its derivative.
struct AuxiliaryG {
  RealFn value;
  RealFn d1;
  BranchRule branch;
  EnvelopeProfile::Scheme derivative_scheme = EnvelopeProfile::Scheme::Analytic;
  double fd_step = 0.0;
};

struct SynthesisOptions {
  double q_min = -10.0;
  double q_max = 10.0;
  int scan_points = 4001;
  /// Sign of G to the right of the last flip point.
  int sign_at_right = +1;
  /// Radicand values down to -tolerance * max|radicand| count as zero.
  double radicand_tolerance = 1e-12;
  double psi_floor = 1e-8;
  /// Step of the fourth-order stencil used for G'.
  double fd_step = 1e-3;
  /// Within this distance of a flip point G is taken from a local interpolant.
  double flip_halo = 0.02;

  bool operator==(const SynthesisOptions&) const = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Output of the master-equation synthesis: G from the radicand
/// psi^3 (psi'' + 2 (mu - a q - V_R) psi) and V_I = G' / (2 psi^2).
class Synthesis {
 public:
  const EnvelopeProfile& psi() const { return psi_; }
  const RealFn& v_real() const { return v_real_; }
  const FrameParams& frame() const { return frame_; }
  const SynthesisOptions& options() const { return options_; }
  const AuxiliaryG& g() const { return g_; }

  double radicand(double q) const;
  bool valid(double q) const;
  /// Throws DivisionNearZero where |psi| < psi_floor, InvalidRegion where the radicand is negative.
  double v_imag(double q) const;
  const std::vector<Interval>& invalid_intervals() const { return invalid_intervals_; }
  double tolerance() const { return tolerance_; }

 private:
  friend std::shared_ptr<const Synthesis> synthesize(EnvelopeProfile, RealFn, FrameParams, SynthesisOptions);
  struct State;

  EnvelopeProfile psi_;
  RealFn v_real_;
  FrameParams frame_;
  SynthesisOptions options_;
  AuxiliaryG g_;
  std::vector<Interval> invalid_intervals_;
  double tolerance_ = 0.0;
  std::shared_ptr<const State> state_;
};

/// Throws InvalidRegion when the radicand is negative over the whole scan domain.
std::shared_ptr<const Synthesis> synthesize(EnvelopeProfile psi, RealFn v_real, FrameParams frame,
                                            SynthesisOptions options = {});

/// Envelope from samples on a uniform grid via local Lagrange interpolation.
EnvelopeProfile interpolate_envelope(std::vector<double> q, std::vector<double> psi, int degree = 7);
RealFn interpolate_profile(std::vector<double> q, std::vector<double> values, int degree = 7);

struct TableSynthesis {
  std::vector<double> q;
  std::vector<double> psi;
  std::vector<double> v_real;
  std::vector<double> g;
  std::vector<double> v_imag;
  std::vector<bool> valid;
  BranchRule branch;
};

/// Synthesis evaluated at the nodes of a tabulated envelope. Nodes where the
/// radicand is negative or psi is below the floor are marked invalid.
TableSynthesis synthesize_table(const std::vector<double>& q, const std::vector<double>& psi,
                                const std::vector<double>& v_real, FrameParams frame, int sign_at_right = +1);

}  // namespace selfaccel
