#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "selfaccel/frame.hpp"
#include "selfaccel/synthesis.hpp"

namespace selfaccel {

enum class FamilyTag {
  AiryFree,
  ConstIntensityInvHarm,
  ConstIntensityPowerLaw,
  GaussianLocalized,
  DarkSoliton,
  Synthesized,
};

std::string_view to_string(FamilyTag tag);
/// Accepts the kebab-case config names ("gaussian-localized", ...).
FamilyTag family_tag_from_string(std::string_view name);

/// Sign of the dark-soliton frame constant, mu = kDarkSolitonMuSign * sigma^2.
/// Frozen from the PDE-residual adjudication (see residual.hpp); a test re-runs it.
inline constexpr double kDarkSolitonMuSign = +1.0;

/// Coefficient c in mu' = mu + c * sigma_nl for constant-intensity waves under
/// V_R -> V_R + sigma_nl |Psi|^p. Frozen from the PDE-residual adjudication.
inline constexpr double kNonlinearMuShiftCoefficient = 1.0;

namespace family {

struct AiryFree {};
struct ConstIntensityInvHarm {
  double v0 = 1.0;
};
struct ConstIntensityPowerLaw {
  double v0 = 1.0;
  int n = 2;
  /// Overall sign of G; -1 reproduces the conventional leading minus of V_I.
  int branch_sign = -1;
};
struct GaussianLocalized {
  double omega = 1.0;
};
struct DarkSoliton {
  double sigma = 1.0;
};
struct Synthesized {
  std::shared_ptr<const Synthesis> synthesis;
};

}  // namespace family

/// One exact self-accelerating solution: envelope psi(q), auxiliary G(q) and
/// the comoving potential V_R(q) + i V_I(q) in the frame q = x - a t^2 / 2.
/// Immutable after construction.
class SolutionFamily {
 public:
  using Params = std::variant<family::AiryFree, family::ConstIntensityInvHarm, family::ConstIntensityPowerLaw,
                              family::GaussianLocalized, family::DarkSoliton, family::Synthesized>;

  static SolutionFamily airy_free(double a, double mu);
  /// Requires mu >= a^2 / (4 V0^2); at equality the smooth signed root is used.
  static SolutionFamily const_intensity_inv_harm(double v0, double a, double mu);
  static SolutionFamily const_intensity_power_law(double v0, int n, double a, int branch_sign = -1);
  /// mu = (omega - a^2 / omega^2) / 2.
  static SolutionFamily gaussian_localized(double omega, double a);
  /// V_R = -a q, mu = sigma^2.
  static SolutionFamily dark_soliton(double sigma, double a);
  static SolutionFamily synthesized(EnvelopeProfile psi, RealFn v_real, FrameParams frame,
                                    SynthesisOptions options = {});

  FamilyTag tag() const;
  const FrameParams& frame() const { return frame_; }
  const Params& params() const { return params_; }
  /// True when the inverted-harmonic family sits exactly at mu = a^2 / (4 V0^2).
  bool at_constant_gain_threshold() const { return threshold_; }
  BranchRule branch() const;

 private:
  SolutionFamily(Params p, FrameParams f, bool threshold = false)
      : params_(std::move(p)), frame_(f), threshold_(threshold) {}

  Params params_;
  FrameParams frame_;
  bool threshold_ = false;
};

double psi(const SolutionFamily& f, double q);
double psi_d1(const SolutionFamily& f, double q);
double psi_d2(const SolutionFamily& f, double q);
/// Signed G(q). Throws InvalidRegion for a Synthesized family where the radicand is negative.
double g_aux(const SolutionFamily& f, double q);
double g_aux_d1(const SolutionFamily& f, double q);
double v_real(const SolutionFamily& f, double q);
double v_real_d1(const SolutionFamily& f, double q);
/// Closed-form gain/loss profile. Throws InvalidRegion where a square-root argument is negative.
double v_imag(const SolutionFamily& f, double q);
/// Integral of G / psi^2 from 0 to q; closed form where available, else adaptive quadrature.
double phase_integral(const SolutionFamily& f, double q);

EnvelopeProfile envelope(const SolutionFamily& f);
AuxiliaryG auxiliary_g(const SolutionFamily& f);
RealFn v_real_profile(const SolutionFamily& f);
RealFn v_imag_profile(const SolutionFamily& f);

/// Shifted frame constant for the nonlinear extension of constant-intensity waves.
/// Independent of the exponent p.
double nonlinear_mu_shift(double mu, double sigma_nl, double p);

}  // namespace selfaccel
