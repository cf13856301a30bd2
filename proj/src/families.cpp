#include "selfaccel/families.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "selfaccel/airy.hpp"
#include "selfaccel/errors.hpp"

namespace selfaccel {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double int_pow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

double sech2(double x) {
  const double c = std::cosh(x);
  return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
}

double log_cosh(double x) {
  const double ax = std::fabs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

double sign_of(double x) { return x < 0 ? -1.0 : 1.0; }

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw Error(ErrorCode::ValidationError, std::string(name) + " must be finite");
}

// Half the inverted-harmonic radicand: mu - a q + V0^2 q^2.
double inv_harm_half_radicand(double v0, const FrameParams& f, double q) {
  return f.mu - f.a * q + v0 * v0 * q * q;
}

double inv_harm_root(double v0, const FrameParams& f, double q) {
  const double r = inv_harm_half_radicand(v0, f, q);
  if (r < 0) throw Error(ErrorCode::InvalidRegion, "negative square-root argument at q = " + std::to_string(q));
  return std::sqrt(2.0 * r);
}

}  // namespace

std::string_view to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::AiryFree: return "airy-free";
    case FamilyTag::ConstIntensityInvHarm: return "const-intensity-inv-harm";
    case FamilyTag::ConstIntensityPowerLaw: return "const-intensity-power-law";
    case FamilyTag::GaussianLocalized: return "gaussian-localized";
    case FamilyTag::DarkSoliton: return "dark-soliton";
    case FamilyTag::Synthesized: return "synthesized";
  }
  return "unknown";
}

FamilyTag family_tag_from_string(std::string_view name) {
  for (auto tag : {FamilyTag::AiryFree, FamilyTag::ConstIntensityInvHarm, FamilyTag::ConstIntensityPowerLaw,
                   FamilyTag::GaussianLocalized, FamilyTag::DarkSoliton, FamilyTag::Synthesized}) {
    if (to_string(tag) == name) return tag;
  }
  throw Error(ErrorCode::ValidationError, "unknown family '" + std::string(name) + "'");
}

SolutionFamily SolutionFamily::airy_free(double a, double mu) {
  const auto frame = make_frame(a, mu);
  if (a == 0.0) throw Error(ErrorCode::ValidationError, "Airy family needs a != 0");
  return SolutionFamily(family::AiryFree{}, frame);
}

SolutionFamily SolutionFamily::const_intensity_inv_harm(double v0, double a, double mu) {
  require_finite(v0, "V0");
  auto frame = make_frame(a, mu);
  if (v0 == 0.0) throw Error(ErrorCode::ValidationError, "inverted-harmonic family needs V0 != 0");
  const double threshold = a * a / (4.0 * v0 * v0);
  const double slack = 1e-12 * std::max(1.0, threshold);
  if (mu < threshold - slack) {
    throw Error(ErrorCode::ValidationError, "mu = " + std::to_string(mu) + " < a^2/(4 V0^2) = " +
                                                std::to_string(threshold) + ": square-root argument negative");
  }
  const bool at_threshold = std::fabs(mu - threshold) <= slack;
  if (at_threshold) frame.mu = threshold;
  return SolutionFamily(family::ConstIntensityInvHarm{v0}, frame, at_threshold);
}

SolutionFamily SolutionFamily::const_intensity_power_law(double v0, int n, double a, int branch_sign) {
  require_finite(v0, "V0");
  const auto frame = make_frame(a, 0.0);
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::ValidationError, "power-law exponent n must be even and >= 2");
  if (branch_sign != 1 && branch_sign != -1) throw Error(ErrorCode::ValidationError, "branch sign must be +1 or -1");
  return SolutionFamily(family::ConstIntensityPowerLaw{v0, n, branch_sign}, frame);
}

SolutionFamily SolutionFamily::gaussian_localized(double omega, double a) {
  require_finite(omega, "omega");
  if (!(omega > 0)) throw Error(ErrorCode::ValidationError, "Gaussian family needs omega > 0");
  const auto frame = make_frame(a, 0.5 * (omega - a * a / (omega * omega)));
  return SolutionFamily(family::GaussianLocalized{omega}, frame);
}

SolutionFamily SolutionFamily::dark_soliton(double sigma, double a) {
  require_finite(sigma, "sigma");
  if (sigma == 0.0) throw Error(ErrorCode::ValidationError, "dark soliton needs sigma != 0");
  const auto frame = make_frame(a, kDarkSolitonMuSign * sigma * sigma);
  return SolutionFamily(family::DarkSoliton{sigma}, frame);
}

SolutionFamily SolutionFamily::synthesized(EnvelopeProfile psi, RealFn v_real, FrameParams frame,
                                           SynthesisOptions options) {
  auto syn = synthesize(std::move(psi), std::move(v_real), frame, options);
  return SolutionFamily(family::Synthesized{std::move(syn)}, frame);
}

FamilyTag SolutionFamily::tag() const {
  return static_cast<FamilyTag>(params_.index());
}

BranchRule SolutionFamily::branch() const {
  return std::visit(
      overloaded{
          [](const family::AiryFree&) { return BranchRule{"zero", +1, {}}; },
          [this](const family::ConstIntensityInvHarm& p) {
            if (threshold_) {
              return BranchRule{"smooth-signed", static_cast<int>(sign_of(p.v0)), {frame_.a / (2 * p.v0 * p.v0)}};
            }
            return BranchRule{"positive-root", +1, {}};
          },
          [](const family::ConstIntensityPowerLaw& p) {
            const int right = p.branch_sign * static_cast<int>(sign_of(p.v0));
            std::vector<double> flips;
            if ((p.n / 2) % 2 == 1) flips.push_back(0.0);
            std::string kind = !flips.empty() ? "smooth-signed" : (right > 0 ? "positive-root" : "negative-root");
            return BranchRule{kind, right, flips};
          },
          [](const family::GaussianLocalized&) { return BranchRule{"smooth-signed", +1, {0.0}}; },
          [](const family::DarkSoliton&) { return BranchRule{"smooth-signed", +1, {0.0}}; },
          [](const family::Synthesized& s) { return s.synthesis->g().branch; },
      },
      params_);
}

double psi(const SolutionFamily& f, double q) {
  const auto& fr = f.frame();
  return std::visit(overloaded{
                        [&](const family::AiryFree&) { return airy_ai(std::cbrt(2 * fr.a) * (q - fr.mu / fr.a)); },
                        [](const family::ConstIntensityInvHarm&) { return 1.0; },
                        [](const family::ConstIntensityPowerLaw&) { return 1.0; },
                        [&](const family::GaussianLocalized& p) {
                          return std::exp(-0.5 * p.omega * q * q - fr.a / p.omega * q);
                        },
                        [&](const family::DarkSoliton& p) { return std::tanh(p.sigma * q); },
                        [&](const family::Synthesized& s) { return s.synthesis->psi().value(q); },
                    },
                    f.params());
}

double psi_d1(const SolutionFamily& f, double q) {
  const auto& fr = f.frame();
  return std::visit(overloaded{
                        [&](const family::AiryFree&) {
                          const double k = std::cbrt(2 * fr.a);
                          return k * airy_ai_prime(k * (q - fr.mu / fr.a));
                        },
                        [](const family::ConstIntensityInvHarm&) { return 0.0; },
                        [](const family::ConstIntensityPowerLaw&) { return 0.0; },
                        [&](const family::GaussianLocalized& p) {
                          return -(p.omega * q + fr.a / p.omega) * psi(f, q);
                        },
                        [&](const family::DarkSoliton& p) { return p.sigma * sech2(p.sigma * q); },
                        [&](const family::Synthesized& s) { return s.synthesis->psi().d1(q); },
                    },
                    f.params());
}

double psi_d2(const SolutionFamily& f, double q) {
  const auto& fr = f.frame();
  return std::visit(overloaded{
                        [&](const family::AiryFree&) {
                          const double k = std::cbrt(2 * fr.a);
                          const double z = k * (q - fr.mu / fr.a);
                          return k * k * z * airy_ai(z);
                        },
                        [](const family::ConstIntensityInvHarm&) { return 0.0; },
                        [](const family::ConstIntensityPowerLaw&) { return 0.0; },
                        [&](const family::GaussianLocalized& p) {
                          const double s = p.omega * q + fr.a / p.omega;
                          return (s * s - p.omega) * psi(f, q);
                        },
                        [&](const family::DarkSoliton& p) {
                          const double x = p.sigma * q;
                          return -2.0 * p.sigma * p.sigma * std::tanh(x) * sech2(x);
                        },
                        [&](const family::Synthesized& s) { return s.synthesis->psi().d2(q); },
                    },
                    f.params());
}

double g_aux(const SolutionFamily& f, double q) {
  const auto& fr = f.frame();
  return std::visit(overloaded{
                        [](const family::AiryFree&) { return 0.0; },
                        [&](const family::ConstIntensityInvHarm& p) {
                          if (f.at_constant_gain_threshold()) return kSqrt2 * (p.v0 * q - fr.a / (2 * p.v0));
                          return inv_harm_root(p.v0, fr, q);
                        },
                        [&](const family::ConstIntensityPowerLaw& p) {
                          return p.branch_sign * kSqrt2 * p.v0 * int_pow(q, p.n / 2);
                        },
                        [&](const family::GaussianLocalized& p) {
                          const double s = psi(f, q);
                          return p.omega * q * s * s;
                        },
                        [&](const family::DarkSoliton& p) { return kSqrt2 * p.sigma * int_pow(std::tanh(p.sigma * q), 3); },
                        [&](const family::Synthesized& s) { return s.synthesis->g().value(q); },
                    },
                    f.params());
}

double g_aux_d1(const SolutionFamily& f, double q) {
  const auto& fr = f.frame();
  return std::visit(overloaded{
                        [](const family::AiryFree&) { return 0.0; },
                        [&](const family::ConstIntensityInvHarm& p) {
                          if (f.at_constant_gain_threshold()) return kSqrt2 * p.v0;
                          return (2 * p.v0 * p.v0 * q - fr.a) / inv_harm_root(p.v0, fr, q);
                        },
                        [&](const family::ConstIntensityPowerLaw& p) {
                          return p.branch_sign * kSqrt2 * p.v0 * (p.n / 2) * int_pow(q, p.n / 2 - 1);
                        },
                        [&](const family::GaussianLocalized& p) {
                          const double s = psi(f, q);
                          return p.omega * s * s * (1.0 - 2.0 * q * (p.omega * q + fr.a / p.omega));
                        },
                        [&](const family::DarkSoliton& p) {
                          const double x = p.sigma * q;
                          const double t = std::tanh(x);
                          return 3.0 * kSqrt2 * p.sigma * p.sigma * t * t * sech2(x);
                        },
                        [&](const family::Synthesized& s) { return s.synthesis->g().d1(q); },
                    },
                    f.params());
}

double v_real(const SolutionFamily& f, double q) {
  const auto& fr = f.frame();
  return std::visit(overloaded{
                        [](const family::AiryFree&) { return 0.0; },
                        [&](const family::ConstIntensityInvHarm& p) { return -p.v0 * p.v0 * q * q; },
                        [&](const family::ConstIntensityPowerLaw& p) {
                          return -fr.a * q - p.v0 * p.v0 * int_pow(q, p.n);
                        },
                        [](const family::GaussianLocalized&) { return 0.0; },
                        [&](const family::DarkSoliton&) { return -fr.a * q; },
                        [&](const family::Synthesized& s) { return s.synthesis->v_real()(q); },
                    },
                    f.params());
}

double v_real_d1(const SolutionFamily& f, double q) {
  const auto& fr = f.frame();
  return std::visit(overloaded{
                        [](const family::AiryFree&) { return 0.0; },
                        [&](const family::ConstIntensityInvHarm& p) { return -2.0 * p.v0 * p.v0 * q; },
                        [&](const family::ConstIntensityPowerLaw& p) {
                          return -fr.a - p.n * p.v0 * p.v0 * int_pow(q, p.n - 1);
                        },
                        [](const family::GaussianLocalized&) { return 0.0; },
                        [&](const family::DarkSoliton&) { return -fr.a; },
                        [&](const family::Synthesized& s) {
                          const double h = 1e-5;
                          return (s.synthesis->v_real()(q + h) - s.synthesis->v_real()(q - h)) / (2 * h);
                        },
                    },
                    f.params());
}

double v_imag(const SolutionFamily& f, double q) {
  const auto& fr = f.frame();
  return std::visit(overloaded{
                        [](const family::AiryFree&) { return 0.0; },
                        [&](const family::ConstIntensityInvHarm& p) {
                          if (f.at_constant_gain_threshold()) return p.v0 / kSqrt2;
                          return -(fr.a - 2 * p.v0 * p.v0 * q) / (2.0 * inv_harm_root(p.v0, fr, q));
                        },
                        [&](const family::ConstIntensityPowerLaw& p) {
                          return p.branch_sign * p.n / (2.0 * kSqrt2) * p.v0 * int_pow(q, p.n / 2 - 1);
                        },
                        [&](const family::GaussianLocalized& p) {
                          return -p.omega * p.omega * q * q - fr.a * q + 0.5 * p.omega;
                        },
                        [&](const family::DarkSoliton& p) {
                          return 3.0 / kSqrt2 * p.sigma * p.sigma * sech2(p.sigma * q);
                        },
                        [&](const family::Synthesized& s) { return s.synthesis->v_imag(q); },
                    },
                    f.params());
}

double phase_integral(const SolutionFamily& f, double q) {
  const auto& fr = f.frame();
  return std::visit(
      overloaded{
          [](const family::AiryFree&) { return 0.0; },
          [&](const family::ConstIntensityInvHarm& p) {
            if (f.at_constant_gain_threshold()) return kSqrt2 * (0.5 * p.v0 * q * q - fr.a * q / (2 * p.v0));
            // sqrt(2) * int sqrt(c^2 u^2 + D) du with u = q - a/(2 V0^2).
            const double c = std::fabs(p.v0);
            const double q_star = fr.a / (2 * p.v0 * p.v0);
            const double d = fr.mu - fr.a * fr.a / (4 * p.v0 * p.v0);
            const auto antiderivative = [c, d](double u) {
              return 0.5 * u * std::sqrt(c * c * u * u + d) + d / (2 * c) * std::asinh(c * u / std::sqrt(d));
            };
            return kSqrt2 * (antiderivative(q - q_star) - antiderivative(-q_star));
          },
          [&](const family::ConstIntensityPowerLaw& p) {
            const int m = p.n / 2 + 1;
            return p.branch_sign * kSqrt2 * p.v0 * int_pow(q, m) / m;
          },
          [&](const family::GaussianLocalized& p) { return 0.5 * p.omega * q * q; },
          [&](const family::DarkSoliton& p) { return kSqrt2 * log_cosh(p.sigma * q); },
          [&](const family::Synthesized& s) {
            if (q == 0.0) return 0.0;
            const auto& syn = *s.synthesis;
            auto integrand = [&syn](double x) {
              const double ps = syn.psi().value(x);
              return syn.g().value(x) / (ps * ps);
            };
            double error = 0.0;
            double result = 0.0;
            try {
              result = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, q, 15, 1e-12,
                                                                                    &error);
            } catch (const std::exception& e) {
              throw Error(ErrorCode::QuadratureFailure, e.what());
            }
            if (!std::isfinite(result) || error > 1e-8 * (1.0 + std::fabs(result))) {
              throw Error(ErrorCode::QuadratureFailure,
                          "phase integral to q = " + std::to_string(q) + " did not meet tolerance");
            }
            return result;
          },
      },
      f.params());
}

EnvelopeProfile envelope(const SolutionFamily& f) {
  if (const auto* s = std::get_if<family::Synthesized>(&f.params())) return s->synthesis->psi();
  return EnvelopeProfile::analytic([f](double q) { return psi(f, q); }, [f](double q) { return psi_d1(f, q); },
                                   [f](double q) { return psi_d2(f, q); });
}

AuxiliaryG auxiliary_g(const SolutionFamily& f) {
  if (const auto* s = std::get_if<family::Synthesized>(&f.params())) return s->synthesis->g();
  AuxiliaryG g;
  g.value = [f](double q) { return g_aux(f, q); };
  g.d1 = [f](double q) { return g_aux_d1(f, q); };
  g.branch = f.branch();
  return g;
}

RealFn v_real_profile(const SolutionFamily& f) {
  return [f](double q) { return v_real(f, q); };
}

RealFn v_imag_profile(const SolutionFamily& f) {
  return [f](double q) { return v_imag(f, q); };
}

double nonlinear_mu_shift(double mu, double sigma_nl, double p) {
  if (!(p > 0)) throw Error(ErrorCode::ValidationError, "nonlinear exponent p must be positive");
  return mu + kNonlinearMuShiftCoefficient * sigma_nl;
}

}  // namespace selfaccel
