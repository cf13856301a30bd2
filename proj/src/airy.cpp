#include "selfaccel/airy.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace selfaccel {
namespace {

// Ai(0) and -Ai'(0).
constexpr long double kC1 = 0.355028053887817239260063186004183176L;
constexpr long double kC2 = 0.258819403792806798405183560189203963L;

// Series is used on [kSeriesLo, kSeriesHi]. The negative side is extended to
// -8 because the oscillatory asymptotic expansion is only ~1e-9 accurate at -6.
constexpr double kSeriesLo = -8.0;
constexpr double kSeriesHi = 6.0;

constexpr int kMaxAsymptoticTerms = 40;

struct AsymptoticCoefficients {
  std::array<double, kMaxAsymptoticTerms> u{};
  std::array<double, kMaxAsymptoticTerms> v{};
};

AsymptoticCoefficients make_coefficients() {
  AsymptoticCoefficients c;
  c.u[0] = 1.0;
  c.v[0] = 1.0;
  for (int k = 1; k < kMaxAsymptoticTerms; ++k) {
    const double kk = k;
    c.u[k] = c.u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / (216.0 * kk * (2 * kk - 1));
    c.v[k] = -(6 * kk + 1) / (6 * kk - 1) * c.u[k];
  }
  return c;
}

const AsymptoticCoefficients& coefficients() {
  static const AsymptoticCoefficients c = make_coefficients();
  return c;
}

struct SeriesValue {
  long double ai;
  long double aip;
};

SeriesValue maclaurin(double xd) {
  const long double x = xd;
  const long double x3 = x * x * x;
  // f = sum x^{3k} / [(2*3)(5*6)...], g = sum x^{3k+1} / [(3*4)(6*7)...]
  long double f = 1.0L, g = x;
  long double tf = 1.0L, tg = x;
  // f' and g' series
  long double fp = 0.0L, gp = 1.0L;
  long double tfp = x * x / 2.0L, tgp = 1.0L;
  fp = tfp;
  for (int k = 1; k < 200; ++k) {
    const long double kk = k;
    tf *= x3 / ((3 * kk - 1) * (3 * kk));
    tg *= x3 / ((3 * kk) * (3 * kk + 1));
    tgp *= x3 / ((3 * kk - 2) * (3 * kk));
    if (k >= 2) {
      tfp *= x3 / ((3 * kk - 3) * (3 * kk - 1));
      fp += tfp;
    }
    f += tf;
    g += tg;
    gp += tgp;
    const long double scale = std::fabs(f) + std::fabs(g) + 1.0L;
    if (std::fabs(tf) + std::fabs(tg) + std::fabs(tfp) + std::fabs(tgp) < 1e-21L * scale && k > 3) {
      break;
    }
  }
  return {kC1 * f - kC2 * g, kC1 * fp - kC2 * gp};
}

// Sums sum_k (-1)^k c_k z^{-k} with optimal truncation.
double decaying_sum(const std::array<double, kMaxAsymptoticTerms>& c, double zeta) {
  double sum = 0.0;
  double zpow = 1.0;
  double prev = INFINITY;
  for (int k = 0; k < kMaxAsymptoticTerms; ++k) {
    const double term = c[k] * zpow;
    if (std::fabs(term) > prev) break;
    sum += (k % 2 == 0) ? term : -term;
    prev = std::fabs(term);
    if (prev < 1e-17 * std::fabs(sum)) break;
    zpow /= zeta;
  }
  return sum;
}

// Even/odd split sums for the oscillatory side.
void oscillatory_sums(const std::array<double, kMaxAsymptoticTerms>& c, double zeta, double& even,
                      double& odd) {
  even = 0.0;
  odd = 0.0;
  double zpow = 1.0;
  double prev = INFINITY;
  for (int k = 0; k < kMaxAsymptoticTerms; ++k) {
    const double term = c[k] * zpow;
    if (std::fabs(term) > prev) break;
    prev = std::fabs(term);
    const int half = k / 2;
    const double signed_term = (half % 2 == 0) ? term : -term;
    if (k % 2 == 0) {
      even += signed_term;
    } else {
      odd += signed_term;
    }
    if (prev < 1e-17) break;
    zpow /= zeta;
  }
}

}  // namespace

double airy_ai(double x) {
  if (x >= kSeriesLo && x <= kSeriesHi) {
    return static_cast<double>(maclaurin(x).ai);
  }
  const auto& c = coefficients();
  if (x > 0) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    return std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(x, 0.25)) *
           decaying_sum(c.u, zeta);
  }
  const double y = -x;
  const double zeta = 2.0 / 3.0 * y * std::sqrt(y);
  double p = 0.0, q = 0.0;
  oscillatory_sums(c.u, zeta, p, q);
  const double theta = zeta - std::numbers::pi / 4.0;
  return (std::cos(theta) * p + std::sin(theta) * q) / (std::sqrt(std::numbers::pi) * std::pow(y, 0.25));
}

double airy_ai_prime(double x) {
  if (x >= kSeriesLo && x <= kSeriesHi) {
    return static_cast<double>(maclaurin(x).aip);
  }
  const auto& c = coefficients();
  if (x > 0) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    return -std::pow(x, 0.25) * std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi)) *
           decaying_sum(c.v, zeta);
  }
  const double y = -x;
  const double zeta = 2.0 / 3.0 * y * std::sqrt(y);
  double r = 0.0, s = 0.0;
  oscillatory_sums(c.v, zeta, r, s);
  const double theta = zeta - std::numbers::pi / 4.0;
  return std::pow(y, 0.25) * (std::sin(theta) * r - std::cos(theta) * s) / std::sqrt(std::numbers::pi);
}

}  // namespace selfaccel
