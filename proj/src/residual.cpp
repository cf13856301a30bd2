#include "selfaccel/residual.hpp"

#include <algorithm>
#include <cmath>

#include "selfaccel/errors.hpp"

namespace selfaccel {
namespace {

double sample_step(std::span<const double> samples) {
  if (samples.size() < 2) return 0.0;
  return (samples.back() - samples.front()) / static_cast<double>(samples.size() - 1);
}

void accumulate(ResidualReport& rep, double r) {
  rep.l_inf = std::max(rep.l_inf, std::fabs(r));
  rep.l2 += r * r;
  ++rep.sample_count;
}

void finish(ResidualReport& rep) {
  const double w = rep.grid_step > 0 ? rep.grid_step : 1.0;
  rep.l2 = std::sqrt(rep.l2 * w);
}

std::string scheme_name(EnvelopeProfile::Scheme s) {
  return s == EnvelopeProfile::Scheme::Analytic ? "analytic" : "centered-fd";
}

}  // namespace

ResidualReport ode_residual_G(const EnvelopeProfile& psi, const AuxiliaryG& g, const RealFn& v_real,
                              const FrameParams& frame, std::span<const double> samples) {
  ResidualReport rep;
  rep.grid_step = std::fabs(sample_step(samples));
  rep.derivative_scheme = scheme_name(psi.scheme);
  if (psi.scheme != EnvelopeProfile::Scheme::Analytic) {
    rep.fd_order = 2;
    rep.fd_step = psi.fd_step;
  }
  for (double q : samples) {
    const double p = psi.value(q);
    const double gv = g.value(q);
    const double rhs = p * p * p * (psi.d2(q) + 2.0 * (frame.mu - frame.a * q - v_real(q)) * p);
    accumulate(rep, gv * gv - rhs);
  }
  finish(rep);
  return rep;
}

ResidualReport ode_residual_VI(const AuxiliaryG& g, const EnvelopeProfile& psi, const RealFn& v_imag,
                               std::span<const double> samples, double psi_floor) {
  ResidualReport rep;
  rep.grid_step = std::fabs(sample_step(samples));
  rep.derivative_scheme = scheme_name(g.derivative_scheme);
  if (g.derivative_scheme != EnvelopeProfile::Scheme::Analytic) {
    rep.fd_order = 4;
    rep.fd_step = g.fd_step;
  }
  for (double q : samples) {
    const double p = psi.value(q);
    if (std::fabs(p) < psi_floor) {
      ++rep.skipped;
      continue;
    }
    accumulate(rep, v_imag(q) - g.d1(q) / (2.0 * p * p));
  }
  finish(rep);
  return rep;
}

ResidualReport pde_residual(const WaveFn& wave, const ComovingPotential& potential,
                            const std::optional<NonlinearTerm>& nonlinear, const Grid1D& grid, double t,
                            double dt_probe, int order) {
  if (order != 2 && order != 4) throw Error(ErrorCode::InvalidArgument, "pde_residual order must be 2 or 4");
  if (!(dt_probe > 0)) throw Error(ErrorCode::InvalidArgument, "dt_probe must be positive");
  const double h = grid.dx();
  const Complex i(0.0, 1.0);
  ResidualReport rep;
  rep.grid_step = h;
  rep.derivative_scheme = "centered-fd";
  rep.fd_order = order;
  rep.fd_step = h;
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    const Complex c = wave(x, t);
    Complex dt_psi, dxx_psi;
    if (order == 2) {
      dt_psi = (wave(x, t + dt_probe) - wave(x, t - dt_probe)) / (2.0 * dt_probe);
      dxx_psi = (wave(x + h, t) - 2.0 * c + wave(x - h, t)) / (h * h);
    } else {
      dt_psi = (-wave(x, t + 2 * dt_probe) + 8.0 * wave(x, t + dt_probe) - 8.0 * wave(x, t - dt_probe) +
                wave(x, t - 2 * dt_probe)) /
               (12.0 * dt_probe);
      dxx_psi = (-wave(x + 2 * h, t) + 16.0 * wave(x + h, t) - 30.0 * c + 16.0 * wave(x - h, t) -
                 wave(x - 2 * h, t)) /
                (12.0 * h * h);
    }
    Complex w = potential.lab(x, t);
    if (nonlinear) w += nonlinear->sigma * std::pow(std::abs(c), nonlinear->p);
    const Complex r = i * dt_psi - (-0.5 * dxx_psi + w * c);
    accumulate(rep, std::abs(r));
  }
  finish(rep);
  return rep;
}

ResidualLadder residual_ladder(const WaveFn& wave, const ComovingPotential& potential,
                               const std::optional<NonlinearTerm>& nonlinear, const LadderSpec& spec) {
  if (spec.levels < 3) throw Error(ErrorCode::InvalidArgument, "refinement ladder needs >= 3 levels");
  ResidualLadder ladder;
  for (int l = 0; l < spec.levels; ++l) {
    const int n = spec.n0 << l;
    const Grid1D grid(spec.x_min, spec.x_max, n);
    const double dtp = spec.dt_probe0 / static_cast<double>(1 << l);
    ladder.levels.push_back({grid.dx(), dtp, pde_residual(wave, potential, nonlinear, grid, spec.t, dtp, spec.order)});
  }
  // Least-squares slope of log(l_inf) against log(dx).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(ladder.levels.size());
  for (const auto& lv : ladder.levels) {
    const double x = std::log(lv.dx);
    const double y = std::log(std::max(lv.report.l_inf, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  ladder.observed_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  ladder.final_residual = ladder.levels.back().report.l_inf;
  ladder.converges = ladder.final_residual < 1e-4 && std::fabs(ladder.observed_order - spec.order) <= 0.5;
  for (auto& lv : ladder.levels) lv.report.convergence_order = ladder.observed_order;
  return ladder;
}

DecisionRecord adjudicate(const std::string& claim, double candidate_a, double candidate_b,
                          const std::function<PdeSetup(double)>& build, const LadderSpec& spec) {
  DecisionRecord rec;
  rec.claim = claim;
  rec.candidate_a = candidate_a;
  rec.candidate_b = candidate_b;
  auto run = [&](double v) {
    const auto setup = build(v);
    return residual_ladder(setup.wave, setup.potential, setup.nonlinear, spec);
  };
  rec.ladder_a = run(candidate_a);
  rec.ladder_b = (candidate_b == candidate_a) ? rec.ladder_a : run(candidate_b);
  const bool a_ok = rec.ladder_a.converges;
  const bool b_ok = rec.ladder_b.converges;
  if (candidate_a == candidate_b && a_ok) {
    rec.selected = candidate_a;
  } else if (a_ok != b_ok) {
    rec.selected = a_ok ? candidate_a : candidate_b;
  }
  rec.status = rec.selected ? "selected" : "inconclusive";
  return rec;
}

DecisionRecord adjudicate_dark_soliton_mu(double sigma, double a, const LadderSpec& spec) {
  const auto family = SolutionFamily::dark_soliton(sigma, a);
  const auto potential = comoving_potential(family);
  auto build = [family, potential](double mu) {
    return PdeSetup{[family, mu](double x, double t) { return lab_frame_value(family, x, t, mu); }, potential,
                    std::nullopt};
  };
  return adjudicate("dark-soliton mu", sigma * sigma, -sigma * sigma, build, spec);
}

DecisionRecord adjudicate_nonlinear_shift(double v0, double a, double mu, double sigma_nl, double p,
                                          double candidate_a, double candidate_b, const LadderSpec& spec) {
  const auto family = SolutionFamily::const_intensity_inv_harm(v0, a, mu);
  const auto potential = comoving_potential(family);
  const auto nl = make_nonlinear(sigma_nl, p);
  auto build = [family, potential, nl, mu, sigma_nl](double c) {
    const double shifted = mu + c * sigma_nl;
    return PdeSetup{[family, shifted](double x, double t) { return lab_frame_value(family, x, t, shifted); },
                    potential, nl};
  };
  return adjudicate("nonlinear mu-shift coefficient", candidate_a, candidate_b, build, spec);
}

}  // namespace selfaccel
