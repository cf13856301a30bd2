#include "selfaccel/propagator.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "selfaccel/diagnostics.hpp"

namespace selfaccel {

std::string_view to_string(Scheme s) {
  return s == Scheme::SplitStep ? "split-step" : "crank-nicolson";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "split-step") return Scheme::SplitStep;
  if (name == "crank-nicolson") return Scheme::CrankNicolson;
  throw Error(ErrorCode::ValidationError, "unknown scheme '" + std::string(name) + "'");
}

struct SplitStepWorkspace::Impl {
  explicit Impl(const Grid1D& g) : fft(g.size()), k2(g.size()) {
    const auto k = g.wavenumbers();
    for (int j = 0; j < g.size(); ++j) k2[j] = k[j] * k[j];
  }
  detail::FftPair fft;
  std::vector<double> k2;
  double cached_dt = std::nan("");
  std::vector<Complex> propagator;
};

SplitStepWorkspace::SplitStepWorkspace(const Grid1D& grid) : impl_(std::make_unique<Impl>(grid)) {}
SplitStepWorkspace::~SplitStepWorkspace() = default;
SplitStepWorkspace::SplitStepWorkspace(SplitStepWorkspace&&) noexcept = default;
SplitStepWorkspace& SplitStepWorkspace::operator=(SplitStepWorkspace&&) noexcept = default;

void SplitStepWorkspace::kinetic(std::vector<Complex>& values, double dt) {
  auto& im = *impl_;
  const int n = im.fft.size();
  if (im.cached_dt != dt) {
    im.propagator.resize(n);
    for (int j = 0; j < n; ++j) im.propagator[j] = std::polar(1.0 / n, -0.5 * im.k2[j] * dt);
    im.cached_dt = dt;
  }
  Complex* buf = im.fft.data();
  std::copy(values.begin(), values.end(), buf);
  im.fft.forward();
  for (int j = 0; j < n; ++j) buf[j] *= im.propagator[j];
  im.fft.backward();
  std::copy(buf, buf + n, values.begin());
}

namespace {

void sample_potential(const ComovingPotential& potential, const Grid1D& grid, double t, std::vector<Complex>& u) {
  u.resize(grid.size());
  for (int j = 0; j < grid.size(); ++j) u[j] = potential.lab(grid.x(j), t);
}

// exp(-i (U + sigma |psi|^p) h) pointwise.
void apply_potential(std::vector<Complex>& values, const std::vector<Complex>& u,
                     const std::optional<NonlinearTerm>& nonlinear, double h) {
  const Complex minus_i_h(0.0, -h);
  for (std::size_t j = 0; j < values.size(); ++j) {
    Complex w = u[j];
    if (nonlinear && nonlinear->sigma != 0.0) w += nonlinear->sigma * std::pow(std::abs(values[j]), nonlinear->p);
    values[j] *= std::exp(minus_i_h * w);
  }
}

void check_overflow(const std::vector<Complex>& values, double ceiling) {
  double m = 0.0;
  for (const auto& v : values) {
    const double a = std::abs(v);
    if (!std::isfinite(a)) throw Error(ErrorCode::Overflow, "non-finite amplitude");
    m = std::max(m, a);
  }
  if (m > ceiling) throw Error(ErrorCode::Overflow, "max|Psi| = " + std::to_string(m) + " exceeds ceiling");
}

void splitstep_inplace(std::vector<Complex>& values, SplitStepWorkspace& ws, const ComovingPotential& potential,
                       const std::optional<NonlinearTerm>& nonlinear, const Grid1D& grid, double t, double dt,
                       std::vector<Complex>& u) {
  sample_potential(potential, grid, t + 0.5 * dt, u);
  apply_potential(values, u, nonlinear, 0.5 * dt);
  ws.kinetic(values, dt);
  apply_potential(values, u, nonlinear, 0.5 * dt);
}

void crank_nicolson_inplace(std::vector<Complex>& values, const ComovingPotential& potential,
                            const std::optional<NonlinearTerm>& nonlinear, const Grid1D& grid, double t, double dt,
                            std::vector<Complex>& u) {
  const int n = grid.size();
  const double dx = grid.dx();
  sample_potential(potential, grid, t + 0.5 * dt, u);
  const Complex half_i_dt(0.0, 0.5 * dt);
  const Complex off = -half_i_dt / (2.0 * dx * dx);
  std::vector<Complex> sub(n, off), sup(n, off), diag(n), rhs(n);
  for (int j = 0; j < n; ++j) {
    Complex w = u[j];
    if (nonlinear && nonlinear->sigma != 0.0) w += nonlinear->sigma * std::pow(std::abs(values[j]), nonlinear->p);
    const Complex h_diag = 1.0 / (dx * dx) + w;
    diag[j] = 1.0 + half_i_dt * h_diag;
    const Complex& left = values[(j + n - 1) % n];
    const Complex& right = values[(j + 1) % n];
    // (1 - i dt/2 H) psi_old
    rhs[j] = values[j] - half_i_dt * (h_diag * values[j] - (left + right) / (2.0 * dx * dx));
  }
  values = solve_cyclic_tridiagonal(sub, diag, sup, rhs);
}

std::vector<Complex> thomas(const std::vector<Complex>& sub, const std::vector<Complex>& diag,
                            const std::vector<Complex>& super, const std::vector<Complex>& rhs) {
  const std::size_t n = diag.size();
  std::vector<Complex> c(n), d(n), x(n);
  Complex pivot = diag[0];
  if (std::abs(pivot) < 1e-300) throw Error(ErrorCode::SolveFailure, "zero pivot in tridiagonal solve");
  c[0] = super[0] / pivot;
  d[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - sub[i] * c[i - 1];
    if (std::abs(pivot) < 1e-300 || !std::isfinite(std::abs(pivot))) {
      throw Error(ErrorCode::SolveFailure, "singular tridiagonal system");
    }
    c[i] = (i + 1 < n) ? super[i] / pivot : Complex{};
    d[i] = (rhs[i] - sub[i] * d[i - 1]) / pivot;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

}  // namespace

std::vector<Complex> solve_cyclic_tridiagonal(const std::vector<Complex>& sub, const std::vector<Complex>& diag,
                                              const std::vector<Complex>& super, const std::vector<Complex>& rhs) {
  const std::size_t n = diag.size();
  if (n < 3 || sub.size() != n || super.size() != n || rhs.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "cyclic tridiagonal system needs n >= 3 and matching sizes");
  }
  const Complex alpha = super[n - 1];  // A(n-1, 0)
  const Complex beta = sub[0];         // A(0, n-1)
  const Complex gamma = -diag[0];
  std::vector<Complex> bb = diag;
  bb[0] = diag[0] - gamma;
  bb[n - 1] = diag[n - 1] - alpha * beta / gamma;
  auto x = thomas(sub, bb, super, rhs);
  std::vector<Complex> uvec(n, Complex{});
  uvec[0] = gamma;
  uvec[n - 1] = alpha;
  const auto z = thomas(sub, bb, super, uvec);
  const Complex denom = 1.0 + z[0] + beta * z[n - 1] / gamma;
  if (std::abs(denom) < 1e-300) throw Error(ErrorCode::SolveFailure, "singular periodic closure");
  const Complex fact = (x[0] + beta * x[n - 1] / gamma) / denom;
  for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

ComplexWaveField step_splitstep(const ComplexWaveField& field, const ComovingPotential& potential,
                                const std::optional<NonlinearTerm>& nonlinear, double t, double dt,
                                double overflow_ceiling) {
  SplitStepWorkspace ws(field.grid);
  ComplexWaveField out = field;
  std::vector<Complex> u;
  splitstep_inplace(out.values, ws, potential, nonlinear, field.grid, t, dt, u);
  check_overflow(out.values, overflow_ceiling);
  return out;
}

ComplexWaveField step_crank_nicolson(const ComplexWaveField& field, const ComovingPotential& potential,
                                     const std::optional<NonlinearTerm>& nonlinear, double t, double dt,
                                     double overflow_ceiling) {
  ComplexWaveField out = field;
  std::vector<Complex> u;
  crank_nicolson_inplace(out.values, potential, nonlinear, field.grid, t, dt, u);
  check_overflow(out.values, overflow_ceiling);
  return out;
}

namespace {

void record_snapshot(PropagationRecord& rec, const ComplexWaveField& field, double t, const PropagatorConfig& cfg) {
  rec.times.push_back(t);
  const double n = norm(field);
  rec.norms.push_back(n);
  if (n > cfg.norm_floor) {
    rec.centroids.emplace_back(centroid(field, cfg.norm_floor));
  } else {
    rec.centroids.emplace_back(std::nullopt);
  }
  rec.peaks.push_back(peak_position(field).position);
  double m = 0.0;
  for (const auto& v : field.values) m = std::max(m, std::abs(v));
  rec.max_abs.push_back(m);
  if (cfg.store_fields) rec.fields.push_back(field);
}

std::vector<double> absorber_factors(const Grid1D& grid, const Absorber& a, double dt) {
  std::vector<double> f(grid.size(), 1.0);
  if (a.layer_width <= 0) return f;
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    double r = 0.0;
    if (x < grid.x_min() + a.layer_width) r = (grid.x_min() + a.layer_width - x) / a.layer_width;
    if (x > grid.x_max() - a.layer_width) r = (x - (grid.x_max() - a.layer_width)) / a.layer_width;
    f[j] = std::exp(-a.strength * r * r * r * r * dt);
  }
  return f;
}

}  // namespace

PropagationRecord propagate(const ComplexWaveField& initial, const ComovingPotential& potential,
                            const std::optional<NonlinearTerm>& nonlinear, const PropagatorConfig& config) {
  if (!(config.dt > 0) || config.n_steps < 0 || config.record_stride < 1) {
    throw Error(ErrorCode::ValidationError, "propagator needs dt > 0, n_steps >= 0, record_stride >= 1");
  }
  if (!initial.all_finite()) throw Error(ErrorCode::Overflow, "initial field contains non-finite values");

  const Grid1D& grid = initial.grid;
  PropagationRecord rec{grid, {}, {}, {}, {}, {}, {}, 0, {}, std::nullopt};

  double max_gain = 0.0;
  for (int j = 0; j < grid.size(); ++j) max_gain = std::max(max_gain, potential.lab(grid.x(j), config.t0).imag());
  if (config.dt * max_gain >= 0.5) {
    rec.warnings.push_back("dt * max(V_I) = " + std::to_string(config.dt * max_gain) + " >= 0.5 (gain step)");
  }

  ComplexWaveField field = initial;
  record_snapshot(rec, field, config.t0, config);

  std::optional<SplitStepWorkspace> ws;
  if (config.scheme == Scheme::SplitStep) ws.emplace(grid);
  std::vector<double> sink;
  if (config.absorber) sink = absorber_factors(grid, *config.absorber, config.dt);
  std::vector<Complex> u;

  for (int step = 1; step <= config.n_steps; ++step) {
    const double t = config.t0 + (step - 1) * config.dt;
    try {
      if (config.scheme == Scheme::SplitStep) {
        splitstep_inplace(field.values, *ws, potential, nonlinear, grid, t, config.dt, u);
      } else {
        crank_nicolson_inplace(field.values, potential, nonlinear, grid, t, config.dt, u);
      }
      if (!sink.empty()) {
        for (int j = 0; j < grid.size(); ++j) field.values[j] *= sink[j];
      }
      check_overflow(field.values, config.overflow_ceiling);
    } catch (const Error& e) {
      rec.failure = StepFailure{e.code(), e.what(), step};
      return rec;
    }
    rec.completed_steps = step;
    if (step % config.record_stride == 0 || step == config.n_steps) {
      record_snapshot(rec, field, config.t0 + step * config.dt, config);
    }
  }
  return rec;
}

}  // namespace selfaccel
