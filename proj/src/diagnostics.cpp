#include "selfaccel/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fft.hpp"
#include "selfaccel/errors.hpp"

namespace selfaccel {

double norm(const ComplexWaveField& field) {
  double s = 0.0;
  for (const auto& v : field.values) s += std::norm(v);
  return s * field.grid.dx();
}

double centroid(const ComplexWaveField& field, double floor) {
  const double n = norm(field);
  if (!(n > floor)) {
    throw Error(ErrorCode::NormFloor, "norm " + std::to_string(n) + " at or below floor; centroid undefined");
  }
  double s = 0.0;
  for (int j = 0; j < field.grid.size(); ++j) s += field.grid.x(j) * std::norm(field.values[j]);
  return s * field.grid.dx() / n;
}

namespace {

PeakResult extremum(const std::vector<double>& d, const Grid1D& grid, int lo, int hi) {
  const int n = static_cast<int>(d.size());
  int best = lo;
  for (int j = lo; j <= hi; ++j) {
    if (d[(j % n + n) % n] > d[(best % n + n) % n]) best = j;
  }
  const int jb = (best % n + n) % n;
  PeakResult r;
  r.index = jb;
  r.position = grid.x(jb);

  std::vector<double> top(d.begin(), d.end());
  if (lo != 0 || hi != n - 1) {
    top.clear();
    for (int j = lo; j <= hi; ++j) top.push_back(d[(j % n + n) % n]);
  }
  if (top.size() >= 3) {
    std::partial_sort(top.begin(), top.begin() + 3, top.end(), std::greater<>());
    r.degenerate = (top[0] - top[2]) < 1e-12;
  }
  if (r.degenerate) return r;

  const double dm = d[(jb + n - 1) % n];
  const double d0 = d[jb];
  const double dp = d[(jb + 1) % n];
  const double curvature = dm - 2.0 * d0 + dp;
  if (curvature < 0) {
    const double offset = 0.5 * (dm - dp) / curvature;
    r.position = grid.x(jb) + std::clamp(offset, -0.5, 0.5) * grid.dx();
  }
  return r;
}

}  // namespace

PeakResult peak_position(const ComplexWaveField& field) {
  return extremum(field.density(), field.grid, 0, field.grid.size() - 1);
}

PeakResult trough_position(const ComplexWaveField& field) {
  auto d = field.density();
  for (auto& v : d) v = -v;
  return extremum(d, field.grid, 0, field.grid.size() - 1);
}

namespace {

PeakResult local_extremum(std::vector<double> d, const Grid1D& g, double guess, double radius) {
  const int lo = static_cast<int>(std::ceil((guess - radius - g.x_min()) / g.dx()));
  const int hi = static_cast<int>(std::floor((guess + radius - g.x_min()) / g.dx()));
  if (hi < lo) throw Error(ErrorCode::InvalidArgument, "peak search window is empty");
  return extremum(d, g, std::max(lo, 0), std::min(hi, g.size() - 1));
}

}  // namespace

PeakResult local_peak_position(const ComplexWaveField& field, double guess, double radius) {
  return local_extremum(field.density(), field.grid, guess, radius);
}

PeakResult local_trough_position(const ComplexWaveField& field, double guess, double radius) {
  return local_sample_minimum(field.density(), field.grid, guess, radius);
}

PeakResult local_sample_minimum(std::vector<double> samples, const Grid1D& grid, double guess, double radius) {
  if (static_cast<int>(samples.size()) != grid.size()) throw Error(ErrorCode::InvalidArgument, "sample count differs from grid");
  for (auto& v : samples) v = -v;
  return local_extremum(std::move(samples), grid, guess, radius);
}

ParabolaFit fit_parabola(const Trajectory& traj) {
  const auto& t = traj.times;
  const auto& x = traj.positions;
  if (t.size() != x.size()) throw Error(ErrorCode::InvalidArgument, "trajectory lengths differ");
  std::vector<double> distinct(t);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw Error(ErrorCode::DegenerateTimes, "need at least three distinct times");

  const std::size_t m = t.size();
  const double t_mean = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(m);
  double scale = 0.0;
  for (double ti : t) scale = std::max(scale, std::fabs(ti - t_mean));
  const double x_mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);

  // Modified Gram-Schmidt on [1, u, u^2], u = (t - t_mean) / scale.
  std::array<std::vector<double>, 3> q;
  std::array<std::array<double, 3>, 3> r{};
  for (int c = 0; c < 3; ++c) {
    q[c].resize(m);
    for (std::size_t i = 0; i < m; ++i) q[c][i] = std::pow((t[i] - t_mean) / scale, c);
  }
  for (int c = 0; c < 3; ++c) {
    for (int p = 0; p < c; ++p) {
      double dot = 0.0;
      for (std::size_t i = 0; i < m; ++i) dot += q[p][i] * q[c][i];
      r[p][c] = dot;
      for (std::size_t i = 0; i < m; ++i) q[c][i] -= dot * q[p][i];
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < m; ++i) nrm += q[c][i] * q[c][i];
    nrm = std::sqrt(nrm);
    if (nrm < 1e-300) throw Error(ErrorCode::DegenerateTimes, "time samples do not span a parabola");
    r[c][c] = nrm;
    for (std::size_t i = 0; i < m; ++i) q[c][i] /= nrm;
  }
  std::array<double, 3> rhs{};
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < m; ++i) rhs[c] += q[c][i] * (x[i] - x_mean);
  }
  std::array<double, 3> d{};
  for (int c = 2; c >= 0; --c) {
    double s = rhs[c];
    for (int p = c + 1; p < 3; ++p) s -= r[c][p] * d[p];
    d[c] = s / r[c][c];
  }
  d[0] += x_mean;

  ParabolaFit fit;
  const double s2 = scale * scale;
  fit.acc = 2.0 * d[2] / s2;
  fit.v0 = d[1] / scale - 2.0 * d[2] * t_mean / s2;
  fit.x0 = d[0] - d[1] * t_mean / scale + d[2] * t_mean * t_mean / s2;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double u = (t[i] - t_mean) / scale;
    const double e = x[i] - (d[0] + d[1] * u + d[2] * u * u);
    ss += e * e;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(m));
  return fit;
}

EhrenfestSeries ehrenfest_residual(const PropagationRecord& record, const ComovingPotential& potential,
                                   double norm_floor) {
  const std::size_t m = record.times.size();
  if (m < 3) throw Error(ErrorCode::InvalidArgument, "Ehrenfest residual needs >= 3 recorded times");
  if (record.fields.size() != m) throw Error(ErrorCode::InvalidArgument, "Ehrenfest residual needs stored fields");

  std::vector<double> c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = centroid(record.fields[i], norm_floor);

  const double dt0 = record.times[1] - record.times[0];
  bool uniform = true;
  for (std::size_t i = 1; i < m; ++i) {
    if (std::fabs((record.times[i] - record.times[i - 1]) - dt0) > 1e-9 * std::fabs(dt0)) uniform = false;
  }

  EhrenfestSeries out;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    double acc;
    if (uniform) {
      acc = (c[i + 1] - 2.0 * c[i] + c[i - 1]) / (dt0 * dt0);
    } else {
      Trajectory local{{record.times[i - 1], record.times[i], record.times[i + 1]}, {c[i - 1], c[i], c[i + 1]}, {}, "centroid"};
      acc = fit_parabola(local).acc;
    }
    const auto& f = record.fields[i];
    double force = 0.0;
    for (int j = 0; j < f.grid.size(); ++j) {
      force += potential.lab_force_gradient(f.grid.x(j), record.times[i]) * std::norm(f.values[j]);
    }
    force *= f.grid.dx();
    out.times.push_back(record.times[i]);
    out.centroid_acceleration.push_back(acc);
    out.residuals.push_back(acc + force / record.norms[i]);
  }
  return out;
}

double intensity_flatness(const ComplexWaveField& field, double x_lo, double x_hi, double target) {
  const auto& g = field.grid;
  if (x_lo < g.x_min() || x_hi > g.x_max() || !(x_hi >= x_lo)) {
    throw Error(ErrorCode::InvalidArgument, "flatness window must lie within the grid");
  }
  double worst = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    if (x < x_lo || x > x_hi) continue;
    worst = std::max(worst, std::fabs(std::norm(field.values[j]) - target));
  }
  return worst;
}

AnalyticComparison compare_fields(const ComplexWaveField& field, const ComplexWaveField& reference, bool align_phase,
                                  std::optional<std::pair<double, double>> window) {
  if (!(field.grid == reference.grid)) throw Error(ErrorCode::InvalidArgument, "fields live on different grids");
  const auto& g = field.grid;
  auto inside = [&](int j) { return !window || (g.x(j) >= window->first && g.x(j) <= window->second); };

  AnalyticComparison out;
  out.phase_aligned = align_phase;
  Complex rotation(1.0, 0.0);
  if (align_phase) {
    Complex overlap{};
    for (int j = 0; j < g.size(); ++j) {
      if (inside(j)) overlap += std::conj(reference.values[j]) * field.values[j];
    }
    out.removed_phase = std::arg(overlap);
    rotation = std::polar(1.0, -out.removed_phase);
  }
  double ss = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    if (!inside(j)) continue;
    const double e = std::abs(field.values[j] * rotation - reference.values[j]);
    ss += e * e;
    out.l_inf = std::max(out.l_inf, e);
  }
  out.l2 = std::sqrt(ss * g.dx());
  return out;
}

AnalyticComparison compare_to_analytic(const ComplexWaveField& field, const SolutionFamily& family, double t,
                                       bool align_phase, std::optional<std::pair<double, double>> window) {
  return compare_fields(field, assemble_lab_frame(family, field.grid, t), align_phase, window);
}

std::vector<double> local_wavenumber(const ComplexWaveField& field) {
  const int n = field.grid.size();
  detail::FftPair fft(n);
  const auto k = field.grid.wavenumbers();
  Complex* buf = fft.data();
  std::copy(field.values.begin(), field.values.end(), buf);
  fft.forward();
  for (int j = 0; j < n; ++j) {
    // Nyquist mode has no odd-derivative counterpart.
    const double kj = (n % 2 == 0 && j == n / 2) ? 0.0 : k[j];
    buf[j] *= Complex(0.0, kj / n);
  }
  fft.backward();
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    const double d = std::norm(field.values[j]);
    out[j] = d > 0 ? std::imag(std::conj(field.values[j]) * buf[j]) / d : 0.0;
  }
  return out;
}

}  // namespace selfaccel
