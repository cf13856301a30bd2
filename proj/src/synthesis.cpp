#include "selfaccel/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "fornberg.hpp"
#include "selfaccel/errors.hpp"

namespace selfaccel {

struct Synthesis::State {
  EnvelopeProfile psi;
  RealFn v_real;
  FrameParams frame;
  SynthesisOptions options;
  double tolerance = 0.0;
  bool identically_zero = false;
  int sign_at_right = +1;
  std::vector<double> flips;

  double radicand(double q) const {
    const double p = psi.value(q);
    const double inner = psi.d2(q) + 2.0 * (frame.mu - frame.a * q - v_real(q)) * p;
    return p * p * p * inner;
  }

  int sign(double q) const {
    const auto right = std::count_if(flips.begin(), flips.end(), [q](double f) { return f > q; });
    return (right % 2 == 0) ? sign_at_right : -sign_at_right;
  }

  double raw(double q) const {
    const double r = radicand(q);
    if (r < -tolerance) {
      throw Error(ErrorCode::InvalidRegion, "radicand negative at q = " + std::to_string(q));
    }
    return sign(q) * std::sqrt(std::max(r, 0.0));
  }

  const double* nearby_flip(double q, double reach) const {
    for (const double& f : flips) {
      if (std::fabs(q - f) < reach) return &f;
    }
    return nullptr;
  }

  // Interpolant of G through nodes well away from the flip, where sqrt is well conditioned.
  std::pair<double, double> interpolate_near(double f, double q) const {
    const double h = options.flip_halo / 2.0;
    std::array<double, 8> nodes{f - 4 * h, f - 3 * h, f - 2 * h, f - h, f + h, f + 2 * h, f + 3 * h, f + 4 * h};
    std::array<double, 8> values{};
    for (std::size_t j = 0; j < nodes.size(); ++j) values[j] = raw(nodes[j]);
    const auto w = detail::fornberg_weights(q, nodes);
    double v = 0.0, d = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      v += w[0][j] * values[j];
      d += w[1][j] * values[j];
    }
    return {v, d};
  }

  double g(double q) const {
    if (identically_zero) return 0.0;
    if (const double* f = nearby_flip(q, options.flip_halo)) return interpolate_near(*f, q).first;
    return raw(q);
  }

  double g_prime(double q) const {
    if (identically_zero) return 0.0;
    const double h = options.fd_step;
    if (const double* f = nearby_flip(q, options.flip_halo + 2 * h)) return interpolate_near(*f, q).second;
    return (-raw(q + 2 * h) + 8 * raw(q + h) - 8 * raw(q - h) + raw(q - 2 * h)) / (12 * h);
  }
};

namespace {

double golden_minimize(const RealFn& f, double lo, double hi) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * (1.0 + std::fabs(lo)); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace

double Synthesis::radicand(double q) const { return state_->radicand(q); }

bool Synthesis::valid(double q) const {
  if (state_->identically_zero) return true;
  return state_->radicand(q) >= -tolerance_;
}

double Synthesis::v_imag(double q) const {
  const double p = psi_.value(q);
  if (std::fabs(p) < options_.psi_floor) {
    throw Error(ErrorCode::DivisionNearZero, "|psi| below floor at q = " + std::to_string(q));
  }
  return g_.d1(q) / (2.0 * p * p);
}

std::shared_ptr<const Synthesis> synthesize(EnvelopeProfile psi, RealFn v_real, FrameParams frame,
                                            SynthesisOptions options) {
  if (!(options.q_max > options.q_min) || options.scan_points < 5) {
    throw Error(ErrorCode::InvalidArgument, "synthesis scan domain must be non-empty with >= 5 points");
  }
  if (options.sign_at_right != 1 && options.sign_at_right != -1) {
    throw Error(ErrorCode::InvalidArgument, "sign_at_right must be +1 or -1");
  }
  auto state = std::make_shared<Synthesis::State>();
  state->psi = psi;
  state->v_real = v_real;
  state->frame = frame;
  state->options = options;
  state->sign_at_right = options.sign_at_right;

  const int n = options.scan_points;
  const double step = (options.q_max - options.q_min) / (n - 1);
  std::vector<double> qs(n), rs(n);
  double r_max = 0.0, term_max = 0.0;
  for (int i = 0; i < n; ++i) {
    qs[i] = options.q_min + i * step;
    rs[i] = state->radicand(qs[i]);
    const double p = psi.value(qs[i]);
    const double t1 = std::fabs(p * p * p * psi.d2(qs[i]));
    const double t2 = std::fabs(2.0 * p * p * p * p * (frame.mu - frame.a * qs[i] - v_real(qs[i])));
    r_max = std::max(r_max, std::fabs(rs[i]));
    term_max = std::max({term_max, t1, t2});
  }

  auto result = std::shared_ptr<Synthesis>(new Synthesis());
  BranchRule branch;
  branch.sign_at_right = options.sign_at_right;

  // Radicand that is pure cancellation noise: G vanishes identically.
  if (r_max <= 1e-12 * term_max || r_max == 0.0) {
    state->identically_zero = true;
    branch.kind = "zero";
  } else {
    state->tolerance = options.radicand_tolerance * r_max;
    const double tol = state->tolerance;
    if (std::none_of(rs.begin(), rs.end(), [tol](double r) { return r >= -tol; })) {
      throw Error(ErrorCode::InvalidRegion, "radicand negative over the whole synthesis domain");
    }
    for (int i = 0; i < n;) {
      if (rs[i] < -tol) {
        int j = i;
        while (j + 1 < n && rs[j + 1] < -tol) ++j;
        result->invalid_intervals_.push_back({qs[i], qs[j]});
        i = j + 1;
      } else {
        ++i;
      }
    }
    // Even-order zeros: local minima of the radicand that touch zero.
    RealFn radicand_fn = [&state](double q) { return state->radicand(q); };
    for (int i = 1; i + 1 < n; ++i) {
      if (!(rs[i] <= rs[i - 1] && rs[i] <= rs[i + 1])) continue;
      if (rs[i] < -tol || rs[i] > 0.25 * r_max) continue;
      const double q0 = golden_minimize(radicand_fn, qs[i - 1], qs[i + 1]);
      const double r0 = state->radicand(q0);
      if (std::fabs(r0) > tol) continue;
      if (!state->flips.empty() && std::fabs(q0 - state->flips.back()) < 2 * step) continue;
      // Zero order 2m from the growth of sqrt(R) on both sides; flip when m is odd.
      const double d = std::max(options.flip_halo / 2.0, 2 * step);
      const double rl1 = state->radicand(q0 - d), rl2 = state->radicand(q0 - 2 * d);
      const double rr1 = state->radicand(q0 + d), rr2 = state->radicand(q0 + 2 * d);
      if (rl1 <= 0 || rl2 <= 0 || rr1 <= 0 || rr2 <= 0) continue;
      const double m = 0.25 * std::log2((rl2 / rl1) * (rr2 / rr1));
      const long order = std::lround(m);
      if (order % 2 == 1) state->flips.push_back(q0);
    }
    branch.flip_points = state->flips;
    if (state->flips.empty()) {
      branch.kind = options.sign_at_right > 0 ? "positive-root" : "negative-root";
    } else {
      branch.kind = "smooth-signed";
    }
  }

  result->psi_ = std::move(psi);
  result->v_real_ = std::move(v_real);
  result->frame_ = frame;
  result->options_ = options;
  result->tolerance_ = state->tolerance;
  result->g_.value = [state](double q) { return state->g(q); };
  result->g_.d1 = [state](double q) { return state->g_prime(q); };
  result->g_.branch = branch;
  result->g_.derivative_scheme = EnvelopeProfile::Scheme::CenteredDifference;
  result->g_.fd_step = options.fd_step;
  result->state_ = state;
  return result;
}

namespace {

struct UniformTable {
  std::vector<double> q;
  std::vector<double> v;
  double h = 0.0;
  int degree = 7;

  std::array<double, 3> eval(double x) const {
    const int n = static_cast<int>(q.size());
    const int npts = std::min(degree + 1, n);
    const double pos = (x - q.front()) / h;
    int start = static_cast<int>(std::floor(pos)) - (npts / 2 - 1);
    start = std::clamp(start, 0, n - npts);
    const std::span<const double> nodes(q.data() + start, npts);
    const auto w = detail::fornberg_weights(x, nodes);
    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k) {
      for (int j = 0; j < npts; ++j) out[k] += w[k][j] * v[start + j];
    }
    return out;
  }
};

std::shared_ptr<const UniformTable> make_table(std::vector<double> q, std::vector<double> v, int degree) {
  if (q.size() != v.size()) throw Error(ErrorCode::InvalidArgument, "table columns differ in length");
  if (q.size() < 8) throw Error(ErrorCode::InvalidArgument, "table needs at least 8 rows");
  const double h = (q.back() - q.front()) / static_cast<double>(q.size() - 1);
  if (!(h > 0)) throw Error(ErrorCode::InvalidArgument, "table abscissae must increase");
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (std::fabs(q[i] - (q.front() + static_cast<double>(i) * h)) > 1e-9 * (1.0 + std::fabs(q[i]))) {
      throw Error(ErrorCode::InvalidArgument, "table abscissae must be uniformly spaced");
    }
  }
  auto t = std::make_shared<UniformTable>();
  t->q = std::move(q);
  t->v = std::move(v);
  t->h = h;
  t->degree = degree;
  return t;
}

}  // namespace

EnvelopeProfile interpolate_envelope(std::vector<double> q, std::vector<double> psi, int degree) {
  auto t = make_table(std::move(q), std::move(psi), degree);
  auto p = EnvelopeProfile::analytic([t](double x) { return t->eval(x)[0]; },
                                     [t](double x) { return t->eval(x)[1]; },
                                     [t](double x) { return t->eval(x)[2]; });
  p.scheme = EnvelopeProfile::Scheme::CenteredDifference;
  p.fd_step = t->h;
  return p;
}

RealFn interpolate_profile(std::vector<double> q, std::vector<double> values, int degree) {
  auto t = make_table(std::move(q), std::move(values), degree);
  return [t](double x) { return t->eval(x)[0]; };
}

TableSynthesis synthesize_table(const std::vector<double>& q, const std::vector<double>& psi,
                                const std::vector<double>& v_real, FrameParams frame, int sign_at_right) {
  auto envelope = interpolate_envelope(q, psi);
  RealFn vr = v_real.empty() ? RealFn([](double) { return 0.0; }) : interpolate_profile(q, v_real);
  SynthesisOptions opts;
  opts.q_min = q.front();
  opts.q_max = q.back();
  opts.scan_points = static_cast<int>(std::min<std::size_t>(4 * q.size(), 20001));
  opts.sign_at_right = sign_at_right;
  // Interpolated second derivatives carry ~1e-10 relative noise.
  opts.radicand_tolerance = 1e-9;
  // Wider stencil and halo trade truncation error for less amplified interpolation noise.
  opts.fd_step = 2e-3;
  opts.flip_halo = 0.05;
  const auto syn = synthesize(envelope, vr, frame, opts);

  TableSynthesis out;
  out.q = q;
  out.psi = psi;
  out.v_real = v_real.empty() ? std::vector<double>(q.size(), 0.0) : v_real;
  out.branch = syn->g().branch;
  out.g.resize(q.size());
  out.v_imag.resize(q.size());
  out.valid.resize(q.size());
  const double margin = 2 * opts.fd_step;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double x = q[i];
    bool ok = x - margin >= opts.q_min && x + margin <= opts.q_max;
    double g = std::nan(""), vi = std::nan("");
    try {
      if (ok) {
        g = syn->g().value(x);
        vi = syn->v_imag(x);
      }
    } catch (const Error&) {
      ok = false;
    }
    out.g[i] = g;
    out.v_imag[i] = vi;
    out.valid[i] = ok;
  }
  return out;
}

}  // namespace selfaccel
