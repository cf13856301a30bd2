#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "selfaccel/diagnostics.hpp"
#include "selfaccel/errors.hpp"
#include "selfaccel/families.hpp"

using namespace selfaccel;

namespace {

ComplexWaveField gaussian(const Grid1D& g, double x0, double k = 0.0) {
  ComplexWaveField f(g);
  for (int j = 0; j < g.size(); ++j) {
    const double x = g.x(j) - x0;
    f.values[j] = std::polar(std::exp(-0.5 * x * x), k * x);
  }
  return f;
}

Trajectory samples(const std::function<double(double)>& x, int n = 21) {
  Trajectory t;
  for (int i = 0; i < n; ++i) {
    t.times.push_back(0.1 * i);
    t.positions.push_back(x(0.1 * i));
    t.norms.push_back(1.0);
  }
  return t;
}

}  // namespace

TEST_CASE("norm") {
  Grid1D g(-20.0, 20.0, 1024);
  ComplexWaveField ones(g, std::vector<Complex>(g.size(), Complex(0.0, 1.0)));
  CHECK(norm(ones) == doctest::Approx(40.0).epsilon(1e-14));
  CHECK(std::abs(norm(gaussian(g, 0.0)) - std::sqrt(std::numbers::pi)) < 1e-8);
  CHECK(norm(ComplexWaveField(g)) == 0.0);
}

TEST_CASE("centroid") {
  Grid1D g(-20.0, 20.0, 1024);
  CHECK(std::abs(centroid(gaussian(g, 0.0))) < 1e-10);
  const auto fam = SolutionFamily::gaussian_localized(1.0, 1.0);
  Grid1D wide(-20.0, 25.0, 4096);
  for (double t : {0.0, 0.5, 1.0, 2.0})
    CHECK(std::abs(centroid(assemble_lab_frame(fam, wide, t)) - (0.5 * t * t - 1.0)) < 1e-6);
  try {
    (void)centroid(ComplexWaveField(g));
    FAIL("expected NormFloor");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NormFloor);
  }
}

TEST_CASE("peak position") {
  Grid1D g(-10.0, 10.0, 400);
  const auto p = peak_position(gaussian(g, 1.37));
  CHECK(std::abs(p.position - 1.37) < 10.0 * g.dx() * g.dx());
  CHECK_FALSE(p.degenerate);

  ComplexWaveField flat(g, std::vector<Complex>(g.size(), 1.0));
  const auto d = peak_position(flat);
  CHECK(d.degenerate);
  CHECK(d.index == 0);

  auto two = gaussian(g, -4.0);
  const auto right = gaussian(g, 3.0);
  for (int j = 0; j < g.size(); ++j) two.values[j] += 1.5 * right.values[j];
  CHECK(std::abs(peak_position(two).position - 3.0) < 0.05);

  ComplexWaveField notch(g);
  for (int j = 0; j < g.size(); ++j) notch.values[j] = std::tanh(g.x(j) - 0.8);
  CHECK(std::abs(trough_position(notch).position - 0.8) < g.dx());
  CHECK(std::abs(local_trough_position(notch, 1.0, 2.0).position - 0.8) < g.dx());
  CHECK(std::abs(local_peak_position(two, -3.5, 1.5).position + 4.0) < 0.05);
}

TEST_CASE("parabola fits") {
  const auto exact = fit_parabola(samples([](double t) { return 0.5 * t * t; }));
  CHECK(exact.acc == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.rms_residual < 1e-12);
  const auto lin = fit_parabola(samples([](double t) { return 3.0 * t; }));
  CHECK(std::abs(lin.acc) < 1e-12);
  CHECK(lin.v0 == doctest::Approx(3.0).epsilon(1e-12));
  Trajectory bad;
  bad.times = {1.0, 1.0, 1.0, 1.0};
  bad.positions = {0.0, 1.0, 2.0, 3.0};
  bad.norms = {1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(fit_parabola(bad), Error);
}

TEST_CASE("parabola fit is translation equivariant") {
  std::mt19937 rng(11);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto t = samples([&](double s) { return 0.2 + 0.4 * s + 0.6 * s * s + noise(rng); });
    const auto base = fit_parabola(t);
    const double c = shift(rng);
    for (auto& x : t.positions) x += c;
    const auto moved = fit_parabola(t);
    CHECK(moved.x0 == doctest::Approx(base.x0 + c).epsilon(1e-12));
    CHECK(moved.v0 == doctest::Approx(base.v0).epsilon(1e-9));
    CHECK(moved.acc == doctest::Approx(base.acc).epsilon(1e-9));
    CHECK(moved.rms_residual >= 0.0);
  }
}

TEST_CASE("ehrenfest residual") {
  Grid1D g(-40.0, 40.0, 1024);
  PropagatorConfig cfg;
  cfg.dt = 1e-3;
  cfg.n_steps = 1000;
  cfg.record_stride = 50;
  SUBCASE("free packet") {
    const auto pot = uniform_potential(0.0, 0.0);
    const auto rec = propagate(gaussian(g, 0.0, 1.0), pot, std::nullopt, cfg);
    const auto e = ehrenfest_residual(rec, pot);
    REQUIRE(e.residuals.size() == rec.times.size() - 2);
    for (double r : e.residuals) CHECK(std::abs(r) < 1e-6);
  }
  SUBCASE("linear potential") {
    const auto pot = static_potential([](double x) { return x; }, [](double) { return 0.0; },
                                      [](double) { return 1.0; }, "linear");
    const auto rec = propagate(gaussian(g, 0.0), pot, std::nullopt, cfg);
    const auto e = ehrenfest_residual(rec, pot);
    for (std::size_t i = 0; i < e.residuals.size(); ++i) {
      CHECK(std::abs(e.centroid_acceleration[i] + 1.0) < 1e-4);
      CHECK(std::abs(e.residuals[i]) < 1e-4);
    }
  }
  SUBCASE("gaussian family accelerates without force") {
    const auto fam = SolutionFamily::gaussian_localized(1.0, 1.0);
    Grid1D wide(-16.0, 16.0, 2048);
    const auto pot = comoving_potential(fam);
    const auto rec = propagate(assemble_lab_frame(fam, wide, 0.0), pot, std::nullopt, cfg);
    for (double r : ehrenfest_residual(rec, pot).residuals) CHECK(std::abs(r - 1.0) < 0.05);
  }
}

TEST_CASE("intensity flatness") {
  Grid1D g(-10.0, 10.0, 256);
  const auto ci = assemble_lab_frame(SolutionFamily::const_intensity_inv_harm(1.0, 1.0, 0.25), g, 0.7);
  CHECK(intensity_flatness(ci, -5.0, 5.0, 1.0) < 1e-12);
  CHECK(intensity_flatness(gaussian(g, 0.0), -5.0, 5.0, 1.0) > 0.5);
}

TEST_CASE("analytic comparison with and without phase alignment") {
  const auto fam = SolutionFamily::gaussian_localized(1.0, 1.0);
  Grid1D g(-12.0, 12.0, 512);
  const auto exact = assemble_lab_frame(fam, g, 0.4);
  CHECK(compare_to_analytic(exact, fam, 0.4).l_inf < 1e-14);
  auto rotated = exact;
  for (auto& v : rotated.values) v *= std::polar(1.0, 0.3);
  const auto aligned = compare_to_analytic(rotated, fam, 0.4, true);
  CHECK(aligned.phase_aligned);
  CHECK(aligned.l2 < 1e-12);
  CHECK(std::abs(aligned.removed_phase - 0.3) < 1e-9);
  CHECK(compare_to_analytic(rotated, fam, 0.4, false).l_inf > 0.1);
  const auto windowed = compare_fields(rotated, exact, false, std::pair{-0.5, 0.5});
  CHECK(windowed.l_inf > 0.0);
}

TEST_CASE("local wavenumber of a plane wave") {
  Grid1D g(0.0, 2.0 * std::numbers::pi, 64);
  ComplexWaveField f(g);
  for (int j = 0; j < g.size(); ++j) f.values[j] = std::polar(2.0, 3.0 * g.x(j));
  for (double k : local_wavenumber(f)) CHECK(std::abs(k - 3.0) < 1e-10);
}
