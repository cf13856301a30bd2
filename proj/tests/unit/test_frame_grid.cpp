#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "selfaccel/errors.hpp"
#include "selfaccel/frame.hpp"
#include "selfaccel/grid.hpp"
#include "selfaccel/potential.hpp"

using namespace selfaccel;

TEST_CASE("global phase S(t)") {
  CHECK(s_of_t(make_frame(1.0, 0.0), 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(s_of_t(make_frame(0.0, 2.0), 3.0) == doctest::Approx(-6.0));
  CHECK(s_of_t(make_frame(2.0, 1.0), 0.0) == 0.0);
}

TEST_CASE("S(t) is the integral of the comoving kinetic term minus mu") {
  const auto f = make_frame(1.3, 0.7);
  const int n = 4000;
  const double t = 1.9, h = t / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double tm = (i + 0.5) * h;
    const double v = comoving_velocity(f, tm);
    sum += (0.5 * v * v - f.mu) * h;
  }
  CHECK(std::abs(sum - s_of_t(f, t)) < 1e-6);
}

TEST_CASE("frame rejects non-finite parameters") {
  CHECK_THROWS_AS(make_frame(std::numeric_limits<double>::quiet_NaN(), 0.0), Error);
  CHECK_THROWS_AS(make_frame(1.0, std::numeric_limits<double>::infinity()), Error);
  CHECK(comoving_center(make_frame(2.0, 0.0), 3.0) == 9.0);
  CHECK(comoving_coordinate(make_frame(2.0, 0.0), 10.0, 3.0) == 1.0);
}

TEST_CASE("finite-difference envelope derivatives agree with analytic ones") {
  auto fd = EnvelopeProfile::from_function([](double q) { return std::sin(q) * std::exp(-0.1 * q * q); });
  for (double q : {-2.0, 0.3, 1.4}) {
    const double e = std::exp(-0.1 * q * q);
    const double d1 = std::cos(q) * e - 0.2 * q * std::sin(q) * e;
    CHECK(std::abs(fd.d1(q) - d1) < 1e-7);
  }
  CHECK(fd.scheme == EnvelopeProfile::Scheme::CenteredDifference);
}

TEST_CASE("grid geometry and wavenumber ordering") {
  Grid1D g(-4.0, 4.0, 16);
  CHECK(g.dx() == 0.5);
  CHECK(g.x(0) == -4.0);
  CHECK(g.positions().back() == doctest::Approx(3.5));
  const auto k = g.wavenumbers();
  const double dk = 2.0 * std::numbers::pi / 8.0;
  CHECK(k[0] == 0.0);
  CHECK(k[1] == doctest::Approx(dk));
  CHECK(k[7] == doctest::Approx(7 * dk));
  CHECK(k[8] == doctest::Approx(-8 * dk));
  CHECK(std::abs(k[8]) == doctest::Approx(std::numbers::pi / g.dx()));
  CHECK(k[15] == doctest::Approx(-dk));
  CHECK_THROWS_AS(Grid1D(0.0, 1.0, 8), Error);
  CHECK_THROWS_AS(Grid1D(1.0, 0.0, 32), Error);
}

TEST_CASE("wave field validates length and detects non-finite values") {
  Grid1D g(0.0, 1.0, 16);
  CHECK_THROWS_AS(ComplexWaveField(g, std::vector<Complex>(15)), Error);
  ComplexWaveField f(g);
  CHECK(f.all_finite());
  f.values[3] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_FALSE(f.all_finite());
}

TEST_CASE("comoving potential rides the frame") {
  ComovingPotential p;
  p.v_real = [](double q) { return q * q; };
  p.v_imag = [](double q) { return -q; };
  p.frame = make_frame(2.0, 0.0);
  const Complex u = p.lab(5.0, 1.0);  // q = 5 - 1 = 4
  CHECK(u.real() == 16.0);
  CHECK(u.imag() == -4.0);
  const auto uni = uniform_potential(0.2, 0.3);
  CHECK(uni.lab(-7.0, 4.0) == Complex(0.2, 0.3));
  CHECK_THROWS_AS(make_nonlinear(1.0, 0.0), Error);
}
