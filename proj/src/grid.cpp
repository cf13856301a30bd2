#include "selfaccel/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "selfaccel/errors.hpp"

namespace selfaccel {

Grid1D::Grid1D(double x_min, double x_max, int n) : x_min_(x_min), x_max_(x_max), n_(n) {
  if (n < 16) throw Error(ErrorCode::ValidationError, "grid needs n >= 16, got " + std::to_string(n));
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw Error(ErrorCode::ValidationError, "grid needs finite x_min < x_max");
  }
}

std::vector<double> Grid1D::positions() const {
  std::vector<double> xs(n_);
  for (int j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

std::vector<double> Grid1D::wavenumbers() const {
  std::vector<double> k(n_);
  const double dk = 2.0 * std::numbers::pi / length();
  for (int j = 0; j < n_; ++j) k[j] = dk * (j < n_ / 2 ? j : j - n_);
  return k;
}

ComplexWaveField::ComplexWaveField(Grid1D g, std::vector<Complex> v) : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.size()) {
    throw Error(ErrorCode::InvalidArgument, "field length does not match grid");
  }
}

ComplexWaveField::ComplexWaveField(Grid1D g) : grid(g), values(g.size(), Complex{}) {}

bool ComplexWaveField::all_finite() const {
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

std::vector<double> ComplexWaveField::density() const {
  std::vector<double> d(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) d[j] = std::norm(values[j]);
  return d;
}

}  // namespace selfaccel
