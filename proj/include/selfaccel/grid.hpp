#pragma once

#include <complex>
#include <span>
#include <vector>

namespace selfaccel {

using Complex = std::complex<double>;

/// Uniform periodic grid x_j = x_min + j dx, j = 0..n-1, with x_max identified with x_min.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, int n);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int size() const { return n_; }
  double dx() const { return (x_max_ - x_min_) / n_; }
  double length() const { return x_max_ - x_min_; }
  double x(int j) const { return x_min_ + j * dx(); }
  std::vector<double> positions() const;
  /// Discrete-transform ordering: 0, 1, ..., n/2 - 1, -n/2, ..., -1 times 2 pi / L.
  std::vector<double> wavenumbers() const;

  bool operator==(const Grid1D&) const = default;

 private:
  double x_min_;
  double x_max_;
  int n_;
};

/// Complex samples of Psi on a grid at one instant.
struct ComplexWaveField {
  Grid1D grid;
  std::vector<Complex> values;

  ComplexWaveField(Grid1D g, std::vector<Complex> v);
  explicit ComplexWaveField(Grid1D g);

  bool all_finite() const;
  std::vector<double> density() const;
};

}  // namespace selfaccel
