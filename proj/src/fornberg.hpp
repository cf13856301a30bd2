#pragma once

#include <array>
#include <span>
#include <vector>

namespace selfaccel::detail {

/// Finite-difference weights at z for derivatives 0..2 on arbitrary nodes
/// (Fornberg's recursion). weights[k][j] multiplies f(nodes[j]) in the k-th derivative.
inline std::array<std::vector<double>, 3> fornberg_weights(double z, std::span<const double> nodes) {
  const int n = static_cast<int>(nodes.size());
  constexpr int m = 2;
  std::array<std::vector<double>, 3> c;
  for (auto& row : c) row.assign(n, 0.0);
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = i < m ? i : m;
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

}  // namespace selfaccel::detail
