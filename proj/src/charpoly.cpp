#include "matrixcs/charpoly.hpp"

#include <cmath>
#include <limits>

#include "matrixcs/linalg.hpp"

namespace matrixcs {

std::vector<Complex> charpoly_coeffs(const CMatrix &a) {
  if (!is_square(a))
    throw Error(ErrorCode::NotSquare, "charpoly_coeffs: matrix is not square");
  const Eigen::Index n = a.rows();
  // M_1 = I, a_{n-1} = -tr(A M_1); M_{k+1} = A M_k + a_{n-k} I,
  // a_{n-k-1} = -tr(A M_{k+1}) / (k+1).
  std::vector<Complex> coeffs(static_cast<size_t>(n), Complex(0, 0));
  CMatrix m = CMatrix::Identity(n, n);
  Complex c = -(a * m).trace();
  if (n > 0) coeffs[static_cast<size_t>(n - 1)] = c;
  for (Eigen::Index k = 1; k < n; ++k) {
    m = a * m + c * CMatrix::Identity(n, n);
    c = -(a * m).trace() / static_cast<double>(k + 1);
    coeffs[static_cast<size_t>(n - 1 - k)] = c;
  }
  return coeffs;
}

std::vector<Complex> poly_roots(const std::vector<Complex> &coeffs) {
  std::vector<Complex> c = coeffs;
  std::vector<Complex> roots;
  // Exact zero constant terms correspond to exact zero roots.
  while (!c.empty() && c.front() == Complex(0, 0)) {
    roots.emplace_back(0, 0);
    c.erase(c.begin());
  }
  const size_t d = c.size();
  if (d == 0) return roots;
  if (d == 1) {
    roots.push_back(-c[0]);
    return roots;
  }

  const auto eval = [&](Complex z, Complex &p, Complex &dp) {
    p = Complex(1, 0);
    dp = Complex(0, 0);
    for (size_t k = d; k-- > 0;) {
      dp = dp * z + p;
      p = p * z + c[k];
    }
  };

  double radius = 1.0;
  for (const Complex &ck : c) radius = std::max(radius, std::abs(ck));
  radius = 1.0 + radius;

  std::vector<Complex> z(d);
  for (size_t i = 0; i < d; ++i) {
    const double theta = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(d) + 0.4;
    const double r = radius * (0.3 + 0.7 * static_cast<double>(i + 1) / static_cast<double>(d));
    z[i] = Complex(r * std::cos(theta), r * std::sin(theta));
  }

  // Residual bound: |p(z)| computed by Horner is accurate to about
  // eps * sum_k |c_k| |z|^k, so a root is accepted once the residual
  // drops below a small multiple of that floor.
  const auto residual_floor = [&](Complex zi) {
    double s = 1.0;
    double acc = 1.0;
    const double az = std::abs(zi);
    for (size_t k = d; k-- > 0;) {
      acc = 1.0;
      for (size_t j = 0; j < k; ++j) acc *= az;
      s += std::abs(c[k]) * acc;
    }
    acc = 1.0;
    for (size_t j = 0; j < d; ++j) acc *= az;
    s += acc;
    return 8.0 * static_cast<double>(d + 1) *
           std::numeric_limits<double>::epsilon() * s;
  };

  const int kMaxIters = 500;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    bool all_done = true;
    for (size_t i = 0; i < d; ++i) {
      Complex p, dp;
      eval(z[i], p, dp);
      if (std::abs(p) <= residual_floor(z[i])) continue;
      all_done = false;
      if (dp == Complex(0, 0)) {
        z[i] += Complex(1e-8 * radius, 1e-8 * radius);
        eval(z[i], p, dp);
        if (dp == Complex(0, 0)) continue;
      }
      const Complex newton = p / dp;
      Complex sum(0, 0);
      for (size_t j = 0; j < d; ++j)
        if (j != i) {
          const Complex diff = z[i] - z[j];
          if (diff != Complex(0, 0)) sum += 1.0 / diff;
        }
      const Complex denom = Complex(1, 0) - newton * sum;
      const Complex w = (denom == Complex(0, 0)) ? newton : newton / denom;
      z[i] -= w;
    }
    if (all_done) {
      roots.insert(roots.end(), z.begin(), z.end());
      return roots;
    }
  }
  // Accept a slightly looser floor after the iteration budget; clustered
  // roots stall in update size while the residual is already tiny.
  for (size_t i = 0; i < d; ++i) {
    Complex p, dp;
    eval(z[i], p, dp);
    if (std::abs(p) > 1e4 * residual_floor(z[i]))
      throw Error(ErrorCode::RootFindingFailed,
                  "poly_roots: Aberth iteration did not converge");
  }
  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

std::vector<Complex> charpoly_eigenvalues(const CMatrix &a) {
  return poly_roots(charpoly_coeffs(a));
}

} // namespace matrixcs
