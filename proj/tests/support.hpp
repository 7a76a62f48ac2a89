#pragma once

// Test-only generators and brute-force oracles. Nothing here calls into the
// library's sampling or partial-trace code, so the oracles stay independent of
// the implementation paths they check.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qent/hermitian.hpp"

namespace qent::testing {

using cd = std::complex<double>;

class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  cd gaussian() { return {normal_(gen_), normal_(gen_)}; }

  CMatrixD ginibre(Eigen::Index r, Eigen::Index c) {
    CMatrixD g(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) g(i, j) = gaussian();
    return g;
  }

  Hermitian hermitian(Eigen::Index n) {
    const CMatrixD g = ginibre(n, n);
    return Hermitian(CMatrixD((g + g.adjoint()) / 2.0));
  }

  /// Random PSD with a random rank in [1, n].
  Hermitian psd(Eigen::Index n) {
    const CMatrixD g = ginibre(n, integer(1, static_cast<int>(n)));
    return Hermitian(CMatrixD(g * g.adjoint()));
  }

  Hermitian density(Eigen::Index n) {
    const Hermitian p = psd(n);
    return p / trace(p);
  }

  CMatrixD unitary(Eigen::Index n) {
    Eigen::HouseholderQR<CMatrixD> qr(ginibre(n, n));
    return qr.householderQ();
  }

  /// Non-negative vector with some exact zeros mixed in.
  VectorD nonnegative(Eigen::Index n) {
    VectorD v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform() < 0.2 ? 0.0 : uniform();
    if (v.maxCoeff() == 0.0) v[0] = 1.0;
    return v;
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline double max_abs_diff(const CMatrixD& a, const CMatrixD& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Closed-form eigenvalues of a 2x2 Hermitian matrix from its characteristic polynomial.
inline std::pair<double, double> eig2x2(const CMatrixD& m) {
  const double tr = (m(0, 0) + m(1, 1)).real();
  const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

/// Reduction onto the first factor via rho1 = sum_j (1 (x) <j|) rho (1 (x) |j>).
inline CMatrixD reduce_to_first(const CMatrixD& rho, Eigen::Index d1, Eigen::Index d2) {
  CMatrixD out = CMatrixD::Zero(d1, d1);
  for (Eigen::Index j = 0; j < d2; ++j) {
    CMatrixD e = CMatrixD::Zero(d1 * d2, d1);
    for (Eigen::Index a = 0; a < d1; ++a) e(a * d2 + j, a) = 1.0;
    out += e.adjoint() * rho * e;
  }
  return out;
}

/// Reduction onto the second factor via rho2 = sum_a (<a| (x) 1) rho (|a> (x) 1).
inline CMatrixD reduce_to_second(const CMatrixD& rho, Eigen::Index d1, Eigen::Index d2) {
  CMatrixD out = CMatrixD::Zero(d2, d2);
  for (Eigen::Index a = 0; a < d1; ++a) {
    out += rho.block(a * d2, a * d2, d2, d2);
  }
  return out;
}

/// Tr[P^k] by repeated multiplication, no eigendecomposition.
inline double trace_of_integer_power(const CMatrixD& p, int k) {
  CMatrixD acc = CMatrixD::Identity(p.rows(), p.cols());
  for (int i = 0; i < k; ++i) acc = acc * p;
  return acc.trace().real();
}

/// Sorted (descending) vector of all pairwise products.
inline std::vector<double> pairwise_products(const VectorD& a, const VectorD& b) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out.push_back(a[i] * b[j]);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace qent::testing
