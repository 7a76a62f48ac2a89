#pragma once

// Dense Hermitian linear algebra on top of Eigen.
//
// Everything here is templated on the real scalar type; the library itself
// is instantiated with double (see the aliases at the bottom), and the tests
// also exercise long double.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "qent/errors.hpp"
#include "qent/tolerances.hpp"

namespace qent {

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using ComplexMatrix =
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Real vector kept sorted in descending order.
template <typename Real>
class Spectrum {
 public:
  using Vector = RealVector<Real>;

  explicit Spectrum(Vector values) : values_(std::move(values)) {
    if (values_.size() < 1) throw DomainError("spectrum must have at least one entry");
    if (!values_.allFinite()) throw DomainError("spectrum has non-finite entries");
    std::sort(values_.data(), values_.data() + values_.size(), std::greater<Real>());
  }

  Spectrum(std::initializer_list<Real> values)
      : Spectrum(Vector(Eigen::Map<const Vector>(values.begin(),
                                                 static_cast<Eigen::Index>(values.size())))) {}

  const Vector& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  Real operator[](Eigen::Index i) const { return values_[i]; }
  Real max() const { return values_[0]; }
  Real min() const { return values_[values_.size() - 1]; }

  friend bool operator==(const Spectrum& a, const Spectrum& b) {
    return a.values_ == b.values_;
  }

 private:
  Vector values_;
};

/// Dense complex matrix known to be Hermitian.
///
/// Construction validates that the input is Hermitian up to roundoff and then
/// symmetrises it exactly, so downstream code can rely on H == H^dagger.
template <typename Real>
class HermitianMatrix {
 public:
  using Scalar = std::complex<Real>;
  using Matrix = ComplexMatrix<Real>;

  explicit HermitianMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
      throw DomainError("Hermitian matrix must be square, got " + std::to_string(m_.rows()) +
                        "x" + std::to_string(m_.cols()));
    }
    check_dimension(m_.rows());
    if (!m_.allFinite()) throw DomainError("matrix has non-finite entries");
    const Real scale = std::max(Real(1), m_.cwiseAbs().maxCoeff());
    const Real asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > Real(tol::kHermitian) * scale) {
      std::ostringstream os;
      os << "matrix is not Hermitian: max |H - H^dagger| = " << asym;
      throw DomainError(os.str());
    }
    symmetrise();
  }

  static HermitianMatrix identity(Eigen::Index n) {
    check_dimension(n);
    return HermitianMatrix(Matrix::Identity(n, n), Trusted{});
  }

  static HermitianMatrix zero(Eigen::Index n) {
    check_dimension(n);
    return HermitianMatrix(Matrix::Zero(n, n), Trusted{});
  }

  static HermitianMatrix diagonal(const RealVector<Real>& d) {
    check_dimension(d.size());
    if (!d.allFinite()) throw DomainError("matrix has non-finite entries");
    return HermitianMatrix(Matrix(d.template cast<Scalar>().asDiagonal()), Trusted{});
  }

  /// Rank-one projector onto the normalised direction of `psi`.
  static HermitianMatrix projector(const ComplexVector<Real>& psi) {
    check_dimension(psi.size());
    const Real n = psi.norm();
    if (!(n > 0)) throw DomainError("cannot build a projector from the zero vector");
    const ComplexVector<Real> u = psi / n;
    return HermitianMatrix(Matrix(u * u.adjoint()), Trusted{});
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    check_same_dim(a, b);
    return HermitianMatrix(Matrix(a.m_ + b.m_), Trusted{});
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    check_same_dim(a, b);
    return HermitianMatrix(Matrix(a.m_ - b.m_), Trusted{});
  }
  friend HermitianMatrix operator*(Real s, const HermitianMatrix& a) {
    return HermitianMatrix(Matrix(s * a.m_), Trusted{});
  }
  friend HermitianMatrix operator*(const HermitianMatrix& a, Real s) { return s * a; }
  friend HermitianMatrix operator/(const HermitianMatrix& a, Real s) {
    return HermitianMatrix(Matrix(a.m_ / s), Trusted{});
  }

  /// U H U^dagger for a unitary (or any square) U of matching dimension.
  HermitianMatrix conjugated_by(const Matrix& u) const {
    if (u.rows() != dim() || u.cols() != dim()) throw DomainError("conjugation dimension mismatch");
    return HermitianMatrix(Matrix(u * m_ * u.adjoint()), Trusted{});
  }

 private:
  struct Trusted {};

  // Skips the asymmetry check for results Hermitian by construction; still
  // symmetrises to remove accumulated roundoff.
  HermitianMatrix(Matrix m, Trusted) : m_(std::move(m)) { symmetrise(); }

  static void check_dimension(Eigen::Index n) {
    if (n < 1) throw DomainError("Hermitian matrix must have dimension >= 1");
    if (static_cast<std::size_t>(n) > tol::kMaxDimension) {
      throw DomainError("matrix dimension " + std::to_string(n) + " exceeds the limit of " +
                        std::to_string(tol::kMaxDimension));
    }
  }

  void symmetrise() {
    Matrix sym = (m_ + m_.adjoint()) / Real(2);
    m_ = std::move(sym);
  }

  static void check_same_dim(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) {
      throw DomainError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                        std::to_string(b.dim()));
    }
  }

  Matrix m_;
};

/// Eigendecomposition H = basis * diag(spectrum) * basis^dagger, eigenvalues descending.
template <typename Real>
struct EigenSystem {
  Spectrum<Real> spectrum;
  ComplexMatrix<Real> basis;

  /// basis * diag(f(lambda)) * basis^dagger.
  template <typename F>
  HermitianMatrix<Real> map(F&& f) const {
    RealVector<Real> mapped = spectrum.values().unaryExpr(std::forward<F>(f));
    ComplexMatrix<Real> m =
        basis * mapped.template cast<std::complex<Real>>().asDiagonal() * basis.adjoint();
    return HermitianMatrix<Real>(std::move(m));
  }
};

namespace detail {

template <typename Real>
Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solve(const HermitianMatrix<Real>& h,
                                                         int options) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(h.matrix(), options);
  if (solver.info() != Eigen::Success) {
    using Solver = Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>>;
    throw NumericError("Hermitian eigensolver did not converge (dim=" + std::to_string(h.dim()) +
                       ", iterations=" + std::to_string(Solver::m_maxIterations * h.dim()) + ")");
  }
  return solver;
}

// Applies the PSD clamp window: values in [-kPsdClamp, 0) become 0, values
// below -kPsdClamp raise a DomainError naming the offending eigenvalue.
template <typename Real>
RealVector<Real> clamp_psd(const RealVector<Real>& values) {
  RealVector<Real> out = values;
  // Eigenvalues within solver round-off of zero are zero. Without this floor
  // lambda^q for q < 1 turns 1e-17 noise into 1e-9 sized entropies.
  const Real floor = Real(out.size()) * std::numeric_limits<Real>::epsilon() *
                     (out.size() > 0 ? out.cwiseAbs().maxCoeff() : Real(0));
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out[i] >= Real(0) && out[i] <= floor) out[i] = Real(0);
    if (out[i] < Real(0)) {
      if (out[i] < -Real(tol::kPsdClamp)) {
        std::ostringstream os;
        os.precision(17);
        os << "matrix is not PSD: eigenvalue " << out[i] << " < -" << tol::kPsdClamp;
        throw DomainError(os.str());
      }
      out[i] = Real(0);
    }
  }
  return out;
}

// lambda^p via exp(p ln lambda); underflowed or clamped eigenvalues map to 0.
template <typename Real>
Real safe_power(Real lambda, Real p) {
  using std::exp;
  using std::log;
  return lambda > Real(tol::kUnderflow) ? exp(p * log(lambda)) : Real(0);
}

}  // namespace detail

template <typename Real>
EigenSystem<Real> eigensystem(const HermitianMatrix<Real>& h) {
  auto solver = detail::solve(h, Eigen::ComputeEigenvectors);
  RealVector<Real> values = solver.eigenvalues().reverse();
  ComplexMatrix<Real> basis = solver.eigenvectors().rowwise().reverse();
  return EigenSystem<Real>{Spectrum<Real>(std::move(values)), std::move(basis)};
}

template <typename Real>
Spectrum<Real> eigenvalues(const HermitianMatrix<Real>& h) {
  auto solver = detail::solve(h, Eigen::EigenvaluesOnly);
  return Spectrum<Real>(RealVector<Real>(solver.eigenvalues()));
}

template <typename Real>
Real min_eigenvalue(const HermitianMatrix<Real>& h) {
  return eigenvalues(h).min();
}

/// Spectral truncation H_+ : negative eigenvalues replaced by zero.
template <typename Real>
HermitianMatrix<Real> positive_part(const HermitianMatrix<Real>& h) {
  return eigensystem(h).map([](Real v) { return std::max(v, Real(0)); });
}

/// P^p for PSD P and p > 0.
template <typename Real>
HermitianMatrix<Real> matrix_power(const HermitianMatrix<Real>& p_mat, Real p) {
  if (!(p > Real(0))) throw DomainError("matrix_power requires a positive exponent");
  const EigenSystem<Real> es = eigensystem(p_mat);
  const RealVector<Real> clamped = detail::clamp_psd<Real>(es.spectrum.values());
  RealVector<Real> powered =
      clamped.unaryExpr([p](Real v) { return detail::safe_power(v, p); });
  ComplexMatrix<Real> m =
      es.basis * powered.template cast<std::complex<Real>>().asDiagonal() * es.basis.adjoint();
  return HermitianMatrix<Real>(std::move(m));
}

/// Kronecker product; the first factor indexes blocks, so (a, j) -> a * dim(b) + j.
template <typename Real>
HermitianMatrix<Real> kron(const HermitianMatrix<Real>& a, const HermitianMatrix<Real>& b) {
  if (static_cast<std::size_t>(a.dim()) * static_cast<std::size_t>(b.dim()) >
      tol::kMaxDimension) {
    throw DomainError("Kronecker product dimension exceeds the limit of " +
                      std::to_string(tol::kMaxDimension));
  }
  ComplexMatrix<Real> m = Eigen::kroneckerProduct(a.matrix(), b.matrix());
  return HermitianMatrix<Real>(std::move(m));
}

template <typename Real>
Real trace(const HermitianMatrix<Real>& h) {
  return h.matrix().diagonal().real().sum();
}

/// Re Tr[A B]; for Hermitian A, B the trace is real.
template <typename Real>
Real trace_of_product(const HermitianMatrix<Real>& a, const HermitianMatrix<Real>& b) {
  if (a.dim() != b.dim()) throw DomainError("trace_of_product dimension mismatch");
  // Tr[AB] = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij)
  return (a.matrix().array() * b.matrix().array().conjugate()).real().sum();
}

using Hermitian = HermitianMatrix<double>;
using SpectrumD = Spectrum<double>;
using EigenSystemD = EigenSystem<double>;
using VectorD = RealVector<double>;
using CVectorD = ComplexVector<double>;
using CMatrixD = ComplexMatrix<double>;

}  // namespace qent
