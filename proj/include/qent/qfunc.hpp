#pragma once

// Scalar functionals of non-negative vectors and PSD matrices: l_q norms,
// Schatten q-norms, q-entropies and the Hoelder-optimal dual witness.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "qent/hermitian.hpp"

namespace qent {

/// Entropic order q > 0 together with its Hoelder conjugate q/(q-1).
/// q = 1 is tagged explicitly and never divides by (q - 1).
template <typename Real>
class QExponent {
 public:
  explicit QExponent(Real q) : q_(q) {
    if (!std::isfinite(static_cast<double>(q)) || !(q > Real(0))) {
      std::ostringstream os;
      os << "order q must be a finite positive number, got " << q;
      throw DomainError(os.str());
    }
  }

  /// The order whose conjugate is `qprime` (requires qprime > 1).
  static QExponent conjugate_of(Real qprime) {
    if (!(qprime > Real(1))) throw DomainError("conjugate order requires q' > 1");
    return QExponent(qprime / (qprime - Real(1)));
  }

  Real value() const { return q_; }
  bool is_unit() const { return q_ == Real(1); }

  /// q/(q-1); empty for q = 1.
  std::optional<Real> conjugate() const {
    if (is_unit()) return std::nullopt;
    return q_ / (q_ - Real(1));
  }

 private:
  Real q_;
};

namespace detail {

template <typename Real>
void require_nonnegative(const RealVector<Real>& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < Real(0)) {
      std::ostringstream os;
      os.precision(17);
      os << "l_q norm requires non-negative entries, entry " << i << " is " << x[i];
      throw DomainError(os.str());
    }
  }
}

// sum_i x_i^q with underflowed entries dropped; x assumed non-negative.
template <typename Real>
Real power_sum_unchecked(const RealVector<Real>& x, Real q) {
  Real s(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) s += safe_power(x[i], q);
  return s;
}

}  // namespace detail

/// sum_i x_i^q for non-negative x. Entries below 1e-300 contribute 0.
template <typename Real>
Real power_sum(const RealVector<Real>& x, const QExponent<Real>& q) {
  detail::require_nonnegative(x);
  return detail::power_sum_unchecked(x, q.value());
}

/// (sum_i x_i^q)^{1/q}. For q < 1 this is the quasi-norm used by the search module.
template <typename Real>
Real lq_norm(const RealVector<Real>& x, const QExponent<Real>& q) {
  const Real s = power_sum(x, q);
  if (q.is_unit()) return s;
  using std::pow;
  return s > Real(0) ? pow(s, Real(1) / q.value()) : Real(0);
}

template <typename Real>
Real lq_norm(const Spectrum<Real>& x, const QExponent<Real>& q) {
  return lq_norm(x.values(), q);
}

/// Eigenvalues of a PSD matrix with the clamp window applied.
template <typename Real>
Spectrum<Real> psd_spectrum(const HermitianMatrix<Real>& p) {
  return Spectrum<Real>(detail::clamp_psd<Real>(eigenvalues(p).values()));
}

/// Tr[P^q] for PSD P.
template <typename Real>
Real power_trace(const HermitianMatrix<Real>& p, const QExponent<Real>& q) {
  return power_sum(psd_spectrum(p).values(), q);
}

/// ||P||_q = (Tr[P^q])^{1/q} for PSD P.
template <typename Real>
Real schatten_norm(const HermitianMatrix<Real>& p, const QExponent<Real>& q) {
  return lq_norm(psd_spectrum(p), q);
}

/// -sum lambda ln lambda in nats, 0 ln 0 := 0. Entries must be non-negative.
template <typename Real>
Real von_neumann(const Spectrum<Real>& probabilities) {
  detail::require_nonnegative(probabilities.values());
  using std::log;
  Real s(0);
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    const Real p = probabilities[i];
    if (p > Real(tol::kUnderflow)) s -= p * log(p);
  }
  return s;
}

/// (1 - sum lambda^q)/(q - 1); q = 1 dispatches to the von Neumann entropy.
template <typename Real>
Real q_entropy(const Spectrum<Real>& probabilities, const QExponent<Real>& q) {
  if (q.is_unit()) return von_neumann(probabilities);
  return (Real(1) - power_sum(probabilities.values(), q)) / (q.value() - Real(1));
}

/// B = A^{q'-1} / ||A^{q'-1}||_q, the maximiser of Tr[AB] over B >= 0 with ||B||_q <= 1,
/// where q is the conjugate of `qprime`. Attains Tr[AB] = ||A||_{q'}.
template <typename Real>
HermitianMatrix<Real> dual_witness(const HermitianMatrix<Real>& a, const QExponent<Real>& qprime) {
  if (!(qprime.value() > Real(1))) throw DomainError("dual_witness requires q' > 1");
  const Real q = *qprime.conjugate();
  const EigenSystem<Real> es = eigensystem(a);
  const RealVector<Real> lambda = detail::clamp_psd<Real>(es.spectrum.values());
  if (!(lambda.maxCoeff() > Real(tol::kUnderflow))) {
    throw DomainError("dual_witness requires a nonzero PSD matrix");
  }
  const Real exponent = qprime.value() - Real(1);
  RealVector<Real> powered =
      lambda.unaryExpr([exponent](Real v) { return detail::safe_power(v, exponent); });
  const Real norm = lq_norm(powered, QExponent<Real>(q));
  powered /= norm;
  ComplexMatrix<Real> m =
      es.basis * powered.template cast<std::complex<Real>>().asDiagonal() * es.basis.adjoint();
  return HermitianMatrix<Real>(std::move(m));
}

using QExp = QExponent<double>;

}  // namespace qent
