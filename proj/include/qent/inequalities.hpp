#pragma once

// Executable forms of the vector lemma, its matrix corollary, the bipartite
// norm inequality 1 + ||rho||_q >= ||Tr_1 rho||_q + ||Tr_2 rho||_q (checked
// directly or by replaying the dual-witness construction), the majorization
// step, and subadditivity of the q-entropies.
//
// Every check returns a VerificationRecord whose slack is lhs - rhs with lhs
// the side that should be larger; slack >= -tol means the inequality holds.

#include <array>
#include <map>
#include <string>
#include <string_view>

#include "qent/bipartite.hpp"
#include "qent/hermitian.hpp"
#include "qent/qfunc.hpp"

namespace qent {

enum class InequalityId { kLemma, kCorollary, kTheorem1, kTheorem2, kKyFanPower, kWeakMajorization };

std::string_view to_string(InequalityId id);
/// Accepts "lemma", "corollary", "theorem1", "theorem2", "kyfan-power", "weak-majorization".
InequalityId parse_inequality(std::string_view name);

struct CheckOptions {
  double tol_pass = tol::kPass;
};

struct VerificationRecord {
  InequalityId inequality = InequalityId::kTheorem1;
  double q = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
  // Provenance (mode, seed, dims, measure, ...).
  std::map<std::string, std::string> context;
  // Auxiliary numeric values produced by the check (chain traces, residuals).
  std::map<std::string, double> metrics;
};

VerificationRecord make_record(InequalityId id, double q, double lhs, double rhs,
                               const CheckOptions& opts = {});

/// A bipartite state together with its two reductions, so that several
/// checks at several orders can share one set of eigendecompositions.
class AnalyzedState {
 public:
  explicit AnalyzedState(BipartiteState s);

  const BipartiteState& state() const { return state_; }
  const DensityMatrix& rho() const { return state_.rho(); }
  /// Tr_2 rho, on H1.
  const DensityMatrix& rho1() const { return rho1_; }
  /// Tr_1 rho, on H2.
  const DensityMatrix& rho2() const { return rho2_; }

 private:
  BipartiteState state_;
  DensityMatrix rho1_;
  DensityMatrix rho2_;
};

// Vector lemma -----------------------------------------------------------------

/// sum_{i,j} ((x_i + y_j - 1)_+)^q for l_q-normalised non-negative x, y.
double lemma_sum(const VectorD& x, const VectorD& y, const QExp& q);

/// f(a) = ||(y + a - 1)_+||_q for l_q-normalised y and a in [0, 1].
double convex_profile(const VectorD& y, double a, const QExp& q);

/// Rescales a non-negative vector to unit l_q norm.
VectorD lq_normalise(const VectorD& x, const QExp& q);

// Matrix corollary ---------------------------------------------------------------

/// X (x) 1 + 1 (x) Y - 1 for X on the first factor and Y on the second.
Hermitian corollary_operator(const Hermitian& x, const Hermitian& y);

/// lhs = 1, rhs = ||(X (x) 1 + 1 (x) Y - 1)_+||_q. Also records the same
/// quantity obtained through lemma_sum on the two spectra
/// (metric "lemma_consistency" = |rhs^q - lemma_sum|).
VerificationRecord corollary_check(const Hermitian& x, const Hermitian& y, const QExp& q,
                                   const CheckOptions& opts = {});

struct ZWitness {
  Hermitian w;      // X (x) 1 + 1 (x) Y - 1
  Hermitian z;      // W_+ + shift * 1
  double shift = 0.0;
  int iterations = 0;
};

/// Completes (X (x) 1 + 1 (x) Y - 1)_+ by a multiple of the identity to a PSD
/// matrix of Schatten q-norm exactly 1. The shift is found by bisection on [0, 1].
ZWitness z_witness(const Hermitian& x, const Hermitian& y, const QExp& q);

// Bipartite norm inequality --------------------------------------------------------

enum class Theorem1Mode { kDirect, kConstructive };

/// Witnesses for the norm inequality at order q. They live at the conjugate
/// order q' = q/(q-1): X on H2 is the dual witness of rho2 and Y on H1 the
/// dual witness of rho1, both of unit q'-norm, and Z = z_witness(Y, X, q')
/// acts on H1 (x) H2.
struct WitnessChain {
  double order = 0.0;          // q, the order the final inequality is stated at
  double witness_order = 0.0;  // q', the order of the witness norms
  Hermitian x;
  Hermitian y;
  ZWitness z;
  double trace_z_rho = 0.0;
  double trace_x_rho2 = 0.0;
  double trace_y_rho1 = 0.0;
  double norm_rho = 0.0;
  double norm_rho1 = 0.0;
  double norm_rho2 = 0.0;
  double norm_x = 0.0;
  double norm_y = 0.0;
  double norm_z = 0.0;
  double min_eig_z = 0.0;
  double min_eig_z_minus_w = 0.0;

  /// True when every link of the chain holds within `tol`:
  /// Tr[X rho2] = ||rho2||_q, Tr[Y rho1] = ||rho1||_q, Z >= 0, Z >= W,
  /// ||Z||_{q'} = 1 (to 1e-10), Tr[Z rho] <= ||rho||_q and
  /// Tr[Z rho] + 1 >= Tr[X rho2] + Tr[Y rho1].
  bool holds(double tol = tol::kPass) const;
};

WitnessChain theorem1_witnesses(const AnalyzedState& s, const QExp& q);

/// lhs = 1 + ||rho||_q, rhs = ||Tr_1 rho||_q + ||Tr_2 rho||_q.
VerificationRecord theorem1_check(const AnalyzedState& s, const QExp& q, Theorem1Mode mode,
                                  const CheckOptions& opts = {});
VerificationRecord theorem1_check(const BipartiteState& s, const QExp& q, Theorem1Mode mode,
                                  const CheckOptions& opts = {});

// Majorization step and subadditivity ---------------------------------------------

struct MajorizationPair {
  std::array<double, 2> u{};
  std::array<double, 2> v{};
};

/// u = (1, ||rho||_q), v = (||rho1||_q, ||rho2||_q).
MajorizationPair majorization_pair(const AnalyzedState& s, const QExp& q);

/// Descending partial sums of u dominate those of v. The record reports the
/// tighter of the two partial-sum comparisons; `q_label` only tags the record.
VerificationRecord weak_majorization_check(const MajorizationPair& p, double q_label = 0.0,
                                           const CheckOptions& opts = {});

/// lhs = 1 + ||rho||_q^q, rhs = ||rho1||_q^q + ||rho2||_q^q.
VerificationRecord kyfan_power_check(const AnalyzedState& s, const QExp& q,
                                     const CheckOptions& opts = {});
VerificationRecord kyfan_power_check(const BipartiteState& s, const QExp& q,
                                     const CheckOptions& opts = {});

/// lhs = S_q(rho1) + S_q(rho2), rhs = S_q(rho). Metric "identity_residual" is
/// |slack * (q - 1) - kyfan_power slack|.
VerificationRecord theorem2_check(const AnalyzedState& s, const QExp& q,
                                  const CheckOptions& opts = {});
VerificationRecord theorem2_check(const BipartiteState& s, const QExp& q,
                                  const CheckOptions& opts = {});

}  // namespace qent
