#include "qent/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <sstream>

#include "qent/diagnostics.hpp"

namespace qent {
namespace {

constexpr int kBisectionMaxIterations = 200;
constexpr double kBisectionTolerance = 1e-12;
constexpr double kWitnessNormTolerance = 1e-10;

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void warn_large_order_once(double q) {
  static std::mutex m;
  static std::set<double> seen;
  {
    std::lock_guard lock(m);
    if (!seen.insert(q).second) return;
  }
  warn("order q = " + fmt_double(q) + " exceeds " + fmt_double(tol::kMaxOrder) +
       "; powers concentrate on the largest eigenvalue and checks lose meaning");
}

void require_theorem_order(const QExp& q) {
  if (!(q.value() > 1.0)) {
    throw DomainError("inequality checks require the q > 1 precondition, got q = " +
                      fmt_double(q.value()));
  }
  if (q.value() > tol::kMaxOrder) warn_large_order_once(q.value());
}

void require_normalised(const VectorD& x, const QExp& q, const char* name) {
  const double n = lq_norm(x, q);
  if (std::abs(n - 1.0) > tol::kNormalised) {
    throw DomainError(std::string("input ") + name + " is not l_q-normalised: norm = " +
                      fmt_double(n));
  }
}

void require_normalised(const Hermitian& x, const QExp& q, const char* name) {
  const double n = schatten_norm(x, q);
  if (std::abs(n - 1.0) > tol::kNormalised) {
    throw DomainError(std::string("input ") + name + " is not Schatten-normalised: norm = " +
                      fmt_double(n));
  }
}

double positive(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

std::string_view to_string(InequalityId id) {
  switch (id) {
    case InequalityId::kLemma: return "lemma";
    case InequalityId::kCorollary: return "corollary";
    case InequalityId::kTheorem1: return "theorem1";
    case InequalityId::kTheorem2: return "theorem2";
    case InequalityId::kKyFanPower: return "kyfan-power";
    case InequalityId::kWeakMajorization: return "weak-majorization";
  }
  return "unknown";
}

InequalityId parse_inequality(std::string_view name) {
  for (auto id : {InequalityId::kLemma, InequalityId::kCorollary, InequalityId::kTheorem1,
                  InequalityId::kTheorem2, InequalityId::kKyFanPower,
                  InequalityId::kWeakMajorization}) {
    if (to_string(id) == name) return id;
  }
  throw ConfigError("unknown inequality '" + std::string(name) + "'");
}

VerificationRecord make_record(InequalityId id, double q, double lhs, double rhs,
                               const CheckOptions& opts) {
  VerificationRecord r;
  r.inequality = id;
  r.q = q;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.pass = r.slack >= -opts.tol_pass;
  return r;
}

AnalyzedState::AnalyzedState(BipartiteState s)
    : state_(std::move(s)), rho1_(partial_trace_2(state_)), rho2_(partial_trace_1(state_)) {}

// Lemma -------------------------------------------------------------------------

VectorD lq_normalise(const VectorD& x, const QExp& q) {
  const double n = lq_norm(x, q);
  if (!(n > 0.0)) throw DomainError("cannot normalise the zero vector");
  return x / n;
}

double lemma_sum(const VectorD& x, const VectorD& y, const QExp& q) {
  require_normalised(x, q, "x");
  require_normalised(y, q, "y");
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (Eigen::Index j = 0; j < y.size(); ++j)
      s += detail::safe_power(positive(x[i] + y[j] - 1.0), q.value());
  return s;
}

double convex_profile(const VectorD& y, double a, const QExp& q) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw DomainError("convex_profile requires a in [0, 1], got " + fmt_double(a));
  }
  require_normalised(y, q, "y");
  const VectorD shifted = y.unaryExpr([a](double v) { return positive(v + a - 1.0); });
  return lq_norm(shifted, q);
}

// Corollary ---------------------------------------------------------------------

Hermitian corollary_operator(const Hermitian& x, const Hermitian& y) {
  const auto ix = Hermitian::identity(x.dim());
  const auto iy = Hermitian::identity(y.dim());
  return kron(x, iy) + kron(ix, y) - Hermitian::identity(x.dim() * y.dim());
}

VerificationRecord corollary_check(const Hermitian& x, const Hermitian& y, const QExp& q,
                                   const CheckOptions& opts) {
  require_normalised(x, q, "X");
  require_normalised(y, q, "Y");
  const double rhs = schatten_norm(positive_part(corollary_operator(x, y)), q);
  auto rec = make_record(InequalityId::kCorollary, q.value(), 1.0, rhs, opts);

  const VectorD sx = psd_spectrum(x).values();
  const VectorD sy = psd_spectrum(y).values();
  const double via_lemma = lemma_sum(sx, sy, q);
  rec.metrics["lemma_sum"] = via_lemma;
  rec.metrics["lemma_consistency"] = std::abs(std::pow(rhs, q.value()) - via_lemma);
  rec.context["dims"] = std::to_string(x.dim()) + "x" + std::to_string(y.dim());
  return rec;
}

ZWitness z_witness(const Hermitian& x, const Hermitian& y, const QExp& q) {
  require_normalised(x, q, "X");
  require_normalised(y, q, "Y");
  Hermitian w = corollary_operator(x, y);
  const EigenSystemD es = eigensystem(w);
  const VectorD mu = es.spectrum.values().unaryExpr([](double v) { return positive(v); });

  // g(t) = ||W_+ + t 1||_q - 1, increasing in t; g(0) <= 0 and g(1) >= 0.
  auto g = [&](double t) {
    return lq_norm(VectorD(mu.array() + t), q) - 1.0;
  };

  double t = 0.0;
  int iterations = 0;
  const double g0 = g(0.0);
  if (g0 > tol::kPass) {
    throw NumericError("positive part already has q-norm " + fmt_double(g0 + 1.0) +
                       " > 1; no completion exists");
  }
  if (g0 < 0.0) {
    // Bisect to the limit of double resolution and keep the best iterate.
    double lo = 0.0;
    double hi = 1.0;
    double best_abs = std::abs(g0);
    while (iterations < kBisectionMaxIterations) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      ++iterations;
      const double gm = g(mid);
      if (std::abs(gm) < best_abs) {
        best_abs = std::abs(gm);
        t = mid;
      }
      if (gm == 0.0) break;
      (gm < 0.0 ? lo : hi) = mid;
    }
    if (best_abs > kBisectionTolerance) {
      throw NumericError("z_witness bisection did not reach |g| <= 1e-12 within " +
                         std::to_string(kBisectionMaxIterations) + " iterations (|g| = " +
                         fmt_double(best_abs) + ")");
    }
  }

  VectorD z_eigs = mu.array() + t;
  Hermitian z(CMatrixD(es.basis * z_eigs.cast<std::complex<double>>().asDiagonal() *
                       es.basis.adjoint()));
  return ZWitness{std::move(w), std::move(z), t, iterations};
}

// Theorem 1 ---------------------------------------------------------------------

bool WitnessChain::holds(double tol) const {
  return std::abs(trace_x_rho2 - norm_rho2) <= tol && std::abs(trace_y_rho1 - norm_rho1) <= tol &&
         min_eig_z >= -tol && min_eig_z_minus_w >= -tol &&
         std::abs(norm_z - 1.0) <= kWitnessNormTolerance && trace_z_rho <= norm_rho + tol &&
         trace_z_rho + 1.0 >= trace_x_rho2 + trace_y_rho1 - tol;
}

WitnessChain theorem1_witnesses(const AnalyzedState& s, const QExp& q) {
  require_theorem_order(q);
  const QExp qw = QExp::conjugate_of(q.value());
  if (qw.value() > tol::kMaxOrder) warn_large_order_once(qw.value());

  Hermitian x = dual_witness(s.rho2().matrix(), q);
  Hermitian y = dual_witness(s.rho1().matrix(), q);
  ZWitness zw = z_witness(y, x, qw);

  WitnessChain c{
      .order = q.value(),
      .witness_order = qw.value(),
      .x = std::move(x),
      .y = std::move(y),
      .z = std::move(zw),
  };
  c.trace_z_rho = trace_of_product(c.z.z, s.rho().matrix());
  c.trace_x_rho2 = trace_of_product(c.x, s.rho2().matrix());
  c.trace_y_rho1 = trace_of_product(c.y, s.rho1().matrix());
  c.norm_rho = schatten_norm(s.rho(), q);
  c.norm_rho1 = schatten_norm(s.rho1(), q);
  c.norm_rho2 = schatten_norm(s.rho2(), q);
  c.norm_x = schatten_norm(c.x, qw);
  c.norm_y = schatten_norm(c.y, qw);
  c.norm_z = schatten_norm(c.z.z, qw);
  c.min_eig_z = min_eigenvalue(c.z.z);
  c.min_eig_z_minus_w = min_eigenvalue(c.z.z - c.z.w);
  return c;
}

VerificationRecord theorem1_check(const AnalyzedState& s, const QExp& q, Theorem1Mode mode,
                                  const CheckOptions& opts) {
  require_theorem_order(q);
  const double n = schatten_norm(s.rho(), q);
  const double n1 = schatten_norm(s.rho1(), q);
  const double n2 = schatten_norm(s.rho2(), q);
  auto rec = make_record(InequalityId::kTheorem1, q.value(), 1.0 + n, n2 + n1, opts);
  rec.context["dims"] = std::to_string(s.state().d1()) + "x" + std::to_string(s.state().d2());
  if (mode == Theorem1Mode::kDirect) {
    rec.context["mode"] = "direct";
    return rec;
  }

  const WitnessChain c = theorem1_witnesses(s, q);
  const bool chain_ok = c.holds(opts.tol_pass);
  rec.pass = rec.pass && chain_ok;
  rec.context["mode"] = "constructive";
  rec.context["stated_order"] = fmt_double(c.order);
  rec.context["witness_order"] = fmt_double(c.witness_order);
  rec.context["chain"] = chain_ok ? "holds" : "broken";
  rec.metrics["trace_z_rho"] = c.trace_z_rho;
  rec.metrics["trace_x_rho2"] = c.trace_x_rho2;
  rec.metrics["trace_y_rho1"] = c.trace_y_rho1;
  rec.metrics["norm_z"] = c.norm_z;
  rec.metrics["min_eig_z"] = c.min_eig_z;
  rec.metrics["min_eig_z_minus_w"] = c.min_eig_z_minus_w;
  rec.metrics["shift"] = c.z.shift;
  // 1 + Tr[Z rho] - Tr[X rho2] - Tr[Y rho1]: the witness lower bound on the slack.
  rec.metrics["chain_slack"] = 1.0 + c.trace_z_rho - c.trace_x_rho2 - c.trace_y_rho1;
  return rec;
}

VerificationRecord theorem1_check(const BipartiteState& s, const QExp& q, Theorem1Mode mode,
                                  const CheckOptions& opts) {
  return theorem1_check(AnalyzedState(s), q, mode, opts);
}

// Theorem 2 ---------------------------------------------------------------------

MajorizationPair majorization_pair(const AnalyzedState& s, const QExp& q) {
  return MajorizationPair{{1.0, schatten_norm(s.rho(), q)},
                          {schatten_norm(s.rho1(), q), schatten_norm(s.rho2(), q)}};
}

VerificationRecord weak_majorization_check(const MajorizationPair& p, double q_label,
                                           const CheckOptions& opts) {
  auto u = p.u;
  auto v = p.v;
  std::sort(u.begin(), u.end(), std::greater<>());
  std::sort(v.begin(), v.end(), std::greater<>());
  const double first_gap = u[0] - v[0];
  const double total_gap = (u[0] + u[1]) - (v[0] + v[1]);
  auto rec = first_gap <= total_gap
                 ? make_record(InequalityId::kWeakMajorization, q_label, u[0], v[0], opts)
                 : make_record(InequalityId::kWeakMajorization, q_label, u[0] + u[1],
                               v[0] + v[1], opts);
  rec.metrics["first_gap"] = first_gap;
  rec.metrics["total_gap"] = total_gap;
  return rec;
}

VerificationRecord kyfan_power_check(const AnalyzedState& s, const QExp& q,
                                     const CheckOptions& opts) {
  require_theorem_order(q);
  return make_record(InequalityId::kKyFanPower, q.value(), 1.0 + power_trace(s.rho(), q),
                     power_trace(s.rho1(), q) + power_trace(s.rho2(), q), opts);
}

VerificationRecord kyfan_power_check(const BipartiteState& s, const QExp& q,
                                     const CheckOptions& opts) {
  return kyfan_power_check(AnalyzedState(s), q, opts);
}

VerificationRecord theorem2_check(const AnalyzedState& s, const QExp& q,
                                  const CheckOptions& opts) {
  require_theorem_order(q);
  auto rec = make_record(InequalityId::kTheorem2, q.value(),
                         q_entropy(s.rho1(), q) + q_entropy(s.rho2(), q), q_entropy(s.rho(), q),
                         opts);
  const auto kf = kyfan_power_check(s, q, opts);
  rec.metrics["kyfan_slack"] = kf.slack;
  rec.metrics["identity_residual"] = std::abs(rec.slack * (q.value() - 1.0) - kf.slack);
  return rec;
}

VerificationRecord theorem2_check(const BipartiteState& s, const QExp& q,
                                  const CheckOptions& opts) {
  return theorem2_check(AnalyzedState(s), q, opts);
}

}  // namespace qent
