#include "qent/bipartite.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qent {
namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

DensityMatrix::DensityMatrix(Hermitian m)
    : matrix_(std::move(m)), spectrum_(eigenvalues(matrix_)) {
  if (spectrum_.min() < -tol::kPsdClamp) {
    throw DomainError("density matrix violates the PSD invariant: minimum eigenvalue " +
                      fmt_double(spectrum_.min()));
  }
  const double tr = trace(matrix_);
  if (std::abs(tr - 1.0) > tol::kUnitTrace) {
    throw DomainError("density matrix violates the unit-trace invariant: trace = " +
                      fmt_double(tr));
  }
  spectrum_ = SpectrumD(detail::clamp_psd<double>(spectrum_.values()));
}

DensityMatrix DensityMatrix::repaired(const Hermitian& m) {
  const EigenSystemD es = eigensystem(m);
  const VectorD clamped = detail::clamp_psd<double>(es.spectrum.values());
  Hermitian fixed = m;
  if (clamped != es.spectrum.values()) {
    fixed = Hermitian(CMatrixD(es.basis * clamped.cast<std::complex<double>>().asDiagonal() *
                               es.basis.adjoint()));
  }
  const double tr = trace(fixed);
  if (!(tr > 0.0)) throw DomainError("cannot normalise a matrix with non-positive trace");
  return DensityMatrix(fixed / tr);
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(Hermitian::identity(dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const CVectorD& psi) {
  return DensityMatrix(Hermitian::projector(psi));
}

double schatten_norm(const DensityMatrix& rho, const QExp& q) {
  return lq_norm(rho.spectrum(), q);
}

double power_trace(const DensityMatrix& rho, const QExp& q) {
  return power_sum(rho.spectrum().values(), q);
}

double q_entropy(const DensityMatrix& rho, const QExp& q) {
  return q_entropy(rho.spectrum(), q);
}

double von_neumann(const DensityMatrix& rho) { return von_neumann(rho.spectrum()); }

BipartiteState::BipartiteState(DensityMatrix rho, Eigen::Index d1, Eigen::Index d2)
    : rho_(std::move(rho)), d1_(d1), d2_(d2) {
  if (d1 < 1 || d2 < 1) throw DomainError("factor dimensions must be >= 1");
  if (rho_.dim() != d1 * d2) {
    throw DomainError("state dimension " + std::to_string(rho_.dim()) + " != d1*d2 = " +
                      std::to_string(d1) + "*" + std::to_string(d2));
  }
}

DensityMatrix partial_trace_2(const BipartiteState& s) {
  const auto d1 = s.d1();
  const auto d2 = s.d2();
  const CMatrixD& r = s.rho().matrix().matrix();
  CMatrixD out = CMatrixD::Zero(d1, d1);
  for (Eigen::Index a = 0; a < d1; ++a)
    for (Eigen::Index b = 0; b < d1; ++b)
      for (Eigen::Index j = 0; j < d2; ++j) out(a, b) += r(a * d2 + j, b * d2 + j);
  return DensityMatrix(Hermitian(std::move(out)));
}

DensityMatrix partial_trace_1(const BipartiteState& s) {
  const auto d1 = s.d1();
  const auto d2 = s.d2();
  const CMatrixD& r = s.rho().matrix().matrix();
  CMatrixD out = CMatrixD::Zero(d2, d2);
  for (Eigen::Index i = 0; i < d2; ++i)
    for (Eigen::Index j = 0; j < d2; ++j)
      for (Eigen::Index a = 0; a < d1; ++a) out(i, j) += r(a * d2 + i, a * d2 + j);
  return DensityMatrix(Hermitian(std::move(out)));
}

BipartiteState product_state(const DensityMatrix& a, const DensityMatrix& b) {
  return BipartiteState(DensityMatrix(kron(a.matrix(), b.matrix())), a.dim(), b.dim());
}

BipartiteState maximally_entangled(Eigen::Index d) {
  CVectorD psi = CVectorD::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) psi[i * d + i] = 1.0;
  return BipartiteState(DensityMatrix::pure(psi), d, d);
}

// Measures -------------------------------------------------------------------

std::string to_string(const SamplingMeasure& m) {
  struct Visitor {
    std::string operator()(const HilbertSchmidt&) const { return "hilbert-schmidt"; }
    std::string operator()(const Induced& i) const {
      return "induced:" + std::to_string(i.ancilla);
    }
    std::string operator()(const SpectrumDirichlet&) const { return "spectrum-dirichlet"; }
    std::string operator()(const HaarPure&) const { return "haar-pure"; }
    std::string operator()(const RankConstrained& r) const {
      return "rank:" + std::to_string(r.rank);
    }
  };
  return std::visit(Visitor{}, m);
}

SamplingMeasure parse_measure(const std::string& text) {
  auto parse_count = [&](const std::string& tail) -> Eigen::Index {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(tail, &used);
      if (used != tail.size()) throw ConfigError("");
      if (v < 1) throw ConfigError("");
      return static_cast<Eigen::Index>(v);
    } catch (const std::exception&) {
      throw ConfigError("invalid measure parameter in '" + text + "': expected an integer >= 1");
    }
  };
  if (text == "hilbert-schmidt" || text == "hs") return HilbertSchmidt{};
  if (text == "spectrum-dirichlet" || text == "dirichlet") return SpectrumDirichlet{};
  if (text == "haar-pure" || text == "pure") return HaarPure{};
  if (text.rfind("induced:", 0) == 0) return Induced{parse_count(text.substr(8))};
  if (text.rfind("rank:", 0) == 0) return RankConstrained{parse_count(text.substr(5))};
  throw ConfigError("unknown sampling measure '" + text +
                    "' (expected hilbert-schmidt, induced:K, spectrum-dirichlet, haar-pure, "
                    "rank:R)");
}

// RNG ------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t campaign_seed, std::uint64_t index) {
  return splitmix64(campaign_seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

double Rng::uniform_open0() {
  // 53 random bits -> {1, ..., 2^53} / 2^53
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

std::complex<double> Rng::complex_normal() {
  const double u1 = uniform_open0();
  const double u2 = uniform_open0();
  // Box-Muller with variance 1/2 per component: radius sqrt(-ln u1)
  const double r = std::sqrt(-std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

CMatrixD Rng::ginibre(Eigen::Index rows, Eigen::Index cols) {
  CMatrixD g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = complex_normal();
  return g;
}

CMatrixD Rng::haar_unitary(Eigen::Index n) {
  const CMatrixD z = ginibre(n, n);
  Eigen::HouseholderQR<CMatrixD> qr(z);
  const CMatrixD q = qr.householderQ();
  const CMatrixD& r = qr.matrixQR();
  CVectorD phases(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    phases[i] = mag > 0.0 ? r(i, i) / mag : std::complex<double>(1.0);
  }
  return q * phases.asDiagonal();
}

namespace {

DensityMatrix from_ginibre(Eigen::Index dim, Eigen::Index k, Rng& rng) {
  const CMatrixD g = rng.ginibre(dim, k);
  return DensityMatrix::repaired(Hermitian(CMatrixD(g * g.adjoint())));
}

}  // namespace

DensityMatrix sample_density(Eigen::Index dim, const SamplingMeasure& measure, Rng& rng) {
  if (dim < 1) throw ConfigError("sampling dimension must be >= 1");
  if (static_cast<std::size_t>(dim) > tol::kMaxDimension) {
    throw ConfigError("sampling dimension exceeds the limit of " +
                      std::to_string(tol::kMaxDimension));
  }
  struct Visitor {
    Eigen::Index dim;
    Rng& rng;
    DensityMatrix operator()(const HilbertSchmidt&) const { return from_ginibre(dim, dim, rng); }
    DensityMatrix operator()(const Induced& m) const {
      if (m.ancilla < 1) throw ConfigError("induced measure requires ancilla dimension >= 1");
      return from_ginibre(dim, m.ancilla, rng);
    }
    DensityMatrix operator()(const RankConstrained& m) const {
      if (m.rank < 1) throw ConfigError("rank-constrained measure requires rank >= 1");
      return from_ginibre(dim, m.rank, rng);
    }
    DensityMatrix operator()(const HaarPure&) const {
      return DensityMatrix::repaired(Hermitian::projector(rng.ginibre(dim, 1).col(0)));
    }
    DensityMatrix operator()(const SpectrumDirichlet&) const {
      VectorD p(dim);
      for (Eigen::Index i = 0; i < dim; ++i) p[i] = -std::log(rng.uniform_open0());
      p /= p.sum();
      const CMatrixD u = rng.haar_unitary(dim);
      return DensityMatrix::repaired(Hermitian::diagonal(p).conjugated_by(u));
    }
  };
  return std::visit(Visitor{dim, rng}, measure);
}

BipartiteState sample_state(Eigen::Index d1, Eigen::Index d2, const SamplingMeasure& measure,
                            std::uint64_t seed) {
  if (d1 < 1 || d2 < 1) throw ConfigError("factor dimensions must be >= 1");
  Rng rng(seed);
  return BipartiteState(sample_density(d1 * d2, measure, rng), d1, d2);
}

}  // namespace qent
