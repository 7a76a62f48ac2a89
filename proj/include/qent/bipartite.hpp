#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>

#include "qent/hermitian.hpp"
#include "qent/qfunc.hpp"

namespace qent {

/// Unit-trace PSD matrix. Keeps its clamped eigenvalues, since every
/// functional evaluated on states is spectral.
class DensityMatrix {
 public:
  /// Validates PSD (min eigenvalue >= -1e-10) and unit trace (|tr - 1| <= 1e-10).
  explicit DensityMatrix(Hermitian m);

  /// Clamps eigenvalues in [-1e-10, 0) to zero and rescales to unit trace before
  /// validating. Used for freshly sampled or mixed states.
  static DensityMatrix repaired(const Hermitian& m);

  static DensityMatrix maximally_mixed(Eigen::Index dim);
  static DensityMatrix pure(const CVectorD& psi);

  Eigen::Index dim() const { return matrix_.dim(); }
  const Hermitian& matrix() const { return matrix_; }
  const SpectrumD& spectrum() const { return spectrum_; }

 private:
  DensityMatrix(Hermitian m, SpectrumD s) : matrix_(std::move(m)), spectrum_(std::move(s)) {}

  Hermitian matrix_;
  SpectrumD spectrum_;
};

double schatten_norm(const DensityMatrix& rho, const QExp& q);
double power_trace(const DensityMatrix& rho, const QExp& q);
double q_entropy(const DensityMatrix& rho, const QExp& q);
double von_neumann(const DensityMatrix& rho);

/// Density matrix on H1 (x) H2; composite index (a, j) -> a * d2 + j.
class BipartiteState {
 public:
  BipartiteState(DensityMatrix rho, Eigen::Index d1, Eigen::Index d2);

  const DensityMatrix& rho() const { return rho_; }
  Eigen::Index d1() const { return d1_; }
  Eigen::Index d2() const { return d2_; }

 private:
  DensityMatrix rho_;
  Eigen::Index d1_;
  Eigen::Index d2_;
};

/// Tr_2 rho, the reduction onto H1: (rho1)_{ab} = sum_j rho_{(a,j),(b,j)}.
DensityMatrix partial_trace_2(const BipartiteState& s);

/// Tr_1 rho, the reduction onto H2: (rho2)_{ij} = sum_a rho_{(a,i),(a,j)}.
DensityMatrix partial_trace_1(const BipartiteState& s);

BipartiteState product_state(const DensityMatrix& a, const DensityMatrix& b);

/// Two-qudit maximally entangled pure state (1/sqrt d) sum_i |ii>.
BipartiteState maximally_entangled(Eigen::Index d);

// Sampling measures ----------------------------------------------------------

struct HilbertSchmidt {};
/// rho = G G^dagger / Tr for G a (d1 d2) x k complex Ginibre matrix.
struct Induced {
  Eigen::Index ancilla = 1;
};
/// Uniform (flat Dirichlet) eigenvalues conjugated by a Haar unitary.
struct SpectrumDirichlet {};
struct HaarPure {};
/// Induced measure with ancilla dimension r, i.e. rank at most r.
struct RankConstrained {
  Eigen::Index rank = 1;
};

using SamplingMeasure =
    std::variant<HilbertSchmidt, Induced, SpectrumDirichlet, HaarPure, RankConstrained>;

/// "hilbert-schmidt", "induced:K", "spectrum-dirichlet", "haar-pure", "rank:R".
std::string to_string(const SamplingMeasure& m);
SamplingMeasure parse_measure(const std::string& text);

// Random numbers --------------------------------------------------------------

/// SplitMix64 finaliser (Steele, Lea, Flood 2014); a bijective 64-bit mixer.
std::uint64_t splitmix64(std::uint64_t x);

/// Per-trial seed derived from a campaign seed and a trial index.
std::uint64_t derive_seed(std::uint64_t campaign_seed, std::uint64_t index);

/// Deterministic variate source. The engine is std::mt19937_64 seeded with
/// splitmix64(seed); uniforms take the top 53 bits and normals use the
/// Box-Muller transform, so streams are bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Uniform on (0, 1].
  double uniform_open0();
  /// Independent standard complex Gaussian (real and imaginary parts N(0, 1/2)).
  std::complex<double> complex_normal();
  CMatrixD ginibre(Eigen::Index rows, Eigen::Index cols);
  /// Haar-distributed unitary via QR of a Ginibre matrix with phase correction.
  CMatrixD haar_unitary(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
};

BipartiteState sample_state(Eigen::Index d1, Eigen::Index d2, const SamplingMeasure& measure,
                            std::uint64_t seed);
DensityMatrix sample_density(Eigen::Index dim, const SamplingMeasure& measure, Rng& rng);

}  // namespace qent
