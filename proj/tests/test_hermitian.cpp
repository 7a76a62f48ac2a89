#include <doctest.h>

#include "qent/hermitian.hpp"
#include "support.hpp"

using namespace qent;
using qent::testing::TestRng;
using qent::testing::max_abs_diff;

namespace {

Hermitian diag(std::initializer_list<double> d) {
  return Hermitian::diagonal(VectorD(Eigen::Map<const VectorD>(d.begin(), d.size())));
}

Hermitian real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  CMatrixD m(n, n);
  Eigen::Index i = 0;
  for (auto r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return Hermitian(m);
}

}  // namespace

TEST_CASE("construction symmetrises and rejects non-Hermitian input") {
  CMatrixD m(2, 2);
  m << 1.0, std::complex<double>(0.5, 1e-14), std::complex<double>(0.5, -1e-14 + 2e-16), 2.0;
  const Hermitian h(m);
  CHECK(h.matrix() == h.matrix().adjoint());

  CMatrixD bad(2, 2);
  bad << 1.0, 0.5, 0.4, 1.0;
  CHECK_THROWS_AS(Hermitian{bad}, DomainError);
  CHECK_THROWS_AS(Hermitian{CMatrixD(2, 3)}, DomainError);
  CHECK_THROWS_AS(Hermitian{CMatrixD(0, 0)}, DomainError);
  CHECK_THROWS_AS(Hermitian::identity(4097), DomainError);
}

TEST_CASE("eigensystem examples") {
  SUBCASE("identity") {
    const auto es = eigensystem(Hermitian::identity(2));
    CHECK(es.spectrum[0] == doctest::Approx(1.0));
    CHECK(es.spectrum[1] == doctest::Approx(1.0));
  }
  SUBCASE("already diagonal, sorted descending") {
    const auto es = eigensystem(diag({0.25, 0.75}));
    CHECK(es.spectrum[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(es.spectrum[1] == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("rank-one projector against the characteristic polynomial") {
    const Hermitian h = real_matrix({{0.5, 0.5}, {0.5, 0.5}});
    const auto [l0, l1] = qent::testing::eig2x2(h.matrix());
    const auto es = eigensystem(h);
    CHECK(std::abs(es.spectrum[0] - l0) < 1e-14);
    CHECK(std::abs(es.spectrum[1] - l1) < 1e-14);
    CHECK(std::abs(es.spectrum[0] - 1.0) < 1e-14);
    CHECK(std::abs(es.spectrum[1]) < 1e-14);
  }
}

TEST_CASE("eigensystem reconstruction and unitarity on random matrices") {
  TestRng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = rng.integer(2, 16);
    const Hermitian h = rng.hermitian(n);
    const auto es = eigensystem(h);
    const CMatrixD rebuilt =
        es.basis * es.spectrum.values().cast<std::complex<double>>().asDiagonal() *
        es.basis.adjoint();
    REQUIRE(max_abs_diff(rebuilt, h.matrix()) <= 1e-9);
    REQUIRE(max_abs_diff(es.basis.adjoint() * es.basis, CMatrixD::Identity(n, n)) <= 1e-9);
    for (Eigen::Index i = 1; i < n; ++i) REQUIRE(es.spectrum[i - 1] >= es.spectrum[i]);
  }
}

TEST_CASE("positive_part examples") {
  const Hermitian clipped = positive_part(diag({1, 0, 0, -1}));
  CHECK(max_abs_diff(clipped.matrix(), diag({1, 0, 0, 0}).matrix()) < 1e-15);

  const Hermitian flip = real_matrix({{0, 1}, {1, 0}});
  const Hermitian expected = real_matrix({{0.5, 0.5}, {0.5, 0.5}});
  CHECK(max_abs_diff(positive_part(flip).matrix(), expected.matrix()) < 1e-14);

  TestRng rng(2);
  for (int i = 0; i < 50; ++i) {
    const Hermitian p = rng.psd(rng.integer(1, 8));
    CHECK(max_abs_diff(positive_part(p).matrix(), p.matrix()) <= 1e-10 * std::max(1.0, p.matrix().cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("positive part dominates H and zero") {
  TestRng rng(3);
  for (int i = 0; i < 300; ++i) {
    const Hermitian h = rng.hermitian(rng.integer(1, 12));
    const Hermitian hp = positive_part(h);
    REQUIRE(min_eigenvalue(hp) >= -1e-9);
    REQUIRE(min_eigenvalue(hp - h) >= -1e-9);
  }
}

TEST_CASE("matrix_power examples and errors") {
  CHECK(max_abs_diff(matrix_power(Hermitian::identity(3), 2.7).matrix(), CMatrixD::Identity(3, 3)) <
        1e-14);
  CHECK(max_abs_diff(matrix_power(diag({4, 1}), 0.5).matrix(), diag({2, 1}).matrix()) < 1e-14);
  CHECK(max_abs_diff(matrix_power(diag({0.75, 0.25}), 2.0).matrix(),
                     diag({0.5625, 0.0625}).matrix()) < 1e-15);

  // Roundoff-size negative eigenvalues are clamped, larger ones rejected.
  CHECK(max_abs_diff(matrix_power(diag({1, -5e-11}), 2.0).matrix(), diag({1, 0}).matrix()) <
        1e-15);
  CHECK_THROWS_WITH_AS(matrix_power(diag({1, -1e-6}), 2.0), doctest::Contains("not PSD"),
                       DomainError);
  CHECK_THROWS_AS(matrix_power(diag({1, 0}), 0.0), DomainError);
  CHECK_THROWS_AS(matrix_power(diag({1, 0}), -1.0), DomainError);
}

TEST_CASE("matrix_power composition properties") {
  TestRng rng(4);
  for (int i = 0; i < 200; ++i) {
    const Hermitian p = rng.density(rng.integer(1, 10));
    REQUIRE(max_abs_diff(matrix_power(p, 1.0).matrix(), p.matrix()) <= 1e-10);
    for (double a : {0.5, 2.0})
      for (double b : {0.5, 2.0}) {
        const auto lhs = matrix_power(matrix_power(p, a), b);
        const auto rhs = matrix_power(p, a * b);
        REQUIRE(max_abs_diff(lhs.matrix(), rhs.matrix()) <= 1e-8);
      }
  }
}

TEST_CASE("kron examples and spectrum") {
  CHECK(kron(Hermitian::identity(2), Hermitian::identity(3)).matrix() == CMatrixD::Identity(6, 6));
  CHECK(max_abs_diff(kron(diag({1, 0}), diag({0.5, 0.5})).matrix(),
                     diag({0.5, 0.5, 0, 0}).matrix()) == 0.0);

  TestRng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Hermitian a = rng.hermitian(rng.integer(1, 5));
    const Hermitian b = rng.hermitian(rng.integer(1, 5));
    const auto expected = qent::testing::pairwise_products(eigenvalues(a).values(),
                                                           eigenvalues(b).values());
    const auto got = eigenvalues(kron(a, b));
    REQUIRE(static_cast<std::size_t>(got.size()) == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
      REQUIRE(std::abs(got[static_cast<Eigen::Index>(k)] - expected[k]) <= 1e-9);
    }
  }
}

TEST_CASE("trace examples") {
  CHECK(trace(Hermitian::identity(5)) == 5.0);
  CHECK(trace(diag({0.75, 0.25})) == 1.0);
  TestRng rng(6);
  for (int i = 0; i < 100; ++i) {
    const Hermitian a = rng.hermitian(2);
    const Hermitian b = rng.hermitian(3);
    CHECK(trace(kron(a, b)) == doctest::Approx(trace(a) * trace(b)).epsilon(1e-12));
  }
}

TEST_CASE("trace_of_product matches the matrix product") {
  TestRng rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto n = rng.integer(1, 8);
    const Hermitian a = rng.hermitian(n);
    const Hermitian b = rng.hermitian(n);
    CHECK(trace_of_product(a, b) ==
          doctest::Approx((a.matrix() * b.matrix()).trace().real()).epsilon(1e-12));
  }
}

TEST_CASE("long double instantiation agrees with double") {
  using HermitianL = HermitianMatrix<long double>;
  ComplexMatrix<long double> m(2, 2);
  m << 0.5L, 0.5L, 0.5L, 0.5L;
  const HermitianL h(m);
  const auto es = eigensystem(h);
  CHECK(static_cast<double>(es.spectrum[0]) == doctest::Approx(1.0));
  CHECK(std::abs(static_cast<double>(es.spectrum[1])) < 1e-17);
  const auto p = matrix_power(h, 3.0L);
  CHECK(std::abs(static_cast<double>(trace(p)) - 1.0) < 1e-17);
}
