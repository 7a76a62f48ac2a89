#include <doctest.h>

#include <numbers>

#include "qent/bipartite.hpp"
#include "qent/qfunc.hpp"
#include "support.hpp"

using namespace qent;
using qent::testing::TestRng;

TEST_CASE("QExponent validation and conjugates") {
  CHECK_THROWS_AS(QExp(0.0), DomainError);
  CHECK_THROWS_AS(QExp(-1.0), DomainError);
  CHECK_THROWS_AS(QExp(std::numeric_limits<double>::infinity()), DomainError);
  CHECK(QExp(1.0).is_unit());
  CHECK_FALSE(QExp(1.0).conjugate().has_value());
  for (double q : {0.5, 1.1, 2.0, 3.0, 5.0, 64.0}) {
    const QExp e(q);
    CHECK(std::abs(1.0 / q + 1.0 / *e.conjugate() - 1.0) <= 1e-12);
  }
  CHECK(QExp::conjugate_of(2.0).value() == 2.0);
  CHECK(QExp::conjugate_of(5.0).value() == doctest::Approx(1.25));
  CHECK_THROWS_AS(QExp::conjugate_of(1.0), DomainError);
}

TEST_CASE("lq_norm examples") {
  CHECK(lq_norm(VectorD{{1.0, 0.0, 0.0}}, QExp(3.7)) == 1.0);
  CHECK(lq_norm(VectorD{{0.5, 0.5}}, QExp(2.0)) == doctest::Approx(0.7071067812).epsilon(1e-10));
  CHECK(lq_norm(VectorD{{0.75, 0.25}}, QExp(3.0)) ==
        doctest::Approx(std::cbrt(0.75 * 0.75 * 0.75 + 0.25 * 0.25 * 0.25)).epsilon(1e-14));
  CHECK(std::abs(lq_norm(VectorD{{0.75, 0.25}}, QExp(3.0)) - 0.7592) < 1e-4);
  CHECK_THROWS_AS(lq_norm(VectorD{{0.5, -0.1}}, QExp(2.0)), DomainError);
  // Quasi-norm for q < 1.
  CHECK(lq_norm(VectorD{{0.25, 0.25}}, QExp(0.5)) == doctest::Approx(1.0));
}

TEST_CASE("schatten_norm examples") {
  TestRng rng(21);
  for (int i = 0; i < 20; ++i) {
    CHECK(schatten_norm(rng.density(rng.integer(1, 6)), QExp(1.0)) == doctest::Approx(1.0));
  }
  const Hermitian mixed = Hermitian::identity(2) / 2.0;
  CHECK(schatten_norm(mixed, QExp(2.0)) == doctest::Approx(std::numbers::sqrt2 / 2).epsilon(1e-12));
  for (int d : {2, 3, 5})
    for (double q : {1.5, 3.0}) {
      CHECK(schatten_norm(Hermitian::identity(d) / d, QExp(q)) ==
            doctest::Approx(std::pow(d, 1.0 / q - 1.0)).epsilon(1e-12));
    }
  CHECK_THROWS_AS(schatten_norm(Hermitian::diagonal(VectorD{{1.0, -0.2}}), QExp(2.0)),
                  DomainError);
}

TEST_CASE("schatten_norm equals the trace-of-power oracle") {
  TestRng rng(22);
  for (int i = 0; i < 200; ++i) {
    const Hermitian p = rng.psd(rng.integer(2, 16));
    for (int k : {2, 3, 5}) {
      const double oracle = std::pow(qent::testing::trace_of_integer_power(p.matrix(), k), 1.0 / k);
      REQUIRE(schatten_norm(p, QExp(k)) == doctest::Approx(oracle).epsilon(1e-10));
    }
    const double q = 1.5;
    const double via_power = std::pow(trace(matrix_power(p, q)), 1.0 / q);
    REQUIRE(schatten_norm(p, QExp(q)) == doctest::Approx(via_power).epsilon(1e-10));
  }
}

TEST_CASE("schatten_norm equals lq_norm of the spectrum") {
  TestRng rng(23);
  for (int i = 0; i < 200; ++i) {
    const Hermitian p = rng.psd(rng.integer(2, 16));
    for (double q : {1.1, 1.5, 2.0, 3.0, 5.0}) {
      const QExp e(q);
      REQUIRE(std::abs(schatten_norm(p, e) - lq_norm(psd_spectrum(p), e)) <= 1e-10);
    }
  }
}

TEST_CASE("Schatten norm of a state is non-increasing in q") {
  TestRng rng(24);
  for (int i = 0; i < 200; ++i) {
    const DensityMatrix rho(rng.density(rng.integer(2, 8)));
    double prev = schatten_norm(rho, QExp(1.0));
    for (int k = 1; k <= 8; ++k) {
      const double q = 1.0 + 0.5 * k;
      const double cur = schatten_norm(rho, QExp(q));
      REQUIRE(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("q_entropy and von_neumann examples") {
  TestRng rng(25);
  const auto pure = DensityMatrix::pure(rng.ginibre(3, 1).col(0));
  for (double q : {0.5, 1.1, 2.0, 5.0}) CHECK(std::abs(q_entropy(pure, QExp(q))) < 1e-12);
  CHECK(std::abs(von_neumann(pure)) < 1e-12);

  CHECK(q_entropy(DensityMatrix::maximally_mixed(2), QExp(2.0)) == doctest::Approx(0.5));
  for (int d : {2, 3, 7}) {
    CHECK(von_neumann(DensityMatrix::maximally_mixed(d)) == doctest::Approx(std::log(d)));
  }

  const DensityMatrix rho(Hermitian::diagonal(VectorD{{0.75, 0.25}}));
  const double oracle = -0.75 * std::log(0.75) - 0.25 * std::log(0.25);
  CHECK(von_neumann(rho) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(std::abs(oracle - 0.5623) < 1e-4);
  CHECK(std::abs(q_entropy(rho, QExp(1.001)) - oracle) <= 5e-3);
  // q = 1 is dispatched, never divided by zero.
  CHECK(q_entropy(rho, QExp(1.0)) == von_neumann(rho));
}

TEST_CASE("q_entropy is non-negative and vanishes only on pure states") {
  TestRng rng(26);
  for (int i = 0; i < 200; ++i) {
    const DensityMatrix rho(rng.density(rng.integer(2, 8)));
    const bool is_pure = rho.spectrum()[1] <= 1e-9;
    for (double q : {1.1, 2.0, 3.0, 5.0}) {
      const double s = q_entropy(rho, QExp(q));
      REQUIRE(s >= -1e-12);
      if (!is_pure) REQUIRE(s > 1e-12);
    }
  }
}

TEST_CASE("q -> 1 limit approaches the von Neumann entropy") {
  TestRng rng(27);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho(rng.density(rng.integer(2, 8)));
    const double s = von_neumann(rho);
    REQUIRE(std::abs(q_entropy(rho, QExp(1.0 + 1e-3)) - s) <= 1e-2);
    REQUIRE(std::abs(q_entropy(rho, QExp(1.0 - 1e-3)) - s) <= 1e-2);
  }
}

TEST_CASE("dual_witness examples") {
  TestRng rng(28);
  SUBCASE("rank-one fixed point") {
    const Hermitian proj = Hermitian::projector(rng.ginibre(3, 1).col(0));
    for (double qp : {1.5, 2.0, 4.0}) {
      const Hermitian b = dual_witness(proj, QExp(qp));
      CHECK(qent::testing::max_abs_diff(b.matrix(), proj.matrix()) < 1e-12);
    }
  }
  SUBCASE("diagonal, q' = 2") {
    const Hermitian a = Hermitian::diagonal(VectorD{{0.75, 0.25}});
    const Hermitian b = dual_witness(a, QExp(2.0));
    const double norm2 = std::sqrt(0.75 * 0.75 + 0.25 * 0.25);
    CHECK(b(0, 0).real() == doctest::Approx(0.75 / norm2).epsilon(1e-14));
    CHECK(b(1, 1).real() == doctest::Approx(0.25 / norm2).epsilon(1e-14));
    CHECK(std::abs(b(0, 0).real() - 0.9487) < 1e-4);
    CHECK(std::abs(b(1, 1).real() - 0.3162) < 1e-4);
    CHECK(trace_of_product(a, b) == doctest::Approx(norm2).epsilon(1e-14));
    CHECK(std::abs(norm2 - 0.7906) < 1e-4);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(dual_witness(Hermitian::zero(2), QExp(2.0)), DomainError);
    CHECK_THROWS_AS(dual_witness(Hermitian::identity(2), QExp(1.0)), DomainError);
    CHECK_THROWS_AS(dual_witness(Hermitian::identity(2), QExp(0.5)), DomainError);
  }
}

TEST_CASE("dual_witness attains the Hoelder bound and beats random contenders") {
  TestRng rng(29);
  for (int inst = 0; inst < 100; ++inst) {
    const Hermitian a = rng.psd(rng.integer(2, 6));
    const double qp = rng.uniform(1.1, 6.0);
    const QExp qprime(qp);
    const QExp q(*qprime.conjugate());
    const Hermitian b = dual_witness(a, qprime);
    REQUIRE(min_eigenvalue(b) >= -1e-12);
    REQUIRE(std::abs(schatten_norm(b, q) - 1.0) <= 1e-10);
    const double best = trace_of_product(a, b);
    REQUIRE(std::abs(best - schatten_norm(a, qprime)) <= 1e-9 * std::max(1.0, best));
    for (int c = 0; c < 100; ++c) {
      const Hermitian contender = rng.psd(a.dim());
      const Hermitian unit = contender / schatten_norm(contender, q);
      REQUIRE(trace_of_product(a, unit) <= best + 1e-9 * std::max(1.0, best));
    }
  }
}
