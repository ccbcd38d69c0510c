#include <doctest.h>

#include <cmath>

#include "cmvflows/errors.hpp"
#include "cmvflows/cmv.hpp"
#include "cmvflows/laurent.hpp"
#include "cmvflows/rng.hpp"

using namespace cmvflows;

namespace {

Eigen::MatrixXcd unit_entry(int p, int i, int j, cxd v = cxd(1.0)) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(p, p);
  m(i, j) = v;
  return m;
}

LaurentMatrix random_laurent(SplitMix64& rng, int p, int jmin, int jmax) {
  LaurentMatrix l(p);
  for (int j = jmin; j <= jmax; ++j) {
    Eigen::MatrixXcd m(p, p);
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c) m(r, c) = cxd(rng.uniform() - 0.5, rng.uniform() - 0.5);
    l.set_coeff(j, m);
  }
  return l;
}

}  // namespace

TEST_CASE("eval on simple loops") {
  LaurentMatrix id = LaurentMatrix::identity(3);
  CHECK((eval(id, cxd(0.0, 1.0)) - Eigen::MatrixXcd::Identity(3, 3)).norm() == 0.0);

  cxd c(0.7, -0.2);
  LaurentMatrix mono = LaurentMatrix::monomial(-1, unit_entry(2, 1, 0, c));
  Eigen::MatrixXcd at2 = eval(mono, cxd(2.0));
  CHECK(std::abs(at2(1, 0) - c / 2.0) < 1e-15);
  CHECK(std::abs(at2(0, 0)) == 0.0);
  CHECK(std::abs(at2(0, 1)) == 0.0);

  // odd factor of the free state at h = i
  FloquetCMV free2 = coxeter_element(2);
  Eigen::MatrixXcd go_i = eval(free2.go, cxd(0.0, 1.0));
  CHECK(std::abs(go_i(0, 1) - cxd(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(go_i(1, 0) - cxd(0.0, -1.0)) < 1e-15);

  CHECK_THROWS_AS((void)eval(id, cxd(0.0)), DomainError);
}

TEST_CASE("multiply: identity, free case, eval oracle") {
  SplitMix64 rng(11);
  LaurentMatrix b = random_laurent(rng, 3, -2, 2);
  CHECK(coeff_distance(multiply(LaurentMatrix::identity(3), b), b) == 0.0);

  // free case: E(h) = diag(h^-1, h)
  FloquetCMV free2 = coxeter_element(2);
  CHECK(std::abs(free2.assembled.coeff(-1)(0, 0) - cxd(1.0)) < 1e-15);
  CHECK(std::abs(free2.assembled.coeff(1)(1, 1) - cxd(1.0)) < 1e-15);
  CHECK(free2.assembled.coeff(0).norm() < 1e-15);

  // pointwise-product oracle at 8 circle points
  VerblunskyVector v(2, {cxd(0.5, 0.0), cxd(0.0, 0.3)});
  FloquetCMV f = build_factors(v);
  LaurentMatrix ge = LaurentMatrix::constant(f.ge);
  LaurentMatrix prod = multiply(ge, f.go);
  for (int k = 0; k < 8; ++k) {
    cxd h = std::polar(1.0, 2.0 * M_PI * k / 8.0 + 0.1);
    CHECK((eval(prod, h) - eval(ge, h) * eval(f.go, h)).norm() < 1e-12);
  }

  CHECK_THROWS_AS((void)multiply(LaurentMatrix::identity(2), LaurentMatrix::identity(4)),
                  DomainError);
}

TEST_CASE("star involution") {
  Eigen::MatrixXcd a(2, 2);
  a << cxd(1, 2), cxd(3, -1), cxd(0, 1), cxd(-2, 0.5);

  LaurentMatrix c0 = LaurentMatrix::constant(a);
  CHECK(coeff_distance(star(c0), LaurentMatrix::constant(a.adjoint())) == 0.0);

  LaurentMatrix m1 = LaurentMatrix::monomial(1, a);
  CHECK(star(m1).has(-1));
  CHECK(coeff_distance(star(m1), LaurentMatrix::monomial(-1, a.adjoint())) == 0.0);

  // star is involutive and an anti-automorphism
  SplitMix64 rng(7);
  LaurentMatrix x = random_laurent(rng, 3, -1, 2), y = random_laurent(rng, 3, -2, 1);
  CHECK(coeff_distance(star(star(x)), x) < 1e-15);
  CHECK(coeff_distance(star(multiply(x, y)), multiply(star(y), star(x))) < 1e-13);

  // unitarity of the assembled loop
  VerblunskyVector v(2, {cxd(0.5, 0.0), cxd(0.0, 0.3)});
  LaurentMatrix e = build_factors(v).assembled;
  CHECK(coeff_distance(multiply(e, star(e)), LaurentMatrix::identity(2)) < 1e-12);
}

TEST_CASE("triangular projections") {
  Eigen::MatrixXcd a(2, 2);
  a << cxd(1, 1), cxd(2, 0), cxd(0, -3), cxd(4, 2);

  SUBCASE("split into plus/minus/zero reconstructs") {
    TriProjection t = project_pm0(LaurentMatrix::constant(a));
    CHECK(t.plus.coeffs().empty());
    CHECK(t.minus.coeffs().empty());
    CHECK(coeff_distance(t.zero, LaurentMatrix::constant(a)) == 0.0);

    LaurentMatrix l(2);
    l.set_coeff(-1, a);
    l.set_coeff(2, 2.0 * a);
    TriProjection t2 = project_pm0(l);
    CHECK(coeff_distance(t2.plus, LaurentMatrix::monomial(2, 2.0 * a)) == 0.0);
    CHECK(coeff_distance(t2.minus, LaurentMatrix::monomial(-1, a)) == 0.0);
    CHECK(t2.zero.coeffs().empty());

    SplitMix64 rng(3);
    LaurentMatrix r = random_laurent(rng, 3, -2, 2);
    TriProjection t3 = project_pm0(r);
    CHECK(coeff_distance(add(add(t3.plus, t3.minus), t3.zero), r) == 0.0);
  }

  SUBCASE("anti-Hermitian constant is fixed by project_k") {
    Eigen::MatrixXcd k = a - a.adjoint();  // anti-Hermitian
    LaurentMatrix l = LaurentMatrix::constant(k);
    CHECK(coeff_distance(project_k(l), l) < 1e-15);
    CHECK(project_b(l).coeffs().empty());
  }

  SUBCASE("single strict-upper entry splits by hand") {
    LaurentMatrix l = LaurentMatrix::constant(unit_entry(2, 0, 1));
    Eigen::MatrixXcd expected_k = unit_entry(2, 0, 1) - unit_entry(2, 1, 0);
    CHECK(coeff_distance(project_k(l), LaurentMatrix::constant(expected_k)) < 1e-15);
    CHECK(coeff_distance(project_b(l), LaurentMatrix::constant(unit_entry(2, 1, 0))) < 1e-15);
  }

  SUBCASE("pure negative power") {
    LaurentMatrix l = LaurentMatrix::monomial(-2, a);
    CHECK(coeff_distance(project_k(l), sub(l, star(l))) < 1e-15);
    CHECK(coeff_distance(project_b(l), star(l)) < 1e-15);
  }

  SUBCASE("splitting properties on random input") {
    SplitMix64 rng(19);
    for (int trial = 0; trial < 10; ++trial) {
      LaurentMatrix l = random_laurent(rng, 4, -3, 3);
      LaurentMatrix pk = project_k(l), pb = project_b(l);
      CHECK(coeff_distance(add(pk, pb), l) < 1e-13);
      CHECK(coeff_distance(star(pk), scale(pk, cxd(-1.0))) < 1e-13);
      CHECK(pb.min_power() >= 0);
      Eigen::MatrixXcd b0 = pb.coeff(0);
      for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(b0(i, i).imag()) < 1e-14);
        for (int j = i + 1; j < 4; ++j) CHECK(std::abs(b0(i, j)) < 1e-14);
      }
    }
  }
}

TEST_CASE("pairing") {
  LaurentMatrix x = LaurentMatrix::constant(cxd(0.0, 1.0) *
                                            Eigen::MatrixXcd::Identity(3, 3));
  CHECK(pairing(x, LaurentMatrix::identity(3)) == doctest::Approx(3.0));

  Eigen::MatrixXcd a(2, 2), b(2, 2);
  a << cxd(1, 1), cxd(0, 2), cxd(3, 0), cxd(1, -1);
  b << cxd(2, -1), cxd(1, 0), cxd(0, 1), cxd(2, 2);
  CHECK(pairing(LaurentMatrix::monomial(1, a), LaurentMatrix::monomial(1, b)) == 0.0);

  SUBCASE("bilinear and symmetric") {
    SplitMix64 rng(5);
    LaurentMatrix u = random_laurent(rng, 2, -1, 1), v = random_laurent(rng, 2, -1, 1),
                  w = random_laurent(rng, 2, -2, 2);
    CHECK(pairing(u, v) == doctest::Approx(pairing(v, u)).epsilon(1e-12));
    CHECK(pairing(add(u, v), w) ==
          doctest::Approx(pairing(u, w) + pairing(v, w)).epsilon(1e-12));
  }

  SUBCASE("the anti-fixed subalgebra is isotropic") {
    SplitMix64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
      LaurentMatrix l = random_laurent(rng, 3, -2, 2), m = random_laurent(rng, 3, -2, 2);
      CHECK(std::abs(pairing(project_k(l), project_k(m))) < 1e-12);
    }
  }

  SUBCASE("jsharp is skew for the pairing") {
    SplitMix64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
      LaurentMatrix x2 = random_laurent(rng, 3, -2, 2), y2 = random_laurent(rng, 3, -2, 2);
      CHECK(std::abs(pairing(jsharp(x2), y2) + pairing(x2, jsharp(y2))) < 1e-12);
    }
  }

  CHECK_THROWS_AS((void)pairing(LaurentMatrix::identity(2), LaurentMatrix::identity(4)),
                  DomainError);
}

TEST_CASE("weighted norm and the default weight") {
  WeightFunction w = default_weight();
  CHECK(weighted_norm(LaurentMatrix(3), w) == 0.0);
  CHECK(weighted_norm(LaurentMatrix::identity(2), w) ==
        doctest::Approx(std::sqrt(2.0) * w(0)));

  SUBCASE("triangle inequality") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
      LaurentMatrix a = random_laurent(rng, 2, -2, 2), b = random_laurent(rng, 2, -2, 2);
      CHECK(weighted_norm(add(a, b), w) <= weighted_norm(a, w) + weighted_norm(b, w) + 1e-12);
    }
  }

  SUBCASE("weight is symmetric, rapidly increasing, non-analytic type") {
    for (int n = 0; n <= 40; ++n) CHECK(w(n) == w(-n));
    // w(n)/n^s grows monotonically once n clears the crossover near 4 s^2
    for (double s : {0.5, 1.0, 2.0, 4.0}) {
      int n0 = static_cast<int>(6.0 * s * s) + 10;
      for (int n = n0; n < n0 + 10; ++n)
        CHECK(w(n + 1) / std::pow(n + 1.0, s) > w(n) / std::pow(static_cast<double>(n), s));
    }
    // |w(n)^{1/n} - 1| decreasing on a sampled range
    for (int n = 10; n < 40; ++n) {
      double a1 = std::abs(std::pow(w(n), 1.0 / n) - 1.0);
      double a2 = std::abs(std::pow(w(n + 1), 1.0 / (n + 1)) - 1.0);
      CHECK(a2 < a1);
    }
  }
}

TEST_CASE("eval is multiplicative on the circle") {
  SplitMix64 rng(37);
  LaurentMatrix a = random_laurent(rng, 3, -2, 1), b = random_laurent(rng, 3, -1, 2);
  LaurentMatrix ab = multiply(a, b);
  for (int k = 0; k < 8; ++k) {
    cxd h = std::polar(1.0, 2.0 * M_PI * k / 8.0 + 0.05);
    CHECK((eval(ab, h) - eval(a, h) * eval(b, h)).norm() < 1e-12);
  }
}

TEST_CASE("canonicalization drops only negligible coefficients") {
  LaurentMatrix l(2);
  l.set_coeff(0, Eigen::MatrixXcd::Identity(2, 2));
  l.set_coeff(3, 1e-16 * Eigen::MatrixXcd::Ones(2, 2));
  l.canonicalize();
  CHECK(l.has(0));
  CHECK(!l.has(3));
}
