#include <doctest.h>

#include <cmath>

#include "cmvflows/errors.hpp"
#include "cmvflows/cmv.hpp"
#include "cmvflows/rng.hpp"

using namespace cmvflows;

TEST_CASE("theta blocks") {
  Eigen::Matrix2cd t0 = theta_block(cxd(0.0));
  CHECK(std::abs(t0(0, 0)) == 0.0);
  CHECK(std::abs(t0(0, 1) - cxd(1.0)) == 0.0);
  CHECK(std::abs(t0(1, 0) - cxd(1.0)) == 0.0);
  CHECK(std::abs(t0(1, 1)) == 0.0);

  Eigen::Matrix2cd t1 = theta_block(cxd(0.6));
  CHECK(std::abs(t1(0, 0) - cxd(0.6)) < 1e-15);
  CHECK(std::abs(t1(0, 1) - cxd(0.8)) < 1e-15);
  CHECK(std::abs(t1(1, 1) + cxd(0.6)) < 1e-15);

  Eigen::Matrix2cd t2 = theta_block(cxd(0.0, 0.3));
  double r = std::sqrt(0.91);
  CHECK(std::abs(t2(0, 0) - cxd(0.0, -0.3)) < 1e-15);
  CHECK(std::abs(t2(0, 1) - cxd(r)) < 1e-15);
  CHECK(std::abs(t2(1, 0) - cxd(r)) < 1e-15);
  CHECK(std::abs(t2(1, 1) - cxd(0.0, -0.3)) < 1e-15);

  SUBCASE("unitary with determinant -1") {
    SplitMix64 rng(2);
    for (int k = 0; k < 20; ++k) {
      Eigen::Matrix2cd t = theta_block(rng.disk(0.95));
      CHECK((t * t.adjoint() - Eigen::Matrix2cd::Identity()).norm() < 1e-14);
      CHECK(std::abs(t.determinant() + cxd(1.0)) < 1e-15);
    }
  }

  CHECK_THROWS_AS((void)theta_block(cxd(1.0)), DomainError);
  CHECK_THROWS_AS((void)theta_block(cxd(0.8, 0.7)), DomainError);
}

TEST_CASE("verblunsky vector validation and periodic indexing") {
  CHECK_THROWS_AS(VerblunskyVector(3, {cxd(0), cxd(0), cxd(0)}), DomainError);
  CHECK_THROWS_AS(VerblunskyVector(2, {cxd(0)}), DomainError);
  CHECK_THROWS_AS(VerblunskyVector(2, {cxd(1.0), cxd(0)}), DomainError);

  VerblunskyVector v(4, {cxd(0.1), cxd(0.2), cxd(0.3), cxd(0.4)});
  CHECK(v.at(-1) == v.at(3));
  CHECK(v.at(4) == v.at(0));
  CHECK(v.at(7) == v.at(3));
  CHECK(v.rho_product() ==
        doctest::Approx(v.rho(0) * v.rho(1) * v.rho(2) * v.rho(3)));
}

TEST_CASE("build_factors structure") {
  SUBCASE("free case p=2: E = diag(h^-1, h)") {
    FloquetCMV f = coxeter_element(2);
    CHECK(std::abs(f.assembled.coeff(-1)(0, 0) - cxd(1.0)) < 1e-15);
    CHECK(std::abs(f.assembled.coeff(1)(1, 1) - cxd(1.0)) < 1e-15);
    CHECK(f.assembled.coeff(0).norm() < 1e-15);
  }

  SUBCASE("hand product for p=2") {
    cxd a0(0.5, 0.0), a1(0.0, 0.3);
    VerblunskyVector v(2, {a0, a1});
    double r0 = v.rho(0), r1 = v.rho(1);
    FloquetCMV f = build_factors(v);
    // [[-conj(a0) a1 + r0 r1 h^-1, conj(a0) r1 h + r0 conj(a1)],
    //  [-r0 a1 - a0 r1 h^-1,       r0 r1 h - a0 conj(a1)]]
    CHECK(std::abs(f.assembled.coeff(0)(0, 0) + std::conj(a0) * a1) < 1e-15);
    CHECK(std::abs(f.assembled.coeff(-1)(0, 0) - r0 * r1) < 1e-15);
    CHECK(std::abs(f.assembled.coeff(1)(0, 1) - std::conj(a0) * r1) < 1e-15);
    CHECK(std::abs(f.assembled.coeff(0)(0, 1) - r0 * std::conj(a1)) < 1e-15);
    CHECK(std::abs(f.assembled.coeff(0)(1, 0) + r0 * a1) < 1e-15);
    CHECK(std::abs(f.assembled.coeff(-1)(1, 0) + a0 * r1) < 1e-15);
    CHECK(std::abs(f.assembled.coeff(1)(1, 1) - r0 * r1) < 1e-15);
    CHECK(std::abs(f.assembled.coeff(0)(1, 1) + a0 * std::conj(a1)) < 1e-15);
  }

  SUBCASE("odd factor carries exactly two h-dependent entries") {
    SplitMix64 rng(4);
    VerblunskyVector v(6, rng.alpha_vector(6, 0.6));
    FloquetCMV f = build_factors(v);
    Eigen::MatrixXcd cp = f.go.coeff(1), cm = f.go.coeff(-1);
    CHECK(std::abs(cp(0, 5) - v.rho(5)) < 1e-15);
    CHECK(std::abs(cm(5, 0) - v.rho(5)) < 1e-15);
    cp(0, 5) = 0.0;
    cm(5, 0) = 0.0;
    CHECK(cp.norm() == 0.0);
    CHECK(cm.norm() == 0.0);
    CHECK(std::abs(f.go.coeff(0)(0, 0) + v.at(5)) < 1e-15);
    CHECK(std::abs(f.go.coeff(0)(5, 5) - std::conj(v.at(5))) < 1e-15);
  }

  SUBCASE("assembled support and unitarity") {
    SplitMix64 rng(8);
    for (int p : {2, 4, 6, 8}) {
      VerblunskyVector v(p, rng.alpha_vector(p, 0.6));
      FloquetCMV f = build_factors(v);
      CHECK(f.assembled.min_power() >= -1);
      CHECK(f.assembled.max_power() <= 1);
      CHECK(coeff_distance(multiply(f.assembled, star(f.assembled)),
                           LaurentMatrix::identity(p)) < 1e-12);
    }
  }
}

TEST_CASE("coxeter element") {
  SUBCASE("p=2 pattern") {
    FloquetCMV x = coxeter_element(2);
    Eigen::MatrixXcd wstar(2, 2);
    wstar << 0, 1, 1, 0;
    CHECK((x.ge - wstar).norm() == 0.0);
    CHECK(std::abs(x.go.coeff(1)(0, 1) - cxd(1.0)) == 0.0);
    CHECK(std::abs(x.go.coeff(-1)(1, 0) - cxd(1.0)) == 0.0);
  }

  SUBCASE("p=4 pattern: w* center block, h at (0,3), h^-1 at (3,0)") {
    FloquetCMV x = coxeter_element(4);
    Eigen::MatrixXcd c0 = x.go.coeff(0);
    CHECK(std::abs(c0(1, 2) - cxd(1.0)) == 0.0);
    CHECK(std::abs(c0(2, 1) - cxd(1.0)) == 0.0);
    CHECK(std::abs(c0(1, 1)) == 0.0);
    CHECK(std::abs(c0(0, 0)) == 0.0);
    CHECK(std::abs(x.go.coeff(1)(0, 3) - cxd(1.0)) == 0.0);
    CHECK(std::abs(x.go.coeff(-1)(3, 0) - cxd(1.0)) == 0.0);
  }

  SUBCASE("agrees with build_factors(0) at circle points") {
    FloquetCMV x = coxeter_element(4);
    VerblunskyVector zero(4, std::vector<cxd>(4, cxd(0.0)));
    FloquetCMV built = build_factors(zero);
    for (int k = 0; k < 8; ++k) {
      cxd h = std::polar(1.0, 2.0 * M_PI * k / 8.0);
      CHECK((eval(x.assembled, h) - eval(built.assembled, h)).norm() < 1e-15);
    }
  }

  SUBCASE("unitary for every p") {
    for (int p : {2, 4, 6, 8}) {
      FloquetCMV x = coxeter_element(p);
      CHECK(coeff_distance(multiply(x.assembled, star(x.assembled)),
                           LaurentMatrix::identity(p)) < 1e-14);
    }
  }

  CHECK_THROWS_AS((void)coxeter_element(3), DomainError);
  CHECK_THROWS_AS((void)coxeter_element(0), DomainError);
}

TEST_CASE("recognize_floquet") {
  SUBCASE("round trip over random states") {
    SplitMix64 rng(40);
    for (int p : {2, 4, 6, 8}) {
      for (int trial = 0; trial < 25; ++trial) {
        VerblunskyVector v(p, rng.alpha_vector(p, 0.85));
        auto rec = recognize_floquet(build_factors(v).assembled, 1e-10);
        REQUIRE(rec.has_value());
        for (int j = 0; j < p; ++j)
          CHECK(std::abs(rec->alpha()[static_cast<std::size_t>(j)] -
                         v.alpha()[static_cast<std::size_t>(j)]) < 1e-10);
      }
    }
  }

  SUBCASE("identity loop is not of Floquet CMV shape") {
    CHECK(!recognize_floquet(LaurentMatrix::identity(4), 1e-10).has_value());
  }

  SUBCASE("perturbed loop is rejected at tight tolerance") {
    SplitMix64 rng(41);
    VerblunskyVector v(4, rng.alpha_vector(4, 0.6));
    LaurentMatrix e = build_factors(v).assembled;
    Eigen::MatrixXcd c = e.coeff(0);
    c(2, 2) += cxd(1e-6, 0.0);
    e.set_coeff(0, c);
    CHECK(!recognize_floquet(e, 1e-8).has_value());
    CHECK(recognize_floquet(e, 1e-4).has_value());
  }
}

TEST_CASE("floquet_power") {
  SUBCASE("coxeter p=4, n=1: single h entries at (1,3) and (2,0)") {
    VerblunskyVector zero(4, std::vector<cxd>(4, cxd(0.0)));
    FloquetPower pw = floquet_power(zero, 1);
    CHECK(std::abs(pw.a1(1, 3) - cxd(1.0)) < 1e-15);
    CHECK(std::abs(pw.am1(2, 0) - cxd(1.0)) < 1e-15);
    Eigen::MatrixXcd a1 = pw.a1, am1 = pw.am1;
    a1(1, 3) = 0.0;
    am1(2, 0) = 0.0;
    CHECK(a1.norm() == 0.0);
    CHECK(am1.norm() == 0.0);
  }

  SUBCASE("strict triangularity for n <= p/2-1") {
    SplitMix64 rng(50);
    for (int trial = 0; trial < 5; ++trial) {
      VerblunskyVector v(6, rng.alpha_vector(6, 0.5));
      for (int n = 1; n <= 2; ++n) {
        FloquetPower pw = floquet_power(v, n);
        CHECK(pw.out_of_band < 1e-14);
        for (int i = 0; i < 6; ++i)
          for (int j = 0; j < 6; ++j) {
            if (i >= j) CHECK(std::abs(pw.a1(i, j)) < 1e-13);
            if (i <= j) CHECK(std::abs(pw.am1(i, j)) < 1e-13);
          }
      }
    }
  }

  SUBCASE("band structure of the h-constant part") {
    SplitMix64 rng(51);
    VerblunskyVector v(8, rng.alpha_vector(8, 0.5));
    for (int n = 1; n <= 3; ++n) {
      FloquetPower pw = floquet_power(v, n);
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
          if (std::abs(i - j) >= 2 * n + 1) CHECK(std::abs(pw.a0(i, j)) < 1e-13);
    }
  }

  SUBCASE("n = p/2: alternating diagonals carry the rho product") {
    SplitMix64 rng(52);
    VerblunskyVector v(6, rng.alpha_vector(6, 0.55));
    double prod = v.rho_product();
    FloquetPower pw = floquet_power(v, 3);
    for (int k = 0; k < 6; ++k) {
      if (k % 2 == 0) {
        CHECK(std::abs(pw.am1(k, k) - prod) < 1e-13);
        CHECK(std::abs(pw.a1(k, k)) < 1e-13);
      } else {
        CHECK(std::abs(pw.a1(k, k) - prod) < 1e-13);
        CHECK(std::abs(pw.am1(k, k)) < 1e-13);
      }
    }
    // trace identity: tr(E(h)^{p/2}) - tr(A0) = (p/2)(h + h^-1) P
    CHECK(std::abs(pw.a1.trace() - 3.0 * prod) < 1e-12);
    CHECK(std::abs(pw.am1.trace() - 3.0 * prod) < 1e-12);

    VerblunskyVector v4(4, rng.alpha_vector(4, 0.55));
    FloquetPower pw4 = floquet_power(v4, 2);
    CHECK(std::abs(pw4.a1.trace() - 2.0 * v4.rho_product()) < 1e-12);
    CHECK(std::abs(pw4.am1.trace() - 2.0 * v4.rho_product()) < 1e-12);
  }

  SUBCASE("power matches pointwise products of eval") {
    SplitMix64 rng(53);
    VerblunskyVector v(6, rng.alpha_vector(6, 0.5));
    LaurentMatrix e = build_factors(v).assembled;
    FloquetPower pw = floquet_power(v, 2);
    for (int k = 0; k < 5; ++k) {
      cxd h = std::polar(1.0, 2.0 * M_PI * k / 5.0 + 0.2);
      Eigen::MatrixXcd direct = eval(e, h) * eval(e, h);
      Eigen::MatrixXcd from_parts = pw.a0 + h * pw.a1 + pw.am1 / h;
      CHECK((direct - from_parts).norm() < 1e-12);
    }
  }

  CHECK_THROWS_AS((void)floquet_power(VerblunskyVector(4, std::vector<cxd>(4, cxd(0.0))), 3),
                  DomainError);
  CHECK_THROWS_AS((void)floquet_power(VerblunskyVector(4, std::vector<cxd>(4, cxd(0.0))), 0),
                  DomainError);
}
