#include <doctest.h>

#include "cmvflows/cmv.hpp"
#include "cmvflows/kernels.hpp"
#include "cmvflows/rng.hpp"

using namespace cmvflows;

namespace {

LaurentMatrix sample_loop(int p) {
  SplitMix64 rng(90);
  VerblunskyVector v(p, rng.alpha_vector(p, 0.6));
  return build_factors(v).assembled;
}

}  // namespace

TEST_CASE("serial and parallel kernel paths agree bitwise") {
  LaurentMatrix l = sample_loop(6);

  auto gs = kernels::eval_grid(l, 64, kernels::Exec::Serial);
  auto gp = kernels::eval_grid(l, 64, kernels::Exec::Parallel);
  REQUIRE(gs.size() == gp.size());
  for (std::size_t m = 0; m < gs.size(); ++m) CHECK((gs[m] - gp[m]).norm() == 0.0);

  std::vector<Eigen::MatrixXcd> herm(gs.size());
  for (std::size_t m = 0; m < gs.size(); ++m) herm[m] = gs[m] + gs[m].adjoint();
  auto es = kernels::herm_exp_grid(herm, kernels::Exec::Serial);
  auto ep = kernels::herm_exp_grid(herm, kernels::Exec::Parallel);
  for (std::size_t m = 0; m < es.size(); ++m) CHECK((es[m] - ep[m]).norm() == 0.0);

  LaurentMatrix fs = kernels::fourier_coeffs(gs, 4, kernels::Exec::Serial);
  LaurentMatrix fp = kernels::fourier_coeffs(gs, 4, kernels::Exec::Parallel);
  CHECK(coeff_distance(fs, fp) == 0.0);
}

TEST_CASE("fourier_coeffs inverts circle sampling of finite loops") {
  LaurentMatrix l = sample_loop(4);
  auto samples = kernels::eval_grid(l, 32);
  LaurentMatrix rec = kernels::fourier_coeffs(samples, 3);
  CHECK(coeff_distance(rec, l) < 1e-14);
}

TEST_CASE("herm_exp_grid: exp(0) = I and exp of a diagonal sample") {
  std::vector<Eigen::MatrixXcd> zeros{Eigen::MatrixXcd::Zero(3, 3)};
  auto e0 = kernels::herm_exp_grid(zeros);
  CHECK((e0[0] - Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-14);

  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -2.0;
  auto ed = kernels::herm_exp_grid({d});
  CHECK(std::abs(ed[0](0, 0) - std::exp(1.0)) < 1e-13);
  CHECK(std::abs(ed[0](1, 1) - std::exp(-2.0)) < 1e-13);
}

TEST_CASE("parallel_for covers the index range once") {
  std::vector<int> hits(257, 0);
  kernels::parallel_for(257, [&](int i) { hits[static_cast<std::size_t>(i)] += 1; });
  for (int h : hits) CHECK(h == 1);
}
