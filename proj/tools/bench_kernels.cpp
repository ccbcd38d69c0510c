// Times the serial reference path against the OpenMP path for the grid
// kernels, at sizes where the parallelism is visible.  The two paths are
// required to agree bitwise; this target reports the speedup.

#include <chrono>
#include <cstdio>

#include "cmvflows/kernels.hpp"
#include "cmvflows/laurent.hpp"
#include "cmvflows/rng.hpp"

using namespace cmvflows;

namespace {

double seconds(const std::function<void()>& fn, int reps) {
  // one warm-up, then best of reps
  fn();
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt < best) best = dt;
  }
  return best;
}

LaurentMatrix random_loop(int p, int support) {
  SplitMix64 rng(5150);
  LaurentMatrix l(p);
  for (int j = -support; j <= support; ++j) {
    Eigen::MatrixXcd m(p, p);
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c) m(r, c) = cxd(rng.uniform() - 0.5, rng.uniform() - 0.5);
    l.set_coeff(j, m);
  }
  return l;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-18s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx\n", name,
              1e3 * serial, 1e3 * parallel, serial / parallel);
}

}  // namespace

int main() {
  const int p = 24;
  const int m_count = 4096;
  const int reps = 5;
  LaurentMatrix l = random_loop(p, 2);

#ifdef _OPENMP
  std::printf("OpenMP enabled");
  if (kernels::thread_cap() > 0) std::printf(" (capped at %d threads)", kernels::thread_cap());
  std::printf("\n");
#else
  std::printf("built without OpenMP; both columns run the serial path\n");
#endif
  std::printf("loop size p=%d, grid %d points\n\n", p, m_count);

  double s_eval = seconds([&] { kernels::eval_grid(l, m_count, kernels::Exec::Serial); }, reps);
  double p_eval = seconds([&] { kernels::eval_grid(l, m_count, kernels::Exec::Parallel); }, reps);
  report("eval_grid", s_eval, p_eval);

  auto samples = kernels::eval_grid(l, m_count);
  std::vector<Eigen::MatrixXcd> herm(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) herm[i] = samples[i] + samples[i].adjoint();

  double s_exp = seconds([&] { kernels::herm_exp_grid(herm, kernels::Exec::Serial); }, reps);
  double p_exp = seconds([&] { kernels::herm_exp_grid(herm, kernels::Exec::Parallel); }, reps);
  report("herm_exp_grid", s_exp, p_exp);

  double s_fc =
      seconds([&] { kernels::fourier_coeffs(samples, 64, kernels::Exec::Serial); }, reps);
  double p_fc =
      seconds([&] { kernels::fourier_coeffs(samples, 64, kernels::Exec::Parallel); }, reps);
  report("fourier_coeffs", s_fc, p_fc);

  // agreement check (bitwise)
  auto a = kernels::herm_exp_grid(herm, kernels::Exec::Serial);
  auto b = kernels::herm_exp_grid(herm, kernels::Exec::Parallel);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, (a[i] - b[i]).norm());
  std::printf("\nserial/parallel max deviation: %.3g\n", diff);
  return diff == 0.0 ? 0 : 1;
}
