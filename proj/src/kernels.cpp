#include "cmvflows/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cmvflows::kernels {

int thread_cap() {
  static const int cap = [] {
    const char* env = std::getenv("CMVFLOWS_THREADS");
    if (!env) return 0;
    int v = std::atoi(env);
    return v > 0 ? v : 0;
  }();
  return cap;
}

Exec default_exec() {
#ifdef _OPENMP
  return thread_cap() == 1 ? Exec::Serial : Exec::Parallel;
#else
  return Exec::Serial;
#endif
}

void parallel_for(int n, const std::function<void(int)>& body, Exec ex) {
#ifdef _OPENMP
  if (ex == Exec::Parallel && n > 1) {
    int cap = thread_cap();
    if (cap > 0) {
#pragma omp parallel for schedule(static) num_threads(cap)
      for (int i = 0; i < n; ++i) body(i);
    } else {
#pragma omp parallel for schedule(static)
      for (int i = 0; i < n; ++i) body(i);
    }
    return;
  }
#else
  (void)ex;
#endif
  for (int i = 0; i < n; ++i) body(i);
}

std::vector<cxd> circle_grid(int m_count) {
  const double pi = 3.14159265358979323846;
  std::vector<cxd> h(static_cast<std::size_t>(m_count));
  for (int m = 0; m < m_count; ++m)
    h[static_cast<std::size_t>(m)] = std::polar(1.0, 2.0 * pi * m / m_count);
  return h;
}

std::vector<Eigen::MatrixXcd> eval_grid(const LaurentMatrix& l, int m_count, Exec ex) {
  std::vector<cxd> h = circle_grid(m_count);
  std::vector<Eigen::MatrixXcd> out(static_cast<std::size_t>(m_count));
  parallel_for(m_count, [&](int m) { out[static_cast<std::size_t>(m)] = eval(l, h[static_cast<std::size_t>(m)]); }, ex);
  return out;
}

std::vector<Eigen::MatrixXcd> herm_exp_grid(const std::vector<Eigen::MatrixXcd>& samples, Exec ex) {
  std::vector<Eigen::MatrixXcd> out(samples.size());
  parallel_for(static_cast<int>(samples.size()), [&](int m) {
    const Eigen::MatrixXcd& s = samples[static_cast<std::size_t>(m)];
    Eigen::MatrixXcd herm = 0.5 * (s + s.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
    Eigen::VectorXd lam = es.eigenvalues();
    Eigen::VectorXcd expo(lam.size());
    for (int i = 0; i < lam.size(); ++i) expo(i) = std::exp(lam(i));
    out[static_cast<std::size_t>(m)] =
        es.eigenvectors() * expo.asDiagonal() * es.eigenvectors().adjoint();
  }, ex);
  return out;
}

LaurentMatrix fourier_coeffs(const std::vector<Eigen::MatrixXcd>& samples, int jmax, Exec ex,
                             double trim) {
  int m_count = static_cast<int>(samples.size());
  int p = static_cast<int>(samples.front().rows());
  std::vector<cxd> h = circle_grid(m_count);
  int n_coeff = 2 * jmax + 1;
  std::vector<Eigen::MatrixXcd> coeff(static_cast<std::size_t>(n_coeff));
  parallel_for(n_coeff, [&](int idx) {
    int j = idx - jmax;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(p, p);
    for (int m = 0; m < m_count; ++m)
      acc += samples[static_cast<std::size_t>(m)] * std::pow(h[static_cast<std::size_t>(m)], -j);
    coeff[static_cast<std::size_t>(idx)] = acc / static_cast<double>(m_count);
  }, ex);
  LaurentMatrix out(p);
  for (int idx = 0; idx < n_coeff; ++idx)
    out.set_coeff(idx - jmax, coeff[static_cast<std::size_t>(idx)]);
  out.canonicalize(trim);
  return out;
}

}  // namespace cmvflows::kernels
