#pragma once

#include <functional>
#include <vector>

#include "cmvflows/laurent.hpp"

namespace cmvflows::kernels {

// Data-parallel inner loops used by the factorization flows and the batch
// checks.  Every kernel has a serial reference path and an OpenMP path that
// must agree bitwise (parallelism is over independent items; per-item
// arithmetic is ordered identically).  CMVFLOWS_THREADS caps the pool;
// setting it to 1 forces the serial path everywhere.
enum class Exec { Serial, Parallel };

int thread_cap();        // from CMVFLOWS_THREADS, 0 = library default
Exec default_exec();

void parallel_for(int n, const std::function<void(int)>& body, Exec ex);
inline void parallel_for(int n, const std::function<void(int)>& body) {
  parallel_for(n, body, default_exec());
}

// uniform grid h_m = exp(2 pi i m / M)
std::vector<cxd> circle_grid(int m_count);

// loop evaluated at every grid point
std::vector<Eigen::MatrixXcd> eval_grid(const LaurentMatrix& l, int m_count,
                                        Exec ex = default_exec());

// pointwise exp of Hermitian samples (inputs are Hermitized first)
std::vector<Eigen::MatrixXcd> herm_exp_grid(const std::vector<Eigen::MatrixXcd>& samples,
                                            Exec ex = default_exec());

// trapezoid Fourier coefficients c_j, |j| <= jmax, from uniform samples
LaurentMatrix fourier_coeffs(const std::vector<Eigen::MatrixXcd>& samples, int jmax,
                             Exec ex = default_exec(), double trim = kCoeffEps);

}  // namespace cmvflows::kernels
