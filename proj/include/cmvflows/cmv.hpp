#pragma once

#include <optional>
#include <vector>

#include "cmvflows/laurent.hpp"

namespace cmvflows {

// The dynamical state: p Verblunsky coefficients in the open unit disk,
// p even.  Indexing is periodic, alpha_{j+p} = alpha_j.
class VerblunskyVector {
 public:
  VerblunskyVector() = default;
  VerblunskyVector(int p, std::vector<cxd> alpha);

  int p() const { return p_; }
  const std::vector<cxd>& alpha() const { return a_; }

  // periodic access, any integer index
  cxd at(int j) const;
  double rho(int j) const;
  double rho_product() const;  // P

 private:
  int p_ = 0;
  std::vector<cxd> a_;
};

// Floquet CMV matrix together with its two factors.
struct FloquetCMV {
  VerblunskyVector alpha;
  Eigen::MatrixXcd ge;      // block diagonal of 2x2 theta blocks
  LaurentMatrix go;         // support {-1, 0, +1}
  LaurentMatrix assembled;  // ge * go
};

// [[conj a, rho],[rho, -a]] with rho = sqrt(1-|a|^2); unitary, det -1
Eigen::Matrix2cd theta_block(const cxd& a);

FloquetCMV build_factors(const VerblunskyVector& v);

// the Floquet CMV matrix with all alpha_j = 0
FloquetCMV coxeter_element(int p);

// If l is of Floquet CMV shape (entrywise residual below tol after
// extraction and rebuild), returns the Verblunsky data; otherwise nullopt.
std::optional<VerblunskyVector> recognize_floquet(const LaurentMatrix& l, double tol);

// Coefficients of the n-th power of the assembled loop,
//   E(h)^n = A0 + h A1 + h^-1 Am1, valid for 1 <= n <= p/2.
struct FloquetPower {
  Eigen::MatrixXcd a0, a1, am1;
  double out_of_band;  // largest entry found at |power| >= 2
};
FloquetPower floquet_power(const VerblunskyVector& v, int n);

}  // namespace cmvflows
