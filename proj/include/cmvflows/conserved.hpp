#pragma once

#include <map>
#include <utility>
#include <vector>

#include "cmvflows/cmv.hpp"

namespace cmvflows {

// P, I_j (j = -p/2..p/2) and K_n (n = 1..p/2): the full conserved family.
struct ConservedSet {
  int p = 0;
  double P = 0.0;
  std::vector<cxd> I;  // index j + p/2
  std::vector<cxd> K;  // index n - 1

  cxd I_at(int j) const { return I[static_cast<std::size_t>(j + p / 2)]; }
  cxd K_at(int n) const { return K[static_cast<std::size_t>(n - 1)]; }
};

// Bivariate coefficient table of det(zI - E(h)); h-support is {-1,0,+1}.
struct CharPoly {
  int p = 0;
  std::map<std::pair<int, int>, cxd> c;  // (z-power, h-power) -> coefficient
  double max_out_of_band = 0.0;          // sampled |h^2| coefficient residual

  cxd coeff(int zpow, int hpow) const {
    auto it = c.find({zpow, hpow});
    return it == c.end() ? cxd(0.0) : it->second;
  }
  cxd eval(const cxd& z, const cxd& h) const;
};

Eigen::Matrix2cd transfer_matrix(const VerblunskyVector& v, const cxd& z);
cxd discriminant(const VerblunskyVector& v, const cxd& z);

CharPoly char_poly(const VerblunskyVector& v);
// same table for an arbitrary loop with h-support {-1,0,+1}
CharPoly char_poly_loop(const LaurentMatrix& loop);

ConservedSet invariants(const VerblunskyVector& v);

// max drift of any conserved quantity between two sets
double conserved_drift(const ConservedSet& from, const ConservedSet& to);

}  // namespace cmvflows
