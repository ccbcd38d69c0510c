#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cmvflows/cmv.hpp"
#include "cmvflows/conserved.hpp"

namespace cmvflows {

// Finitely supported map z-power -> coefficient; the home of the recurrence
// bases and the scalar polynomials built from them.
class LaurentScalar {
 public:
  LaurentScalar() = default;

  cxd coeff(int power) const;
  void set_coeff(int power, const cxd& c);
  void add_to(int power, const cxd& c);
  const std::map<int, cxd>& coeffs() const { return c_; }

  int min_power() const { return c_.empty() ? 0 : c_.begin()->first; }
  int max_power() const { return c_.empty() ? 0 : c_.rbegin()->first; }
  bool zero() const { return c_.empty(); }

  cxd eval(const cxd& z) const;
  LaurentScalar& canonicalize(double eps = kCoeffEps);

  static LaurentScalar constant(const cxd& c);

 private:
  std::map<int, cxd> c_;
};

LaurentScalar operator+(const LaurentScalar& a, const LaurentScalar& b);
LaurentScalar operator-(const LaurentScalar& a, const LaurentScalar& b);
LaurentScalar operator*(const LaurentScalar& a, const LaurentScalar& b);
LaurentScalar operator*(const cxd& c, const LaurentScalar& a);
// multiply by z^k
LaurentScalar shifted(const LaurentScalar& a, int k);

struct BlochBasis {
  // index j+1 holds entry j, j = -1 .. n_max
  std::vector<LaurentScalar> phi, psi;
  const LaurentScalar& phi_at(int j) const { return phi[static_cast<std::size_t>(j + 1)]; }
  const LaurentScalar& psi_at(int j) const { return psi[static_cast<std::size_t>(j + 1)]; }
};

// Solutions of the three-term recurrences with initial data
// phi_{-1}=1, phi_0=0 and psi_{-1}=0, psi_0=1.
BlochBasis bloch_basis(const VerblunskyVector& v, int n_max);

// Solution of the recurrence for the index-shifted state, u_{-1}=0, u_0=1.
std::vector<LaurentScalar> shifted_basis(const VerblunskyVector& v, int shift, int n_max);

// [[phi_{p-1}, psi_{p-1}],[phi_p, psi_p]](z); det = 1, trace = discriminant
Eigen::Matrix2cd monodromy(const VerblunskyVector& v, const cxd& z);

// Wronskian rho_j (phi_j psi_{j+1} - phi_{j+1} psi_j) as a Laurent scalar
LaurentScalar wronskian(const BlochBasis& basis, const VerblunskyVector& v, int j);

struct BranchPoints {
  std::vector<cxd> lambda;  // 2p roots
  bool generic;             // min pairwise distance > 1e-6
};
BranchPoints branch_points(const VerblunskyVector& v);

struct SpectralCurveData {
  std::vector<cxd> branch;                 // 2p branch points
  std::vector<cxd> dirichlet_z;            // p-1 Dirichlet eigenvalues
  std::vector<std::pair<cxd, cxd>> divisor;  // (h_k, z_k), h_k = phi_{p-1}(z_k)
  int genus = 0;
  bool generic = false;
  bool dirichlet_collision = false;  // some z_k closer than 1e-6
};

// Dirichlet spectrum by polynomial roots, cross-validated against the
// reduced generalized eigenproblem; requires every alpha_j away from 0.
SpectralCurveData dirichlet_data(const VerblunskyVector& v);

// full curve record (branch points + Dirichlet divisor)
SpectralCurveData spectral_curve(const VerblunskyVector& v);

// The two Floquet multipliers at z, labeled so that h_plus is the branch
// that grows like z^{p/2}/P for large |z| (equivalently the root of larger
// modulus; the two moduli coincide only on the spectrum, where this refuses).
std::pair<cxd, cxd> h_branches(const VerblunskyVector& v, const cxd& z);

// Normalized Bloch eigenvector at an on-curve point (h, z): f_{p-1} = 1 and
// E(h) f = z f.
std::vector<cxd> bloch_vector(const VerblunskyVector& v, const cxd& h, const cxd& z);

// Regression record for the growth orders of f_j at the four points over
// z = infinity and z = 0 on both sheets.
struct AsymptoticOrders {
  struct Entry {
    int j;
    std::string corner;  // "P+", "P-", "Q+", "Q-"
    double slope;
    int expected_order;
    cxd constant;
    cxd expected_constant;
    double constant_rel_err;
  };
  std::vector<Entry> entries;
  double max_slope_err = 0.0;
  double max_constant_rel_err = 0.0;
};
AsymptoticOrders asymptotic_orders(const VerblunskyVector& v);

// roots of a polynomial given by Laurent-scalar coefficients, via a balanced
// companion matrix
std::vector<cxd> polynomial_roots(const std::vector<cxd>& coeffs_ascending);

}  // namespace cmvflows
