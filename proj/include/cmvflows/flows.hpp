#pragma once

#include <string>
#include <vector>

#include "cmvflows/conserved.hpp"
#include "cmvflows/poisson.hpp"

namespace cmvflows {

// Which commuting Hamiltonian drives the evolution.  LogP selects the
// rho-product generator (closed-form solution available); AL is the lattice
// equation generator Re K_1 - 2 log P.
enum class HamiltonianKind { ReK, ImK, ReI, ImI, LogP, AL };

struct HamiltonianSpec {
  HamiltonianKind kind = HamiltonianKind::ReK;
  int n = 1;  // K: 1..p/2; I: 0..p/2-1; ignored for LogP / AL
};

std::string to_string(const HamiltonianSpec& spec);
HamiltonianKind kind_from_string(const std::string& s);

// The observable that generates the flow of `spec` under the AL bracket.
Observable spec_observable(const HamiltonianSpec& spec, int p);

struct ConservedDrift {
  double dP = 0.0;
  double max_dI = 0.0;
  double max_dK = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<VerblunskyVector> states;
  std::vector<ConservedDrift> drift;  // deviation from the t=0 set
  bool aborted = false;
  std::string note;
};

// Gradient of the central function attached to `spec` evaluated at the
// assembled loop; kinds ReI / ImI / LogP only.
LaurentMatrix grad_central(const VerblunskyVector& v, const HamiltonianSpec& spec);

// Same, but evaluated at an arbitrary unitary {-1,0,1}-supported loop.
LaurentMatrix grad_central_loop(const LaurentMatrix& loop, const HamiltonianSpec& spec);

// Commutator form of the evolution for the trace Hamiltonians:
//   [E(h), project_k(i E(h)^n)] for Re K_n, [E(h), project_k(E(h)^n)] for Im K_n.
LaurentMatrix lax_rhs(const VerblunskyVector& v, const HamiltonianSpec& spec);

// Classic fixed-step RK4 on the Hamiltonian field, conserved drift recorded
// per step.  States must stay clear of the polydisk boundary.
Trajectory integrate_ode(const VerblunskyVector& v0, const HamiltonianSpec& spec, double t_end,
                         double dt);
Trajectory integrate_ode_observable(const VerblunskyVector& v0, const Observable& h, double t_end,
                                    double dt);

// closed form for the LogP flow: alpha_j(t) = alpha_j(0) exp(i t P(0))
VerblunskyVector p_flow_exact(const VerblunskyVector& v0, double t);

// Factor a Hermitian positive definite loop as b * star(b) with b supported
// on 0..N and b(0) lower triangular with positive diagonal (Bauer method on
// the block Toeplitz matrix of Fourier coefficients).
LaurentMatrix spectral_factorize(const LaurentMatrix& phi, int trunc, double tol);

// g = k * b with k unitary-valued on the circle and b analytic in the disk,
// b(0) lower triangular with positive diagonal.
struct IwasawaFactors {
  LaurentMatrix k, b;
};
IwasawaFactors iwasawa_factorize(const LaurentMatrix& g, int trunc, double tol);

// Evolve by the loop-group factorization route (kinds ReI / ImI): factor the
// exponential of the central gradient, transport the two theta factors, and
// read the state back off the assembled loop.
VerblunskyVector flow_by_factorization(const VerblunskyVector& v0, const HamiltonianSpec& spec,
                                       double t, int trunc, double tol);

// Right dressing action, computed through both factorization expressions
// and cross-checked:
//   k(g)^-1 x k(x^-1 g x)  ==  b-route expression.
LaurentMatrix dressing_action(const LaurentMatrix& g, const LaurentMatrix& x, int trunc,
                              double tol);

// max over the eigenvalue multiset of the one-sided Hausdorff match
double eigenvalue_multiset_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace cmvflows
