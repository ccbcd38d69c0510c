#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <map>

namespace cmvflows {

using cxd = std::complex<double>;

// Coefficients with Frobenius norm below this are dropped when a value is
// canonicalized, keeping supports finite under repeated products.
inline constexpr double kCoeffEps = 1e-15;

// Finitely supported map from integer powers of the loop parameter h to
// p x p complex matrices.  Values are immutable once built by the library;
// all operations below are pure functions.
class LaurentMatrix {
 public:
  LaurentMatrix() = default;
  explicit LaurentMatrix(int p) : p_(p) {}

  int size() const { return p_; }
  const std::map<int, Eigen::MatrixXcd>& coeffs() const { return c_; }

  bool has(int power) const { return c_.count(power) != 0; }
  Eigen::MatrixXcd coeff(int power) const;

  void set_coeff(int power, Eigen::MatrixXcd m);
  void add_to(int power, const Eigen::MatrixXcd& m);

  int min_power() const { return c_.empty() ? 0 : c_.begin()->first; }
  int max_power() const { return c_.empty() ? 0 : c_.rbegin()->first; }

  // drops near-zero coefficients
  LaurentMatrix& canonicalize(double eps = kCoeffEps);

  static LaurentMatrix constant(const Eigen::MatrixXcd& m);
  static LaurentMatrix monomial(int power, const Eigen::MatrixXcd& m);
  static LaurentMatrix identity(int p);

 private:
  int p_ = 0;
  std::map<int, Eigen::MatrixXcd> c_;
};

// Symmetric, rapidly increasing weight of non-analytic type; only used for
// diagnostics, never for algorithm control.
struct WeightFunction {
  std::function<double(int)> rule;
  double operator()(int n) const { return rule(n); }
};

WeightFunction default_weight();

Eigen::MatrixXcd eval(const LaurentMatrix& l, const cxd& h);
LaurentMatrix multiply(const LaurentMatrix& a, const LaurentMatrix& b);
LaurentMatrix add(const LaurentMatrix& a, const LaurentMatrix& b);
LaurentMatrix sub(const LaurentMatrix& a, const LaurentMatrix& b);
LaurentMatrix scale(const LaurentMatrix& a, const cxd& c);

// the involution L(h) -> L(conj(h)^-1)^dagger, i.e. coefficientwise
// star(L)_j = (L_{-j})^dagger
LaurentMatrix star(const LaurentMatrix& l);

struct TriProjection {
  LaurentMatrix plus, minus, zero;
};
TriProjection project_pm0(const LaurentMatrix& l);

// Splitting into the unitary-type and triangular-type subalgebras:
//   project_k(L) + project_b(L) = L,
//   star(project_k(L)) = -project_k(L),
//   project_b(L) has no negative powers and a lower-triangular power-0
//   coefficient with real diagonal.
LaurentMatrix project_k(const LaurentMatrix& l);
LaurentMatrix project_b(const LaurentMatrix& l);

// project_k - project_b; skew with respect to the pairing
LaurentMatrix jsharp(const LaurentMatrix& l);

// Im of the h^0 coefficient of tr(X(h) Y(h)); the exact residue of the
// contour integral over the unit circle.
double pairing(const LaurentMatrix& x, const LaurentMatrix& y);

double weighted_norm(const LaurentMatrix& x, const WeightFunction& w);

// max over coefficients of the Frobenius norm of the difference
double coeff_distance(const LaurentMatrix& a, const LaurentMatrix& b);

// coefficientwise conjugate transpose, power kept (NOT the star involution)
LaurentMatrix dagger_coeffs(const LaurentMatrix& l);
// h -> h^-1
LaurentMatrix reverse_powers(const LaurentMatrix& l);

}  // namespace cmvflows
