#include "cmvflows/laurent.hpp"

#include <cmath>

#include "cmvflows/errors.hpp"

namespace cmvflows {

Eigen::MatrixXcd LaurentMatrix::coeff(int power) const {
  auto it = c_.find(power);
  if (it != c_.end()) return it->second;
  return Eigen::MatrixXcd::Zero(p_, p_);
}

void LaurentMatrix::set_coeff(int power, Eigen::MatrixXcd m) {
  if (p_ == 0) p_ = static_cast<int>(m.rows());
  if (m.rows() != p_ || m.cols() != p_)
    throw DomainError("LaurentMatrix: coefficient dimension mismatch");
  c_[power] = std::move(m);
}

void LaurentMatrix::add_to(int power, const Eigen::MatrixXcd& m) {
  if (p_ == 0) p_ = static_cast<int>(m.rows());
  auto it = c_.find(power);
  if (it == c_.end())
    c_.emplace(power, m);
  else
    it->second += m;
}

LaurentMatrix& LaurentMatrix::canonicalize(double eps) {
  for (auto it = c_.begin(); it != c_.end();) {
    if (it->second.norm() < eps)
      it = c_.erase(it);
    else
      ++it;
  }
  return *this;
}

LaurentMatrix LaurentMatrix::constant(const Eigen::MatrixXcd& m) {
  LaurentMatrix l(static_cast<int>(m.rows()));
  l.set_coeff(0, m);
  return l;
}

LaurentMatrix LaurentMatrix::monomial(int power, const Eigen::MatrixXcd& m) {
  LaurentMatrix l(static_cast<int>(m.rows()));
  l.set_coeff(power, m);
  return l;
}

LaurentMatrix LaurentMatrix::identity(int p) {
  return constant(Eigen::MatrixXcd::Identity(p, p));
}

WeightFunction default_weight() {
  return WeightFunction{[](int n) { return std::exp(std::sqrt(std::abs(n) + 1.0)); }};
}

Eigen::MatrixXcd eval(const LaurentMatrix& l, const cxd& h) {
  if (h == cxd(0.0)) throw DomainError("eval: h must be nonzero");
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(l.size(), l.size());
  for (const auto& [j, m] : l.coeffs()) r += std::pow(h, j) * m;
  return r;
}

LaurentMatrix multiply(const LaurentMatrix& a, const LaurentMatrix& b) {
  if (a.size() != b.size()) throw DomainError("multiply: size mismatch");
  LaurentMatrix r(a.size());
  for (const auto& [ja, ma] : a.coeffs())
    for (const auto& [jb, mb] : b.coeffs()) r.add_to(ja + jb, ma * mb);
  r.canonicalize();
  return r;
}

LaurentMatrix add(const LaurentMatrix& a, const LaurentMatrix& b) {
  LaurentMatrix r = a;
  for (const auto& [j, m] : b.coeffs()) r.add_to(j, m);
  r.canonicalize();
  return r;
}

LaurentMatrix sub(const LaurentMatrix& a, const LaurentMatrix& b) {
  LaurentMatrix r = a;
  for (const auto& [j, m] : b.coeffs()) r.add_to(j, -m);
  r.canonicalize();
  return r;
}

LaurentMatrix scale(const LaurentMatrix& a, const cxd& c) {
  LaurentMatrix r(a.size());
  for (const auto& [j, m] : a.coeffs()) r.set_coeff(j, c * m);
  r.canonicalize();
  return r;
}

LaurentMatrix star(const LaurentMatrix& l) {
  LaurentMatrix r(l.size());
  for (const auto& [j, m] : l.coeffs()) r.set_coeff(-j, m.adjoint());
  return r;
}

TriProjection project_pm0(const LaurentMatrix& l) {
  TriProjection t{LaurentMatrix(l.size()), LaurentMatrix(l.size()), LaurentMatrix(l.size())};
  for (const auto& [j, m] : l.coeffs()) {
    if (j > 0)
      t.plus.set_coeff(j, m);
    else if (j < 0)
      t.minus.set_coeff(j, m);
    else
      t.zero.set_coeff(0, m);
  }
  return t;
}

namespace {

// Splitting of a constant matrix M = L + D + U into the anti-Hermitian part
// U - U^* + i Im(D) and the complement L + U^* + Re(D).
void split_constant(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& into_k,
                    Eigen::MatrixXcd& into_b) {
  int p = static_cast<int>(m.rows());
  Eigen::MatrixXcd upper = Eigen::MatrixXcd::Zero(p, p);
  Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(p, p);
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      if (i < j)
        upper(i, j) = m(i, j);
      else if (i > j)
        lower(i, j) = m(i, j);
      else
        diag(i, i) = m(i, i);
    }
  Eigen::MatrixXcd im_d = diag;
  Eigen::MatrixXcd re_d = diag;
  for (int i = 0; i < p; ++i) {
    im_d(i, i) = cxd(0.0, diag(i, i).imag());
    re_d(i, i) = cxd(diag(i, i).real(), 0.0);
  }
  into_k = upper - upper.adjoint() + im_d;
  into_b = lower + upper.adjoint() + re_d;
}

}  // namespace

LaurentMatrix project_k(const LaurentMatrix& l) {
  TriProjection t = project_pm0(l);
  Eigen::MatrixXcd k0, b0;
  split_constant(t.zero.coeff(0), k0, b0);
  // P_- X + Pi_k X_0 - (P_- X)^*
  LaurentMatrix r = t.minus;
  r.add_to(0, k0);
  r = sub(r, star(t.minus));
  r.canonicalize();
  return r;
}

LaurentMatrix project_b(const LaurentMatrix& l) {
  TriProjection t = project_pm0(l);
  Eigen::MatrixXcd k0, b0;
  split_constant(t.zero.coeff(0), k0, b0);
  // P_+ X + Pi_b X_0 + (P_- X)^*
  LaurentMatrix r = t.plus;
  r.add_to(0, b0);
  r = add(r, star(t.minus));
  r.canonicalize();
  return r;
}

LaurentMatrix jsharp(const LaurentMatrix& l) { return sub(project_k(l), project_b(l)); }

double pairing(const LaurentMatrix& x, const LaurentMatrix& y) {
  if (x.size() != y.size()) throw DomainError("pairing: size mismatch");
  cxd acc(0.0);
  for (const auto& [j, m] : x.coeffs()) {
    if (!y.has(-j)) continue;
    acc += (m * y.coeff(-j)).trace();
  }
  return acc.imag();
}

double weighted_norm(const LaurentMatrix& x, const WeightFunction& w) {
  double acc = 0.0;
  for (const auto& [j, m] : x.coeffs()) acc += m.norm() * w(j);
  return acc;
}

double coeff_distance(const LaurentMatrix& a, const LaurentMatrix& b) {
  double d = 0.0;
  auto visit = [&](int j) {
    double v = (a.coeff(j) - b.coeff(j)).norm();
    if (v > d) d = v;
  };
  for (const auto& [j, m] : a.coeffs()) visit(j);
  for (const auto& [j, m] : b.coeffs())
    if (!a.has(j)) visit(j);
  return d;
}

LaurentMatrix dagger_coeffs(const LaurentMatrix& l) {
  LaurentMatrix r(l.size());
  for (const auto& [j, m] : l.coeffs()) r.set_coeff(j, m.adjoint());
  return r;
}

LaurentMatrix reverse_powers(const LaurentMatrix& l) {
  LaurentMatrix r(l.size());
  for (const auto& [j, m] : l.coeffs()) r.set_coeff(-j, m);
  return r;
}

}  // namespace cmvflows
