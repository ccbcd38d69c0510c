#include "cmvflows/cmv.hpp"

#include <cmath>

#include "cmvflows/detail/core.hpp"
#include "cmvflows/errors.hpp"

namespace cmvflows {

namespace {

Eigen::MatrixXcd to_eigen(const detail::DenseMat<cxd>& m) {
  Eigen::MatrixXcd r(m.n, m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r(i, j) = m(i, j);
  return r;
}

LaurentMatrix to_laurent(const detail::LaurentCoeffs<cxd>& c, int p) {
  LaurentMatrix l(p);
  for (const auto& [j, m] : c) l.set_coeff(j, to_eigen(m));
  l.canonicalize();
  return l;
}

}  // namespace

VerblunskyVector::VerblunskyVector(int p, std::vector<cxd> alpha)
    : p_(p), a_(std::move(alpha)) {
  if (p_ < 2 || p_ % 2 != 0)
    throw DomainError("VerblunskyVector: p must be even and >= 2");
  if (static_cast<int>(a_.size()) != p_)
    throw DomainError("VerblunskyVector: alpha length must equal p");
  for (const auto& a : a_)
    if (std::abs(a) >= 1.0)
      throw DomainError("VerblunskyVector: |alpha_j| must be < 1");
}

cxd VerblunskyVector::at(int j) const {
  int m = j % p_;
  if (m < 0) m += p_;
  return a_[static_cast<std::size_t>(m)];
}

double VerblunskyVector::rho(int j) const {
  cxd a = at(j);
  return std::sqrt(1.0 - std::norm(a));
}

double VerblunskyVector::rho_product() const {
  double p = 1.0;
  for (int j = 0; j < p_; ++j) p *= rho(j);
  return p;
}

Eigen::Matrix2cd theta_block(const cxd& a) {
  if (std::abs(a) >= 1.0) throw DomainError("theta_block: |a| must be < 1");
  double rho = std::sqrt(1.0 - std::norm(a));
  Eigen::Matrix2cd t;
  t << std::conj(a), rho, rho, -a;
  return t;
}

FloquetCMV build_factors(const VerblunskyVector& v) {
  FloquetCMV f;
  f.alpha = v;
  f.ge = to_eigen(detail::even_factor(v.alpha()));
  f.go = to_laurent(detail::odd_factor(v.alpha()), v.p());
  f.assembled = to_laurent(detail::assembled_loop(v.alpha()), v.p());
  return f;
}

FloquetCMV coxeter_element(int p) {
  if (p < 2 || p % 2 != 0) throw DomainError("coxeter_element: p must be even and >= 2");
  return build_factors(VerblunskyVector(p, std::vector<cxd>(static_cast<std::size_t>(p), cxd(0.0))));
}

std::optional<VerblunskyVector> recognize_floquet(const LaurentMatrix& l, double tol) {
  int p = l.size();
  if (p < 2 || p % 2 != 0) return std::nullopt;

  Eigen::MatrixXcd c0 = l.coeff(0), c1 = l.coeff(1), cm1 = l.coeff(-1);

  // The h and h^-1 coefficients are rank one:
  //   C1 column p-1 = rho_{p-1} * (ge column 0),
  //   Cm1 column 0  = rho_{p-1} * (ge column p-1),
  // and C0 column 0 = -alpha_{p-1} * (ge column 0).  The ratio at row 1
  // isolates alpha_{p-1}/rho_{p-1} since (ge)_{1,0} = rho_0 > 0.
  cxd c1_anchor = c1(1, p - 1);
  if (std::abs(c1_anchor) < 1e-14) return std::nullopt;
  cxd w = -c0(1, 0) / c1_anchor;  // alpha_{p-1} / rho_{p-1}
  double rho_last = 1.0 / std::sqrt(1.0 + std::norm(w));
  cxd alpha_last = w * rho_last;

  std::vector<cxd> alpha(static_cast<std::size_t>(p), cxd(0.0));
  alpha[static_cast<std::size_t>(p - 1)] = alpha_last;
  alpha[0] = std::conj(c1(0, p - 1) / rho_last);
  if (std::abs(alpha[0]) >= 1.0) return std::nullopt;

  // sweep the interior theta blocks of the odd factor
  double rho_prev = std::sqrt(1.0 - std::norm(alpha[0]));
  for (int lcol = 1; lcol + 2 <= p - 1; lcol += 2) {
    // C0 column l = conj(alpha_l) rho_{l-1} e_{l-1} - conj(alpha_l) alpha_{l-1} e_l
    //             + rho_l conj(alpha_{l+1}) e_{l+1} + rho_l rho_{l+1} e_{l+2}
    cxd al = std::conj(c0(lcol - 1, lcol) / rho_prev);
    if (std::abs(al) >= 1.0) return std::nullopt;
    alpha[static_cast<std::size_t>(lcol)] = al;
    double rho_l = std::sqrt(1.0 - std::norm(al));
    cxd anext = std::conj(c0(lcol + 1, lcol) / rho_l);
    if (std::abs(anext) >= 1.0) return std::nullopt;
    alpha[static_cast<std::size_t>(lcol + 1)] = anext;
    rho_prev = std::sqrt(1.0 - std::norm(anext));
  }

  VerblunskyVector v(p, alpha);
  FloquetCMV rebuilt = build_factors(v);

  // entrywise residual against the rebuild, over the union of supports
  double resid = 0.0;
  auto acc = [&](const LaurentMatrix& a, const LaurentMatrix& b) {
    for (const auto& [j, m] : a.coeffs()) {
      double r = (m - b.coeff(j)).cwiseAbs().maxCoeff();
      if (r > resid) resid = r;
    }
  };
  acc(l, rebuilt.assembled);
  acc(rebuilt.assembled, l);
  if (resid > tol) return std::nullopt;
  return v;
}

FloquetPower floquet_power(const VerblunskyVector& v, int n) {
  detail::PowerTriple<cxd> t = detail::floquet_power(v.alpha(), n);
  FloquetPower f;
  f.a0 = to_eigen(t.a0);
  f.a1 = to_eigen(t.a1);
  f.am1 = to_eigen(t.am1);
  f.out_of_band = t.out_of_band;
  return f;
}

}  // namespace cmvflows
