#include "cmvflows/curve.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "cmvflows/errors.hpp"

namespace cmvflows {

cxd LaurentScalar::coeff(int power) const {
  auto it = c_.find(power);
  return it == c_.end() ? cxd(0.0) : it->second;
}

void LaurentScalar::set_coeff(int power, const cxd& c) { c_[power] = c; }

void LaurentScalar::add_to(int power, const cxd& c) { c_[power] += c; }

cxd LaurentScalar::eval(const cxd& z) const {
  cxd acc(0.0);
  for (const auto& [j, c] : c_) acc += c * std::pow(z, j);
  return acc;
}

LaurentScalar& LaurentScalar::canonicalize(double eps) {
  for (auto it = c_.begin(); it != c_.end();) {
    if (std::abs(it->second) < eps)
      it = c_.erase(it);
    else
      ++it;
  }
  return *this;
}

LaurentScalar LaurentScalar::constant(const cxd& c) {
  LaurentScalar s;
  s.set_coeff(0, c);
  s.canonicalize();
  return s;
}

LaurentScalar operator+(const LaurentScalar& a, const LaurentScalar& b) {
  LaurentScalar r = a;
  for (const auto& [j, c] : b.coeffs()) r.add_to(j, c);
  return r.canonicalize();
}

LaurentScalar operator-(const LaurentScalar& a, const LaurentScalar& b) {
  LaurentScalar r = a;
  for (const auto& [j, c] : b.coeffs()) r.add_to(j, -c);
  return r.canonicalize();
}

LaurentScalar operator*(const LaurentScalar& a, const LaurentScalar& b) {
  LaurentScalar r;
  for (const auto& [ja, ca] : a.coeffs())
    for (const auto& [jb, cb] : b.coeffs()) r.add_to(ja + jb, ca * cb);
  return r.canonicalize();
}

LaurentScalar operator*(const cxd& c, const LaurentScalar& a) {
  LaurentScalar r;
  for (const auto& [j, v] : a.coeffs()) r.set_coeff(j, c * v);
  return r.canonicalize();
}

LaurentScalar shifted(const LaurentScalar& a, int k) {
  LaurentScalar r;
  for (const auto& [j, v] : a.coeffs()) r.set_coeff(j + k, v);
  return r;
}

namespace {

// Driver for the three-term recurrences of the (possibly index-shifted)
// eigenvalue problem.  Position g = m + shift in the lattice decides which
// of the two solved relations advances u_m:
//   g odd:  u_m = (rho_{g-2} u_{m-2} - (alpha_{g-2} + z alpha_{g-1}) u_{m-1}) / (z rho_{g-1})
//   g even: u_m = (z rho_{g-2} u_{m-2} - (z conj(alpha_{g-2}) + conj(alpha_{g-1})) u_{m-1}) / rho_{g-1}
// Every division is by a scalar or by z, both exact in the Laurent ring.
std::vector<LaurentScalar> recurrence(const VerblunskyVector& v, int shift, const LaurentScalar& um1,
                                      const LaurentScalar& u0, int n_max) {
  std::vector<LaurentScalar> u(static_cast<std::size_t>(n_max + 2));
  u[0] = um1;
  u[1] = u0;
  for (int m = 1; m <= n_max; ++m) {
    int g = m + shift;
    const LaurentScalar& a2 = u[static_cast<std::size_t>(m - 1)];  // u_{m-2}
    const LaurentScalar& a1 = u[static_cast<std::size_t>(m)];      // u_{m-1}
    LaurentScalar next;
    if ((g % 2 + 2) % 2 == 1) {
      double rg2 = v.rho(g - 2), rg1 = v.rho(g - 1);
      LaurentScalar num = cxd(rg2, 0.0) * a2 -
                          (LaurentScalar::constant(v.at(g - 2)) +
                           shifted(LaurentScalar::constant(v.at(g - 1)), 1)) *
                              a1;
      next = shifted(cxd(1.0 / rg1, 0.0) * num, -1);
    } else {
      double rg2 = v.rho(g - 2), rg1 = v.rho(g - 1);
      LaurentScalar num = cxd(rg2, 0.0) * shifted(a2, 1) -
                          (shifted(LaurentScalar::constant(std::conj(v.at(g - 2))), 1) +
                           LaurentScalar::constant(std::conj(v.at(g - 1)))) *
                              a1;
      next = cxd(1.0 / rg1, 0.0) * num;
    }
    u[static_cast<std::size_t>(m + 1)] = next.canonicalize();
  }
  return u;
}

}  // namespace

BlochBasis bloch_basis(const VerblunskyVector& v, int n_max) {
  if (n_max < 1) throw DomainError("bloch_basis: n_max must be >= 1");
  BlochBasis b;
  b.phi = recurrence(v, 0, LaurentScalar::constant(1.0), LaurentScalar(), n_max);
  b.psi = recurrence(v, 0, LaurentScalar(), LaurentScalar::constant(1.0), n_max);
  return b;
}

std::vector<LaurentScalar> shifted_basis(const VerblunskyVector& v, int shift, int n_max) {
  return recurrence(v, shift, LaurentScalar(), LaurentScalar::constant(1.0), n_max);
}

Eigen::Matrix2cd monodromy(const VerblunskyVector& v, const cxd& z) {
  if (z == cxd(0.0)) throw DomainError("monodromy: z must be nonzero");
  int p = v.p();
  BlochBasis b = bloch_basis(v, p);
  Eigen::Matrix2cd m;
  m << b.phi_at(p - 1).eval(z), b.psi_at(p - 1).eval(z), b.phi_at(p).eval(z), b.psi_at(p).eval(z);
  return m;
}

LaurentScalar wronskian(const BlochBasis& basis, const VerblunskyVector& v, int j) {
  LaurentScalar w = basis.phi_at(j) * basis.psi_at(j + 1) - basis.phi_at(j + 1) * basis.psi_at(j);
  return cxd(v.rho(j), 0.0) * w;
}

// ---------------------------------------------------------------------------
// companion-matrix roots with Parlett-Reinsch style balancing

namespace {

void balance(Eigen::MatrixXcd& m) {
  const double gamma = 0.9;
  int n = static_cast<int>(m.rows());
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      double row = 0.0, col = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        row += std::abs(m(i, j));
        col += std::abs(m(j, i));
      }
      if (row == 0.0 || col == 0.0) continue;
      double f = 1.0;
      double s = row + col;
      while (col < row / 2.0) {
        f *= 2.0;
        col *= 2.0;
        row /= 2.0;
      }
      while (col > row * 2.0) {
        f /= 2.0;
        col /= 2.0;
        row *= 2.0;
      }
      if (row + col < gamma * s) {
        changed = true;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
}

}  // namespace

std::vector<cxd> polynomial_roots(const std::vector<cxd>& coeffs_ascending) {
  std::vector<cxd> c = coeffs_ascending;
  while (!c.empty() && std::abs(c.back()) < 1e-14) c.pop_back();
  if (c.size() < 2) throw DomainError("polynomial_roots: degree must be >= 1");
  int n = static_cast<int>(c.size()) - 1;
  if (std::abs(c.back()) < 1e-14)
    throw DomainError("polynomial_roots: vanishing leading coefficient");
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  balance(comp);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
  std::vector<cxd> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return roots;
}

BranchPoints branch_points(const VerblunskyVector& v) {
  int p = v.p();
  ConservedSet cs = invariants(v);
  // q(z) = P z^{p/2} Delta(z) = sum_j I_j z^{j + p/2}, degree p
  std::vector<cxd> q(static_cast<std::size_t>(p + 1), cxd(0.0));
  for (int j = -p / 2; j <= p / 2; ++j) q[static_cast<std::size_t>(j + p / 2)] = cs.I_at(j);
  // r(z) = q(z)^2 - 4 P^2 z^p, degree 2p
  std::vector<cxd> r(static_cast<std::size_t>(2 * p + 1), cxd(0.0));
  for (int a = 0; a <= p; ++a)
    for (int b = 0; b <= p; ++b)
      r[static_cast<std::size_t>(a + b)] += q[static_cast<std::size_t>(a)] * q[static_cast<std::size_t>(b)];
  r[static_cast<std::size_t>(p)] -= 4.0 * cs.P * cs.P;
  if (std::abs(r.back()) < 1e-14)
    throw NumericalError("branch_points", "vanishing leading coefficient");

  BranchPoints out;
  out.lambda = polynomial_roots(r);
  out.generic = true;
  for (std::size_t i = 0; i < out.lambda.size(); ++i)
    for (std::size_t j = i + 1; j < out.lambda.size(); ++j)
      if (std::abs(out.lambda[i] - out.lambda[j]) <= 1e-6) out.generic = false;
  return out;
}

namespace {

void require_ga2(const VerblunskyVector& v) {
  for (int j = 0; j < v.p(); ++j)
    if (std::abs(v.at(j)) <= 1e-8)
      throw DomainError("dirichlet_data: alpha_" + std::to_string(j) +
                        " is (numerically) zero; the Dirichlet construction needs alpha_j != 0");
}

// greedy multiset match distance
double multiset_distance(std::vector<cxd> a, std::vector<cxd> b) {
  double worst = 0.0;
  for (const auto& za : a) {
    double best = 1e300;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      double d = std::abs(za - b[i]);
      if (d < best) { best = d; arg = i; }
    }
    if (!b.empty()) b.erase(b.begin() + static_cast<std::ptrdiff_t>(arg));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

SpectralCurveData dirichlet_data(const VerblunskyVector& v) {
  require_ga2(v);
  int p = v.p();
  BlochBasis basis = bloch_basis(v, p);

  // roots of z^{p/2} psi_{p-1}(z), degree p-1
  LaurentScalar poly = shifted(basis.psi_at(p - 1), p / 2);
  if (poly.min_power() < 0)
    throw NumericalError("dirichlet_data", "psi_{p-1} has unexpected low-order terms");
  std::vector<cxd> coeffs(static_cast<std::size_t>(poly.max_power() + 1), cxd(0.0));
  for (const auto& [j, c] : poly.coeffs()) coeffs[static_cast<std::size_t>(j)] = c;
  std::vector<cxd> roots = polynomial_roots(coeffs);
  if (static_cast<int>(roots.size()) != p - 1)
    throw NumericalError("dirichlet_data", "expected p-1 Dirichlet eigenvalues");

  // cross-validation: det(z ge^* restricted - go restricted) = 0
  FloquetCMV f = build_factors(v);
  Eigen::MatrixXcd a_full = f.ge.adjoint();
  Eigen::MatrixXcd b_full = f.go.coeff(0);
  Eigen::MatrixXcd a_hat = a_full.topLeftCorner(p - 1, p - 1);
  Eigen::MatrixXcd b_hat = b_full.topLeftCorner(p - 1, p - 1);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a_hat.partialPivLu().solve(b_hat));
  std::vector<cxd> roots2(static_cast<std::size_t>(p - 1));
  for (int i = 0; i < p - 1; ++i) roots2[static_cast<std::size_t>(i)] = es.eigenvalues()(i);

  double mismatch = multiset_distance(roots, roots2);
  if (mismatch > 1e-7)
    throw NumericalError("dirichlet_data",
                         "polynomial-root and eigenproblem routes disagree by " +
                             std::to_string(mismatch));

  SpectralCurveData out;
  out.genus = p - 1;
  out.dirichlet_z = roots;
  for (const auto& zk : roots) {
    cxd hk = basis.phi_at(p - 1).eval(zk);
    out.divisor.emplace_back(hk, zk);
  }
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < 1e-6) out.dirichlet_collision = true;
  return out;
}

SpectralCurveData spectral_curve(const VerblunskyVector& v) {
  SpectralCurveData out = dirichlet_data(v);
  BranchPoints bp = branch_points(v);
  out.branch = bp.lambda;
  out.generic = bp.generic;
  return out;
}

std::pair<cxd, cxd> h_branches(const VerblunskyVector& v, const cxd& z) {
  if (z == cxd(0.0)) throw DomainError("h_branches: z must be nonzero");
  cxd delta = discriminant(v, z);
  cxd disc2 = delta * delta - 4.0;
  if (std::abs(disc2) < 1e-8)
    throw DomainError("h_branches: z is within 1e-8 of a branch point");
  cxd root = std::sqrt(disc2);
  cxd h1 = 0.5 * (delta + root);
  cxd h2 = 0.5 * (delta - root);
  // larger-modulus root first; take its Vieta partner so the product is 1
  cxd big = std::abs(h1) >= std::abs(h2) ? h1 : h2;
  if (std::abs(std::abs(big) - 1.0) < 1e-12)
    throw DomainError("h_branches: both multipliers on the unit circle; sheet label ambiguous");
  return {big, 1.0 / big};
}

std::vector<cxd> bloch_vector(const VerblunskyVector& v, const cxd& h, const cxd& z) {
  int p = v.p();
  ConservedSet cs = invariants(v);
  cxd on_curve = h * cs.P * std::pow(z, p / 2) * (discriminant(v, z) - h - 1.0 / h);
  if (std::abs(on_curve) > 1e-8 * std::max(1.0, std::abs(std::pow(z, p))))
    throw DomainError("bloch_vector: (h, z) is not on the curve");

  BlochBasis basis = bloch_basis(v, p);
  // refuse near the Dirichlet divisor
  LaurentScalar poly = shifted(basis.psi_at(p - 1), p / 2);
  std::vector<cxd> coeffs(static_cast<std::size_t>(poly.max_power() + 1), cxd(0.0));
  for (const auto& [j, c] : poly.coeffs()) coeffs[static_cast<std::size_t>(j)] = c;
  for (const auto& zk : polynomial_roots(coeffs))
    if (std::abs(z - zk) < 1e-6)
      throw DomainError("bloch_vector: z is within 1e-6 of a Dirichlet eigenvalue");

  cxd psi_last = basis.psi_at(p - 1).eval(z);
  cxd coeff = (1.0 - h * basis.phi_at(p - 1).eval(z)) / psi_last;
  std::vector<cxd> f(static_cast<std::size_t>(p));
  for (int j = 0; j < p - 1; ++j)
    f[static_cast<std::size_t>(j)] = h * basis.phi_at(j).eval(z) + coeff * basis.psi_at(j).eval(z);
  f[static_cast<std::size_t>(p - 1)] = cxd(1.0);

  // eigen-residual enforcement
  Eigen::MatrixXcd e = eval(build_factors(v).assembled, h);
  Eigen::VectorXcd vf(p);
  for (int j = 0; j < p; ++j) vf(j) = f[static_cast<std::size_t>(j)];
  double resid = (e * vf - z * vf).norm() / std::max(1.0, vf.norm() * std::abs(z));
  if (resid > 1e-7)
    throw NumericalError("bloch_vector", "eigen residual " + std::to_string(resid));
  return f;
}

// ---------------------------------------------------------------------------
// asymptotic orders at the four points over z = infinity and z = 0

namespace {

double prod_rho(const VerblunskyVector& v, int from, int to) {  // inclusive, empty = 1
  double r = 1.0;
  for (int i = from; i <= to; ++i) r *= v.rho(i);
  return r;
}

}  // namespace

AsymptoticOrders asymptotic_orders(const VerblunskyVector& v) {
  int p = v.p();
  require_ga2(v);
  if (!branch_points(v).generic)
    throw DomainError("asymptotic_orders: branch points are not distinct");

  BlochBasis basis = bloch_basis(v, p);
  cxd alpha_p2 = v.at(p - 2), alpha_p1 = v.at(p - 1);
  std::vector<std::vector<LaurentScalar>> shift_bases;
  for (int j = 0; j <= p - 2; ++j) shift_bases.push_back(shifted_basis(v, j + 1, p - 1));

  // Minus-sheet values come straight from the basis: there the two summands
  // share the order of the result.  On the plus sheet the direct formula
  // cancels catastrophically far from the finite part of the curve (the
  // summands exceed the result by |z|^{p/2+j}), so the value is taken from
  // the sheet product identity, which only involves stable quantities.
  auto f_minus = [&](int j, const cxd& z) {
    auto [hp, hm] = h_branches(v, z);
    cxd psi_last = basis.psi_at(p - 1).eval(z);
    cxd coeff = (1.0 - hm * basis.phi_at(p - 1).eval(z)) / psi_last;
    return hm * basis.phi_at(j).eval(z) + coeff * basis.psi_at(j).eval(z);
  };
  auto f_plus = [&](int j, const cxd& z) {
    cxd bj = (j % 2 == 1) ? cxd(v.rho(p - 1) / v.rho(j)) : -v.rho(p - 1) / (v.rho(j) * z);
    cxd rhs = bj * shift_bases[static_cast<std::size_t>(j)][static_cast<std::size_t>(p)].eval(z) /
              basis.psi_at(p - 1).eval(z);
    return rhs / f_minus(j, z);
  };

  const double dir_angle = 0.3;  // keep off the real axis
  auto sample = [&](double r, bool plus_sheet, int j) {
    cxd z = std::polar(r, dir_angle);
    return plus_sheet ? f_plus(j, z) : f_minus(j, z);
  };

  AsymptoticOrders out;
  auto push = [&](int j, const char* corner, double r1, double r2, bool plus_sheet,
                  int expected_order, const cxd& expected_constant) {
    cxd f1 = sample(r1, plus_sheet, j);
    cxd f2 = sample(r2, plus_sheet, j);
    double slope = (std::log(std::abs(f2)) - std::log(std::abs(f1))) / (std::log(r2) - std::log(r1));
    cxd z2 = std::polar(r2, dir_angle);
    cxd constant = f2 / std::pow(z2, expected_order);
    double rel = std::abs(constant - expected_constant) / std::abs(expected_constant);
    out.entries.push_back({j, corner, slope, expected_order, constant, expected_constant, rel});
    out.max_slope_err = std::max(out.max_slope_err, std::abs(slope - expected_order));
    out.max_constant_rel_err = std::max(out.max_constant_rel_err, rel);
  };

  const double r_inf1 = 1e3, r_inf2 = 1e4, r_zero1 = 1e-3, r_zero2 = 1e-4;
  for (int jj = 0; jj <= p / 2 - 1; ++jj) {
    int je = 2 * jj, jo = 2 * jj + 1;
    if (je <= p - 2) {
      // z -> infinity
      push(je, "P-", r_inf1, r_inf2, false, -(p / 2 - jj - 1),
           -prod_rho(v, je, p - 2) / alpha_p2);
      // sign fixed by the exact product identity f+ f- = B psi-shift / psi
      // together with the minus-sheet constant
      push(je, "P+", r_inf1, r_inf2, true, p / 2 - jj - 1,
           std::conj(v.at(je)) / prod_rho(v, je, p - 2));
      // z -> 0 (the smaller radius comes second so the constant is read there)
      push(je, "Q-", r_zero1, r_zero2, false, p / 2 - jj,
           -std::conj(v.at(je - 1)) * prod_rho(v, je, p - 2));
      push(je, "Q+", r_zero1, r_zero2, true, -(p / 2 - jj),
           1.0 / (alpha_p1 * prod_rho(v, je, p - 2)));
    }
    if (jo <= p - 2) {
      push(jo, "P-", r_inf1, r_inf2, false, -(p / 2 - jj - 1),
           v.at(je) / alpha_p2 * prod_rho(v, jo, p - 2));
      push(jo, "P+", r_inf1, r_inf2, true, p / 2 - jj - 1, cxd(1.0) / prod_rho(v, jo, p - 2));
      push(jo, "Q-", r_zero1, r_zero2, false, p / 2 - jj - 1,
           cxd(prod_rho(v, jo, p - 2), 0.0));
      push(jo, "Q+", r_zero1, r_zero2, true, -(p / 2 - jj - 1),
           v.at(jo) / (alpha_p1 * prod_rho(v, jo, p - 2)));
    }
  }
  return out;
}

}  // namespace cmvflows
