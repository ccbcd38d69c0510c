#include "cmvflows/flows.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "cmvflows/errors.hpp"
#include "cmvflows/kernels.hpp"

namespace cmvflows {

std::string to_string(const HamiltonianSpec& spec) {
  switch (spec.kind) {
    case HamiltonianKind::ReK: return "ReK_" + std::to_string(spec.n);
    case HamiltonianKind::ImK: return "ImK_" + std::to_string(spec.n);
    case HamiltonianKind::ReI: return "ReI_" + std::to_string(spec.n);
    case HamiltonianKind::ImI: return "ImI_" + std::to_string(spec.n);
    case HamiltonianKind::LogP: return "logP";
    case HamiltonianKind::AL: return "AL";
  }
  return "?";
}

HamiltonianKind kind_from_string(const std::string& s) {
  if (s == "ReK") return HamiltonianKind::ReK;
  if (s == "ImK") return HamiltonianKind::ImK;
  if (s == "ReI") return HamiltonianKind::ReI;
  if (s == "ImI") return HamiltonianKind::ImI;
  if (s == "logP") return HamiltonianKind::LogP;
  if (s == "AL") return HamiltonianKind::AL;
  throw DomainError("unknown hamiltonian kind: " + s);
}

Observable spec_observable(const HamiltonianSpec& spec, int p) {
  switch (spec.kind) {
    case HamiltonianKind::ReK:
      if (spec.n < 1 || spec.n > p / 2) throw DomainError("ReK: n out of range");
      return obs_K(p, spec.n, 1);
    case HamiltonianKind::ImK:
      if (spec.n < 1 || spec.n > p / 2) throw DomainError("ImK: n out of range");
      return obs_K(p, spec.n, 2);
    case HamiltonianKind::ReI:
      if (spec.n < 0 || spec.n > p / 2 - 1) throw DomainError("ReI: n out of range");
      return obs_I(p, spec.n, 1);
    case HamiltonianKind::ImI:
      if (spec.n < 0 || spec.n > p / 2 - 1) throw DomainError("ImI: n out of range");
      return obs_I(p, spec.n, 2);
    case HamiltonianKind::LogP:
      // the rho-product generator; its flow has the closed form of
      // p_flow_exact, so the ODE route must integrate P itself
      return obs_P(p);
    case HamiltonianKind::AL:
      return obs_al_generator(p);
  }
  throw DomainError("unreachable");
}

// ---------------------------------------------------------------------------
// Central-function gradients

namespace {

// Laurent scalar in h (finite support), the home of the characteristic
// coefficients E_r(L(h)).
using HScalar = std::map<int, cxd>;

HScalar hscalar_from_charpoly(const CharPoly& cp, int r) {
  HScalar s;
  for (int hp = -1; hp <= 1; ++hp) {
    cxd v = cp.coeff(cp.p - r, hp);
    if (std::abs(v) > kCoeffEps) s[hp] = v;
  }
  return s;
}

LaurentMatrix scalar_times(const HScalar& s, const LaurentMatrix& l) {
  LaurentMatrix r(l.size());
  for (const auto& [js, c] : s)
    for (const auto& [jl, m] : l.coeffs()) r.add_to(js + jl, c * m);
  r.canonicalize();
  return r;
}

// nabla^T E_j(x) = -sum_{i=0}^{j-1} E_{j-1-i}(x) x^i as a Laurent matrix,
// powers[i] = x^i.
LaurentMatrix nabla_e(const std::vector<HScalar>& er, const std::vector<LaurentMatrix>& powers,
                      int j) {
  int p = powers[0].size();
  LaurentMatrix acc(p);
  for (int i = 0; i <= j - 1; ++i)
    acc = add(acc, scalar_times(er[static_cast<std::size_t>(j - 1 - i)],
                                powers[static_cast<std::size_t>(i)]));
  return scale(acc, cxd(-1.0));
}

struct CentralGradientData {
  std::vector<HScalar> er;             // E_r, r = 0..p
  std::vector<LaurentMatrix> powers;   // loop^0..loop^(p/2)
};

CentralGradientData central_data(const LaurentMatrix& loop) {
  int p = loop.size();
  CharPoly cp = char_poly_loop(loop);
  CentralGradientData d;
  d.er.resize(static_cast<std::size_t>(p + 1));
  for (int r = 0; r <= p; ++r) d.er[static_cast<std::size_t>(r)] = hscalar_from_charpoly(cp, r);
  d.powers.push_back(LaurentMatrix::identity(p));
  for (int i = 1; i <= p / 2; ++i) d.powers.push_back(multiply(d.powers.back(), loop));
  return d;
}

}  // namespace

LaurentMatrix grad_central_loop(const LaurentMatrix& loop, const HamiltonianSpec& spec) {
  int p = loop.size();
  int j;
  switch (spec.kind) {
    case HamiltonianKind::ReI:
    case HamiltonianKind::ImI:
      if (spec.n < 0 || spec.n > p / 2 - 1) throw DomainError("grad_central: n out of range");
      j = p / 2 - spec.n;
      break;
    case HamiltonianKind::LogP:
      j = p / 2;
      break;
    default:
      throw DomainError("grad_central: kind must be ReI, ImI or logP");
  }

  CentralGradientData d = central_data(loop);
  LaurentMatrix nab = nabla_e(d.er, d.powers, j);

  // post-condition: the recursion nabla E_{j+1} = x nabla E_j - E_j I holds
  {
    LaurentMatrix rhs = sub(multiply(loop, nab),
                            scalar_times(d.er[static_cast<std::size_t>(j)],
                                         LaurentMatrix::identity(p)));
    double res = coeff_distance(nabla_e(d.er, d.powers, j + 1), rhs);
    if (res > 1e-8)
      throw NumericalError("grad_central", "gradient recursion residual " + std::to_string(res));
  }

  LaurentMatrix dphi = multiply(loop, nab);
  switch (spec.kind) {
    case HamiltonianKind::ImI:
      return dphi;
    case HamiltonianKind::ReI:
      return scale(dphi, cxd(0.0, 1.0));
    default: {  // LogP: -i h * E nabla E_{p/2}
      LaurentMatrix shifted(p);
      for (const auto& [jj, m] : dphi.coeffs()) shifted.set_coeff(jj + 1, cxd(0.0, -1.0) * m);
      return shifted;
    }
  }
}

LaurentMatrix grad_central(const VerblunskyVector& v, const HamiltonianSpec& spec) {
  return grad_central_loop(build_factors(v).assembled, spec);
}

// ---------------------------------------------------------------------------
// Lax form

LaurentMatrix lax_rhs(const VerblunskyVector& v, const HamiltonianSpec& spec) {
  int p = v.p();
  if (spec.kind != HamiltonianKind::ReK && spec.kind != HamiltonianKind::ImK)
    throw DomainError("lax_rhs: kind must be ReK or ImK");
  if (spec.n < 1 || spec.n > p / 2) throw DomainError("lax_rhs: n out of range");

  FloquetCMV f = build_factors(v);
  LaurentMatrix en = f.assembled;
  for (int i = 1; i < spec.n; ++i) en = multiply(en, f.assembled);

  LaurentMatrix arg = (spec.kind == HamiltonianKind::ReK) ? scale(en, cxd(0.0, 1.0)) : en;
  LaurentMatrix pk = project_k(arg);
  LaurentMatrix commutator = sub(multiply(f.assembled, pk), multiply(pk, f.assembled));

  // independent route: the matrix Q_n of the upper projection,
  // Q_n = 1/2 diag(A0) + strictupper(A0) + h^-1 Am1
  FloquetPower pw = floquet_power(v, spec.n);
  Eigen::MatrixXcd upper = Eigen::MatrixXcd::Zero(p, p);
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(p, p);
  for (int i = 0; i < p; ++i)
    for (int jj = 0; jj < p; ++jj) {
      if (i < jj) upper(i, jj) = pw.a0(i, jj);
      if (i == jj) diag(i, i) = pw.a0(i, i);
    }
  LaurentMatrix q(p);
  q.set_coeff(0, 0.5 * diag + upper);
  q.set_coeff(-1, pw.am1);
  LaurentMatrix qq = (spec.kind == HamiltonianKind::ReK)
                         ? scale(add(q, star(q)), cxd(0.0, 1.0))
                         : sub(q, star(q));
  LaurentMatrix alt = sub(multiply(f.assembled, qq), multiply(qq, f.assembled));
  double res = coeff_distance(commutator, alt);
  if (res > 1e-12)
    throw NumericalError("lax_rhs", "projection/Q_n routes disagree by " + std::to_string(res));
  return commutator;
}

// ---------------------------------------------------------------------------
// RK4 integration

namespace {

std::vector<cxd> field_of(const Observable& h, const VerblunskyVector& v) {
  return hamiltonian_field(h, v);
}

std::vector<cxd> axpy(const std::vector<cxd>& base, const std::vector<cxd>& dir, double s) {
  std::vector<cxd> out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + s * dir[i];
  return out;
}

constexpr double kBoundaryMargin = 1e-6;

bool inside_polydisk(const std::vector<cxd>& a) {
  for (const auto& z : a)
    if (std::abs(z) >= 1.0 - kBoundaryMargin) return false;
  return true;
}

}  // namespace

Trajectory integrate_ode_observable(const VerblunskyVector& v0, const Observable& h, double t_end,
                                    double dt) {
  if (dt <= 0.0) throw DomainError("integrate_ode: dt must be positive");
  int p = v0.p();
  double dir = t_end >= 0.0 ? 1.0 : -1.0;
  int steps = static_cast<int>(std::llround(std::abs(t_end) / dt));
  double step = dir * (steps > 0 ? std::abs(t_end) / steps : dt);

  ConservedSet base = invariants(v0);
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(v0);
  traj.drift.push_back({});

  std::vector<cxd> a = v0.alpha();
  double t = 0.0;
  for (int s = 0; s < steps; ++s) {
    VerblunskyVector vcur(p, a);
    auto k1 = field_of(h, vcur);
    auto k2 = field_of(h, VerblunskyVector(p, axpy(a, k1, step / 2)));
    auto k3 = field_of(h, VerblunskyVector(p, axpy(a, k2, step / 2)));
    auto k4 = field_of(h, VerblunskyVector(p, axpy(a, k3, step)));
    for (std::size_t i = 0; i < a.size(); ++i)
      a[i] += (step / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t += step;
    if (!inside_polydisk(a)) {
      traj.aborted = true;
      traj.note = "state approached the polydisk boundary at t=" + std::to_string(t);
      return traj;
    }
    VerblunskyVector vnext(p, a);
    ConservedSet cur = invariants(vnext);
    ConservedDrift d;
    d.dP = std::abs(cur.P - base.P);
    for (std::size_t i = 0; i < cur.I.size(); ++i)
      d.max_dI = std::max(d.max_dI, std::abs(cur.I[i] - base.I[i]));
    for (std::size_t i = 0; i < cur.K.size(); ++i)
      d.max_dK = std::max(d.max_dK, std::abs(cur.K[i] - base.K[i]));
    traj.times.push_back(t);
    traj.states.push_back(vnext);
    traj.drift.push_back(d);
  }
  return traj;
}

Trajectory integrate_ode(const VerblunskyVector& v0, const HamiltonianSpec& spec, double t_end,
                         double dt) {
  return integrate_ode_observable(v0, spec_observable(spec, v0.p()), t_end, dt);
}

VerblunskyVector p_flow_exact(const VerblunskyVector& v0, double t) {
  cxd phase = std::polar(1.0, t * v0.rho_product());
  std::vector<cxd> a = v0.alpha();
  for (auto& z : a) z *= phase;
  return VerblunskyVector(v0.p(), a);
}

// ---------------------------------------------------------------------------
// Bauer spectral factorization

namespace {

// One Bauer sweep at block order m: Cholesky of the (m p) x (m p) block
// Toeplitz matrix T_{ij} = Phi_{i-j}; the last block row converges to the
// factor coefficients.
std::vector<Eigen::MatrixXcd> bauer_sweep(const LaurentMatrix& phi, int m) {
  int p = phi.size();
  Eigen::MatrixXcd t(m * p, m * p);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) t.block(i * p, j * p, p, p) = phi.coeff(i - j);
  Eigen::LLT<Eigen::MatrixXcd> llt(t);
  if (llt.info() != Eigen::Success)
    throw DomainError("spectral_factorize: block Toeplitz matrix is not positive definite");
  Eigen::MatrixXcd l = llt.matrixL();
  std::vector<Eigen::MatrixXcd> b(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k)
    b[static_cast<std::size_t>(k)] = l.block((m - 1) * p, (m - 1 - k) * p, p, p);
  return b;
}

double factor_residual(const LaurentMatrix& phi, const LaurentMatrix& b, int samples) {
  auto h = kernels::circle_grid(samples);
  double worst = 0.0;
  for (const auto& hm : h) {
    Eigen::MatrixXcd bh = eval(b, hm);
    double r = (eval(phi, hm) - bh * bh.adjoint()).norm();
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace

LaurentMatrix spectral_factorize(const LaurentMatrix& phi, int trunc, double tol) {
  int p = phi.size();
  if (coeff_distance(phi, star(phi)) > 1e-10)
    throw DomainError("spectral_factorize: loop is not Hermitian (star(Phi) != Phi)");
  // positivity probe
  for (const auto& hm : kernels::circle_grid(std::max(2 * trunc, 16))) {
    Eigen::MatrixXcd s = eval(phi, hm);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (s + s.adjoint()));
    if (es.eigenvalues().minCoeff() < 1e-12)
      throw DomainError("spectral_factorize: loop is not positive definite on the circle");
  }

  auto bn = bauer_sweep(phi, trunc);
  auto b2n = bauer_sweep(phi, 2 * trunc);
  double delta = 0.0;
  for (int k = 0; k < trunc; ++k)
    delta = std::max(delta, (bn[static_cast<std::size_t>(k)] - b2n[static_cast<std::size_t>(k)]).norm());

  LaurentMatrix b(p);
  for (int k = 0; k <= trunc; ++k)
    if (k < static_cast<int>(b2n.size())) b.set_coeff(k, b2n[static_cast<std::size_t>(k)]);
  b.canonicalize();

  double resid = factor_residual(phi, b, 2 * trunc);
  if (delta > tol || resid > tol)
    throw ToleranceError("spectral_factorize", std::max(delta, resid), tol);
  return b;
}

IwasawaFactors iwasawa_factorize(const LaurentMatrix& g, int trunc, double tol) {
  int p = g.size();
  LaurentMatrix phi = multiply(star(g), g);

  // Conjugate by the index-reversal permutation and reverse powers so the
  // right-sided factorization star(b) b = phi maps onto the left-sided
  // Bauer form c star(c).
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(p, p);
  for (int i = 0; i < p; ++i) s(i, p - 1 - i) = 1.0;
  LaurentMatrix psi(p);
  for (const auto& [j, m] : phi.coeffs()) psi.set_coeff(-j, s * m * s);

  LaurentMatrix c = spectral_factorize(psi, trunc, tol);
  LaurentMatrix b(p);
  for (const auto& [j, m] : c.coeffs()) b.set_coeff(j, (s * m * s).adjoint());
  b.canonicalize();

  // unitary part from circle samples of g b^-1
  int m_count = std::max(2 * trunc, 16);
  auto h = kernels::circle_grid(m_count);
  std::vector<Eigen::MatrixXcd> ksamp(static_cast<std::size_t>(m_count));
  kernels::parallel_for(m_count, [&](int m) {
    Eigen::MatrixXcd bh = eval(b, h[static_cast<std::size_t>(m)]);
    ksamp[static_cast<std::size_t>(m)] =
        eval(g, h[static_cast<std::size_t>(m)]) * bh.partialPivLu().inverse();
  });
  LaurentMatrix k = kernels::fourier_coeffs(ksamp, trunc);

  // verify k b = g and unitarity of k after truncation
  double worst = 0.0;
  for (const auto& hm : h) {
    Eigen::MatrixXcd kh = eval(k, hm);
    worst = std::max(worst, (kh * eval(b, hm) - eval(g, hm)).norm());
    worst = std::max(worst, (kh.adjoint() * kh - Eigen::MatrixXcd::Identity(p, p)).norm());
  }
  if (worst > tol) throw ToleranceError("iwasawa_factorize", worst, tol);
  return {k, b};
}

// ---------------------------------------------------------------------------
// Factorization flow

namespace {

// Split a constant invertible matrix as w = u l^-1 with u unitary and l
// lower triangular with positive diagonal.  Gram-Schmidt over the columns
// from last to first gives w = u r with r lower triangular positive, so
// l = r^-1.  Only u is consumed downstream; both are verified by residual.
void unitary_lower_split(const Eigen::MatrixXcd& w, Eigen::MatrixXcd& u, Eigen::MatrixXcd& l,
                         double tol) {
  int p = static_cast<int>(w.rows());
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(p, p);
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(p, p);
  for (int k = p - 1; k >= 0; --k) {
    Eigen::VectorXcd col = w.col(k);
    for (int m = p - 1; m > k; --m) {
      cxd proj = q.col(m).dot(col);  // conjugate-linear in the first argument
      r(m, k) = proj;
      col -= proj * q.col(m);
    }
    double nrm = col.norm();
    if (nrm < 1e-14) throw NumericalError("unitary-lower split", "rank deficient input");
    r(k, k) = nrm;
    q.col(k) = col / nrm;
  }
  u = q;
  l = r.triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd::Identity(p, p));
  double resid = (w - u * r).norm() +
                 (u.adjoint() * u - Eigen::MatrixXcd::Identity(p, p)).norm();
  if (resid > tol) throw NumericalError("unitary-lower split", "residual " + std::to_string(resid));
}

struct FlowSignKey {
  int kind;
  int n;
  int p;
  bool operator<(const FlowSignKey& o) const {
    return std::tie(kind, n, p) < std::tie(o.kind, o.n, o.p);
  }
};

std::map<FlowSignKey, double> g_flow_signs;
std::mutex g_flow_signs_mutex;

VerblunskyVector factor_step(const VerblunskyVector& v0, const HamiltonianSpec& spec, double t,
                             int trunc, double tol);

// The time orientation linking the factorization route to the bracket flow
// is pinned empirically once per (kind, n, p): a tiny factorization step is
// compared against the Hamiltonian field.
double flow_sign(const HamiltonianSpec& spec, const VerblunskyVector& probe, int trunc,
                 double tol) {
  FlowSignKey key{static_cast<int>(spec.kind), spec.n, probe.p()};
  {
    std::lock_guard<std::mutex> lock(g_flow_signs_mutex);
    auto it = g_flow_signs.find(key);
    if (it != g_flow_signs.end()) return it->second;
  }
  const double t0 = 1e-4;
  std::vector<cxd> field = hamiltonian_field(spec_observable(spec, probe.p()), probe);
  double fieldnorm = 0.0;
  for (const auto& z : field) fieldnorm = std::max(fieldnorm, std::abs(z));
  if (fieldnorm <= 1e-8) return 1.0;  // degenerate probe, nothing to calibrate against

  VerblunskyVector vplus = factor_step(probe, spec, t0, trunc, tol);
  double err_plus = 0.0, err_minus = 0.0;
  for (int j = 0; j < probe.p(); ++j) {
    cxd fd = (vplus.alpha()[static_cast<std::size_t>(j)] -
              probe.alpha()[static_cast<std::size_t>(j)]) / t0;
    err_plus = std::max(err_plus, std::abs(fd - field[static_cast<std::size_t>(j)]));
    err_minus = std::max(err_minus, std::abs(fd + field[static_cast<std::size_t>(j)]));
  }
  double sign = err_plus <= err_minus ? 1.0 : -1.0;
  std::lock_guard<std::mutex> lock(g_flow_signs_mutex);
  g_flow_signs[key] = sign;
  return sign;
}

VerblunskyVector factor_step(const VerblunskyVector& v0, const HamiltonianSpec& spec, double t,
                             int trunc, double tol) {
  int p = v0.p();
  FloquetCMV f0 = build_factors(v0);

  // gradient of the central function at the loop and at its inverse
  LaurentMatrix x = grad_central_loop(f0.assembled, spec);

  // exponent -t (X(h) + X(h)^*) sampled pointwise on the circle; Hermitian
  // because the inverse-loop gradient is (+/-) the adjoint there
  int m_count = 4 * trunc;
  auto grid = kernels::eval_grid(x, m_count);
  for (auto& s : grid) {
    Eigen::MatrixXcd herm = s + s.adjoint();
    s = -t * herm;
  }
  auto phi_samples = kernels::herm_exp_grid(grid);
  LaurentMatrix phi = kernels::fourier_coeffs(phi_samples, 2 * trunc - 1);

  LaurentMatrix b1 = spectral_factorize(phi, trunc, tol);

  // constant factorization b1(0)^-1 ge(0) = u l^-1
  Eigen::MatrixXcd b10 = b1.coeff(0);
  Eigen::MatrixXcd w = b10.partialPivLu().solve(f0.ge);
  Eigen::MatrixXcd u, l;
  unitary_lower_split(w, u, l, 100 * tol);

  LaurentMatrix b2(p);
  for (const auto& [j, m] : b1.coeffs()) b2.set_coeff(j, f0.ge.adjoint() * m * u);

  // transported even factor, h-independent up to tolerance
  auto ge_at = [&](const cxd& h) -> Eigen::MatrixXcd {
    return eval(b1, h).partialPivLu().solve(f0.ge * eval(b2, h));
  };
  Eigen::MatrixXcd ge_t = ge_at(cxd(1.0, 0.0));
  double h_indep = (ge_t - ge_at(cxd(0.0, 1.0))).norm();
  if (h_indep > 10 * tol)
    throw NumericalError("factor-flow",
                         "transported even factor depends on h: " + std::to_string(h_indep));

  // transported odd factor from circle samples
  auto h = kernels::circle_grid(m_count);
  std::vector<Eigen::MatrixXcd> go_samples(static_cast<std::size_t>(m_count));
  kernels::parallel_for(m_count, [&](int m) {
    const cxd& hm = h[static_cast<std::size_t>(m)];
    go_samples[static_cast<std::size_t>(m)] =
        eval(b2, hm).partialPivLu().solve(eval(f0.go, hm) * eval(b1, hm));
  });
  LaurentMatrix go_t = kernels::fourier_coeffs(go_samples, 2);
  double stray = 0.0;
  for (const auto& [j, m] : go_t.coeffs())
    if (j < -1 || j > 1) stray = std::max(stray, m.norm());
  if (stray > 10 * tol)
    throw NumericalError("factor-flow", "transported odd factor support leak " +
                                            std::to_string(stray));
  LaurentMatrix go_clip(p);
  for (int j = -1; j <= 1; ++j)
    if (go_t.has(j)) go_clip.set_coeff(j, go_t.coeff(j));

  LaurentMatrix e_t = multiply(LaurentMatrix::constant(ge_t), go_clip);
  auto v = recognize_floquet(e_t, std::max(1e-8, 10 * tol));
  if (!v) throw NumericalError("factor-flow", "transported loop is not of Floquet CMV shape");
  return *v;
}

}  // namespace

VerblunskyVector flow_by_factorization(const VerblunskyVector& v0, const HamiltonianSpec& spec,
                                       double t, int trunc, double tol) {
  if (spec.kind != HamiltonianKind::ReI && spec.kind != HamiltonianKind::ImI)
    throw DomainError("flow_by_factorization: kind must be ReI or ImI");
  if (t == 0.0) return v0;

  double sign = flow_sign(spec, v0, trunc, tol);
  double remaining = sign * t;
  const double max_step = 0.25;
  int steps = std::max(1, static_cast<int>(std::ceil(std::abs(remaining) / max_step)));
  double step = remaining / steps;
  VerblunskyVector v = v0;
  for (int s = 0; s < steps; ++s) v = factor_step(v, spec, step, trunc, tol);
  return v;
}

LaurentMatrix dressing_action(const LaurentMatrix& g, const LaurentMatrix& x, int trunc,
                              double tol) {
  int p = g.size();
  if (coeff_distance(multiply(x, star(x)), LaurentMatrix::identity(p)) > 1e-10)
    throw DomainError("dressing_action: x must be unitary-valued");

  IwasawaFactors fg = iwasawa_factorize(g, trunc, tol);
  LaurentMatrix y = multiply(multiply(star(x), g), x);
  IwasawaFactors fy = iwasawa_factorize(y, trunc, tol);

  // unitary route
  LaurentMatrix r_k = multiply(multiply(star(fg.k), x), fy.k);

  // triangular route: b(g) x b(y)^-1, with the inverse taken on circle samples
  int m_count = std::max(2 * trunc, 16);
  auto h = kernels::circle_grid(m_count);
  std::vector<Eigen::MatrixXcd> samples(static_cast<std::size_t>(m_count));
  kernels::parallel_for(m_count, [&](int m) {
    const cxd& hm = h[static_cast<std::size_t>(m)];
    Eigen::MatrixXcd by = eval(fy.b, hm);
    samples[static_cast<std::size_t>(m)] =
        eval(fg.b, hm) * eval(x, hm) * by.partialPivLu().inverse();
  });
  LaurentMatrix r_b = kernels::fourier_coeffs(samples, trunc);

  double mismatch = 0.0;
  for (const auto& hm : h)
    mismatch = std::max(mismatch, (eval(r_k, hm) - eval(r_b, hm)).norm());
  if (mismatch > tol) throw ToleranceError("dressing_action route comparison", mismatch, tol);

  r_k.canonicalize(1e-13);
  return r_k;
}

double eigenvalue_multiset_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ea(a), eb(b);
  Eigen::VectorXcd la = ea.eigenvalues(), lb = eb.eigenvalues();
  int n = static_cast<int>(la.size());
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double best = 1e300;
    int arg = -1;
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      double d = std::abs(la(i) - lb(j));
      if (d < best) { best = d; arg = j; }
    }
    used[static_cast<std::size_t>(arg)] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace cmvflows
