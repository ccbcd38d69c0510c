#include "cmvflows/poisson.hpp"

#include <cmath>

#include "cmvflows/detail/core.hpp"
#include "cmvflows/errors.hpp"
#include "cmvflows/kernels.hpp"

namespace cmvflows {

namespace {

// gradient slots 2j, 2j+1 -> Wirtinger pair
template <class S>
void to_wirtinger(const Jet<S>& f, int p, std::vector<S>& d_alpha, std::vector<S>& d_alphabar) {
  d_alpha.assign(static_cast<std::size_t>(p), S(0.0));
  d_alphabar.assign(static_cast<std::size_t>(p), S(0.0));
  const S half(0.5);
  const S ihalf(cxd(0.0, 0.5));
  for (int j = 0; j < p; ++j) {
    S gx = jet_detail::gat(f, static_cast<std::size_t>(2 * j));
    S gy = jet_detail::gat(f, static_cast<std::size_t>(2 * j + 1));
    d_alpha[static_cast<std::size_t>(j)] = gx * half - gy * ihalf;
    d_alphabar[static_cast<std::size_t>(j)] = gx * half + gy * ihalf;
  }
}

template <class S, class Eval>
S al_bracket_generic(const Eval& evf, const Eval& evg, const std::vector<S>& alpha) {
  int p = static_cast<int>(alpha.size());
  auto ja = seed_jets(alpha);
  Jet<S> f = evf(ja);
  Jet<S> g = evg(ja);
  std::vector<S> fda, fdb, gda, gdb;
  to_wirtinger(f, p, fda, fdb);
  to_wirtinger(g, p, gda, gdb);
  S acc(0.0);
  for (int j = 0; j < p; ++j) {
    S rho2 = S(1.0) - alpha[static_cast<std::size_t>(j)] * cconj(alpha[static_cast<std::size_t>(j)]);
    acc = acc + rho2 * (fda[static_cast<std::size_t>(j)] * gdb[static_cast<std::size_t>(j)] -
                        fdb[static_cast<std::size_t>(j)] * gda[static_cast<std::size_t>(j)]);
  }
  return acc * cxd(0.0, 2.0);
}

}  // namespace

WirtingerGradient wirtinger(const Observable& obs, const VerblunskyVector& v) {
  auto ja = seed_jets(v.alpha());
  Jet1 f = obs.eval_j1(ja);
  WirtingerGradient g;
  to_wirtinger(f, v.p(), g.d_alpha, g.d_alphabar);
  return g;
}

WirtingerGradient wirtinger_fd(const Observable& obs, const VerblunskyVector& v, double step) {
  int p = v.p();
  WirtingerGradient g;
  g.d_alpha.assign(static_cast<std::size_t>(p), cxd(0.0));
  g.d_alphabar.assign(static_cast<std::size_t>(p), cxd(0.0));
  for (int j = 0; j < p; ++j) {
    auto shifted = [&](cxd delta) {
      std::vector<cxd> a = v.alpha();
      a[static_cast<std::size_t>(j)] += delta;
      return obs.evaluate(VerblunskyVector(p, a));
    };
    cxd dx = (shifted(cxd(step, 0.0)) - shifted(cxd(-step, 0.0))) / (2.0 * step);
    cxd dy = (shifted(cxd(0.0, step)) - shifted(cxd(0.0, -step))) / (2.0 * step);
    g.d_alpha[static_cast<std::size_t>(j)] = 0.5 * (dx - cxd(0.0, 1.0) * dy);
    g.d_alphabar[static_cast<std::size_t>(j)] = 0.5 * (dx + cxd(0.0, 1.0) * dy);
  }
  return g;
}

cxd al_bracket(const Observable& f, const Observable& g, const VerblunskyVector& v) {
  return al_bracket_generic<cxd>(f.eval_j1, g.eval_j1, v.alpha());
}

Jet1 al_bracket_jet(const Observable& f, const Observable& g, const std::vector<Jet1>& alpha) {
  return al_bracket_generic<Jet1>(f.eval_j2, g.eval_j2, alpha);
}

std::vector<cxd> hamiltonian_field(const Observable& h, const VerblunskyVector& v) {
  WirtingerGradient g = wirtinger(h, v);
  std::vector<cxd> field(static_cast<std::size_t>(v.p()));
  for (int j = 0; j < v.p(); ++j) {
    double rho2 = 1.0 - std::norm(v.alpha()[static_cast<std::size_t>(j)]);
    field[static_cast<std::size_t>(j)] =
        cxd(0.0, -2.0) * rho2 * g.d_alphabar[static_cast<std::size_t>(j)];
  }
  return field;
}

Observable obs_coordinate(int p, int a) {
  return make_observable(p, "alpha_" + std::to_string(a),
                         [a](const auto& al) { return al[static_cast<std::size_t>(a)]; });
}

Observable obs_coordinate_conj(int p, int a) {
  return make_observable(p, "conj_alpha_" + std::to_string(a),
                         [a](const auto& al) { return cconj(al[static_cast<std::size_t>(a)]); });
}

Observable obs_re_coordinate(int p, int a) {
  return make_observable(p, "re_alpha_" + std::to_string(a),
                         [a](const auto& al) { return sreal(al[static_cast<std::size_t>(a)]); });
}

Observable obs_im_coordinate(int p, int a) {
  return make_observable(p, "im_alpha_" + std::to_string(a),
                         [a](const auto& al) { return simag(al[static_cast<std::size_t>(a)]); });
}

Observable obs_P(int p) {
  return make_observable(p, "P", [](const auto& al) {
    using S = std::decay_t<decltype(al[0])>;
    S prod(1.0);
    for (const auto& a : al) prod = prod * detail::rho_of(a);
    return prod;
  });
}

Observable obs_logP(int p) {
  return make_observable(p, "logP", [](const auto& al) {
    using S = std::decay_t<decltype(al[0])>;
    S acc(0.0);
    for (const auto& a : al) acc = acc + clog(S(1.0) - a * cconj(a));
    return acc * 0.5;
  });
}

namespace {
template <class S>
S take_part(const S& z, int part) {
  if (part == 1) return sreal(z);
  if (part == 2) return simag(z);
  return z;
}
std::string part_name(int part) { return part == 1 ? "Re " : part == 2 ? "Im " : ""; }
}  // namespace

Observable obs_I(int p, int j, int part) {
  return make_observable(p, part_name(part) + "I_" + std::to_string(j),
                         [j, p, part](const auto& al) {
                           auto inv = detail::invariants(al);
                           return take_part(inv.I[static_cast<std::size_t>(j + p / 2)], part);
                         });
}

Observable obs_K(int p, int n, int part) {
  return make_observable(p, part_name(part) + "K_" + std::to_string(n),
                         [n, part](const auto& al) {
                           auto inv = detail::invariants(al);
                           return take_part(inv.K[static_cast<std::size_t>(n - 1)], part);
                         });
}

Observable obs_al_generator(int p) {
  return make_observable(p, "ReK_1 - 2 logP", [](const auto& al) {
    using S = std::decay_t<decltype(al[0])>;
    auto inv = detail::invariants(al);
    S logp(0.0);
    for (const auto& a : al) logp = logp + clog(S(1.0) - a * cconj(a));
    return sreal(inv.K[0]) - logp;
  });
}

namespace {

// One-sided gradients of the coordinate functions at (ge, go); constant
// loops except at index p-1, where the loop wraps through the corner.
struct SlotGradients {
  int slot;  // 1: even factor, 2: odd factor
  LaurentMatrix right, left;
};

SlotGradients coordinate_gradients(const VerblunskyVector& v, int a) {
  int p = v.p();
  cxd al = v.at(a);
  double rho = v.rho(a);
  SlotGradients s;
  s.slot = (a % 2 == 0) ? 1 : 2;
  Eigen::MatrixXcd right = Eigen::MatrixXcd::Zero(p, p);
  Eigen::MatrixXcd left = Eigen::MatrixXcd::Zero(p, p);
  if (a < p - 1) {
    right(a, a) = std::conj(al);
    right(a + 1, a) = rho;
    left(a, a) = std::conj(al);
    left(a, a + 1) = rho;
    s.right = LaurentMatrix::constant(right);
    s.left = LaurentMatrix::constant(left);
  } else {
    right(p - 1, p - 1) = std::conj(al);
    left(p - 1, p - 1) = std::conj(al);
    s.right = LaurentMatrix::constant(right);
    s.left = LaurentMatrix::constant(left);
    Eigen::MatrixXcd corner_up = Eigen::MatrixXcd::Zero(p, p);
    corner_up(0, p - 1) = rho;
    s.right.add_to(1, corner_up);
    Eigen::MatrixXcd corner_dn = Eigen::MatrixXcd::Zero(p, p);
    corner_dn(p - 1, 0) = rho;
    s.left.add_to(-1, corner_dn);
  }
  return s;
}

// {phi, psi}_* = sum over slots of  1/2 (J# D'phi, D'psi) - 1/2 (J# Dphi, Dpsi)
cxd bracket_from_gradients(const SlotGradients& f, const SlotGradients& g, const cxd& cf,
                           const cxd& cg) {
  if (f.slot != g.slot) return cxd(0.0);
  // cf, cg multiply the F-gradients to produce the requested function's
  // gradients (G has gradient i * gradient of F).
  LaurentMatrix fr = scale(f.right, cf), fl = scale(f.left, cf);
  LaurentMatrix gr = scale(g.right, cg), gl = scale(g.left, cg);
  double term_left = pairing(jsharp(fl), gl);
  double term_right = pairing(jsharp(fr), gr);
  return cxd(0.5 * (term_left - term_right), 0.0);
}

}  // namespace

SklyaninTable sklyanin_coordinate_brackets(const VerblunskyVector& v, int a, int b) {
  if (a < 0 || a >= v.p() || b < 0 || b >= v.p())
    throw DomainError("sklyanin_coordinate_brackets: index out of range");
  SlotGradients ga = coordinate_gradients(v, a);
  SlotGradients gb = coordinate_gradients(v, b);
  SklyaninTable t;
  t.ff = bracket_from_gradients(ga, gb, cxd(1.0), cxd(1.0));
  t.fg = bracket_from_gradients(ga, gb, cxd(1.0), cxd(0.0, 1.0));
  t.gf = bracket_from_gradients(ga, gb, cxd(0.0, 1.0), cxd(1.0));
  t.gg = bracket_from_gradients(ga, gb, cxd(0.0, 1.0), cxd(0.0, 1.0));
  return t;
}

cxd sklyanin_combined(const VerblunskyVector& v, int a, int b) {
  SklyaninTable t = sklyanin_coordinate_brackets(v, a, b);
  // {G_a - iF_a, G_b + iF_b} = {G,G} + i{G,F} - i{F,G} + {F,F}
  return t.gg + cxd(0.0, 1.0) * t.gf - cxd(0.0, 1.0) * t.fg + t.ff;
}

InvolutionReport involution_check(const VerblunskyVector& v, double tol) {
  int p = v.p();
  std::vector<Observable> family;
  family.push_back(obs_P(p));
  family.push_back(obs_I(p, 0, 0));
  for (int j = 1; j <= p / 2 - 1; ++j) {
    family.push_back(obs_I(p, j, 1));
    family.push_back(obs_I(p, j, 2));
  }

  std::vector<std::pair<int, int>> idx;
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j)
      idx.emplace_back(static_cast<int>(i), static_cast<int>(j));

  InvolutionReport rep;
  rep.tol = tol;
  rep.pairs.resize(idx.size());
  kernels::parallel_for(static_cast<int>(idx.size()), [&](int k) {
    auto [i, j] = idx[static_cast<std::size_t>(k)];
    cxd br = al_bracket(family[static_cast<std::size_t>(i)], family[static_cast<std::size_t>(j)], v);
    rep.pairs[static_cast<std::size_t>(k)] = {family[static_cast<std::size_t>(i)].label,
                                              family[static_cast<std::size_t>(j)].label,
                                              std::abs(br)};
  });
  for (const auto& pr : rep.pairs) rep.max_abs = std::max(rep.max_abs, pr.abs_bracket);
  rep.pass = rep.max_abs < tol;
  return rep;
}

}  // namespace cmvflows
