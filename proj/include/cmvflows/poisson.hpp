#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cmvflows/cmv.hpp"
#include "cmvflows/jet.hpp"

namespace cmvflows {

// A scalar function of the state, evaluable at plain values and at first-
// and second-derivative level so brackets (and brackets of brackets) come
// out of forward-mode differentiation instead of finite differences.
struct Observable {
  int arity = 0;
  std::string label;
  std::function<cxd(const VerblunskyVector&)> evaluate;
  std::function<Jet1(const std::vector<Jet1>&)> eval_j1;
  std::function<Jet2(const std::vector<Jet2>&)> eval_j2;
};

// Builds all three evaluation levels from one generic callable
// f(vector<S>) -> S.
template <class F>
Observable make_observable(int p, std::string label, F f) {
  Observable o;
  o.arity = p;
  o.label = std::move(label);
  o.evaluate = [f](const VerblunskyVector& v) { return f(v.alpha()); };
  o.eval_j1 = [f](const std::vector<Jet1>& a) { return f(a); };
  o.eval_j2 = [f](const std::vector<Jet2>& a) { return f(a); };
  return o;
}

struct WirtingerGradient {
  std::vector<cxd> d_alpha;
  std::vector<cxd> d_alphabar;
};

// Seeds jets over the real coordinates (Re a_j, Im a_j) of the state.
template <class S>
std::vector<Jet<S>> seed_jets(const std::vector<S>& alpha) {
  int p = static_cast<int>(alpha.size());
  std::vector<Jet<S>> ja(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) {
    ja[static_cast<std::size_t>(j)] = Jet<S>(alpha[static_cast<std::size_t>(j)]);
    ja[static_cast<std::size_t>(j)].g.assign(static_cast<std::size_t>(2 * p), S(0.0));
    ja[static_cast<std::size_t>(j)].g[static_cast<std::size_t>(2 * j)] = S(1.0);
    ja[static_cast<std::size_t>(j)].g[static_cast<std::size_t>(2 * j + 1)] = S(cxd(0.0, 1.0));
  }
  return ja;
}

// Forward-mode Wirtinger derivatives; exact up to roundoff.
WirtingerGradient wirtinger(const Observable& obs, const VerblunskyVector& v);
// Central-difference engine with the given step; the independent oracle.
WirtingerGradient wirtinger_fd(const Observable& obs, const VerblunskyVector& v,
                               double step = 1e-6);

// 2i sum_j rho_j^2 (df/da_j dg/dabar_j - df/dabar_j dg/da_j)
cxd al_bracket(const Observable& f, const Observable& g, const VerblunskyVector& v);
// bracket value carrying first derivatives (for Jacobi-identity checks)
Jet1 al_bracket_jet(const Observable& f, const Observable& g, const std::vector<Jet1>& alpha);

// component j of the Hamiltonian vector field: {H, a_j} = -2i rho_j^2 dH/dabar_j
std::vector<cxd> hamiltonian_field(const Observable& h, const VerblunskyVector& v);

// ready-made observables
Observable obs_coordinate(int p, int a);       // alpha_a
Observable obs_coordinate_conj(int p, int a);  // conj(alpha_a)
Observable obs_re_coordinate(int p, int a);    // G_a = Re alpha_a
Observable obs_im_coordinate(int p, int a);    // Im alpha_a (= -F_a)
Observable obs_P(int p);
Observable obs_logP(int p);
Observable obs_I(int p, int j, int part);  // part: 0 full complex, 1 Re, 2 Im
Observable obs_K(int p, int n, int part);
Observable obs_al_generator(int p);  // Re K_1 - 2 log P

// The four product-structure brackets of the coordinate functions
// F_a = Im tr integral(. E_aa), G_a = Re tr integral(. E_aa) evaluated at
// (ge, go), from their closed-form one-sided gradients.
struct SklyaninTable {
  cxd ff, fg, gf, gg;  // {F_a,F_b}, {F_a,G_b}, {G_a,F_b}, {G_a,G_b}
};
SklyaninTable sklyanin_coordinate_brackets(const VerblunskyVector& v, int a, int b);

// {G_a - i F_a, G_b + i F_b} assembled from the table; equals the
// coordinate bracket {alpha_a, conj(alpha_b)} = 2i delta_ab rho_a^2.
cxd sklyanin_combined(const VerblunskyVector& v, int a, int b);

struct InvolutionReport {
  struct Pair {
    std::string a, b;
    double abs_bracket;
  };
  std::vector<Pair> pairs;
  double max_abs = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// All unordered pairs from {P, I_0, Re I_j, Im I_j : j = 1..p/2-1}.
InvolutionReport involution_check(const VerblunskyVector& v, double tol);

}  // namespace cmvflows
