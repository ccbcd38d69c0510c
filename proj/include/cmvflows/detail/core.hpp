#pragma once

// Scalar-generic CMV machinery.  Everything here is templated on the scalar
// type S so the identical arithmetic runs on std::complex<double> (production
// path) and on Jet<...> (derivative path for the Poisson machinery).

#include <array>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "cmvflows/errors.hpp"
#include "cmvflows/jet.hpp"

namespace cmvflows::detail {

using cxd = std::complex<double>;

template <class S>
struct DenseMat {
  int n = 0;
  std::vector<S> a;

  DenseMat() = default;
  explicit DenseMat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, S(0.0)) {}

  S& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const S& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  static DenseMat identity(int dim) {
    DenseMat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = S(1.0);
    return m;
  }

  DenseMat dagger() const {
    DenseMat m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = cconj((*this)(j, i));
    return m;
  }

  S trace() const {
    S t(0.0);
    for (int i = 0; i < n; ++i) t = t + (*this)(i, i);
    return t;
  }
};

template <class S>
DenseMat<S> operator+(const DenseMat<S>& x, const DenseMat<S>& y) {
  DenseMat<S> r(x.n);
  for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] = x.a[k] + y.a[k];
  return r;
}

template <class S>
DenseMat<S> operator-(const DenseMat<S>& x, const DenseMat<S>& y) {
  DenseMat<S> r(x.n);
  for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] = x.a[k] - y.a[k];
  return r;
}

template <class S>
DenseMat<S> operator*(const DenseMat<S>& x, const DenseMat<S>& y) {
  DenseMat<S> r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const S& xik = x(i, k);
      for (int j = 0; j < x.n; ++j) r(i, j) = r(i, j) + xik * y(k, j);
    }
  return r;
}

template <class S, class C>
DenseMat<S> scaled(const DenseMat<S>& x, const C& c) {
  DenseMat<S> r(x.n);
  for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] = x.a[k] * c;
  return r;
}

// Determinant by partial-pivot elimination; pivots compared through the
// underlying complex modulus so jets pivot identically to plain values.
template <class S>
S det_pivoted(DenseMat<S> m) {
  S det(1.0);
  int n = m.n;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = cabs(m(c, c));
    for (int r = c + 1; r < n; ++r) {
      double v = cabs(m(r, c));
      if (v > best) { best = v; piv = r; }
    }
    if (best == 0.0) return S(0.0);
    if (piv != c) {
      for (int j = c; j < n; ++j) std::swap(m(c, j), m(piv, j));
      det = -det;
    }
    det = det * m(c, c);
    for (int r = c + 1; r < n; ++r) {
      S f = m(r, c) / m(c, c);
      for (int j = c; j < n; ++j) m(r, j) = m(r, j) - f * m(c, j);
    }
  }
  return det;
}

// ---------------------------------------------------------------------------
// Laurent-coefficient maps (power of the loop parameter -> matrix)

template <class S>
using LaurentCoeffs = std::map<int, DenseMat<S>>;

template <class S>
LaurentCoeffs<S> laurent_mul(const LaurentCoeffs<S>& x, const LaurentCoeffs<S>& y) {
  LaurentCoeffs<S> r;
  for (const auto& [jx, mx] : x)
    for (const auto& [jy, my] : y) {
      auto it = r.find(jx + jy);
      if (it == r.end())
        r.emplace(jx + jy, mx * my);
      else
        it->second = it->second + mx * my;
    }
  return r;
}

template <class S>
DenseMat<S> laurent_eval(const LaurentCoeffs<S>& x, const cxd& h, int dim) {
  DenseMat<S> r(dim);
  for (const auto& [j, m] : x) {
    cxd hj = std::pow(h, j);
    r = r + scaled(m, hj);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Verblunsky data and the theta factors

template <class S>
S rho_of(const S& alpha) {
  return csqrt(S(1.0) - alpha * cconj(alpha));
}

template <class S>
DenseMat<S> theta_of(const S& alpha) {
  DenseMat<S> t(2);
  S r = rho_of(alpha);
  t(0, 0) = cconj(alpha);
  t(0, 1) = r;
  t(1, 0) = r;
  t(1, 1) = -alpha;
  return t;
}

template <class S>
DenseMat<S> even_factor(const std::vector<S>& alpha) {
  int p = static_cast<int>(alpha.size());
  DenseMat<S> g(p);
  for (int b = 0; b + 1 < p; b += 2) {
    DenseMat<S> t = theta_of(alpha[static_cast<std::size_t>(b)]);
    g(b, b) = t(0, 0);
    g(b, b + 1) = t(0, 1);
    g(b + 1, b) = t(1, 0);
    g(b + 1, b + 1) = t(1, 1);
  }
  return g;
}

template <class S>
LaurentCoeffs<S> odd_factor(const std::vector<S>& alpha) {
  int p = static_cast<int>(alpha.size());
  const S& last = alpha[static_cast<std::size_t>(p - 1)];
  S rho_last = rho_of(last);

  DenseMat<S> c0(p), cp(p), cm(p);
  c0(0, 0) = -last;
  c0(p - 1, p - 1) = cconj(last);
  for (int b = 1; b + 1 < p - 1; b += 2) {
    DenseMat<S> t = theta_of(alpha[static_cast<std::size_t>(b)]);
    c0(b, b) = t(0, 0);
    c0(b, b + 1) = t(0, 1);
    c0(b + 1, b) = t(1, 0);
    c0(b + 1, b + 1) = t(1, 1);
  }
  cp(0, p - 1) = rho_last;
  cm(p - 1, 0) = rho_last;

  LaurentCoeffs<S> g;
  g.emplace(0, std::move(c0));
  g.emplace(1, std::move(cp));
  g.emplace(-1, std::move(cm));
  return g;
}

template <class S>
LaurentCoeffs<S> assembled_loop(const std::vector<S>& alpha) {
  LaurentCoeffs<S> ge;
  ge.emplace(0, even_factor(alpha));
  return laurent_mul(ge, odd_factor(alpha));
}

// ---------------------------------------------------------------------------
// Transfer matrix and discriminant

template <class S>
DenseMat<S> transfer_matrix(const std::vector<S>& alpha, const cxd& z) {
  if (z == cxd(0.0)) throw DomainError("transfer_matrix: z must be nonzero");
  int p = static_cast<int>(alpha.size());
  DenseMat<S> t = DenseMat<S>::identity(2);
  S prod_rho(1.0);
  for (int j = 0; j < p; ++j) {
    const S& a = alpha[static_cast<std::size_t>(j)];
    prod_rho = prod_rho * rho_of(a);
    DenseMat<S> f(2);
    f(0, 0) = S(z);
    f(0, 1) = -cconj(a);
    f(1, 0) = -a * z;
    f(1, 1) = S(1.0);
    t = f * t;  // factor for index j multiplies on the left
  }
  for (auto& e : t.a) e = e / prod_rho;
  return t;
}

template <class S>
S discriminant(const std::vector<S>& alpha, const cxd& z) {
  int p = static_cast<int>(alpha.size());
  S tr = transfer_matrix(alpha, z).trace();
  return tr * std::pow(z, -p / 2);
}

// ---------------------------------------------------------------------------
// Characteristic polynomial of a {-1,0,1}-supported loop:
//   det(zI - L(h)) = sum_{r,m} c[z^r][h^m] z^r h^m.
// Sampled at h in the 4th roots of unity and z at p+1 Chebyshev points of
// [-2,2]; the fixed node sets make both small solves exact up to roundoff.
// h-index layout: 0 -> h^-1, 1 -> h^0, 2 -> h^1, 3 -> aliased h^2 residual.

template <class S>
struct CharPolyT {
  int p = 0;
  std::vector<std::array<S, 4>> c;  // c[z-power][h-slot]
  double max_out_of_band = 0.0;     // largest |h^2 residual| seen
};

inline std::vector<cxd> chebyshev_nodes(int count) {
  const double pi = 3.14159265358979323846;
  std::vector<cxd> z(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    z[static_cast<std::size_t>(k)] = cxd(2.0 * std::cos(pi * k / (count - 1)), 0.0);
  return z;
}

// Inverse of the Vandermonde on the fixed node set, computed in plain
// complex arithmetic (nodes carry no derivatives).
inline std::vector<std::vector<cxd>> vandermonde_inverse(const std::vector<cxd>& nodes) {
  int n = static_cast<int>(nodes.size());
  std::vector<std::vector<cxd>> m(static_cast<std::size_t>(n),
                                  std::vector<cxd>(static_cast<std::size_t>(2 * n), cxd(0.0)));
  for (int i = 0; i < n; ++i) {
    cxd pw(1.0);
    for (int j = 0; j < n; ++j) {
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = pw;
      pw *= nodes[static_cast<std::size_t>(i)];
    }
    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = cxd(1.0);
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::abs(m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)]);
    for (int r = c + 1; r < n; ++r) {
      double v = std::abs(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
      if (v > best) { best = v; piv = r; }
    }
    std::swap(m[static_cast<std::size_t>(c)], m[static_cast<std::size_t>(piv)]);
    cxd d = m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    for (int j = 0; j < 2 * n; ++j) m[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] /= d;
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      cxd f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (f == cxd(0.0)) continue;
      for (int j = 0; j < 2 * n; ++j)
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -=
            f * m[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
    }
  }
  std::vector<std::vector<cxd>> inv(static_cast<std::size_t>(n),
                                    std::vector<cxd>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          m[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + j)];
  return inv;
}

template <class S>
CharPolyT<S> char_poly_of_loop(const LaurentCoeffs<S>& loop, int p) {
  static const std::array<cxd, 4> h_nodes = {cxd(1, 0), cxd(0, 1), cxd(-1, 0), cxd(0, -1)};
  std::vector<cxd> z_nodes = chebyshev_nodes(p + 1);
  auto vinv = vandermonde_inverse(z_nodes);

  // dets[m][k] = det(z_k I - L(h_m))
  std::vector<std::vector<S>> coef_by_h(4, std::vector<S>(static_cast<std::size_t>(p + 1), S(0.0)));
  for (int m = 0; m < 4; ++m) {
    DenseMat<S> lh = laurent_eval(loop, h_nodes[static_cast<std::size_t>(m)], p);
    std::vector<S> dets(static_cast<std::size_t>(p + 1), S(0.0));
    for (int k = 0; k <= p; ++k) {
      DenseMat<S> a = scaled(DenseMat<S>::identity(p), z_nodes[static_cast<std::size_t>(k)]);
      a = a - lh;
      dets[static_cast<std::size_t>(k)] = det_pivoted(std::move(a));
    }
    // z-coefficients at this h node
    for (int r = 0; r <= p; ++r) {
      S acc(0.0);
      for (int k = 0; k <= p; ++k)
        acc = acc + dets[static_cast<std::size_t>(k)] *
                        vinv[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
      coef_by_h[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)] = acc;
    }
  }

  CharPolyT<S> out;
  out.p = p;
  out.c.assign(static_cast<std::size_t>(p + 1), {S(0.0), S(0.0), S(0.0), S(0.0)});
  // 4-point inverse transform on the unit circle; slot 3 catches the aliased
  // h^2 (= h^-2) coefficient, which must vanish for these loops.
  static const int powers[4] = {-1, 0, 1, 2};
  for (int r = 0; r <= p; ++r) {
    for (int slot = 0; slot < 4; ++slot) {
      S acc(0.0);
      for (int m = 0; m < 4; ++m) {
        cxd w = std::pow(h_nodes[static_cast<std::size_t>(m)], -powers[slot]);
        acc = acc + coef_by_h[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)] * (w * 0.25);
      }
      out.c[static_cast<std::size_t>(r)][static_cast<std::size_t>(slot)] = acc;
      if (slot == 3) {
        double v = cabs(acc);
        if (v > out.max_out_of_band) out.max_out_of_band = v;
      }
    }
  }
  return out;
}

template <class S>
CharPolyT<S> char_poly(const std::vector<S>& alpha) {
  return char_poly_of_loop(assembled_loop(alpha), static_cast<int>(alpha.size()));
}

// ---------------------------------------------------------------------------
// Powers of the assembled loop: L(h)^n = A0 + h A1 + h^-1 Am1 for n <= p/2.

template <class S>
struct PowerTriple {
  DenseMat<S> a0, a1, am1;
  double out_of_band = 0.0;  // mass at |power| >= 2 (should be ~0)
};

template <class S>
PowerTriple<S> floquet_power(const std::vector<S>& alpha, int n) {
  int p = static_cast<int>(alpha.size());
  if (n < 1 || n > p / 2) throw DomainError("floquet_power: need 1 <= n <= p/2");
  LaurentCoeffs<S> e = assembled_loop(alpha);
  LaurentCoeffs<S> acc = e;
  for (int k = 1; k < n; ++k) acc = laurent_mul(acc, e);

  PowerTriple<S> out;
  out.a0 = DenseMat<S>(p);
  out.a1 = DenseMat<S>(p);
  out.am1 = DenseMat<S>(p);
  for (const auto& [j, m] : acc) {
    if (j == 0) out.a0 = m;
    else if (j == 1) out.a1 = m;
    else if (j == -1) out.am1 = m;
    else {
      for (const auto& e2 : m.a) {
        double v = cabs(e2);
        if (v > out.out_of_band) out.out_of_band = v;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Full conserved family

template <class S>
struct InvariantsT {
  S P{0.0};
  std::vector<S> I;  // index j + p/2, j = -p/2..p/2
  std::vector<S> K;  // index n - 1,   n = 1..p/2
};

template <class S>
InvariantsT<S> invariants(const std::vector<S>& alpha) {
  int p = static_cast<int>(alpha.size());
  InvariantsT<S> out;

  out.P = S(1.0);
  for (const auto& a : alpha) out.P = out.P * rho_of(a);

  CharPolyT<S> cp = char_poly(alpha);
  out.I.assign(static_cast<std::size_t>(p + 1), S(0.0));
  for (int j = -p / 2; j <= p / 2; ++j)
    out.I[static_cast<std::size_t>(j + p / 2)] = cp.c[static_cast<std::size_t>(j + p / 2)][1];

  out.K.assign(static_cast<std::size_t>(p / 2), S(0.0));
  for (int n = 1; n <= p / 2; ++n) {
    PowerTriple<S> pw = floquet_power(alpha, n);
    S tr = pw.a0.trace();
    double w = (n == p / 2) ? 2.0 / p : 1.0 / n;
    out.K[static_cast<std::size_t>(n - 1)] = tr * w;
  }
  return out;
}

}  // namespace cmvflows::detail
