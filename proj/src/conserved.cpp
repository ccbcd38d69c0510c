#include "cmvflows/conserved.hpp"

#include <cmath>

#include "cmvflows/detail/core.hpp"
#include "cmvflows/errors.hpp"

namespace cmvflows {

namespace {

detail::LaurentCoeffs<cxd> from_laurent(const LaurentMatrix& l) {
  detail::LaurentCoeffs<cxd> c;
  for (const auto& [j, m] : l.coeffs()) {
    detail::DenseMat<cxd> d(l.size());
    for (int i = 0; i < l.size(); ++i)
      for (int k = 0; k < l.size(); ++k) d(i, k) = m(i, k);
    c.emplace(j, std::move(d));
  }
  return c;
}

CharPoly pack(const detail::CharPolyT<cxd>& t) {
  CharPoly out;
  out.p = t.p;
  out.max_out_of_band = t.max_out_of_band;
  static const int powers[3] = {-1, 0, 1};
  for (int r = 0; r <= t.p; ++r)
    for (int s = 0; s < 3; ++s) {
      cxd v = t.c[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
      if (std::abs(v) > kCoeffEps) out.c[{r, powers[s]}] = v;
    }
  return out;
}

}  // namespace

cxd CharPoly::eval(const cxd& z, const cxd& h) const {
  cxd acc(0.0);
  for (const auto& [key, v] : c) acc += v * std::pow(z, key.first) * std::pow(h, key.second);
  return acc;
}

Eigen::Matrix2cd transfer_matrix(const VerblunskyVector& v, const cxd& z) {
  detail::DenseMat<cxd> t = detail::transfer_matrix(v.alpha(), z);
  Eigen::Matrix2cd m;
  m << t(0, 0), t(0, 1), t(1, 0), t(1, 1);
  return m;
}

cxd discriminant(const VerblunskyVector& v, const cxd& z) {
  if (z == cxd(0.0)) throw DomainError("discriminant: z must be nonzero");
  return detail::discriminant(v.alpha(), z);
}

CharPoly char_poly(const VerblunskyVector& v) {
  return pack(detail::char_poly(v.alpha()));
}

CharPoly char_poly_loop(const LaurentMatrix& loop) {
  return pack(detail::char_poly_of_loop(from_laurent(loop), loop.size()));
}

ConservedSet invariants(const VerblunskyVector& v) {
  detail::InvariantsT<cxd> t = detail::invariants(v.alpha());
  ConservedSet out;
  out.p = v.p();
  out.P = t.P.real();
  out.I = t.I;
  out.K = t.K;
  return out;
}

double conserved_drift(const ConservedSet& from, const ConservedSet& to) {
  double d = std::abs(from.P - to.P);
  for (std::size_t i = 0; i < from.I.size(); ++i) d = std::max(d, std::abs(from.I[i] - to.I[i]));
  for (std::size_t i = 0; i < from.K.size(); ++i) d = std::max(d, std::abs(from.K[i] - to.K[i]));
  return d;
}

}  // namespace cmvflows
