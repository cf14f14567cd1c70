#pragma once

#include "tsvf/hilbert.hpp"

namespace tsvf::detail {

/// Applies the d x d matrix `a` to tensor factor `site` of a state made of
/// `sites` factors of dimension d each (row-major, site 0 slowest).
inline Vector apply_site(const Matrix& a, const Vector& psi, Index d, Index sites, Index site) {
  Index stride = 1;
  for (Index s = site + 1; s < sites; ++s) stride *= d;
  const Index block = stride * d;
  Vector out = Vector::Zero(psi.size());
  for (Index base = 0; base < psi.size(); base += block) {
    for (Index low = 0; low < stride; ++low) {
      for (Index r = 0; r < d; ++r) {
        Complex acc(0.0, 0.0);
        for (Index c = 0; c < d; ++c) acc += a(r, c) * psi[base + c * stride + low];
        out[base + r * stride + low] = acc;
      }
    }
  }
  return out;
}

}  // namespace tsvf::detail
