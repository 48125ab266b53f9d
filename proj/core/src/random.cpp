#include "cdo/random.hpp"

#include <algorithm>
#include <vector>

namespace cdo {

namespace {
std::vector<int> random_subset(Rng& rng, int d, int k) {
  std::vector<int> idx;
  for (int i = 1; i <= d; ++i) idx.push_back(i);
  for (int i = d - 1; i > 0; --i) std::swap(idx[i], idx[rng.range(0, i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}
}  // namespace

SmoothPoly random_poly(Rng& rng, int d, const RandomSpec& spec) {
  SmoothPoly p;
  int n = static_cast<int>(rng.range(1, spec.max_terms));
  for (int t = 0; t < n; ++t) {
    int deg = static_cast<int>(rng.range(0, spec.degree));
    SmoothPoly m(1);
    for (int k = 0; k < deg; ++k) {
      int i = static_cast<int>(rng.range(1, d));
      bool bar = spec.smooth && rng.coin();
      m = m * SmoothPoly::var(i, bar);
    }
    long re = rng.range(-spec.height, spec.height);
    long im = spec.gaussian ? rng.range(-spec.height, spec.height) : 0;
    p += m * GaussRat(Q(re), Q(im));
  }
  return p;
}

VField random_field(Rng& rng, int d, const RandomSpec& spec) {
  VField X(d);
  for (int i = 0; i < d; ++i)
    if (rng.coin(2, 3)) X[i] = random_poly(rng, d, spec);
  return X;
}

PQForm random_form(Rng& rng, int d, int p, int q, const RandomSpec& spec) {
  if (p > d || q > d) throw DomainError("form type exceeds dimension");
  PQForm w;
  int n = static_cast<int>(rng.range(1, 3));
  for (int t = 0; t < n; ++t)
    w += PQForm::term(PQForm::mask_of(random_subset(rng, d, p), random_subset(rng, d, q)), random_poly(rng, d, spec));
  return w;
}

}  // namespace cdo
