#pragma once
#include <cstdint>
#include <random>

#include "cdo/forms.hpp"

namespace cdo {

// reproducible across platforms: only raw mt19937_64 output is used
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  long range(long lo, long hi) { return lo + static_cast<long>(g_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool coin(int num = 1, int den = 2) { return range(0, den - 1) < num; }

 private:
  std::mt19937_64 g_;
};

struct RandomSpec {
  int degree = 3;
  int height = 5;     // coefficients in [-height, height]
  int max_terms = 4;  // number of monomials drawn
  bool smooth = false;
  bool gaussian = false;
};

SmoothPoly random_poly(Rng& rng, int d, const RandomSpec& spec = {});
VField random_field(Rng& rng, int d, const RandomSpec& spec = {});
// random form with the given (p, q) type
PQForm random_form(Rng& rng, int d, int p, int q, const RandomSpec& spec = {});

}  // namespace cdo
