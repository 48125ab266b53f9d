#pragma once
#include <map>
#include <string>
#include <vector>

#include "cdo/num.hpp"

namespace cdo {

// Polynomial in b^1..b^d and their conjugates B^1..B^d over the Gaussian rationals.
// Exponent strings interleave (b1, B1, b2, B2, ...) and drop trailing zeros, so a
// polynomial does not carry its dimension.
class SmoothPoly {
 public:
  using Mono = std::string;

  SmoothPoly() = default;
  SmoothPoly(long c);
  SmoothPoly(const Q& c);
  SmoothPoly(const GaussRat& c);
  static SmoothPoly var(int i, bool bar = false);  // i is 1-based
  static SmoothPoly monomial(const Mono& m, const GaussRat& c);
  static int slot(int i, bool bar) { return 2 * (i - 1) + (bar ? 1 : 0); }

  const std::map<Mono, GaussRat>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;
  GaussRat constant_term() const;
  bool is_holomorphic() const;
  int degree() const;
  int hol_degree_max() const;
  int max_index() const;  // largest i with b^i or B^i present

  SmoothPoly operator-() const;
  SmoothPoly& operator+=(const SmoothPoly& o);
  SmoothPoly& operator-=(const SmoothPoly& o);
  SmoothPoly& operator*=(const GaussRat& c);
  friend SmoothPoly operator+(SmoothPoly a, const SmoothPoly& b) { return a += b; }
  friend SmoothPoly operator-(SmoothPoly a, const SmoothPoly& b) { return a -= b; }
  friend SmoothPoly operator*(const SmoothPoly& a, const SmoothPoly& b);
  friend SmoothPoly operator*(SmoothPoly a, const GaussRat& c) { return a *= c; }
  friend SmoothPoly operator*(const GaussRat& c, SmoothPoly a) { return a *= c; }
  friend bool operator==(const SmoothPoly& a, const SmoothPoly& b) { return a.t_ == b.t_; }
  friend bool operator!=(const SmoothPoly& a, const SmoothPoly& b) { return !(a == b); }

  SmoothPoly pow(int e) const;
  SmoothPoly d_hol(int i) const;
  SmoothPoly d_bar(int i) const;
  SmoothPoly conj() const;
  // b^i -> hol[i-1], B^i -> bar[i-1]
  SmoothPoly subst(const std::vector<SmoothPoly>& hol, const std::vector<SmoothPoly>& bar) const;
  // keep only terms whose (hol, bar) degree satisfies pred
  template <class F>
  SmoothPoly filter(F pred) const {
    SmoothPoly r;
    for (auto& [m, c] : t_)
      if (pred(m)) r.t_.emplace(m, c);
    return r;
  }

  std::string str() const;

  static int exp(const Mono& m, int slot) { return slot < static_cast<int>(m.size()) ? m[slot] : 0; }
  static int hol_degree(const Mono& m);
  static int bar_degree(const Mono& m);

 private:
  void add(const Mono& m, const GaussRat& c);
  std::map<Mono, GaussRat> t_;
};

std::string mono_str(const SmoothPoly::Mono& m);

}  // namespace cdo
