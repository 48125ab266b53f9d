#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cdo/algebroid.hpp"

namespace cdo {

using Simplex = std::vector<int>;  // strictly increasing chart indices
std::string simplex_str(const Simplex& s);

// charts 0..n-1 of one dimension; values on a simplex live in the coordinates of its first chart
class Nerve {
 public:
  Nerve(int d, std::vector<std::string> names);
  // transition phi_{beta alpha} from chart alpha to chart beta (alpha < beta) with its 2-form
  void set_pair(int beta, int alpha, const PolyBiholo& phi, const PQForm& xi);
  void declare(const Simplex& s);       // adds all faces too
  void declare_all();                   // every nonempty subset
  // chart maps psi_b from chart 0 to chart b (psi_0 = id); xi_{b0} given, the rest solved from the triple gluing condition
  static Nerve from_charts(const std::vector<PolyBiholo>& psi, const std::vector<PQForm>& xi0,
                           std::vector<std::string> names = {});

  int dim() const { return d_; }
  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  int index_of(const std::string& name) const;  // -1 if unknown
  const std::set<Simplex>& simplices() const { return simp_; }
  std::vector<Simplex> simplices(int p) const;
  bool has(const Simplex& s) const { return simp_.count(s) > 0; }
  bool has_pair(int beta, int alpha) const { return phi_.count({beta, alpha}) > 0; }

  const PolyBiholo& phi(int beta, int alpha) const;  // identity when beta == alpha
  const PQForm& xi(int beta, int alpha) const;
  const MatForm& theta(int beta, int alpha) const;
  const PQForm& wz(int beta, int alpha) const;
  PQForm sigma(int gamma, int beta, int alpha) const;  // sigma_{phi_gb, phi_ba}
  PQForm delta(int beta, int alpha, const VField& X) const;  // Delta_{beta alpha}: fields on beta -> forms on alpha

  // d xi = WZ on every pair, face closure, and phi_ga = phi_gb o phi_ba on declared triples
  std::vector<std::string> validate() const;

 private:
  int d_;
  std::vector<std::string> names_;
  std::set<Simplex> simp_;
  std::map<std::pair<int, int>, PolyBiholo> phi_;
  std::map<std::pair<int, int>, PQForm> xi_;
  mutable std::map<std::pair<int, int>, ThetaWZ> tw_;
  PolyBiholo id_;
  PQForm zero_;
  MatForm zero_mat_;
};

template <class T>
struct Cochain {
  int p = 0;
  std::map<Simplex, T> v;
};

// value helpers per module type
inline bool value_zero(const SmoothPoly& x) { return x.is_zero(); }
inline bool value_zero(const PQForm& x) { return x.is_zero(); }
inline bool value_zero(const VField& x) { return x.is_zero(); }
template <class T>
T value_zero_of(int d);
template <>
inline SmoothPoly value_zero_of<SmoothPoly>(int) { return SmoothPoly(); }
template <>
inline PQForm value_zero_of<PQForm>(int) { return PQForm(); }
template <>
inline VField value_zero_of<VField>(int d) { return VField(d); }

inline SmoothPoly pull_value(const PolyBiholo& phi, const SmoothPoly& x) { return phi.pull(x); }
inline PQForm pull_value(const PolyBiholo& phi, const PQForm& x) { return phi.pull(x); }
inline VField pull_value(const PolyBiholo& phi, const VField& x) { return phi.pull(x); }

// value on s, restricted from the face beginning at chart `from`
template <class T>
T restrict_to(const Nerve& N, const T& x, int from, int to) {
  if (from == to) return x;
  return pull_value(N.phi(from, to), x);
}

template <class T>
T cochain_at(const Nerve& N, const Cochain<T>& c, const Simplex& s) {
  auto it = c.v.find(s);
  return it == c.v.end() ? value_zero_of<T>(N.dim()) : it->second;
}

template <class T>
void cochain_set(Cochain<T>& c, const Simplex& s, const T& x) {
  if (value_zero(x))
    c.v.erase(s);
  else
    c.v[s] = x;
}

template <class T>
Cochain<T> cochain_add(const Nerve& N, const Cochain<T>& a, const Cochain<T>& b, int sign = 1) {
  if (a.p != b.p) throw DomainError("adding cochains of different degree");
  Cochain<T> r{a.p, {}};
  for (auto& s : N.simplices(a.p)) {
    T x = cochain_at(N, a, s);
    T y = cochain_at(N, b, s);
    cochain_set(r, s, sign > 0 ? T(x + y) : T(x - y));
  }
  return r;
}

template <class T>
bool cochain_zero(const Cochain<T>& c) {
  for (auto& [s, x] : c.v)
    if (!value_zero(x)) return false;
  return true;
}

template <class T>
bool cochain_equal(const Nerve& N, const Cochain<T>& a, const Cochain<T>& b) {
  return a.p == b.p && cochain_zero(cochain_add(N, a, b, -1));
}

template <class T, class F>
auto cochain_map(const Cochain<T>& a, F f) {
  Cochain<decltype(f(std::declval<T>()))> r{a.p, {}};
  for (auto& [s, x] : a.v) cochain_set(r, s, f(x));
  return r;
}

template <class T>
Cochain<T> cech_differential(const Nerve& N, const Cochain<T>& c) {
  Cochain<T> r{c.p + 1, {}};
  for (auto& s : N.simplices(c.p + 1)) {
    T acc = value_zero_of<T>(N.dim());
    for (size_t i = 0; i < s.size(); ++i) {
      Simplex face = s;
      face.erase(face.begin() + static_cast<long>(i));
      auto it = c.v.find(face);
      if (it == c.v.end()) continue;
      T x = restrict_to(N, it->second, face[0], s[0]);
      if (i % 2)
        acc = acc - x;
      else
        acc = acc + x;
    }
    cochain_set(r, s, acc);
  }
  return r;
}

// Eilenberg-Zilber: (a x b)_{0..p+q} = a_{0..p} op r(b_{p..p+q})
template <class A, class B, class F>
auto ez_product(const Nerve& N, const Cochain<A>& a, const Cochain<B>& b, F op) {
  using R = decltype(op(std::declval<A>(), std::declval<B>()));
  Cochain<R> r{a.p + b.p, {}};
  for (auto& s : N.simplices(a.p + b.p)) {
    Simplex front(s.begin(), s.begin() + a.p + 1), back(s.begin() + a.p, s.end());
    auto ia = a.v.find(front);
    auto ib = b.v.find(back);
    if (ia == a.v.end() || ib == b.v.end()) continue;
    cochain_set(r, s, op(ia->second, restrict_to(N, ib->second, back[0], s[0])));
  }
  return r;
}

// the cup product of function cochains
Cochain<SmoothPoly> ez_mul(const Nerve& N, const Cochain<SmoothPoly>& a, const Cochain<SmoothPoly>& b);

struct GluingReport {
  std::vector<std::string> assoc_failures;     // triple + residual
  std::vector<std::string> conformal_failures; // pair + Tr theta
  int triples = 0, pairs = 0;
  bool ok() const { return assoc_failures.empty() && conformal_failures.empty(); }
  std::string summary() const;
};
GluingReport check_gluing(const Nerve& N);

struct Obstructions {
  Cochain<PQForm> assoc;      // degree 2
  Cochain<PQForm> conformal;  // degree 1
  bool assoc_closed = false, conformal_closed = false;      // delta-closed
  bool assoc_entries_closed = false, conformal_entries_closed = false;  // d-closed entries
};
Obstructions obstruction_cocycles(const Nerve& N);

// the Cech structure maps of the homotopy dg vertex algebroid
Cochain<PQForm> cech_delta(const Nerve& N, const Cochain<VField>& X);
Cochain<PQForm> cech_star(const Nerve& N, const Cochain<SmoothPoly>& f, const Cochain<VField>& X);
Cochain<SmoothPoly> cech_bracket0(const Nerve& N, const Cochain<VField>& X, const Cochain<VField>& Y);
Cochain<PQForm> cech_bracket1(const Nerve& N, const Cochain<VField>& X, const Cochain<VField>& Y);

struct CechMaps {
  Cochain<PQForm> delta, star, bracket1;
  Cochain<SmoothPoly> bracket0;
};
CechMaps cech_structure_maps(const Nerve& N, const Cochain<VField>& X, const Cochain<VField>& Y,
                             const Cochain<SmoothPoly>& f);

// random cochains with holomorphic polynomial values
Cochain<SmoothPoly> random_function_cochain(const Nerve& N, Rng& rng, int p, const RandomSpec& spec);
Cochain<VField> random_field_cochain(const Nerve& N, Rng& rng, int p, const RandomSpec& spec);

struct DgReport {
  std::vector<std::string> checked;
  std::vector<std::string> failures;  // equation, degrees, simplex
  int instances = 0;
  bool ok() const { return failures.empty(); }
  std::string summary() const;
};
// delta_sign = -1 flips the sign of Delta-check (mutation)
DgReport homotopy_dg_check(const Nerve& N, int trials, std::uint64_t seed, int delta_sign = 1);

struct ArrowResult {
  std::string arrow;
  bool ok = false;
  std::string witness;  // first failing simplex with residual
};
struct StaircaseReport {
  bool gamma_law = false;
  std::vector<ArrowResult> arrows;
  int sigma_sign = 0;  // sign of sigma that makes the corner arrow close (0: neither, 2: both)
  bool ok() const;
  std::string summary() const;
};
// Gamma: per-chart matrix (1,0)-forms
StaircaseReport staircase_check(const Nerve& N, const std::vector<MatForm>& gamma);
// Gamma_b from Gamma_0 by the transition law along phi_{b0}
std::vector<MatForm> propagate_gamma(const Nerve& N, const MatForm& gamma0);
// residual of g^{-1} phi^* Gamma_b g - Gamma_a + theta_{ba}
MatForm gamma_law_residual(const Nerve& N, const std::vector<MatForm>& gamma, int beta, int alpha);

// the three-chart d = 2 nerve used throughout the checks: phi_10 = (b1, b2 + b1^2), phi_21 = (b1 + b2^2, b2)
Nerve shear_nerve(int charts = 3);

}  // namespace cdo
