#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cdo/algebroid.hpp"
#include "cdo/qseries.hpp"

namespace cdo {

// one creation variable: a_{i,-level} (kind A, level >= 1) or b^i_{-level} (kind B, level >= 1)
enum class Osc { A = 0, B = 1 };

constexpr int kOscDim = 8;

// Fock state of the beta-gamma system: polynomial in the creation variables with
// coefficients in the functions of b_0 (conjugate variables ride along as scalars)
class BGState {
 public:
  using Key = std::string;  // exponent per slot, trailing zeros trimmed

  BGState() = default;
  static BGState vacuum() { return function(SmoothPoly(1)); }
  static BGState function(const SmoothPoly& f);
  static BGState osc(Osc kind, int i, int level, const SmoothPoly& f = SmoothPoly(1));
  // s(X) = a_{i,-1} X^i and alpha_k db^k -> b^k_{-1} alpha_k
  static BGState from_field(const VField& X);
  static BGState from_form(const PQForm& w);

  static int slot(Osc kind, int i, int level) { return ((level - 1) * kOscDim + (i - 1)) * 2 + static_cast<int>(kind); }
  static int key_weight(const Key& k);
  static int key_exp(const Key& k, int slot) { return slot < static_cast<int>(k.size()) ? k[slot] : 0; }

  const std::map<Key, SmoothPoly>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int max_weight() const;  // -1 for zero
  BGState weight_part(int w) const;
  SmoothPoly coeff(const Key& k) const;
  SmoothPoly vacuum_coeff() const { return coeff(Key()); }

  BGState operator-() const;
  BGState& operator+=(const BGState& o);
  BGState& operator-=(const BGState& o);
  friend BGState operator+(BGState a, const BGState& b) { return a += b; }
  friend BGState operator-(BGState a, const BGState& b) { return a -= b; }
  friend BGState operator*(const SmoothPoly& f, const BGState& s);
  friend BGState operator*(const GaussRat& c, const BGState& s);
  friend bool operator==(const BGState& a, const BGState& b) { return a.t_ == b.t_; }
  friend bool operator!=(const BGState& a, const BGState& b) { return !(a == b); }

  // commutative product of the Fock polynomial ring (creation operators acting on each other)
  BGState mul(const BGState& o) const;

  // weight-one states split into a vector field (a_{i,-1} part) and a (1,0)-form (b_{-1} part)
  VField field_part(int d) const;
  PQForm form_part() const;  // throws DomainError if anything else is present

  std::string str() const;  // "a(1,-1) b(2,-2) [f]" terms joined by " + "
  static std::string key_str(const Key& k);

  void add(const Key& k, const SmoothPoly& c);

 private:
  std::map<Key, SmoothPoly> t_;
};

struct Mode {
  Osc kind;
  int i;
  int n;
  std::string str() const;
};

// every operation checks results against the weight cap and throws OverflowError
class BetaGamma {
 public:
  explicit BetaGamma(int d, int cap = 4);
  int dim() const { return d_; }
  int cap() const { return cap_; }

  BGState apply_mode(const Mode& m, const BGState& s) const;
  BGState nth_product(const BGState& u, int n, const BGState& v) const;
  BGState translation(const BGState& s) const;           // T, the derivation with T|0> = 0
  BGState translation_power(const BGState& s, int k) const;  // T^k / k!

  BGState nu() const;  // sum a_{i,-1} b^i_{-1}
  BGState virasoro(int m, const BGState& s) const { return nth_product(nu(), m + 1, s); }
  Q central_charge() const;  // 2 * vacuum coefficient of nu_(3) nu

  // random homogeneous state with holomorphic coefficients
  BGState random_state(Rng& rng, int weight, const RandomSpec& spec) const;
  std::vector<BGState> basis_monomials(int weight) const;  // constant-coefficient monomials

 private:
  void check(const BGState& s) const;
  int d_, cap_;
};

// phi^*_xi: D(V) -> D(U) on weight <= cap
class PhiXi {
 public:
  PhiXi(const BetaGamma& bg, const PolyBiholo& phi, const PQForm& xi);  // checks d xi = WZ
  const BGState& image_a(int i) const { return a_img_.at(i - 1); }
  BGState operator()(const BGState& s) const;

 private:
  const BGState& osc_image(Osc kind, int i, int level) const;
  const BetaGamma& bg_;
  PolyBiholo phi_;
  std::vector<BGState> a_img_;
  mutable std::map<int, BGState> cache_;
};

BGState phi_xi_hom(const BetaGamma& bg, const PolyBiholo& phi, const PQForm& xi, const BGState& s);

struct HomReport {
  int pairs = 0;
  int products = 0;
  bool conformal_preserved = false;  // Phi(nu) == nu
  bool conformal_predicate = false;  // Tr theta == 0
  std::vector<std::string> failures;
  bool ok() const { return failures.empty() && conformal_preserved == conformal_predicate; }
  std::string summary() const;
};
HomReport hom_check(const PolyBiholo& phi, const PQForm& xi, int K, int trials, std::uint64_t seed);

struct BridgeReport {
  SmoothPoly voa_b0, alg_b0;
  PQForm voa_b1, alg_b1;
  std::vector<std::pair<PQForm, PQForm>> star;  // (voa, algebroid) for f = X^1 .. sampled
  bool ok() const;
};
// {X,Y}_0 = s(X)_(1) s(Y), {X,Y}_1 = s(X)_(0) s(Y) - s([X,Y]), f*X = f_(-1) s(X) - s(fX)
BridgeReport algebroid_bridge(const VField& X, const VField& Y, const SmoothPoly& f = SmoothPoly());

// graded dimension of the constant-coefficient oscillator sector, weights 0..K
QSeries oscillator_character(int d, int K);

struct SkewReport {
  int checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
// u_(n) v = sum_k (-1)^(n+k+1) T^k/k! (v_(n+k) u)
SkewReport skew_symmetry_check(const BetaGamma& bg, int trials, std::uint64_t seed, int max_weight);

}  // namespace cdo
