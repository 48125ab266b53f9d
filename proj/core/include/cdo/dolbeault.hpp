#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cdo/cech.hpp"
#include "cdo/voa.hpp"

namespace cdo {

// a vector field with (0,q)-form coefficients: sum_k d/db^k (x) c[k]
struct FieldForm {
  std::vector<PQForm> c;

  FieldForm() = default;
  explicit FieldForm(int d) : c(d) {}
  explicit FieldForm(const VField& X);
  static FieldForm of(const VField& X, const PQForm& w);  // X (x) w, w of type (0,q)
  int dim() const { return static_cast<int>(c.size()); }
  bool is_zero() const;
  // coefficient fields X_J of d b-bar^J
  std::map<Mask, VField> split() const;
  static FieldForm join(int d, const std::map<Mask, VField>& parts);

  FieldForm operator-() const;
  FieldForm& operator+=(const FieldForm& o);
  FieldForm& operator-=(const FieldForm& o);
  friend FieldForm operator+(FieldForm a, const FieldForm& b) { return a += b; }
  friend FieldForm operator-(FieldForm a, const FieldForm& b) { return a -= b; }
  friend bool operator==(const FieldForm& a, const FieldForm& b) { return a.c == b.c; }
  friend bool operator!=(const FieldForm& a, const FieldForm& b) { return !(a == b); }
  std::string str() const;
};

FieldForm pull_value(const PolyBiholo& phi, const FieldForm& X);
inline bool value_zero(const FieldForm& x) { return x.is_zero(); }
template <>
inline FieldForm value_zero_of<FieldForm>(int d) { return FieldForm(d); }

// Dolbeault operators acting on the (0,*) factor
PQForm dbar_functions(const PQForm& w);  // (0,q) -> (0,q+1)
PQForm dbar_one_forms(const PQForm& w);  // alpha (x) omega -> alpha (x) dbar omega, on (1,q)
FieldForm dbar_fields(const FieldForm& X);

// ---- connection and B data on a nerve ----

struct ConnectionData {
  std::vector<MatForm> gamma;  // per chart, entries (1,0)-forms

  static ConnectionData propagate(const Nerve& N, const MatForm& gamma0);
  MatForm R(int chart) const { return curvature(gamma.at(chart)); }
  // transition law on every pair, (1,0) type, vanishing (0,2) curvature
  std::vector<std::string> check(const Nerve& N) const;
};

struct BData {
  std::vector<PQForm> B;  // per chart (2,0)-forms

  // B_0 given, B_b solved along phi_{b0}; drop_theta_gamma is the mutation that omits Tr(theta^Gamma)
  static BData solve(const Nerve& N, const ConnectionData& c, const PQForm& B0, bool drop_theta_gamma = false);
  // phi^* B_b - B_a - xi_ba - Tr(theta_ba ^ Gamma_a) on every pair
  std::vector<std::string> check(const Nerve& N, const ConnectionData& c) const;
};

struct HForm {
  std::vector<PQForm> H;  // per-chart representative dB - CS(Gamma)

  static HForm build(const ConnectionData& c, const BData& b);
  // gluing, no (1,2) or (0,3) part, dH = -Tr(R^R)
  std::vector<std::string> check(const Nerve& N, const ConnectionData& c) const;
};

// Gamma = h^{-1} dh for a matrix h of functions with constant determinant; its curvature is of type (1,1)
MatForm chern_type_connection(const MatForm& h);
bool curvature_is_11(const MatForm& gamma);

// ---- one chart ----

struct LocalModel {
  MatForm gamma;  // (1,0) connection forms
  PQForm B;       // (2,0)
  int dim() const { return gamma.n(); }
  PQForm H() const;  // dB - CS(Gamma)
  static LocalModel flat(int d) { return {MatForm(d), PQForm()}; }
};

// h(Y) = d_i Y^j Gamma^i_j + 1/2 Tr[Gamma(Y) Gamma] - 1/2 iota_Y B
PQForm h_local(const MatForm& gamma, const PQForm& B, const VField& Y);
PQForm h_local(const LocalModel& m, const FieldForm& Y);  // extended by h(X (x) w) = h(X) ^ w

CheckReport check_h_equation(const Nerve& N, const ConnectionData& c, const BData& b, int trials, std::uint64_t seed,
                             RandomSpec spec = {});

// bar operators from h: Delta-bar = -(dbar h - h dbar), the others by the twisted formulas
PQForm bar_delta(const LocalModel& m, const FieldForm& X);
// the Dolbeault degree zero formula, summed over d b-bar^i
PQForm bar_delta_degree0(const LocalModel& m, const VField& X);
PQForm bar_star(const LocalModel& m, const PQForm& f, const FieldForm& X);
PQForm bar_bracket0(const LocalModel& m, const FieldForm& X, const FieldForm& Y);
PQForm bar_bracket1(const LocalModel& m, const FieldForm& X, const FieldForm& Y);

struct BarOps {
  PQForm delta, star, bracket0, bracket1;
};
BarOps bar_operators(const LocalModel& m, const PQForm& f, const FieldForm& X, const FieldForm& Y);

// a frame e_i = E^k_i d/db^k with polynomial inverse (constant nonzero determinant)
class Frame {
 public:
  static Frame coordinate(int d);
  explicit Frame(const MatForm& E);  // throws DomainError when not invertible
  int dim() const { return E_.n(); }
  VField e(int i) const;                      // 0-based
  std::vector<SmoothPoly> ebar(int i) const;  // conjugate field, components on d/d b-bar^k
  PQForm dual(int i) const;                   // e^i
  PQForm dual_bar(int i) const;               // conjugate of e^i

 private:
  MatForm E_, Einv_;
};

// (nabla-tilde X)^i_k = d_k X^i + Gamma^i_k(X), torsion T(X,Y) = nabla_X Y - nabla_Y X - [X,Y]
MatForm nabla_tilde(const MatForm& gamma, const VField& X);
VField nabla(const MatForm& gamma, const VField& V, const VField& X);

// the bracket1 formula presumes curvature of type (1,1); see curvature_is_11
BarOps invariant_formulas(const MatForm& gamma, const PQForm& H, const Frame& frame, const SmoothPoly& f,
                          const VField& X, const VField& Y);

// ---- weight <= 1 sections and the deformed Dolbeault operator ----

struct Section {
  int weight = 0;
  PQForm form;  // weight 0: (0,q) function form; weight 1: (1,q) form alpha
  FieldForm X;  // weight 1 only
  bool is_zero() const { return form.is_zero() && X.is_zero(); }
  friend bool operator==(const Section& a, const Section& b) {
    return a.weight == b.weight && a.form == b.form && a.X == b.X;
  }
  std::string str() const;
};

// (alpha, X) -> (dbar alpha + Delta-bar X, dbar X); weight 0 is plain dbar
Section deformed_dolbeault(const LocalModel& m, const Section& s);
struct SquareZeroReport {
  int cases = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty() && cases > 0; }
};
// (dbar^ch)^2 = 0 on random smooth sections of weight 0 and 1
SquareZeroReport square_zero_check(const LocalModel& m, int trials, std::uint64_t seed);
// primitive of a closed section of positive Dolbeault degree, via the two-step filtration
Section exact_primitive(const LocalModel& m, const Section& closed);

struct ExactnessReport {
  int cases = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty() && cases > 0; }
  std::string summary() const;
};
ExactnessReport local_exactness_check(const LocalModel& m, int max_weight, int degree_bound, int trials,
                                      std::uint64_t seed);

// ---- isomorphism conditions between the H and H' models ----

struct IsoReport {
  std::vector<std::string> condition_failures;  // the four conditions
  std::vector<std::string> reduced_failures;    // the two reduced equations
  bool conditions_ok() const { return condition_failures.empty(); }
  bool reduced_ok() const { return reduced_failures.empty(); }
  bool agree() const { return conditions_ok() == reduced_ok(); }
  std::string summary() const;
};
// beta(X) = iota_X beta_tilde
IsoReport iso_conditions_check(const MatForm& gamma, const PQForm& H, const PQForm& H2, const PQForm& beta_tilde,
                               int trials, std::uint64_t seed);

// ---- Cech-Dolbeault cochains ----

Cochain<PQForm> cd_dbar_functions(const Cochain<PQForm>& c);
Cochain<PQForm> cd_dbar_one_forms(const Cochain<PQForm>& c);
Cochain<FieldForm> cd_dbar_fields(const Cochain<FieldForm>& c);
// elements of the total complex, keyed by Cech degree (the Dolbeault degree lives in the values)
template <class T>
using TotalCochain = std::map<int, Cochain<T>>;

template <class T>
TotalCochain<T> total_of(const Cochain<T>& c) {
  return {{c.p, c}};
}

template <class T>
void total_accumulate(const Nerve& N, TotalCochain<T>& acc, const Cochain<T>& c, int sign = 1) {
  auto it = acc.find(c.p);
  if (it == acc.end()) {
    Cochain<T> z{c.p, {}};
    acc[c.p] = cochain_add(N, z, c, sign);
  } else {
    it->second = cochain_add(N, it->second, c, sign);
  }
}

template <class T>
bool total_zero(const TotalCochain<T>& c) {
  for (auto& [p, x] : c)
    if (!cochain_zero(x)) return false;
  return true;
}

// D = delta + (-1)^p dbar
template <class T, class F>
TotalCochain<T> total_d(const Nerve& N, const TotalCochain<T>& c, F dbar) {
  TotalCochain<T> r;
  for (auto& [p, x] : c) {
    total_accumulate(N, r, cech_differential(N, x));
    total_accumulate(N, r, cochain_map(x, dbar), p % 2 ? -1 : 1);
  }
  return r;
}

// (Delta-check X)_{0..p+1} = Delta_10(X_{1..p+1,I}) (x) d phi-bar_10^I
Cochain<PQForm> cd_delta(const Nerve& N, const Cochain<FieldForm>& X);
Cochain<PQForm> cd_star(const Nerve& N, const Cochain<PQForm>& f, const Cochain<FieldForm>& X);
// h on cochains with the first chart's h_0; Delta-bar on cochains is (-1)^p times the local operator
Cochain<PQForm> cd_h(const Nerve& N, const ConnectionData& c, const BData& b, const Cochain<FieldForm>& X);
Cochain<PQForm> cd_bar_delta(const Nerve& N, const ConnectionData& c, const BData& b, const Cochain<FieldForm>& X);

Cochain<FieldForm> random_fieldform_cochain(const Nerve& N, Rng& rng, int p, int q, const RandomSpec& spec);
Cochain<PQForm> random_form_cochain(const Nerve& N, Rng& rng, int p, int hol, int q, const RandomSpec& spec);

struct CechDolbeaultReport {
  std::vector<std::string> checked;
  std::vector<std::string> failures;
  int instances = 0;
  bool ok() const { return failures.empty(); }
  std::string summary() const;
};
// D^2 = 0, D Delta-check + Delta-check D = 0, Delta-check - Delta-bar = Dh - hD, delta-equivariance of Delta-bar,
// and agreement with the Cech maps in Dolbeault degree 0
CechDolbeaultReport cech_dolbeault_check(const Nerve& N, const ConnectionData& c, const BData& b, int trials,
                                         std::uint64_t seed);

// ---- conformal structure ----

struct ConformalReport {
  bool trace_glues = false;     // phi^* Tr Gamma_b = Tr Gamma_a
  bool dA_is_trR = false;       // d Tr Gamma = Tr R on every chart
  bool nu_image = false;        // image of nu equals sum X-bar_{-1} db + 1/2 Tr[Gamma_{-1} Gamma]
  bool dbar_nu = false;         // dbar^ch nu = 0
  bool ope_function = false;    // L(z) f(w) ~ d f / (z-w)
  bool ope_field = false;       // poles of L(z) X(w)
  std::vector<std::string> failures;
  bool ok() const { return trace_glues && dA_is_trR && nu_image && dbar_nu && ope_function && ope_field; }
  std::string summary() const;
};
// X-bar realised inside the smooth beta-gamma model as X - h(X)
BGState bar_generator(const BetaGamma& bg, const LocalModel& m, const VField& X);
ConformalReport conformal_suite(const Nerve& N, const ConnectionData& c, const BData& b, int trials,
                                std::uint64_t seed);

}  // namespace cdo
