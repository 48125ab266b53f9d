#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cdo/poly.hpp"

namespace cdo {

// bit i-1 marks db^i, bit 16+i-1 marks db-bar^i; basis order puts all db before all db-bar
using Mask = std::uint32_t;
constexpr int kMaxDim = 16;
inline Mask hol_bit(int i) { return Mask(1) << (i - 1); }
inline Mask bar_bit(int i) { return Mask(1) << (kMaxDim + i - 1); }
inline int mask_p(Mask m) { return __builtin_popcount(m & 0xFFFFu); }
inline int mask_q(Mask m) { return __builtin_popcount(m >> kMaxDim); }
int wedge_sign(Mask a, Mask b);  // 0 when overlapping

struct VField;

class PQForm {
 public:
  PQForm() = default;
  explicit PQForm(const SmoothPoly& f);
  static PQForm term(Mask m, const SmoothPoly& f);
  static PQForm db(int i) { return term(hol_bit(i), SmoothPoly(1)); }
  static PQForm dbbar(int i) { return term(bar_bit(i), SmoothPoly(1)); }
  // coefficient of db^I ^ db-bar^J, indices 1-based and strictly increasing
  static Mask mask_of(const std::vector<int>& I, const std::vector<int>& J);

  const std::map<Mask, SmoothPoly>& terms() const { return t_; }
  SmoothPoly coeff(Mask m) const;
  SmoothPoly coeff(const std::vector<int>& I, const std::vector<int>& J) const { return coeff(mask_of(I, J)); }
  SmoothPoly function() const { return coeff(0); }
  bool is_zero() const { return t_.empty(); }
  std::set<std::pair<int, int>> types() const;
  bool is_type(int p, int q) const;  // zero counts as every type
  PQForm part(int p, int q) const;
  PQForm total_degree(int k) const;

  PQForm operator-() const;
  PQForm& operator+=(const PQForm& o);
  PQForm& operator-=(const PQForm& o);
  friend PQForm operator+(PQForm a, const PQForm& b) { return a += b; }
  friend PQForm operator-(PQForm a, const PQForm& b) { return a -= b; }
  friend PQForm operator*(const SmoothPoly& f, const PQForm& w);
  friend PQForm operator*(const PQForm& w, const SmoothPoly& f) { return f * w; }
  friend PQForm operator*(const GaussRat& c, const PQForm& w);
  friend bool operator==(const PQForm& a, const PQForm& b) { return a.t_ == b.t_; }
  friend bool operator!=(const PQForm& a, const PQForm& b) { return !(a == b); }

  // apply a coefficientwise map (derivations, substitutions)
  PQForm map_coeffs(const std::function<SmoothPoly(const SmoothPoly&)>& f) const;
  std::string str() const;

 private:
  void add(Mask m, const SmoothPoly& f);
  std::map<Mask, SmoothPoly> t_;
};

PQForm wedge(const PQForm& a, const PQForm& b);
PQForm d_hol(const PQForm& w);
PQForm d_bar(const PQForm& w);
PQForm de_rham(const PQForm& w);
PQForm contract(const VField& X, const PQForm& w);  // iota_X on the db slots
SmoothPoly pairing(const PQForm& one_form, const VField& X);
PQForm lie_derivative(const VField& X, const PQForm& w);  // iota_X d_hol + d_hol iota_X
// iota of the antiholomorphic Euler-type field sum_j c_j d/d(bbar^j) on the db-bar slots
PQForm contract_bar(const std::vector<SmoothPoly>& c, const PQForm& w);

struct VField {
  std::vector<SmoothPoly> c;

  VField() = default;
  explicit VField(int d) : c(d) {}
  explicit VField(std::vector<SmoothPoly> comps) : c(std::move(comps)) {}
  static VField coord(int d, int i);  // d/db^i
  int dim() const { return static_cast<int>(c.size()); }
  const SmoothPoly& operator[](int i) const { return c.at(i); }  // 0-based
  SmoothPoly& operator[](int i) { return c.at(i); }
  bool is_zero() const;

  SmoothPoly apply(const SmoothPoly& f) const;  // X f = X^i d_i f
  VField operator-() const;
  VField& operator+=(const VField& o);
  VField& operator-=(const VField& o);
  friend VField operator+(VField a, const VField& b) { return a += b; }
  friend VField operator-(VField a, const VField& b) { return a -= b; }
  friend VField operator*(const SmoothPoly& f, const VField& X);
  friend bool operator==(const VField& a, const VField& b) { return a.c == b.c; }
  friend bool operator!=(const VField& a, const VField& b) { return !(a == b); }
  std::string str() const;
};

VField lie_bracket(const VField& X, const VField& Y);
VField d_bar_field(const VField& X, int j);  // componentwise d/d(bbar^j)

class MatForm {
 public:
  MatForm() = default;
  explicit MatForm(int n) : n_(n), e_(n * n) {}
  static MatForm identity(int n);
  static MatForm functions(const std::vector<std::vector<SmoothPoly>>& m);
  int n() const { return n_; }
  PQForm& operator()(int i, int j) { return e_.at(i * n_ + j); }
  const PQForm& operator()(int i, int j) const { return e_.at(i * n_ + j); }
  bool is_zero() const;

  MatForm operator-() const;
  MatForm& operator+=(const MatForm& o);
  MatForm& operator-=(const MatForm& o);
  friend MatForm operator+(MatForm a, const MatForm& b) { return a += b; }
  friend MatForm operator-(MatForm a, const MatForm& b) { return a -= b; }
  friend MatForm operator*(const MatForm& a, const MatForm& b);  // wedge product of entries
  friend MatForm operator*(const GaussRat& c, const MatForm& a);
  friend bool operator==(const MatForm& a, const MatForm& b) { return a.n_ == b.n_ && a.e_ == b.e_; }
  friend bool operator!=(const MatForm& a, const MatForm& b) { return !(a == b); }

  PQForm trace() const;
  MatForm transform(const std::function<PQForm(const PQForm&)>& f) const;
  MatForm contract(const VField& X) const { return transform([&](const PQForm& w) { return cdo::contract(X, w); }); }
  // entries as functions (0-forms) times a vector field component matrix action: (M X)^i = M^i_j X^j
  VField apply(const VField& X) const;
  std::string str() const;

 private:
  int n_ = 0;
  std::vector<PQForm> e_;
};

MatForm d_hol(const MatForm& m);
MatForm d_bar(const MatForm& m);
MatForm de_rham(const MatForm& m);

// inverse of a matrix of functions with constant nonzero determinant
MatForm inverse_unimodular(const MatForm& m);
SmoothPoly determinant(const MatForm& m);

}  // namespace cdo
