#include "cdo/forms.hpp"

#include <algorithm>

namespace cdo {

int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int inv = 0;
  for (Mask t = b; t; t &= t - 1) {
    int pos = __builtin_ctz(t);
    Mask above = pos >= 31 ? 0 : (~Mask(0) << (pos + 1));
    inv += __builtin_popcount(a & above);
  }
  return inv % 2 ? -1 : 1;
}

PQForm::PQForm(const SmoothPoly& f) { add(0, f); }

PQForm PQForm::term(Mask m, const SmoothPoly& f) {
  PQForm w;
  w.add(m, f);
  return w;
}

Mask PQForm::mask_of(const std::vector<int>& I, const std::vector<int>& J) {
  Mask m = 0;
  for (size_t k = 0; k < I.size(); ++k) {
    if (k && I[k] <= I[k - 1]) throw DomainError("form indices must increase strictly");
    m |= hol_bit(I[k]);
  }
  for (size_t k = 0; k < J.size(); ++k) {
    if (k && J[k] <= J[k - 1]) throw DomainError("form indices must increase strictly");
    m |= bar_bit(J[k]);
  }
  return m;
}

void PQForm::add(Mask m, const SmoothPoly& f) {
  if (f.is_zero()) return;
  auto [it, fresh] = t_.try_emplace(m, f);
  if (!fresh) {
    it->second += f;
    if (it->second.is_zero()) t_.erase(it);
  }
}

SmoothPoly PQForm::coeff(Mask m) const {
  auto it = t_.find(m);
  return it == t_.end() ? SmoothPoly() : it->second;
}

std::set<std::pair<int, int>> PQForm::types() const {
  std::set<std::pair<int, int>> s;
  for (auto& [m, f] : t_) s.insert({mask_p(m), mask_q(m)});
  return s;
}

bool PQForm::is_type(int p, int q) const {
  return std::all_of(t_.begin(), t_.end(), [&](auto& kv) { return mask_p(kv.first) == p && mask_q(kv.first) == q; });
}

PQForm PQForm::part(int p, int q) const {
  PQForm r;
  for (auto& [m, f] : t_)
    if (mask_p(m) == p && mask_q(m) == q) r.t_.emplace(m, f);
  return r;
}

PQForm PQForm::total_degree(int k) const {
  PQForm r;
  for (auto& [m, f] : t_)
    if (mask_p(m) + mask_q(m) == k) r.t_.emplace(m, f);
  return r;
}

PQForm PQForm::operator-() const {
  PQForm r = *this;
  for (auto& [m, f] : r.t_) f = -f;
  return r;
}

PQForm& PQForm::operator+=(const PQForm& o) {
  for (auto& [m, f] : o.t_) add(m, f);
  return *this;
}

PQForm& PQForm::operator-=(const PQForm& o) {
  for (auto& [m, f] : o.t_) add(m, -f);
  return *this;
}

PQForm operator*(const SmoothPoly& f, const PQForm& w) {
  PQForm r;
  if (f.is_zero()) return r;
  for (auto& [m, g] : w.t_) r.add(m, f * g);
  return r;
}

PQForm operator*(const GaussRat& c, const PQForm& w) {
  PQForm r;
  if (c.is_zero()) return r;
  for (auto& [m, g] : w.t_) r.add(m, g * c);
  return r;
}

PQForm PQForm::map_coeffs(const std::function<SmoothPoly(const SmoothPoly&)>& f) const {
  PQForm r;
  for (auto& [m, g] : t_) r.add(m, f(g));
  return r;
}

std::string PQForm::str() const {
  if (t_.empty()) return "0";
  std::string out;
  for (auto& [m, f] : t_) {
    std::string basis;
    for (int i = 1; i <= kMaxDim; ++i)
      if (m & hol_bit(i)) basis += (basis.empty() ? "" : "^") + std::string("db") + std::to_string(i);
    for (int i = 1; i <= kMaxDim; ++i)
      if (m & bar_bit(i)) basis += (basis.empty() ? "" : "^") + std::string("dB") + std::to_string(i);
    if (!out.empty()) out += " + ";
    out += "(" + f.str() + ")";
    if (!basis.empty()) out += " " + basis;
  }
  return out;
}

PQForm wedge(const PQForm& a, const PQForm& b) {
  PQForm r;
  for (auto& [m1, f1] : a.terms())
    for (auto& [m2, f2] : b.terms()) {
      int s = wedge_sign(m1, m2);
      if (!s) continue;
      r += PQForm::term(m1 | m2, s > 0 ? f1 * f2 : -(f1 * f2));
    }
  return r;
}

namespace {
PQForm differential(const PQForm& w, bool hol, bool bar) {
  PQForm r;
  for (auto& [m, f] : w.terms()) {
    int top = std::max(f.max_index(), 1);
    for (int i = 1; i <= top; ++i) {
      if (hol) {
        Mask b = hol_bit(i);
        int s = wedge_sign(b, m);
        if (s) {
          SmoothPoly df = f.d_hol(i);
          if (!df.is_zero()) r += PQForm::term(b | m, s > 0 ? df : -df);
        }
      }
      if (bar) {
        Mask b = bar_bit(i);
        int s = wedge_sign(b, m);
        if (s) {
          SmoothPoly df = f.d_bar(i);
          if (!df.is_zero()) r += PQForm::term(b | m, s > 0 ? df : -df);
        }
      }
    }
  }
  return r;
}
}  // namespace

PQForm d_hol(const PQForm& w) { return differential(w, true, false); }
PQForm d_bar(const PQForm& w) { return differential(w, false, true); }
PQForm de_rham(const PQForm& w) { return differential(w, true, true); }

PQForm contract(const VField& X, const PQForm& w) {
  PQForm r;
  for (auto& [m, f] : w.terms()) {
    int below = 0;
    for (int i = 1; i <= kMaxDim; ++i) {
      if (!(m & hol_bit(i))) continue;
      if (i <= X.dim() && !X[i - 1].is_zero()) {
        SmoothPoly g = f * X[i - 1];
        r += PQForm::term(m & ~hol_bit(i), below % 2 ? -g : g);
      }
      ++below;
    }
  }
  return r;
}

PQForm contract_bar(const std::vector<SmoothPoly>& c, const PQForm& w) {
  PQForm r;
  for (auto& [m, f] : w.terms()) {
    int below = mask_p(m);
    for (int i = 1; i <= kMaxDim; ++i) {
      if (!(m & bar_bit(i))) continue;
      if (i <= static_cast<int>(c.size()) && !c[i - 1].is_zero()) {
        SmoothPoly g = f * c[i - 1];
        r += PQForm::term(m & ~bar_bit(i), below % 2 ? -g : g);
      }
      ++below;
    }
  }
  return r;
}

SmoothPoly pairing(const PQForm& one_form, const VField& X) {
  for (auto& [m, f] : one_form.terms())
    if (mask_p(m) != 1 || mask_q(m) != 0) throw DomainError("pairing expects a (1,0)-form");
  return contract(X, one_form).function();
}

PQForm lie_derivative(const VField& X, const PQForm& w) { return contract(X, d_hol(w)) + d_hol(contract(X, w)); }

VField VField::coord(int d, int i) {
  VField X(d);
  X.c.at(i - 1) = SmoothPoly(1);
  return X;
}

bool VField::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const SmoothPoly& p) { return p.is_zero(); });
}

SmoothPoly VField::apply(const SmoothPoly& f) const {
  SmoothPoly r;
  for (int i = 0; i < dim(); ++i)
    if (!c[i].is_zero()) r += c[i] * f.d_hol(i + 1);
  return r;
}

VField VField::operator-() const {
  VField r = *this;
  for (auto& p : r.c) p = -p;
  return r;
}

VField& VField::operator+=(const VField& o) {
  if (c.size() < o.c.size()) c.resize(o.c.size());
  for (size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
  return *this;
}

VField& VField::operator-=(const VField& o) {
  if (c.size() < o.c.size()) c.resize(o.c.size());
  for (size_t i = 0; i < o.c.size(); ++i) c[i] -= o.c[i];
  return *this;
}

VField operator*(const SmoothPoly& f, const VField& X) {
  VField r = X;
  for (auto& p : r.c) p = f * p;
  return r;
}

std::string VField::str() const {
  std::string s;
  for (int i = 0; i < dim(); ++i) {
    if (c[i].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + c[i].str() + ") d" + std::to_string(i + 1);
  }
  return s.empty() ? "0" : s;
}

VField lie_bracket(const VField& X, const VField& Y) {
  int d = std::max(X.dim(), Y.dim());
  VField r(d);
  for (int i = 0; i < d; ++i) {
    if (i < Y.dim()) r[i] += X.apply(Y[i]);
    if (i < X.dim()) r[i] -= Y.apply(X[i]);
  }
  return r;
}

VField d_bar_field(const VField& X, int j) {
  VField r(X.dim());
  for (int i = 0; i < X.dim(); ++i) r[i] = X[i].d_bar(j);
  return r;
}

MatForm MatForm::identity(int n) {
  MatForm m(n);
  for (int i = 0; i < n; ++i) m(i, i) = PQForm(SmoothPoly(1));
  return m;
}

MatForm MatForm::functions(const std::vector<std::vector<SmoothPoly>>& a) {
  int n = static_cast<int>(a.size());
  MatForm m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = PQForm(a[i].at(j));
  return m;
}

bool MatForm::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const PQForm& w) { return w.is_zero(); });
}

MatForm MatForm::operator-() const {
  MatForm r = *this;
  for (auto& w : r.e_) w = -w;
  return r;
}

MatForm& MatForm::operator+=(const MatForm& o) {
  if (n_ != o.n_) throw DomainError("matrix size mismatch");
  for (size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
  return *this;
}

MatForm& MatForm::operator-=(const MatForm& o) {
  if (n_ != o.n_) throw DomainError("matrix size mismatch");
  for (size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
  return *this;
}

MatForm operator*(const MatForm& a, const MatForm& b) {
  if (a.n_ != b.n_) throw DomainError("matrix size mismatch");
  MatForm r(a.n_);
  for (int i = 0; i < a.n_; ++i)
    for (int k = 0; k < a.n_; ++k) {
      if (a(i, k).is_zero()) continue;
      for (int j = 0; j < a.n_; ++j)
        if (!b(k, j).is_zero()) r(i, j) += wedge(a(i, k), b(k, j));
    }
  return r;
}

MatForm operator*(const GaussRat& c, const MatForm& a) {
  MatForm r = a;
  for (auto& w : r.e_) w = c * w;
  return r;
}

PQForm MatForm::trace() const {
  PQForm t;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

MatForm MatForm::transform(const std::function<PQForm(const PQForm&)>& f) const {
  MatForm r(n_);
  for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = f(e_[k]);
  return r;
}

VField MatForm::apply(const VField& X) const {
  VField r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const PQForm& w = (*this)(i, j);
      if (!w.is_type(0, 0)) throw DomainError("matrix action on fields needs function entries");
      if (j < X.dim()) r[i] += w.function() * X[j];
    }
  return r;
}

std::string MatForm::str() const {
  std::string s = "[";
  for (int i = 0; i < n_; ++i) {
    s += i ? "; " : "";
    for (int j = 0; j < n_; ++j) s += (j ? ", " : "") + (*this)(i, j).str();
  }
  return s + "]";
}

MatForm d_hol(const MatForm& m) { return m.transform([](const PQForm& w) { return d_hol(w); }); }
MatForm d_bar(const MatForm& m) { return m.transform([](const PQForm& w) { return d_bar(w); }); }
MatForm de_rham(const MatForm& m) { return m.transform([](const PQForm& w) { return de_rham(w); }); }

namespace {
SmoothPoly det_rec(const std::vector<std::vector<SmoothPoly>>& a) {
  size_t n = a.size();
  if (n == 0) return SmoothPoly(1);
  if (n == 1) return a[0][0];
  SmoothPoly r;
  for (size_t j = 0; j < n; ++j) {
    if (a[0][j].is_zero()) continue;
    std::vector<std::vector<SmoothPoly>> minor;
    for (size_t i = 1; i < n; ++i) {
      std::vector<SmoothPoly> row;
      for (size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(row);
    }
    SmoothPoly t = a[0][j] * det_rec(minor);
    r += j % 2 ? -t : t;
  }
  return r;
}

std::vector<std::vector<SmoothPoly>> entries(const MatForm& m) {
  std::vector<std::vector<SmoothPoly>> a(m.n(), std::vector<SmoothPoly>(m.n()));
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) {
      if (!m(i, j).is_type(0, 0)) throw DomainError("expected a matrix of functions");
      a[i][j] = m(i, j).function();
    }
  return a;
}
}  // namespace

SmoothPoly determinant(const MatForm& m) { return det_rec(entries(m)); }

MatForm inverse_unimodular(const MatForm& m) {
  auto a = entries(m);
  SmoothPoly det = det_rec(a);
  if (!det.is_constant() || det.is_zero()) throw DomainError("matrix determinant is not a nonzero constant");
  GaussRat inv = GaussRat(1) / det.constant_term();
  int n = m.n();
  MatForm r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<std::vector<SmoothPoly>> minor;
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        std::vector<SmoothPoly> row;
        for (int l = 0; l < n; ++l)
          if (l != i) row.push_back(a[k][l]);
        minor.push_back(row);
      }
      SmoothPoly c = det_rec(minor) * inv;
      r(i, j) = PQForm((i + j) % 2 ? -c : c);
    }
  return r;
}

}  // namespace cdo
