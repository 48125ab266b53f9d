#include "cdo/poly.hpp"

#include <algorithm>

namespace cdo {

namespace {
void trim(SmoothPoly::Mono& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

SmoothPoly::Mono mono_mul(const SmoothPoly::Mono& a, const SmoothPoly::Mono& b) {
  const auto& lo = a.size() < b.size() ? a : b;
  SmoothPoly::Mono r = a.size() < b.size() ? b : a;
  for (size_t k = 0; k < lo.size(); ++k) {
    int e = r[k] + lo[k];
    if (e > 120) throw OverflowError("monomial exponent overflow");
    r[k] = static_cast<char>(e);
  }
  return r;
}
}  // namespace

SmoothPoly::SmoothPoly(long c) {
  if (c) t_.emplace(Mono(), GaussRat(c));
}
SmoothPoly::SmoothPoly(const Q& c) {
  if (sgn(c)) t_.emplace(Mono(), GaussRat(c));
}
SmoothPoly::SmoothPoly(const GaussRat& c) {
  if (!c.is_zero()) t_.emplace(Mono(), c);
}

SmoothPoly SmoothPoly::var(int i, bool bar) {
  if (i < 1) throw DomainError("variable index must be positive");
  Mono m(slot(i, bar) + 1, 0);
  m.back() = 1;
  return monomial(m, GaussRat(1));
}

SmoothPoly SmoothPoly::monomial(const Mono& m, const GaussRat& c) {
  SmoothPoly p;
  Mono t = m;
  trim(t);
  p.add(t, c);
  return p;
}

void SmoothPoly::add(const Mono& m, const GaussRat& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = t_.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

bool SmoothPoly::is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.empty()); }

GaussRat SmoothPoly::constant_term() const {
  auto it = t_.find(Mono());
  return it == t_.end() ? GaussRat() : it->second;
}

int SmoothPoly::hol_degree(const Mono& m) {
  int s = 0;
  for (size_t k = 0; k < m.size(); k += 2) s += m[k];
  return s;
}

int SmoothPoly::bar_degree(const Mono& m) {
  int s = 0;
  for (size_t k = 1; k < m.size(); k += 2) s += m[k];
  return s;
}

bool SmoothPoly::is_holomorphic() const {
  return std::all_of(t_.begin(), t_.end(), [](auto& kv) { return bar_degree(kv.first) == 0; });
}

int SmoothPoly::degree() const {
  int d = 0;
  for (auto& [m, c] : t_) d = std::max(d, hol_degree(m) + bar_degree(m));
  return t_.empty() ? -1 : d;
}

int SmoothPoly::hol_degree_max() const {
  int d = 0;
  for (auto& [m, c] : t_) d = std::max(d, hol_degree(m));
  return d;
}

int SmoothPoly::max_index() const {
  int r = 0;
  for (auto& [m, c] : t_) r = std::max(r, static_cast<int>((m.size() + 1) / 2));
  return r;
}

SmoothPoly SmoothPoly::operator-() const {
  SmoothPoly r = *this;
  for (auto& [m, c] : r.t_) c = -c;
  return r;
}

SmoothPoly& SmoothPoly::operator+=(const SmoothPoly& o) {
  for (auto& [m, c] : o.t_) add(m, c);
  return *this;
}

SmoothPoly& SmoothPoly::operator-=(const SmoothPoly& o) {
  for (auto& [m, c] : o.t_) add(m, -c);
  return *this;
}

SmoothPoly& SmoothPoly::operator*=(const GaussRat& c) {
  if (c.is_zero()) {
    t_.clear();
    return *this;
  }
  for (auto& [m, x] : t_) x *= c;
  return *this;
}

SmoothPoly operator*(const SmoothPoly& a, const SmoothPoly& b) {
  SmoothPoly r;
  for (auto& [m1, c1] : a.t_)
    for (auto& [m2, c2] : b.t_) r.add(mono_mul(m1, m2), c1 * c2);
  return r;
}

SmoothPoly SmoothPoly::pow(int e) const {
  if (e < 0) throw DomainError("negative polynomial power");
  SmoothPoly r(1), base = *this;
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

namespace {
SmoothPoly derive(const std::map<SmoothPoly::Mono, GaussRat>& t, int s) {
  SmoothPoly r;
  for (auto& [m, c] : t) {
    int e = SmoothPoly::exp(m, s);
    if (!e) continue;
    SmoothPoly::Mono n = m;
    n[s] = static_cast<char>(e - 1);
    r += SmoothPoly::monomial(n, c * GaussRat(e));
  }
  return r;
}
}  // namespace

SmoothPoly SmoothPoly::d_hol(int i) const { return derive(t_, slot(i, false)); }
SmoothPoly SmoothPoly::d_bar(int i) const { return derive(t_, slot(i, true)); }

SmoothPoly SmoothPoly::conj() const {
  SmoothPoly r;
  for (auto& [m, c] : t_) {
    Mono n = m;
    if (n.size() % 2) n.push_back(0);
    for (size_t k = 0; k < n.size(); k += 2) std::swap(n[k], n[k + 1]);
    trim(n);
    r.t_.emplace(n, c.conj());
  }
  return r;
}

SmoothPoly SmoothPoly::subst(const std::vector<SmoothPoly>& hol, const std::vector<SmoothPoly>& bar) const {
  // cache of powers per slot
  std::vector<std::vector<SmoothPoly>> pw(2 * std::max(hol.size(), bar.size()) + 2);
  auto power = [&](int s, int e) -> const SmoothPoly& {
    int i = s / 2 + 1;
    bool isbar = s % 2;
    const auto& src = isbar ? bar : hol;
    if (i > static_cast<int>(src.size()))
      throw DomainError("substitution does not cover variable " + std::string(isbar ? "B" : "b") + std::to_string(i));
    auto& cache = pw.at(s);
    if (cache.empty()) cache.push_back(SmoothPoly(1));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * src[i - 1]);
    return cache[e];
  };
  SmoothPoly r;
  for (auto& [m, c] : t_) {
    SmoothPoly term(c);
    for (size_t s = 0; s < m.size(); ++s)
      if (m[s]) term = term * power(static_cast<int>(s), m[s]);
    r += term;
  }
  return r;
}

std::string mono_str(const SmoothPoly::Mono& m) {
  std::string s;
  for (size_t k = 0; k < m.size(); ++k) {
    if (!m[k]) continue;
    if (!s.empty()) s += "*";
    s += (k % 2 ? "B" : "b") + std::to_string(k / 2 + 1);
    if (m[k] > 1) s += "^" + std::to_string(static_cast<int>(m[k]));
  }
  return s;
}

std::string SmoothPoly::str() const {
  if (t_.empty()) return "0";
  std::string out;
  // print highest degree first for readability
  std::vector<std::pair<Mono, GaussRat>> v(t_.begin(), t_.end());
  std::stable_sort(v.begin(), v.end(), [](auto& a, auto& b) {
    return hol_degree(a.first) + bar_degree(a.first) > hol_degree(b.first) + bar_degree(b.first);
  });
  for (auto& [m, c] : v) {
    std::string ms = mono_str(m);
    std::string cs;
    bool neg = false;
    GaussRat cc = c;
    if (c.is_real() && sgn(c.re) < 0) {
      neg = true;
      cc = -c;
    }
    if (cc.is_real()) cs = qstr(cc.re);
    else cs = "(" + cc.str() + ")";
    std::string term;
    if (ms.empty()) term = cs;
    else if (cs == "1") term = ms;
    else term = cs + "*" + ms;
    if (out.empty()) out = (neg ? "-" : "") + term;
    else out += (neg ? " - " : " + ") + term;
  }
  return out;
}

}  // namespace cdo
