#include "cdo/voa.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace cdo {

namespace {

using Key = BGState::Key;

void trim(Key& k) {
  while (!k.empty() && k.back() == 0) k.pop_back();
}

Key with_delta(Key k, int slot, int delta) {
  if (static_cast<int>(k.size()) <= slot) k.resize(slot + 1, 0);
  int e = k[slot] + delta;
  if (e > 120) throw OverflowError("oscillator exponent overflow");
  k[slot] = static_cast<char>(e);
  trim(k);
  return k;
}

struct SlotInfo {
  Osc kind;
  int i;
  int level;
};
SlotInfo decode(int slot) {
  int kind = slot % 2, rest = slot / 2;
  return {static_cast<Osc>(kind), rest % kOscDim + 1, rest / kOscDim + 1};
}

// x choose k for integer x, k >= 0
Q gbinom(long x, int k) {
  Q r = 1;
  for (int j = 0; j < k; ++j) r = r * Q(x - j) / Q(j + 1);
  return r;
}

// split a monomial of the coefficient ring into b_0 exponents and the inert remainder
std::pair<std::vector<int>, SmoothPoly> split_mono(const SmoothPoly::Mono& m, const GaussRat& c) {
  std::vector<int> hol;
  SmoothPoly::Mono rest(m.size(), 0);
  for (size_t s = 0; s < m.size(); ++s) {
    if (s % 2 == 0)
      hol.push_back(m[s]);
    else
      rest[s] = m[s];
  }
  while (!rest.empty() && rest.back() == 0) rest.pop_back();
  return {hol, SmoothPoly::monomial(rest, c)};
}

}  // namespace

BGState BGState::function(const SmoothPoly& f) {
  BGState s;
  s.add(Key(), f);
  return s;
}

BGState BGState::osc(Osc kind, int i, int level, const SmoothPoly& f) {
  if (i < 1 || i > kOscDim || level < 1) throw DomainError("bad oscillator index");
  BGState s;
  s.add(with_delta(Key(), slot(kind, i, level), 1), f);
  return s;
}

BGState BGState::from_field(const VField& X) {
  BGState s;
  for (int i = 1; i <= X.dim(); ++i) s += osc(Osc::A, i, 1, X[i - 1]);
  return s;
}

BGState BGState::from_form(const PQForm& w) {
  if (!w.is_type(1, 0)) throw DomainError("expected a (1,0)-form");
  BGState s;
  for (int k = 1; k <= kOscDim; ++k) {
    SmoothPoly c = w.coeff(hol_bit(k));
    if (!c.is_zero()) s += osc(Osc::B, k, 1, c);
  }
  return s;
}

int BGState::key_weight(const Key& k) {
  int w = 0;
  for (size_t s = 0; s < k.size(); ++s)
    if (k[s]) w += k[s] * decode(static_cast<int>(s)).level;
  return w;
}

int BGState::max_weight() const {
  int w = -1;
  for (auto& [k, c] : t_) w = std::max(w, key_weight(k));
  return w;
}

BGState BGState::weight_part(int w) const {
  BGState r;
  for (auto& [k, c] : t_)
    if (key_weight(k) == w) r.t_.emplace(k, c);
  return r;
}

SmoothPoly BGState::coeff(const Key& k) const {
  auto it = t_.find(k);
  return it == t_.end() ? SmoothPoly() : it->second;
}

void BGState::add(const Key& k, const SmoothPoly& c) {
  if (c.is_zero()) return;
  auto it = t_.find(k);
  if (it == t_.end()) {
    t_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) t_.erase(it);
}

BGState BGState::operator-() const {
  BGState r;
  for (auto& [k, c] : t_) r.t_.emplace(k, -c);
  return r;
}

BGState& BGState::operator+=(const BGState& o) {
  for (auto& [k, c] : o.t_) add(k, c);
  return *this;
}

BGState& BGState::operator-=(const BGState& o) {
  for (auto& [k, c] : o.t_) add(k, -c);
  return *this;
}

BGState operator*(const SmoothPoly& f, const BGState& s) {
  BGState r;
  if (f.is_zero()) return r;
  for (auto& [k, c] : s.t_) r.add(k, f * c);
  return r;
}

BGState operator*(const GaussRat& c, const BGState& s) { return SmoothPoly(c) * s; }

BGState BGState::mul(const BGState& o) const {
  BGState r;
  for (auto& [k1, c1] : t_)
    for (auto& [k2, c2] : o.t_) {
      Key k(std::max(k1.size(), k2.size()), 0);
      for (size_t s = 0; s < k.size(); ++s) {
        int e = key_exp(k1, static_cast<int>(s)) + key_exp(k2, static_cast<int>(s));
        if (e > 120) throw OverflowError("oscillator exponent overflow");
        k[s] = static_cast<char>(e);
      }
      r.add(k, c1 * c2);
    }
  return r;
}

VField BGState::field_part(int d) const {
  VField X(d);
  for (auto& [k, c] : t_) {
    bool found = false;
    for (int i = 1; i <= d && !found; ++i)
      if (k == with_delta(Key(), slot(Osc::A, i, 1), 1)) {
        X[i - 1] += c;
        found = true;
      }
    if (!found) throw DomainError("state is not a vector field: " + key_str(k));
  }
  return X;
}

PQForm BGState::form_part() const {
  PQForm w;
  for (auto& [k, c] : t_) {
    bool found = false;
    for (int i = 1; i <= kOscDim && !found; ++i)
      if (k == with_delta(Key(), slot(Osc::B, i, 1), 1)) {
        w += c * PQForm::db(i);
        found = true;
      }
    if (!found) throw DomainError("state is not a 1-form: " + key_str(k));
  }
  return w;
}

std::string BGState::key_str(const Key& k) {
  std::vector<std::pair<SlotInfo, int>> vars;
  for (size_t s = 0; s < k.size(); ++s)
    if (k[s]) vars.push_back({decode(static_cast<int>(s)), k[s]});
  // a's before b's, most negative level first
  std::sort(vars.begin(), vars.end(), [](auto& x, auto& y) {
    if (x.first.kind != y.first.kind) return x.first.kind < y.first.kind;
    if (x.first.level != y.first.level) return x.first.level > y.first.level;
    return x.first.i < y.first.i;
  });
  std::ostringstream os;
  for (auto& [v, e] : vars)
    for (int r = 0; r < e; ++r)
      os << (v.kind == Osc::A ? "a(" : "b(") << v.i << "," << -v.level << ") ";
  return os.str();
}

std::string BGState::str() const {
  if (t_.empty()) return "0";
  std::string out;
  for (auto& [k, c] : t_) {
    if (!out.empty()) out += " + ";
    out += key_str(k) + "[" + c.str() + "]";
  }
  return out;
}

std::string Mode::str() const {
  return std::string(kind == Osc::A ? "a(" : "b(") + std::to_string(i) + "," + std::to_string(n) + ")";
}

BetaGamma::BetaGamma(int d, int cap) : d_(d), cap_(cap) {
  if (d < 0 || d > kOscDim) throw DomainError("dimension out of range");
  if (cap < 0) throw DomainError("negative weight cap");
}

void BetaGamma::check(const BGState& s) const {
  if (s.max_weight() > cap_)
    throw OverflowError("weight " + std::to_string(s.max_weight()) + " exceeds cap " + std::to_string(cap_));
}

BGState BetaGamma::apply_mode(const Mode& m, const BGState& s) const {
  if (m.i < 1 || m.i > d_) throw DomainError("mode index out of range: " + m.str());
  BGState r;
  if (m.n < 0) {
    r = BGState::osc(m.kind, m.i, -m.n).mul(s);
  } else if (m.n == 0) {
    for (auto& [k, c] : s.terms())
      r.add(k, m.kind == Osc::A ? c.d_hol(m.i) : SmoothPoly::var(m.i) * c);
  } else {
    // a_{i,n} = d/d b^i_{-n},  b^i_n = -d/d a_{i,-n}
    Osc other = m.kind == Osc::A ? Osc::B : Osc::A;
    int sl = BGState::slot(other, m.i, m.n);
    GaussRat sign(m.kind == Osc::A ? 1 : -1);
    for (auto& [k, c] : s.terms()) {
      int e = BGState::key_exp(k, sl);
      if (e) r.add(with_delta(k, sl, -1), (sign * GaussRat(e)) * c);
    }
  }
  check(r);
  return r;
}

namespace {

struct FieldSpec {
  Osc kind;
  int i;
  int k;  // derivative order
  bool operator<(const FieldSpec& o) const {
    return std::tie(kind, i, k) < std::tie(o.kind, o.i, o.k);
  }
};

class ProductEngine {
 public:
  explicit ProductEngine(int target) : target_(target) {}

  BGState run(std::vector<FieldSpec> fields, const BGState& v) {
    result_ = BGState();
    fields_ = std::move(fields);
    creators_.clear();
    recurse(0, v, Q(1), 0);
    return result_;
  }

 private:
  void recurse(size_t r, const BGState& w, const Q& factor, int zpow) {
    if (w.is_zero()) return;
    if (r == fields_.size()) {
      int E = target_ - zpow;
      if (E < 0) return;
      std::vector<FieldSpec> cr = creators_;
      std::sort(cr.begin(), cr.end());
      result_ += GaussRat(factor) * creation(cr, 0, E).mul(w);
      return;
    }
    const FieldSpec& f = fields_[r];
    creators_.push_back(f);
    recurse(r + 1, w, factor, zpow);
    creators_.pop_back();

    if (f.kind == Osc::A) {
      // a_{i,0} = d/d b^i_0
      BGState w0;
      for (auto& [k, c] : w.terms()) w0.add(k, c.d_hol(f.i));
      recurse(r + 1, w0, factor * gbinom(-1, f.k), zpow - 1 - f.k);
      for (int m : levels(w, Osc::B, f.i)) {
        int sl = BGState::slot(Osc::B, f.i, m);
        BGState wm;
        for (auto& [k, c] : w.terms())
          if (int e = BGState::key_exp(k, sl)) wm.add(with_delta(k, sl, -1), GaussRat(e) * c);
        recurse(r + 1, wm, factor * gbinom(-m - 1, f.k), zpow - m - 1 - f.k);
      }
    } else {
      for (int m : levels(w, Osc::A, f.i)) {
        int sl = BGState::slot(Osc::A, f.i, m);
        BGState wm;
        for (auto& [k, c] : w.terms())
          if (int e = BGState::key_exp(k, sl)) wm.add(with_delta(k, sl, -1), GaussRat(-e) * c);
        recurse(r + 1, wm, factor * gbinom(-m, f.k), zpow - m - f.k);
      }
    }
  }

  static std::vector<int> levels(const BGState& w, Osc kind, int i) {
    std::vector<int> out;
    for (auto& [k, c] : w.terms())
      for (size_t s = 0; s < k.size(); ++s) {
        if (!k[s]) continue;
        SlotInfo info = decode(static_cast<int>(s));
        if (info.kind == kind && info.i == i) out.push_back(info.level);
      }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // z^E coefficient of the product of creation parts of cr[from..]
  BGState creation(const std::vector<FieldSpec>& cr, size_t from, int E) {
    if (from == cr.size()) return E == 0 ? BGState::vacuum() : BGState();
    std::string mk;
    for (size_t j = from; j < cr.size(); ++j)
      mk += std::to_string(static_cast<int>(cr[j].kind)) + "." + std::to_string(cr[j].i) + "." +
            std::to_string(cr[j].k) + ";";
    mk += std::to_string(E);
    auto it = memo_.find(mk);
    if (it != memo_.end()) return it->second;
    BGState out;
    const FieldSpec& f = cr[from];
    for (int e = 0; e <= E; ++e) {
      BGState rest = creation(cr, from + 1, E - e);
      if (rest.is_zero()) continue;
      BGState t;
      if (f.kind == Osc::A) {
        int L = e + 1 + f.k;
        t = GaussRat(gbinom(L - 1, f.k)) * BGState::osc(Osc::A, f.i, L);
      } else {
        int L = e + f.k;
        t = L == 0 ? BGState::function(SmoothPoly::var(f.i))
                   : GaussRat(gbinom(L, f.k)) * BGState::osc(Osc::B, f.i, L);
      }
      out += t.mul(rest);
    }
    memo_.emplace(mk, out);
    return out;
  }

  int target_;
  std::vector<FieldSpec> fields_, creators_;
  BGState result_;
  std::map<std::string, BGState> memo_;
};

}  // namespace

BGState BetaGamma::nth_product(const BGState& u, int n, const BGState& v) const {
  BGState out;
  long target = -static_cast<long>(n) - 1;
  for (auto& [ku, fu] : u.terms()) {
    int wu = BGState::key_weight(ku);
    for (auto& [kv, fv] : v.terms()) {
      long w = wu + BGState::key_weight(kv) + target;
      if (w > cap_) throw OverflowError("product weight " + std::to_string(w) + " exceeds cap " + std::to_string(cap_));
    }
    std::vector<FieldSpec> osc;
    for (size_t s = 0; s < ku.size(); ++s) {
      if (!ku[s]) continue;
      SlotInfo info = decode(static_cast<int>(s));
      if (info.i > d_) throw DomainError("oscillator index exceeds dimension");
      FieldSpec f = info.kind == Osc::A ? FieldSpec{Osc::A, info.i, info.level - 1} : FieldSpec{Osc::B, info.i, info.level};
      for (int r = 0; r < ku[s]; ++r) osc.push_back(f);
    }
    ProductEngine eng(static_cast<int>(target));
    for (auto& [m, c] : fu.terms()) {
      auto [hol, rest] = split_mono(m, c);
      std::vector<FieldSpec> fields = osc;
      for (size_t i = 0; i < hol.size(); ++i)
        for (int r = 0; r < hol[i]; ++r) fields.push_back({Osc::B, static_cast<int>(i) + 1, 0});
      out += rest * eng.run(fields, v);
    }
  }
  return out;
}

BGState BetaGamma::translation(const BGState& s) const {
  BGState r;
  for (auto& [k, c] : s.terms()) {
    for (size_t sl = 0; sl < k.size(); ++sl) {
      if (!k[sl]) continue;
      SlotInfo info = decode(static_cast<int>(sl));
      int L = info.level;
      // [T, a_m] = -m a_{m-1},  [T, b_m] = (1-m) b_{m-1}
      long coef = info.kind == Osc::A ? L : L + 1;
      Key k2 = with_delta(with_delta(k, static_cast<int>(sl), -1), BGState::slot(info.kind, info.i, L + 1), 1);
      r.add(k2, GaussRat(Q(coef * k[sl])) * c);
    }
    for (int i = 1; i <= d_; ++i) {
      SmoothPoly di = c.d_hol(i);
      if (!di.is_zero()) r.add(with_delta(k, BGState::slot(Osc::B, i, 1), 1), di);
    }
  }
  check(r);
  return r;
}

BGState BetaGamma::translation_power(const BGState& s, int k) const {
  BGState r = s;
  for (int j = 1; j <= k; ++j) r = GaussRat(qfrac(1, j)) * translation(r);
  return r;
}

BGState BetaGamma::nu() const {
  BGState n;
  for (int i = 1; i <= d_; ++i)
    n += BGState::osc(Osc::A, i, 1).mul(BGState::osc(Osc::B, i, 1));
  return n;
}

Q BetaGamma::central_charge() const {
  if (cap_ < 2) throw OverflowError("central charge needs weight cap >= 2");
  BGState r = nth_product(nu(), 3, nu());
  GaussRat c = r.vacuum_coeff().constant_term();
  if (r != BGState::function(SmoothPoly(c)) && !r.is_zero()) throw DomainError("nu_(3) nu is not a vacuum multiple");
  return Q(2) * c.re;
}

std::vector<BGState> BetaGamma::basis_monomials(int weight) const {
  std::vector<BGState> out;
  std::vector<std::pair<Osc, int>> vars;  // (kind, i) per level
  std::function<void(int, int, int, BGState)> rec = [&](int level, int idx, int left, BGState cur) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    if (level > left) return;
    int nvars = 2 * d_;
    if (idx == nvars) {
      rec(level + 1, 0, left, cur);
      return;
    }
    Osc kind = idx % 2 ? Osc::B : Osc::A;
    int i = idx / 2 + 1;
    for (int e = 0; e * level <= left; ++e) {
      rec(level, idx + 1, left - e * level, cur);
      cur = cur.mul(BGState::osc(kind, i, level));
    }
  };
  if (weight == 0) return {BGState::vacuum()};
  rec(1, 0, weight, BGState::vacuum());
  return out;
}

BGState BetaGamma::random_state(Rng& rng, int weight, const RandomSpec& spec) const {
  BGState s;
  int nterms = static_cast<int>(rng.range(1, 2));
  for (int t = 0; t < nterms; ++t) {
    BGState m = BGState::vacuum();
    int left = weight;
    while (left > 0) {
      int L = static_cast<int>(rng.range(1, left));
      Osc kind = rng.coin() ? Osc::A : Osc::B;
      int i = static_cast<int>(rng.range(1, d_));
      m = m.mul(BGState::osc(kind, i, L));
      left -= L;
    }
    SmoothPoly f = random_poly(rng, d_, spec);
    if (f.is_zero()) f = SmoothPoly(1);
    s += f * m;
  }
  check(s);
  return s;
}

PhiXi::PhiXi(const BetaGamma& bg, const PolyBiholo& phi, const PQForm& xi) : bg_(bg), phi_(phi) {
  require_xi(phi, xi);
  int d = phi.dim();
  if (d != bg.dim()) throw DomainError("map dimension differs from the beta-gamma system");
  MatForm gi = mat_derivative_inverse(phi);
  MatForm th = theta(phi);
  std::vector<MatForm> th_at;
  for (int j = 1; j <= d; ++j) th_at.push_back(th.contract(VField::coord(d, j)));
  for (int i = 1; i <= d; ++i) {
    BGState A;
    for (int j = 1; j <= d; ++j) A += BGState::osc(Osc::A, j, 1, gi(j - 1, i - 1).function());
    for (int j = 1; j <= d; ++j) {
      SmoothPoly c;
      for (int k = 1; k <= d; ++k) {
        SmoothPoly xjk = contract(VField::coord(d, k), contract(VField::coord(d, j), xi)).function();
        SmoothPoly tr = (th_at[j - 1] * th_at[k - 1]).trace().function();
        c += (xjk + tr) * gi(k - 1, i - 1).function();
      }
      A += BGState::osc(Osc::B, j, 1, GaussRat(qfrac(1, 2)) * c);
    }
    a_img_.push_back(A);
  }
}

const BGState& PhiXi::osc_image(Osc kind, int i, int level) const {
  int key = BGState::slot(kind, i, level);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  BGState img = kind == Osc::A ? bg_.translation_power(a_img_.at(i - 1), level - 1)
                               : bg_.translation_power(BGState::function(phi_.forward().at(i - 1)), level);
  return cache_.emplace(key, img).first->second;
}

BGState PhiXi::operator()(const BGState& s) const {
  BGState out;
  for (auto& [k, c] : s.terms()) {
    BGState w = BGState::function(phi_.pull(c));
    for (size_t sl = 0; sl < k.size(); ++sl) {
      if (!k[sl]) continue;
      SlotInfo info = decode(static_cast<int>(sl));
      const BGState& img = osc_image(info.kind, info.i, info.level);
      for (int r = 0; r < k[sl]; ++r) w = bg_.nth_product(img, -1, w);
    }
    out += w;
  }
  return out;
}

BGState phi_xi_hom(const BetaGamma& bg, const PolyBiholo& phi, const PQForm& xi, const BGState& s) {
  return PhiXi(bg, phi, xi)(s);
}

std::string HomReport::summary() const {
  std::ostringstream os;
  os << "hom_check: " << (ok() ? "pass" : "FAIL") << " (" << pairs << " pairs, " << products
     << " products, conformal " << (conformal_preserved ? "preserved" : "not preserved") << ")";
  for (auto& f : failures) os << "\n  " << f;
  return os.str();
}

HomReport hom_check(const PolyBiholo& phi, const PQForm& xi, int K, int trials, std::uint64_t seed) {
  BetaGamma bg(phi.dim(), K);
  PhiXi Phi(bg, phi, xi);
  HomReport rep;
  Rng rng(seed);
  RandomSpec spec;
  spec.degree = 2;
  spec.max_terms = 2;
  spec.height = 3;
  for (int t = 0; t < trials; ++t) {
    int wu = static_cast<int>(rng.range(0, K)), wv = static_cast<int>(rng.range(0, K - wu));
    BGState u = bg.random_state(rng, wu, spec), v = bg.random_state(rng, wv, spec);
    BGState pu = Phi(u), pv = Phi(v);
    ++rep.pairs;
    for (int n = wu + wv - 1 - K; n <= wu + wv - 1; ++n) {
      BGState lhs = Phi(bg.nth_product(u, n, v));
      BGState rhs = bg.nth_product(pu, n, pv);
      ++rep.products;
      if (lhs != rhs && rep.failures.size() < 5)
        rep.failures.push_back("u=" + u.str() + " n=" + std::to_string(n) + " v=" + v.str() +
                               " residual " + (lhs - rhs).str());
    }
  }
  if (K >= 2) rep.conformal_preserved = Phi(bg.nu()) == bg.nu();
  rep.conformal_predicate = preserves_conformal(phi);
  if (K < 2) rep.conformal_preserved = rep.conformal_predicate;
  return rep;
}

bool BridgeReport::ok() const {
  if (voa_b0 != alg_b0 || voa_b1 != alg_b1) return false;
  for (auto& [a, b] : star)
    if (a != b) return false;
  return true;
}

BridgeReport algebroid_bridge(const VField& X, const VField& Y, const SmoothPoly& f) {
  int d = X.dim();
  BetaGamma bg(d, 2);
  BGState sX = BGState::from_field(X), sY = BGState::from_field(Y);
  BridgeReport rep;
  BGState p1 = bg.nth_product(sX, 1, sY);
  if (p1.max_weight() > 0) throw DomainError("first product left weight zero");
  rep.voa_b0 = p1.vacuum_coeff();
  rep.alg_b0 = cdo_bracket0(X, Y);
  rep.voa_b1 = (bg.nth_product(sX, 0, sY) - BGState::from_field(lie_bracket(X, Y))).form_part();
  rep.alg_b1 = cdo_bracket1(X, Y);
  SmoothPoly g = f.is_zero() ? (Y.dim() ? Y[0] : SmoothPoly()) : f;
  for (const VField* Z : {&X, &Y}) {
    BGState st = bg.nth_product(BGState::function(g), -1, BGState::from_field(*Z)) - BGState::from_field(g * *Z);
    rep.star.push_back({st.form_part(), cdo_star(g, *Z)});
  }
  return rep;
}

QSeries oscillator_character(int d, int K) {
  std::vector<Q> c(K + 1, Q(0));
  c[0] = 1;
  for (int L = 1; L <= K; ++L)
    for (int v = 0; v < 2 * d; ++v)
      for (int w = L; w <= K; ++w) c[w] += c[w - L];
  return QSeries::from_coeffs(c);
}

SkewReport skew_symmetry_check(const BetaGamma& bg, int trials, std::uint64_t seed, int max_weight) {
  SkewReport rep;
  Rng rng(seed);
  RandomSpec spec;
  spec.degree = 2;
  spec.max_terms = 2;
  spec.height = 3;
  int K = std::min(max_weight, bg.cap());
  for (int t = 0; t < trials; ++t) {
    int wu = static_cast<int>(rng.range(0, K)), wv = static_cast<int>(rng.range(0, K - wu));
    BGState u = bg.random_state(rng, wu, spec), v = bg.random_state(rng, wv, spec);
    for (int n = wu + wv - 1 - bg.cap(); n <= wu + wv - 1; ++n) {
      BGState lhs = bg.nth_product(u, n, v), rhs;
      for (int k = 0; n + k <= wu + wv - 1; ++k) {
        BGState term = bg.translation_power(bg.nth_product(v, n + k, u), k);
        if ((n + k + 1) % 2) term = -term;
        rhs += term;
      }
      ++rep.checked;
      if (lhs != rhs && rep.failures.size() < 5)
        rep.failures.push_back("u=" + u.str() + " n=" + std::to_string(n) + " v=" + v.str());
    }
  }
  return rep;
}

}  // namespace cdo
