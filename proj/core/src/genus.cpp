#include "cdo/genus.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace cdo {

namespace {
void partitions_rec(int n, int maxpart, Partition& cur, std::vector<Partition>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int k = std::min(n, maxpart); k >= 1; --k) {
    cur.push_back(k);
    partitions_rec(n - k, k, cur, out);
    cur.pop_back();
  }
}

Partition merge(const Partition& a, const Partition& b) {
  Partition r(a);
  r.insert(r.end(), b.begin(), b.end());
  std::sort(r.begin(), r.end(), std::greater<>());
  return r;
}

int weight(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }
}  // namespace

std::vector<Partition> partitions(int n) {
  std::vector<Partition> out;
  Partition cur;
  if (n >= 0) partitions_rec(n, n, cur, out);
  return out;
}

std::string chern_key(const Partition& p) {
  if (p.empty()) return "1";
  std::map<int, int> mult;
  for (int k : p) ++mult[k];
  std::string s;
  for (auto [k, e] : mult) {
    s += "c" + std::to_string(k);
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

Partition parse_chern_key(const std::string& key) {
  Partition p;
  size_t i = 0;
  auto number = [&](const char* what) {
    if (i >= key.size() || !std::isdigit(static_cast<unsigned char>(key[i])))
      throw DomainError("bad Chern monomial '" + key + "': expected " + what);
    int v = 0;
    while (i < key.size() && std::isdigit(static_cast<unsigned char>(key[i]))) v = 10 * v + (key[i++] - '0');
    return v;
  };
  if (key == "1") return p;
  while (i < key.size()) {
    char ch = key[i];
    if (ch == ' ' || ch == '*') {
      ++i;
      continue;
    }
    if (ch != 'c') throw DomainError("bad Chern monomial '" + key + "'");
    ++i;
    int idx = number("class index");
    if (idx < 1) throw DomainError("Chern class index must be positive in '" + key + "'");
    int e = 1;
    if (i < key.size() && key[i] == '^') {
      ++i;
      e = number("exponent");
    }
    for (int t = 0; t < e; ++t) p.push_back(idx);
  }
  std::sort(p.begin(), p.end(), std::greater<>());
  return p;
}

ChernData ChernData::point() {
  ChernData c;
  c.numbers[{}] = 1;
  return c;
}

ChernData ChernData::from_json(const nlohmann::json& j) {
  ChernData c;
  if (!j.contains("d") || !j["d"].is_number_integer()) throw DomainError("ChernData needs integer field d");
  c.d = j["d"].get<int>();
  if (c.d < 0) throw DomainError("dimension must be nonnegative");
  if (j.contains("chern_numbers")) {
    for (auto& [k, v] : j["chern_numbers"].items()) {
      Partition p = parse_chern_key(k);
      if (weight(p) != c.d) throw DomainError("monomial " + k + " is not of degree " + std::to_string(c.d));
      if (v.is_number_integer()) c.numbers[p] = Q(v.get<long>());
      else if (v.is_string()) c.numbers[p] = parse_q(v.get<std::string>());
      else throw DomainError("Chern number for " + k + " must be an integer");
    }
  }
  if (c.d == 0 && c.numbers.empty()) c.numbers[{}] = 1;
  c.validate();
  return c;
}

nlohmann::json ChernData::to_json() const {
  nlohmann::json j;
  j["d"] = d;
  auto& m = j["chern_numbers"] = nlohmann::json::object();
  for (auto& [p, v] : numbers) {
    if (v.get_den() == 1) m[chern_key(p)] = v.get_num().get_si();
    else m[chern_key(p)] = v.get_str();
  }
  return j;
}

const Q& ChernData::number(const Partition& p) const {
  auto it = numbers.find(p);
  if (it == numbers.end()) throw DomainError("missing Chern number for " + chern_key(p));
  return it->second;
}

void ChernData::validate() const {
  for (auto& p : partitions(d))
    if (!numbers.count(p)) throw DomainError("missing Chern number for " + chern_key(p));
}

RootSeries::RootSeries(int deg, int order) : c(deg + 1, QSeries(order)) {}

RootSeries RootSeries::operator*(const RootSeries& o) const {
  RootSeries r(deg(), order());
  for (int i = 0; i <= deg(); ++i)
    for (int j = 0; i + j <= deg(); ++j) {
      if (c[i].is_zero()) break;
      r.c[i + j] = r.c[i + j] + c[i] * o.c[j];
    }
  return r;
}

RootSeries RootSeries::operator+(const RootSeries& o) const {
  RootSeries r(deg(), order());
  for (int i = 0; i <= deg(); ++i) r.c[i] = c[i] + o.c[i];
  return r;
}

RootSeries RootSeries::inverse() const {
  RootSeries r(deg(), order());
  QSeries inv0 = c[0].invert();
  r.c[0] = inv0;
  for (int n = 1; n <= deg(); ++n) {
    QSeries acc(order());
    for (int k = 1; k <= n; ++k) acc = acc + c[k] * r.c[n - k];
    r.c[n] = -(acc * inv0);
  }
  return r;
}

RootSeries RootSeries::log_normalized() const {
  RootSeries u(deg(), order());
  QSeries inv0 = c[0].invert();
  for (int i = 1; i <= deg(); ++i) u.c[i] = c[i] * inv0;
  RootSeries out(deg(), order()), power = u;
  for (int n = 1; n <= deg(); ++n) {
    Q k = qfrac(n % 2 ? 1 : -1, n);
    for (int i = 0; i <= deg(); ++i) out.c[i] = out.c[i] + power.c[i] * k;
    power = power * u;
  }
  return out;
}

RootSeries RootSeries::exp_linear(const Q& a, int deg, int order) {
  RootSeries r(deg, order);
  Q term = 1;
  for (int i = 0; i <= deg; ++i) {
    r.c[i] = QSeries::constant(term, order);
    term = term * a / (i + 1);
  }
  return r;
}

SymExpansion::SymExpansion(int d, int order) : d_(d), order_(order) {}

void SymExpansion::add_term(const Partition& p, const QSeries& s) {
  if (weight(p) > d_) return;
  auto it = terms_.find(p);
  if (it == terms_.end()) {
    if (!s.is_zero()) terms_.emplace(p, s);
    return;
  }
  it->second = it->second + s;
  if (it->second.is_zero()) terms_.erase(it);
}

SymExpansion SymExpansion::one(int d, int order) {
  SymExpansion e(d, order);
  e.add_term({}, QSeries::constant(1, order));
  return e;
}

SymExpansion SymExpansion::power_sum(int k, int d, int order) {
  SymExpansion e(d, order);
  if (k == 0) e.add_term({}, QSeries::constant(d, order));
  else e.add_term({k}, QSeries::constant(1, order));
  return e;
}

SymExpansion SymExpansion::elementary(int k, int d, int order) {
  // Newton: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
  std::vector<SymExpansion> e{one(d, order)};
  for (int m = 1; m <= k; ++m) {
    SymExpansion acc(d, order);
    for (int i = 1; i <= m; ++i) {
      SymExpansion t = e[m - i] * power_sum(i, d, order);
      acc = acc + t * QSeries::constant(qfrac(i % 2 ? 1 : -1, m), order);
    }
    e.push_back(acc);
  }
  return e[k];
}

SymExpansion SymExpansion::additive(const RootSeries& g, int d) {
  SymExpansion e(d, g.order());
  e.add_term({}, g.c[0] * Q(d));
  for (int k = 1; k <= std::min(d, g.deg()); ++k) e.add_term({k}, g.c[k]);
  return e;
}

SymExpansion SymExpansion::multiplicative(const RootSeries& f, int d) {
  RootSeries l = f.log_normalized();
  SymExpansion lin(d, f.order());
  for (int k = 1; k <= std::min(d, l.deg()); ++k) lin.add_term({k}, l.c[k]);
  return lin.exp() * f.c[0].pow(d);
}

SymExpansion SymExpansion::operator+(const SymExpansion& o) const {
  SymExpansion r = *this;
  for (auto& [p, s] : o.terms_) r.add_term(p, s);
  return r;
}

SymExpansion SymExpansion::operator*(const SymExpansion& o) const {
  SymExpansion r(d_, std::min(order_, o.order_));
  for (auto& [p, s] : terms_)
    for (auto& [p2, s2] : o.terms_) {
      if (weight(p) + weight(p2) > d_) continue;
      r.add_term(merge(p, p2), s * s2);
    }
  return r;
}

SymExpansion SymExpansion::operator*(const QSeries& k) const {
  SymExpansion r(d_, std::min(order_, k.order()));
  for (auto& [p, s] : terms_) r.add_term(p, s * k);
  return r;
}

SymExpansion SymExpansion::exp() const {
  if (terms_.count({})) throw DomainError("exp of a symmetric expansion with constant term");
  SymExpansion out = one(d_, order_), power = one(d_, order_);
  for (int n = 1; n <= d_; ++n) {
    power = power * *this * QSeries::constant(qfrac(1, n), order_);
    out = out + power;
  }
  return out;
}

namespace {
using ChernPoly = std::map<Partition, Q>;

ChernPoly chern_mul(const ChernPoly& a, const ChernPoly& b, int d) {
  ChernPoly r;
  for (auto& [p, x] : a)
    for (auto& [p2, y] : b) {
      if (weight(p) + weight(p2) > d) continue;
      r[merge(p, p2)] += x * y;
    }
  std::erase_if(r, [](auto& kv) { return sgn(kv.second) == 0; });
  return r;
}

// p_k in elementary symmetric functions of d variables
std::vector<ChernPoly> newton_power_sums(int d) {
  std::vector<ChernPoly> p(d + 1);
  auto e = [&](int i) {
    ChernPoly r;
    if (i <= d) r[{i}] = 1;
    return r;
  };
  for (int k = 1; k <= d; ++k) {
    ChernPoly acc;
    for (int i = 1; i < k; ++i) {
      ChernPoly t = chern_mul(e(i), p[k - i], d);
      for (auto& [m, v] : t) acc[m] += (i % 2 ? 1 : -1) * v;
    }
    for (auto& [m, v] : e(k)) acc[m] += (k % 2 ? 1 : -1) * k * v;
    std::erase_if(acc, [](auto& kv) { return sgn(kv.second) == 0; });
    p[k] = acc;
  }
  return p;
}
}  // namespace

std::map<Partition, QSeries> SymExpansion::in_chern_classes() const {
  auto p = newton_power_sums(d_);
  std::map<Partition, QSeries> out;
  for (auto& [lam, s] : terms_) {
    ChernPoly acc{{Partition{}, Q(1)}};
    for (int k : lam) acc = chern_mul(acc, p[k], d_);
    for (auto& [m, v] : acc) {
      auto it = out.find(m);
      if (it == out.end()) out.emplace(m, s * v);
      else it->second = it->second + s * v;
    }
  }
  std::erase_if(out, [](auto& kv) { return kv.second.is_zero(); });
  return out;
}

QSeries integrate(const SymExpansion& e, const ChernData& data) {
  if (e.d() != data.d) throw DomainError("dimension mismatch in integration");
  QSeries total(e.order());
  for (auto& [m, s] : e.in_chern_classes())
    if (weight(m) == data.d) total = total + s * data.number(m);
  return total;
}

RootSeries ahat_root(int deg, int order) {
  // (x/2)/sinh(x/2)
  RootSeries s(deg, order);
  for (int j = 0; 2 * j <= deg; ++j) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), 2 * j + 1);
    mpz_class two;
    mpz_ui_pow_ui(two.get_mpz_t(), 2, 2 * j);
    s.c[2 * j] = QSeries::constant(Q(1) / Q(f * two), order);
  }
  return s.inverse();
}

RootSeries todd_root(int deg, int order) {
  // x/(1-e^{-x})
  RootSeries s(deg, order);
  for (int j = 0; j <= deg; ++j) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), j + 1);
    s.c[j] = QSeries::constant(Q(j % 2 ? -1 : 1) / Q(f), order);
  }
  return s.inverse();
}

namespace {
// 1 / ((1 - q^k e^{x}) (1 - q^k e^{-x})), k = 1..order
RootSeries sym_tower(int deg, int order) {
  RootSeries acc = RootSeries::exp_linear(0, deg, order);
  for (int k = 1; k <= order; ++k)
    for (int sign : {1, -1}) {
      RootSeries f = RootSeries::exp_linear(sign, deg, order);
      QSeries qk(order);
      qk[k] = 1;
      RootSeries g(deg, order);
      for (int i = 0; i <= deg; ++i) g.c[i] = -(f.c[i] * qk);
      g.c[0] = g.c[0] + QSeries::constant(1, order);
      acc = acc * g.inverse();
    }
  return acc;
}
}  // namespace

SymExpansion witten_integrand(int d, int order) {
  RootSeries f = ahat_root(d, order) * sym_tower(d, order);
  QSeries euler = eta_power(1, order).shifted(qfrac(-1, 24)).pow(2);  // prod (1-q^k)^2
  for (auto& c : f.c) c = c * euler;
  return SymExpansion::multiplicative(f, d);
}

SymExpansion character_integrand(int d, int order) {
  return SymExpansion::multiplicative(todd_root(d, order) * sym_tower(d, order), d);
}

GenusSeries witten_genus(const ChernData& data, int order) {
  data.validate();
  return {integrate(witten_integrand(data.d, order), data), "witten"};
}

std::pair<Q, Q> todd_and_ahat(const ChernData& data) {
  data.validate();
  int d = data.d;
  Q td = integrate(SymExpansion::multiplicative(todd_root(d, 0), d), data)[0];
  Q ah = integrate(SymExpansion::multiplicative(ahat_root(d, 0), d), data)[0];
  return {td, ah};
}

GenusSeries cdo_character(const ChernData& data, int order) {
  data.validate();
  QSeries v = integrate(character_integrand(data.d, order), data).shifted(qfrac(-data.d, 12));
  return {v, "character"};
}

Q euler_characteristic(const ChernData& data, const std::vector<int>& root_signs) {
  data.validate();
  int d = data.d;
  SymExpansion ch(d, 0);
  for (int s : root_signs) ch = ch + SymExpansion::additive(RootSeries::exp_linear(s, d, 0), d);
  return integrate(SymExpansion::multiplicative(todd_root(d, 0), d) * ch, data)[0];
}

IdentityCheck character_identity_check(const ChernData& data, int order) {
  IdentityCheck out;
  out.lhs = cdo_character(data, order).value;
  int d = data.d;
  SymExpansion twisted =
      SymExpansion::multiplicative(RootSeries::exp_linear(qfrac(1, 2), d, order), d) * witten_integrand(d, order);
  out.rhs = integrate(twisted, data) * eta_power(-2 * d, order);
  out.first_difference = first_difference(out.lhs, out.rhs);
  out.equal = !out.first_difference.has_value();
  return out;
}

ObstructionReport obstruction_predicates(const ChernData& data) {
  data.validate();
  ObstructionReport r;
  int d = data.d;
  for (auto& p : partitions(d)) {
    if (std::find(p.begin(), p.end(), 1) == p.end()) continue;
    Q v = data.number(p);
    bool ok = sgn(v) == 0;
    r.items.push_back({"ch1", chern_key(p), v, ok});
    r.ch1_necessary = r.ch1_necessary && ok;
  }
  if (d >= 2)
    for (auto& mu : partitions(d - 2)) {
      Q v = data.number(merge({1, 1}, mu)) - 2 * data.number(merge({2}, mu));
      bool ok = sgn(v) == 0;
      std::string rest = mu.empty() ? "" : "*" + chern_key(mu);
      r.items.push_back({"ch2", "(c1^2-2c2)" + rest, v, ok});
      r.ch2_necessary = r.ch2_necessary && ok;
    }
  r.note = "Chern numbers give necessary conditions only; vanishing of ch1 and ch2 as classes cannot be certified from them";
  return r;
}

}  // namespace cdo
