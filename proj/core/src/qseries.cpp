#include "cdo/qseries.hpp"

#include <algorithm>
#include <sstream>

namespace cdo {

QSeries::QSeries(int order, Q offset) : offset_(std::move(offset)), order_(order), c_(order + 1) {
  if (order < 0) throw DomainError("negative truncation order");
}

QSeries QSeries::constant(const Q& c, int order, Q offset) {
  QSeries s(order, std::move(offset));
  s.c_[0] = c;
  return s;
}

QSeries QSeries::from_coeffs(std::vector<Q> coeffs, Q offset) {
  if (coeffs.empty()) throw DomainError("empty coefficient list");
  QSeries s(static_cast<int>(coeffs.size()) - 1, std::move(offset));
  s.c_ = std::move(coeffs);
  return s;
}

Q QSeries::coeff_at_exponent(const Q& e) const {
  Q n = e - offset_;
  if (n.get_den() != 1) return 0;
  if (sgn(n) < 0) return 0;
  if (n > order_) throw DomainError("exponent beyond truncation order");
  return c_[n.get_num().get_si()];
}

bool QSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Q& x) { return sgn(x) == 0; });
}

QSeries QSeries::truncated(int order) const {
  if (order > order_) throw DomainError("cannot extend truncation order");
  QSeries s(order, offset_);
  std::copy(c_.begin(), c_.begin() + order + 1, s.c_.begin());
  return s;
}

QSeries QSeries::shifted(const Q& by) const {
  QSeries s = *this;
  s.offset_ += by;
  return s;
}

QSeries QSeries::operator-() const {
  QSeries s = *this;
  for (auto& x : s.c_) x = -x;
  return s;
}

QSeries QSeries::operator*(const Q& k) const {
  QSeries s = *this;
  for (auto& x : s.c_) x *= k;
  return s;
}

namespace {
// integer gap b.offset - a.offset, must be >= 0
long offset_gap(const QSeries& lo, const QSeries& hi) {
  Q g = hi.offset() - lo.offset();
  if (g.get_den() != 1) throw DomainError("offsets differ by a non-integer");
  if (sgn(g) < 0) throw DomainError("negative internal degree after alignment");
  return g.get_num().get_si();
}
}  // namespace

QSeries operator+(const QSeries& a, const QSeries& b) {
  const QSeries& lo = a.offset() <= b.offset() ? a : b;
  const QSeries& hi = a.offset() <= b.offset() ? b : a;
  long gap = offset_gap(lo, hi);
  int order = static_cast<int>(std::min<long>(lo.order(), hi.order() + gap));
  QSeries r(order, lo.offset());
  for (int n = 0; n <= order; ++n) {
    r[n] = lo[n];
    if (n >= gap) r[n] += hi[n - gap];
  }
  return r;
}

QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

QSeries operator*(const QSeries& a, const QSeries& b) {
  int order = std::min(a.order(), b.order());
  QSeries r(order, a.offset() + b.offset());
  for (int i = 0; i <= order; ++i) {
    if (sgn(a[i]) == 0) continue;
    for (int j = 0; i + j <= order; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

QSeries QSeries::invert() const {
  if (sgn(c_[0]) == 0) throw DomainError("inverting a series with zero leading coefficient");
  QSeries r(order_, -offset_);
  r.c_[0] = 1 / c_[0];
  for (int n = 1; n <= order_; ++n) {
    Q acc;
    for (int k = 1; k <= n; ++k) acc += c_[k] * r.c_[n - k];
    r.c_[n] = -acc * r.c_[0];
  }
  return r;
}

QSeries QSeries::pow(long m) const {
  if (m < 0) return invert().pow(-m);
  QSeries result = constant(1, order_);
  QSeries base = *this;
  while (m > 0) {
    if (m & 1) result = result * base;
    m >>= 1;
    if (m) base = base * base;
  }
  return result;
}

std::string QSeries::str(int max_terms) const {
  std::ostringstream os;
  bool first = true;
  int shown = 0;
  for (int n = 0; n <= order_; ++n) {
    if (sgn(c_[n]) == 0) continue;
    if (max_terms >= 0 && shown++ >= max_terms) break;
    Q e = offset_ + n;
    Q c = c_[n];
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    first = false;
    Q ac = abs(c);
    bool unit = ac == 1;
    if (!unit || sgn(e) == 0) os << ac.get_str();
    if (sgn(e) != 0) {
      if (!unit) os << "*";
      os << "q";
      if (e != 1) os << "^" << (e.get_den() == 1 ? e.get_str() : "(" + e.get_str() + ")");
    }
  }
  if (first) os << "0";
  os << " + O(q^" << Q(offset_ + order_ + 1).get_str() << ")";
  return os.str();
}

QSeries qs_arith(const QSeries& lhs, const QSeries& rhs, QOp op, long power) {
  switch (op) {
    case QOp::Add: return lhs + rhs;
    case QOp::Mul: return lhs * rhs;
    case QOp::Invert: return lhs.invert();
    case QOp::Pow: return lhs.pow(power);
  }
  throw DomainError("unknown q-series operation");
}

std::optional<std::pair<Q, Q>> first_difference(const QSeries& a, const QSeries& b) {
  QSeries d = a - b;
  for (int n = 0; n <= d.order(); ++n)
    if (sgn(d[n]) != 0) return std::make_pair(Q(d.offset() + n), d[n]);
  return std::nullopt;
}

bool series_equal(const QSeries& a, const QSeries& b) { return !first_difference(a, b).has_value(); }

QSeries eta_power(long m, int order) {
  QSeries p = QSeries::constant(1, order);
  for (int n = 1; n <= order; ++n) {
    // multiply by (1 - q^n) in place
    for (int k = order; k >= n; --k) p[k] -= p[k - n];
  }
  return p.pow(m).shifted(qfrac(m, 24));
}

namespace {
Q sigma(int k, long n) {
  mpz_class s = 0;
  for (long e = 1; e <= n; ++e)
    if (n % e == 0) {
      mpz_class t;
      mpz_ui_pow_ui(t.get_mpz_t(), e, k);
      s += t;
    }
  return Q(s);
}
}  // namespace

QSeries eisenstein(int k, int order) {
  long ck;
  if (k == 4) ck = 240;
  else if (k == 6) ck = -504;
  else throw DomainError("unsupported Eisenstein weight " + std::to_string(k));
  QSeries e = QSeries::constant(1, order);
  for (int n = 1; n <= order; ++n) e[n] = ck * sigma(k - 1, n);
  return e;
}

std::string Monomial46::name() const {
  std::string s;
  if (a) s += "E4" + (a > 1 ? "^" + std::to_string(a) : std::string());
  if (b) s += (s.empty() ? "" : "*") + std::string("E6") + (b > 1 ? "^" + std::to_string(b) : std::string());
  return s.empty() ? "1" : s;
}

std::vector<Monomial46> modular_basis(int weight) {
  std::vector<Monomial46> out;
  if (weight < 0 || weight % 2) return out;
  for (int b = 0; 6 * b <= weight; ++b)
    if ((weight - 6 * b) % 4 == 0) out.push_back({(weight - 6 * b) / 4, b});
  return out;
}

Decomposition modularity_decompose(const QSeries& s, int weight, int order) {
  Decomposition out;
  if (sgn(s.offset()) != 0) {
    out.message = "series offset must be 0";
    return out;
  }
  if (order > s.order()) {
    out.message = "series known only to order " + std::to_string(s.order());
    return out;
  }
  auto basis = modular_basis(weight);
  QSeries e4 = eisenstein(4, order), e6 = eisenstein(6, order);
  std::vector<QSeries> cols;
  for (auto& m : basis) cols.push_back(e4.pow(m.a) * e6.pow(m.b));
  const int rows = order + 1, ncol = static_cast<int>(cols.size());
  std::vector<std::vector<Q>> A(rows, std::vector<Q>(ncol + 1));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < ncol; ++c) A[r][c] = cols[c][r];
    A[r][ncol] = s[r];
  }
  // row echelon on coefficient columns
  std::vector<int> pivots;
  int prow = 0;
  for (int c = 0; c < ncol && prow < rows; ++c) {
    int sel = -1;
    for (int r = prow; r < rows; ++r)
      if (sgn(A[r][c]) != 0) { sel = r; break; }
    if (sel < 0) continue;
    std::swap(A[sel], A[prow]);
    for (int r = 0; r < rows; ++r) {
      if (r == prow || sgn(A[r][c]) == 0) continue;
      Q f = A[r][c] / A[prow][c];
      for (int k = c; k <= ncol; ++k) A[r][k] -= f * A[prow][k];
    }
    pivots.push_back(c);
    ++prow;
  }
  if (static_cast<int>(pivots.size()) < ncol) {
    out.status = Decomposition::Underdetermined;
    out.message = "order " + std::to_string(order) + " does not determine the " +
                  std::to_string(ncol) + "-element basis";
    return out;
  }
  std::vector<Q> x(ncol);
  for (int p = 0; p < ncol; ++p) x[pivots[p]] = A[p][ncol] / A[p][pivots[p]];
  QSeries resid = s.truncated(order);
  for (int c = 0; c < ncol; ++c) resid = resid - cols[c] * x[c];
  for (int n = 0; n <= order; ++n)
    if (sgn(resid[n]) != 0) {
      out.status = Decomposition::NotMember;
      out.mismatch_degree = n;
      out.residual = resid[n];
      out.message = "mismatch at q^" + std::to_string(n);
      return out;
    }
  out.status = Decomposition::Member;
  for (int c = 0; c < ncol; ++c)
    if (sgn(x[c]) != 0) out.coeffs[basis[c]] = x[c];
  return out;
}

nlohmann::json to_json(const QSeries& s) {
  nlohmann::json j;
  j["offset_num"] = s.offset().get_num().get_si();
  j["offset_den"] = s.offset().get_den().get_si();
  j["order"] = s.order();
  auto arr = nlohmann::json::array();
  for (auto& c : s.coeffs()) arr.push_back(c.get_str());
  j["coeffs"] = arr;
  return j;
}

QSeries qseries_from_json(const nlohmann::json& j) {
  Q off = qfrac(j.at("offset_num").get<long>(), j.at("offset_den").get<long>());
  std::vector<Q> c;
  for (auto& x : j.at("coeffs")) c.push_back(parse_q(x.get<std::string>()));
  QSeries s = QSeries::from_coeffs(std::move(c), off);
  if (j.contains("order") && j["order"].get<int>() != s.order())
    throw DomainError("order does not match coefficient count");
  return s;
}

}  // namespace cdo
