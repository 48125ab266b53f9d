#include "cdo/biholo.hpp"

namespace cdo {

namespace {
std::vector<SmoothPoly> coords(int d) {
  std::vector<SmoothPoly> v;
  for (int i = 1; i <= d; ++i) v.push_back(SmoothPoly::var(i));
  return v;
}

std::vector<SmoothPoly> conj_all(const std::vector<SmoothPoly>& v) {
  std::vector<SmoothPoly> r;
  for (auto& p : v) r.push_back(p.conj());
  return r;
}

std::vector<SmoothPoly> compose(const std::vector<SmoothPoly>& outer, const std::vector<SmoothPoly>& inner) {
  std::vector<SmoothPoly> r;
  auto inner_bar = conj_all(inner);
  for (auto& p : outer) r.push_back(p.subst(inner, inner_bar));
  return r;
}
}  // namespace

PolyBiholo::PolyBiholo(std::vector<SmoothPoly> forward, std::vector<SmoothPoly> inverse)
    : fwd_(std::move(forward)), inv_(std::move(inverse)) {
  if (fwd_.size() != inv_.size()) throw DomainError("map and inverse have different dimensions");
  int d = dim();
  if (d > kMaxDim) throw DomainError("dimension too large");
  for (auto* v : {&fwd_, &inv_})
    for (auto& p : *v) {
      if (!p.is_holomorphic()) throw DomainError("biholomorphism components must be holomorphic");
      if (p.max_index() > d) throw DomainError("map component uses a variable beyond the dimension");
    }
  auto id = coords(d);
  if (compose(fwd_, inv_) != id || compose(inv_, fwd_) != id)
    throw DomainError("supplied inverse does not invert the map");
  fwd_bar_ = conj_all(fwd_);
}

PolyBiholo PolyBiholo::identity(int d) { return PolyBiholo(coords(d), coords(d)); }

PolyBiholo PolyBiholo::affine(const std::vector<std::vector<GaussRat>>& A, const std::vector<GaussRat>& c) {
  int d = static_cast<int>(A.size());
  // Gauss-Jordan inverse
  std::vector<std::vector<GaussRat>> M(d, std::vector<GaussRat>(2 * d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) M[i][j] = A[i].at(j);
    M[i][d + i] = 1;
  }
  for (int col = 0; col < d; ++col) {
    int piv = -1;
    for (int r = col; r < d; ++r)
      if (!M[r][col].is_zero()) { piv = r; break; }
    if (piv < 0) throw DomainError("affine map is singular");
    std::swap(M[piv], M[col]);
    GaussRat inv = GaussRat(1) / M[col][col];
    for (auto& x : M[col]) x *= inv;
    for (int r = 0; r < d; ++r) {
      if (r == col || M[r][col].is_zero()) continue;
      GaussRat f = M[r][col];
      for (int k = 0; k < 2 * d; ++k) M[r][k] -= f * M[col][k];
    }
  }
  std::vector<SmoothPoly> fwd(d), inv(d);
  for (int i = 0; i < d; ++i) {
    fwd[i] = SmoothPoly(c.at(i));
    for (int j = 0; j < d; ++j) {
      fwd[i] += SmoothPoly::var(j + 1) * A[i][j];
      inv[i] += (SmoothPoly::var(j + 1) - SmoothPoly(c[j])) * M[i][d + j];
    }
  }
  return PolyBiholo(fwd, inv);
}

PolyBiholo PolyBiholo::shear(int d, int target, const SmoothPoly& p) {
  if (!p.d_hol(target).is_zero()) throw DomainError("shear polynomial depends on its target variable");
  auto fwd = coords(d), inv = coords(d);
  fwd.at(target - 1) += p;
  inv.at(target - 1) -= p;
  return PolyBiholo(fwd, inv);
}

PolyBiholo PolyBiholo::inverse() const { return PolyBiholo(inv_, fwd_); }

PolyBiholo PolyBiholo::after(const PolyBiholo& inner) const {
  if (inner.dim() != dim()) throw DomainError("composing maps of different dimensions");
  return PolyBiholo(compose(fwd_, inner.fwd_), compose(inner.inv_, inv_));
}

bool PolyBiholo::is_affine() const {
  for (auto& p : fwd_)
    if (p.degree() > 1) return false;
  return true;
}

SmoothPoly PolyBiholo::pull(const SmoothPoly& f) const { return f.subst(fwd_, fwd_bar_); }

PQForm PolyBiholo::pull(const PQForm& w) const {
  PQForm r;
  std::vector<PQForm> dh(dim() + 1), db(dim() + 1);
  for (auto& [m, f] : w.terms()) {
    PQForm acc(pull(f));
    for (int i = 1; i <= kMaxDim; ++i)
      if (m & hol_bit(i)) {
        if (i > dim()) throw DomainError("form index beyond the chart dimension");
        if (dh[i].is_zero()) dh[i] = d_hol(PQForm(fwd_[i - 1]));
        acc = wedge(acc, dh[i]);
      }
    for (int i = 1; i <= kMaxDim; ++i)
      if (m & bar_bit(i)) {
        if (i > dim()) throw DomainError("form index beyond the chart dimension");
        if (db[i].is_zero()) db[i] = d_bar(PQForm(fwd_bar_[i - 1]));
        acc = wedge(acc, db[i]);
      }
    r += acc;
  }
  return r;
}

VField PolyBiholo::pull(const VField& X) const {
  MatForm gi = mat_derivative_inverse(*this);
  VField Xphi(dim());
  for (int i = 0; i < std::min(dim(), X.dim()); ++i) Xphi[i] = pull(X[i]);
  return gi.apply(Xphi);
}

MatForm PolyBiholo::pull(const MatForm& m) const { return m.transform([&](const PQForm& w) { return pull(w); }); }

std::string PolyBiholo::str() const {
  std::string s = "(";
  for (int i = 0; i < dim(); ++i) s += (i ? ", " : "") + fwd_[i].str();
  return s + ")";
}

MatForm mat_derivative(const PolyBiholo& phi) {
  int d = phi.dim();
  MatForm g(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = PQForm(phi.forward()[i].d_hol(j + 1));
  return g;
}

MatForm mat_derivative_inverse(const PolyBiholo& phi) {
  int d = phi.dim();
  MatForm g(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = PQForm(phi.pull(phi.inverse_map()[i].d_hol(j + 1)));
  return g;
}

MatForm theta(const PolyBiholo& phi) { return mat_derivative_inverse(phi) * d_hol(mat_derivative(phi)); }

PQForm wz(const PolyBiholo& phi) {
  MatForm t = theta(phi);
  return GaussRat(qfrac(1, 3)) * (t * t * t).trace();
}

ThetaWZ theta_wz(const PolyBiholo& phi) {
  MatForm t = theta(phi);
  return {t, GaussRat(qfrac(1, 3)) * (t * t * t).trace()};
}

PQForm sigma_cocycle(const PolyBiholo& phi2, const PolyBiholo& phi1) {
  MatForm t1 = theta(phi1);
  MatForm g1 = mat_derivative(phi1), g1i = mat_derivative_inverse(phi1);
  MatForm t2 = phi1.pull(theta(phi2));
  return (t1 * (g1i * t2 * g1)).trace();
}

bool preserves_conformal(const PolyBiholo& phi) { return theta(phi).trace().is_zero(); }

namespace {
int form_extent(const PQForm& w) {
  int D = 0;
  for (auto& [m, f] : w.terms()) {
    D = std::max(D, f.max_index());
    for (int i = 1; i <= kMaxDim; ++i)
      if (m & (hol_bit(i) | bar_bit(i))) D = std::max(D, i);
  }
  return D;
}
}  // namespace

PQForm poincare_homotopy(const PQForm& w, Operator op) {
  int D = form_extent(w);
  VField E(D);
  std::vector<SmoothPoly> Ebar(D);
  for (int i = 1; i <= D; ++i) {
    E[i - 1] = SmoothPoly::var(i);
    Ebar[i - 1] = SmoothPoly::var(i, true);
  }
  PQForm r;
  for (auto& [m, f] : w.terms()) {
    for (auto& [mono, c] : f.terms()) {
      int weight = op == Operator::Partial ? SmoothPoly::hol_degree(mono) + mask_p(m)
                                           : SmoothPoly::bar_degree(mono) + mask_q(m);
      if (weight == 0) continue;
      PQForm t = PQForm::term(m, SmoothPoly::monomial(mono, c * GaussRat(qfrac(1, weight))));
      r += op == Operator::Partial ? contract(E, t) : contract_bar(Ebar, t);
    }
  }
  return r;
}

PQForm poincare_solve(const PQForm& w, Operator op) {
  PQForm dw = op == Operator::Partial ? d_hol(w) : d_bar(w);
  if (!dw.is_zero()) throw DomainError("input form is not closed");
  for (auto& [m, f] : w.terms()) {
    bool zero_weight = op == Operator::Partial ? mask_p(m) == 0 : mask_q(m) == 0;
    if (zero_weight) throw DomainError("a closed form of degree zero in the relevant direction is not exact");
  }
  PQForm xi = poincare_homotopy(w, op);
  PQForm back = op == Operator::Partial ? d_hol(xi) : d_bar(xi);
  if (back != w) throw DomainError("homotopy primitive failed to resubstitute");
  return xi;
}

MatForm curvature(const MatForm& gamma) { return de_rham(gamma) + gamma * gamma; }

PQForm chern_simons(const MatForm& gamma) {
  MatForm R = curvature(gamma);
  return (gamma * R).trace() - GaussRat(qfrac(1, 3)) * (gamma * gamma * gamma).trace();
}

ConnectionSuite connection_suite(const MatForm& gamma) {
  MatForm R = curvature(gamma);
  return {R, (gamma * R).trace() - GaussRat(qfrac(1, 3)) * (gamma * gamma * gamma).trace()};
}

}  // namespace cdo
