#include "cdo/dolbeault.hpp"

#include <sstream>

namespace cdo {

namespace {
const GaussRat kHalf(qfrac(1, 2));

PQForm bar_monomial(Mask J) { return PQForm::term(J, SmoothPoly(1)); }

// w = sum_J w_J ^ d b-bar^J with w_J free of d b-bar
std::map<Mask, PQForm> split_bar(const PQForm& w) {
  std::map<Mask, PQForm> r;
  for (auto& [m, f] : w.terms()) {
    Mask J = m & ~Mask(0xFFFFu);
    r[J] += PQForm::term(m & Mask(0xFFFFu), f);
  }
  return r;
}

// coefficient eta_k of db^k in a form whose terms carry exactly one db
PQForm strip_hol(const PQForm& w, int k) {
  PQForm r;
  for (auto& [m, f] : w.terms())
    if (m & hol_bit(k)) {
      if (mask_p(m) != 1) throw DomainError("expected a (1,q)-form");
      r += PQForm::term(m & ~hol_bit(k), f);
    }
  return r;
}

using FMat = std::vector<std::vector<SmoothPoly>>;

FMat fmat(int d) { return FMat(d, std::vector<SmoothPoly>(d)); }

SmoothPoly trace_prod(const FMat& a, const FMat& b) {
  SmoothPoly r;
  int d = static_cast<int>(a.size());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r += a[i][j] * b[j][i];
  return r;
}

FMat as_fmat(const MatForm& m) {
  FMat r = fmat(m.n());
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) r[i][j] = m(i, j).function();
  return r;
}

SmoothPoly eval1(const PQForm& w, const VField& V) { return contract(V, w).function(); }

PQForm wedge_all(const PQForm& a, const PQForm& b, const PQForm& c) { return wedge(wedge(a, b), c); }
}  // namespace

// ---- FieldForm ----

FieldForm::FieldForm(const VField& X) : c(X.dim()) {
  for (int k = 0; k < X.dim(); ++k) c[k] = PQForm(X[k]);
}

FieldForm FieldForm::of(const VField& X, const PQForm& w) {
  FieldForm r(X.dim());
  for (int k = 0; k < X.dim(); ++k) r.c[k] = X[k] * w;
  return r;
}

bool FieldForm::is_zero() const {
  for (auto& w : c)
    if (!w.is_zero()) return false;
  return true;
}

std::map<Mask, VField> FieldForm::split() const {
  std::map<Mask, VField> r;
  for (int k = 0; k < dim(); ++k)
    for (auto& [m, f] : c[k].terms()) {
      if (mask_p(m)) throw DomainError("field coefficients must be (0,q)-forms");
      auto it = r.try_emplace(m, VField(dim())).first;
      it->second[k] += f;
    }
  return r;
}

FieldForm FieldForm::join(int d, const std::map<Mask, VField>& parts) {
  FieldForm r(d);
  for (auto& [J, X] : parts)
    for (int k = 0; k < d; ++k) r.c[k] += PQForm::term(J, X[k]);
  return r;
}

FieldForm FieldForm::operator-() const {
  FieldForm r(dim());
  for (int k = 0; k < dim(); ++k) r.c[k] = -c[k];
  return r;
}

FieldForm& FieldForm::operator+=(const FieldForm& o) {
  if (c.empty()) c.resize(o.c.size());
  for (size_t k = 0; k < o.c.size(); ++k) c.at(k) += o.c[k];
  return *this;
}

FieldForm& FieldForm::operator-=(const FieldForm& o) {
  if (c.empty()) c.resize(o.c.size());
  for (size_t k = 0; k < o.c.size(); ++k) c.at(k) -= o.c[k];
  return *this;
}

std::string FieldForm::str() const {
  std::ostringstream os;
  os << "(";
  for (int k = 0; k < dim(); ++k) os << (k ? ", " : "") << c[k].str();
  os << ")";
  return os.str();
}

FieldForm pull_value(const PolyBiholo& phi, const FieldForm& X) {
  MatForm gi = mat_derivative_inverse(phi);
  int d = X.dim();
  std::vector<PQForm> pulled(d);
  for (int k = 0; k < d; ++k) pulled[k] = phi.pull(X.c[k]);
  FieldForm r(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      SmoothPoly g = gi(i, k).function();
      if (!g.is_zero() && !pulled[k].is_zero()) r.c[i] += g * pulled[k];
    }
  return r;
}

PQForm dbar_functions(const PQForm& w) { return d_bar(w); }
PQForm dbar_one_forms(const PQForm& w) { return -d_bar(w); }

FieldForm dbar_fields(const FieldForm& X) {
  FieldForm r(X.dim());
  for (int k = 0; k < X.dim(); ++k) r.c[k] = d_bar(X.c[k]);
  return r;
}

// ---- connection, B and H data ----

ConnectionData ConnectionData::propagate(const Nerve& N, const MatForm& gamma0) { return {propagate_gamma(N, gamma0)}; }

std::vector<std::string> ConnectionData::check(const Nerve& N) const {
  std::vector<std::string> problems;
  if (static_cast<int>(gamma.size()) != N.size()) return {"one connection form per chart required"};
  for (int a = 0; a < N.size(); ++a) {
    for (int i = 0; i < gamma[a].n(); ++i)
      for (int j = 0; j < gamma[a].n(); ++j)
        if (!gamma[a](i, j).is_type(1, 0)) problems.push_back(N.names()[a] + ": Gamma is not of type (1,0)");
    MatForm Ra = R(a);
    for (int i = 0; i < Ra.n(); ++i)
      for (int j = 0; j < Ra.n(); ++j)
        if (!Ra(i, j).part(0, 2).is_zero()) problems.push_back(N.names()[a] + ": curvature has a (0,2) part");
  }
  for (auto& s : N.simplices(1)) {
    MatForm r = gamma_law_residual(N, gamma, s[1], s[0]);
    if (!r.is_zero()) problems.push_back("transition law fails on " + simplex_str(s) + ": " + r.str());
  }
  return problems;
}

namespace {
PQForm b_rhs(const Nerve& N, const ConnectionData& c, int beta, int alpha, bool drop) {
  PQForm r = N.xi(beta, alpha);
  if (!drop) r += (N.theta(beta, alpha) * c.gamma.at(alpha)).trace();
  return r;
}
}  // namespace

BData BData::solve(const Nerve& N, const ConnectionData& c, const PQForm& B0, bool drop_theta_gamma) {
  if (!B0.is_type(2, 0)) throw DomainError("B must be a (2,0)-form");
  BData b{{B0}};
  for (int k = 1; k < N.size(); ++k)
    b.B.push_back(N.phi(k, 0).inverse().pull(B0 + b_rhs(N, c, k, 0, drop_theta_gamma)));
  return b;
}

std::vector<std::string> BData::check(const Nerve& N, const ConnectionData& c) const {
  std::vector<std::string> problems;
  for (auto& s : N.simplices(1)) {
    int a = s[0], b = s[1];
    PQForm r = N.phi(b, a).pull(B.at(b)) - B.at(a) - b_rhs(N, c, b, a, false);
    if (!r.is_zero()) problems.push_back("B equation fails on " + simplex_str(s) + ": " + r.str());
  }
  return problems;
}

HForm HForm::build(const ConnectionData& c, const BData& b) {
  HForm h;
  for (size_t a = 0; a < c.gamma.size(); ++a) h.H.push_back(de_rham(b.B.at(a)) - chern_simons(c.gamma[a]));
  return h;
}

std::vector<std::string> HForm::check(const Nerve& N, const ConnectionData& c) const {
  std::vector<std::string> problems;
  for (int a = 0; a < N.size(); ++a) {
    const PQForm& h = H.at(a);
    if (!h.part(1, 2).is_zero() || !h.part(0, 3).is_zero())
      problems.push_back(N.names()[a] + ": H has a (1,2) or (0,3) part");
    MatForm R = c.R(a);
    PQForm r = de_rham(h) + (R * R).trace();
    if (!r.is_zero()) problems.push_back(N.names()[a] + ": dH + Tr(R^R) = " + r.str());
  }
  for (auto& s : N.simplices(1)) {
    PQForm r = N.phi(s[1], s[0]).pull(H.at(s[1])) - H.at(s[0]);
    if (!r.is_zero()) problems.push_back("H does not glue on " + simplex_str(s) + ": " + r.str());
  }
  return problems;
}

MatForm chern_type_connection(const MatForm& h) {
  SmoothPoly det = determinant(h);
  if (det.is_zero() || !det.is_constant()) throw DomainError("h must have constant nonzero determinant");
  return inverse_unimodular(h) * d_hol(h);
}

bool curvature_is_11(const MatForm& gamma) {
  MatForm R = curvature(gamma);
  for (int i = 0; i < R.n(); ++i)
    for (int j = 0; j < R.n(); ++j)
      if (!R(i, j).is_type(1, 1)) return false;
  return true;
}

PQForm LocalModel::H() const { return de_rham(B) - chern_simons(gamma); }

// ---- h and the bar operators ----

PQForm h_local(const MatForm& gamma, const PQForm& B, const VField& Y) {
  int d = Y.dim();
  PQForm r;
  for (int i = 1; i <= d; ++i)
    for (int j = 1; j <= d; ++j) {
      SmoothPoly c = Y[j - 1].d_hol(i);
      if (!c.is_zero()) r += c * gamma(i - 1, j - 1);
    }
  r += kHalf * (gamma.contract(Y) * gamma).trace();
  r -= kHalf * contract(Y, B);
  return r;
}

PQForm h_local(const LocalModel& m, const FieldForm& Y) {
  PQForm r;
  for (auto& [J, X] : Y.split()) r += wedge(h_local(m.gamma, m.B, X), bar_monomial(J));
  return r;
}

CheckReport check_h_equation(const Nerve& N, const ConnectionData& c, const BData& b, int trials, std::uint64_t seed,
                             RandomSpec spec) {
  CheckReport rep;
  rep.name = "local h equation";
  rep.trials = trials;
  rep.checked = {"h.transition"};
  Rng rng(seed);
  spec.smooth = true;
  for (int t = 0; t < trials; ++t)
    for (auto& s : N.simplices(1)) {
      int a = s[0], be = s[1];
      const PolyBiholo& phi = N.phi(be, a);
      VField X = random_field(rng, N.dim(), spec);
      PQForm lhs = N.delta(be, a, X);
      PQForm rhs = phi.pull(h_local(c.gamma[be], b.B[be], X)) - h_local(c.gamma[a], b.B[a], phi.pull(X));
      PQForm r = lhs - rhs;
      if (!r.is_zero() && rep.failures.empty())
        rep.failures.push_back({"h.transition", t, simplex_str(s) + " X = " + X.str(), r.str()});
    }
  return rep;
}

PQForm bar_delta(const LocalModel& m, const FieldForm& X) {
  return -(dbar_one_forms(h_local(m, X)) - h_local(m, dbar_fields(X)));
}

PQForm bar_delta_degree0(const LocalModel& m, const VField& X) {
  PQForm hX = h_local(m.gamma, m.B, X), r;
  for (int i = 1; i <= m.dim(); ++i) {
    PQForm term = -hX.map_coeffs([i](const SmoothPoly& f) { return f.d_bar(i); }) +
                  h_local(m.gamma, m.B, d_bar_field(X, i));
    r += wedge(term, PQForm::dbbar(i));
  }
  return r;
}

namespace {
PQForm star0(const LocalModel& m, const SmoothPoly& f, const VField& X) {
  return cdo_star(f, X) + h_local(m.gamma, m.B, f * X) - f * h_local(m.gamma, m.B, X);
}

SmoothPoly bracket0_0(const LocalModel& m, const VField& X, const VField& Y) {
  return cdo_bracket0(X, Y) - pairing(h_local(m.gamma, m.B, X), Y) - pairing(h_local(m.gamma, m.B, Y), X);
}

PQForm bracket1_0(const LocalModel& m, const VField& X, const VField& Y) {
  PQForm hX = h_local(m.gamma, m.B, X), hY = h_local(m.gamma, m.B, Y);
  return cdo_bracket1(X, Y) - lie_derivative(X, hY) + lie_derivative(Y, hX) - d_hol(PQForm(pairing(hX, Y))) +
         h_local(m.gamma, m.B, lie_bracket(X, Y));
}
}  // namespace

PQForm bar_star(const LocalModel& m, const PQForm& f, const FieldForm& X) {
  PQForm r;
  auto xs = X.split();
  for (auto& [I, fI] : f.terms()) {
    if (mask_p(I)) throw DomainError("function coefficients must be (0,q)-forms");
    for (auto& [J, XJ] : xs) r += wedge_all(star0(m, fI, XJ), bar_monomial(I), bar_monomial(J));
  }
  return r;
}

PQForm bar_bracket0(const LocalModel& m, const FieldForm& X, const FieldForm& Y) {
  PQForm r;
  auto ys = Y.split();
  for (auto& [I, XI] : X.split())
    for (auto& [J, YJ] : ys) r += bracket0_0(m, XI, YJ) * wedge(bar_monomial(I), bar_monomial(J));
  return r;
}

PQForm bar_bracket1(const LocalModel& m, const FieldForm& X, const FieldForm& Y) {
  PQForm r;
  auto ys = Y.split();
  for (auto& [I, XI] : X.split())
    for (auto& [J, YJ] : ys) r += wedge_all(bracket1_0(m, XI, YJ), bar_monomial(I), bar_monomial(J));
  return r;
}

BarOps bar_operators(const LocalModel& m, const PQForm& f, const FieldForm& X, const FieldForm& Y) {
  return {bar_delta(m, X), bar_star(m, f, X), bar_bracket0(m, X, Y), bar_bracket1(m, X, Y)};
}

// ---- frames and the invariant formulas ----

Frame Frame::coordinate(int d) { return Frame(MatForm::identity(d)); }

Frame::Frame(const MatForm& E) : E_(E) {
  for (int i = 0; i < E.n(); ++i)
    for (int j = 0; j < E.n(); ++j)
      if (!E(i, j).is_type(0, 0)) throw DomainError("frame entries must be functions");
  SmoothPoly det = determinant(E);
  if (det.is_zero() || !det.is_constant()) throw DomainError("frame is not invertible on the chart: det = " + det.str());
  Einv_ = inverse_unimodular(E);
}

VField Frame::e(int i) const {
  VField r(dim());
  for (int k = 0; k < dim(); ++k) r[k] = E_(k, i).function();
  return r;
}

std::vector<SmoothPoly> Frame::ebar(int i) const {
  std::vector<SmoothPoly> r(dim());
  for (int k = 0; k < dim(); ++k) r[k] = E_(k, i).function().conj();
  return r;
}

PQForm Frame::dual(int i) const {
  PQForm r;
  for (int k = 0; k < dim(); ++k) r += Einv_(i, k).function() * PQForm::db(k + 1);
  return r;
}

PQForm Frame::dual_bar(int i) const {
  PQForm r;
  for (int k = 0; k < dim(); ++k) r += Einv_(i, k).function().conj() * PQForm::dbbar(k + 1);
  return r;
}

MatForm nabla_tilde(const MatForm& gamma, const VField& X) {
  int d = X.dim();
  MatForm M(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) M(i, k) = PQForm(X[i].d_hol(k + 1) + eval1(gamma(i, k), X));
  return M;
}

VField nabla(const MatForm& gamma, const VField& V, const VField& X) {
  int d = X.dim();
  VField r(d);
  for (int i = 0; i < d; ++i) {
    r[i] = V.apply(X[i]);
    for (int j = 0; j < d; ++j) r[i] += eval1(gamma(i, j), V) * X[j];
  }
  return r;
}

namespace {
// nabla_V of an endomorphism: V(M) + [Gamma(V), M]
FMat nabla_end(const MatForm& gamma, const VField& V, const FMat& M) {
  int d = static_cast<int>(M.size());
  FMat G = fmat(d), r = fmat(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G[i][j] = eval1(gamma(i, j), V);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      r[i][j] = V.apply(M[i][j]);
      for (int k = 0; k < d; ++k) r[i][j] += G[i][k] * M[k][j] - M[i][k] * G[k][j];
    }
  return r;
}
}  // namespace

BarOps invariant_formulas(const MatForm& gamma, const PQForm& H, const Frame& frame, const SmoothPoly& f,
                          const VField& X, const VField& Y) {
  int d = frame.dim();
  if (gamma.n() != d || X.dim() != d || Y.dim() != d) throw DomainError("dimension mismatch in invariant formulas");
  MatForm R = curvature(gamma);
  FMat tX = as_fmat(nabla_tilde(gamma, X)), tY = as_fmat(nabla_tilde(gamma, Y));
  PQForm iXH = contract(X, H);
  BarOps out;
  for (int i = 0; i < d; ++i) {
    VField ei = frame.e(i);
    PQForm dual = frame.dual(i);
    for (int j = 0; j < d; ++j) {
      auto ej = frame.ebar(j);
      FMat Rij = fmat(d);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) Rij[a][b] = contract_bar(ej, contract(ei, R(a, b))).function();
      SmoothPoly c = trace_prod(tX, Rij) + kHalf * contract_bar(ej, contract(ei, iXH)).function();
      if (!c.is_zero()) out.delta += c * wedge(dual, frame.dual_bar(j));
    }
    // (nabla_{e_i} df)(X) = e_i(X f) - (nabla_{e_i} X) f
    SmoothPoly s = ei.apply(X.apply(f)) - nabla(gamma, ei, X).apply(f);
    out.star -= s * dual;
    SmoothPoly b1 = -trace_prod(nabla_end(gamma, ei, tX), tY) + kHalf * eval1(contract(Y, iXH), ei);
    out.bracket1 += b1 * dual;
  }
  out.bracket0 = PQForm(-trace_prod(tX, tY));
  return out;
}

// ---- weight <= 1 ----

std::string Section::str() const {
  if (weight == 0) return "[" + form.str() + "]";
  return "[" + form.str() + " ; " + X.str() + "]";
}

Section deformed_dolbeault(const LocalModel& m, const Section& s) {
  if (s.weight == 0) return {0, dbar_functions(s.form), FieldForm(m.dim())};
  if (s.weight == 1) return {1, dbar_one_forms(s.form) + bar_delta(m, s.X), dbar_fields(s.X)};
  throw DomainError("the deformed Dolbeault operator is implemented at weights 0 and 1 only");
}

SquareZeroReport square_zero_check(const LocalModel& m, int trials, std::uint64_t seed) {
  SquareZeroReport rep;
  Rng rng(seed);
  RandomSpec spec;
  spec.smooth = true;
  spec.degree = 2;
  spec.max_terms = 3;
  int d = m.dim();
  for (int t = 0; t < trials; ++t)
    for (int w = 0; w <= 1; ++w) {
      int q = static_cast<int>(rng.range(0, d - 1));
      Section s{w, random_form(rng, d, w, q, spec), FieldForm(d)};
      if (w == 1)
        for (int k = 0; k < d; ++k) s.X.c[k] = random_form(rng, d, 0, q, spec);
      Section r = deformed_dolbeault(m, deformed_dolbeault(m, s));
      ++rep.cases;
      if (!r.is_zero()) rep.failures.push_back("weight " + std::to_string(w) + " " + s.str() + " -> " + r.str());
    }
  return rep;
}

Section exact_primitive(const LocalModel& m, const Section& closed) {
  if (!deformed_dolbeault(m, closed).is_zero()) throw DomainError("input section is not closed");
  Section p{closed.weight, PQForm(), FieldForm(m.dim())};
  if (closed.weight == 0) {
    p.form = poincare_solve(closed.form, Operator::PartialBar);
  } else {
    // bottom row first: X = dbar Y, then the remaining form lies in the top row
    for (int k = 0; k < m.dim(); ++k)
      if (!closed.X.c.at(k).is_zero()) p.X.c[k] = poincare_solve(closed.X.c[k], Operator::PartialBar);
    PQForm rest = closed.form - bar_delta(m, p.X);
    if (!rest.is_zero()) p.form = poincare_solve(-rest, Operator::PartialBar);
  }
  if (!(deformed_dolbeault(m, p) == closed)) throw DomainError("primitive failed to resubstitute");
  return p;
}

std::string ExactnessReport::summary() const {
  std::ostringstream os;
  os << "local exactness: " << (ok() ? "pass" : "FAIL") << " (" << cases << " closed inputs)";
  for (auto& f : failures) os << "\n  " << f;
  return os.str();
}

ExactnessReport local_exactness_check(const LocalModel& m, int max_weight, int degree_bound, int trials,
                                      std::uint64_t seed) {
  if (max_weight < 0 || max_weight > 1) throw DomainError("local exactness is checked at weights 0 and 1");
  ExactnessReport rep;
  Rng rng(seed);
  RandomSpec spec;
  spec.smooth = true;
  spec.degree = degree_bound;
  spec.max_terms = 3;
  int d = m.dim();
  for (int t = 0; t < trials; ++t)
    for (int w = 0; w <= max_weight; ++w) {
      int q = static_cast<int>(rng.range(1, d));
      Section pre{w, random_form(rng, d, w, q - 1, spec), FieldForm(d)};
      if (w == 1)
        for (int k = 0; k < d; ++k) pre.X.c[k] = random_form(rng, d, 0, q - 1, spec);
      Section in = deformed_dolbeault(m, pre);
      ++rep.cases;
      try {
        Section p = exact_primitive(m, in);
        if (!(deformed_dolbeault(m, p) == in)) rep.failures.push_back("trial " + std::to_string(t) + ": no resubstitution");
      } catch (const DomainError& e) {
        rep.failures.push_back("trial " + std::to_string(t) + " weight " + std::to_string(w) + ": " + e.what());
      }
    }
  return rep;
}

// ---- isomorphism conditions ----

std::string IsoReport::summary() const {
  std::ostringstream os;
  os << "iso conditions: four conditions " << (conditions_ok() ? "hold" : "fail") << ", reduced equations "
     << (reduced_ok() ? "hold" : "fail") << (agree() ? " (agree)" : " (DISAGREE)");
  for (auto& f : condition_failures) os << "\n  " << f;
  for (auto& f : reduced_failures) os << "\n  " << f;
  return os.str();
}

namespace {
struct Invariant {
  MatForm gamma;
  PQForm H;
  Frame frame;
  PQForm delta(const FieldForm& X) const {
    PQForm r;
    VField zero(gamma.n());
    for (auto& [J, XJ] : X.split())
      r += wedge(invariant_formulas(gamma, H, frame, SmoothPoly(), XJ, zero).delta, bar_monomial(J));
    return r;
  }
  PQForm bracket1(const FieldForm& X, const FieldForm& Y) const {
    PQForm r;
    auto ys = Y.split();
    for (auto& [I, XI] : X.split())
      for (auto& [J, YJ] : ys)
        r += wedge_all(invariant_formulas(gamma, H, frame, SmoothPoly(), XI, YJ).bracket1, bar_monomial(I),
                       bar_monomial(J));
    return r;
  }
};

PQForm beta_of(const PQForm& bt, const FieldForm& X) {
  PQForm r;
  for (auto& [J, XJ] : X.split()) r += wedge(contract(XJ, bt), bar_monomial(J));
  return r;
}

// <alpha (x) eta, Y (x) zeta> = <alpha, Y> eta ^ zeta
PQForm pair_form(const PQForm& w, const FieldForm& Y) {
  PQForm r;
  for (int k = 1; k <= Y.dim(); ++k) {
    PQForm eta = strip_hol(w, k);
    if (!eta.is_zero()) r += wedge(eta, Y.c[k - 1]);
  }
  return r;
}

PQForm lie_form(const FieldForm& X, const PQForm& w) {
  PQForm r;
  auto ws = split_bar(w);
  for (auto& [I, XI] : X.split())
    for (auto& [J, aJ] : ws) r += wedge_all(lie_derivative(XI, aJ), bar_monomial(I), bar_monomial(J));
  return r;
}

FieldForm bracket_form(const FieldForm& X, const FieldForm& Y) {
  FieldForm r(X.dim());
  auto ys = Y.split();
  for (auto& [I, XI] : X.split())
    for (auto& [J, YJ] : ys) r += FieldForm::of(lie_bracket(XI, YJ), wedge(bar_monomial(I), bar_monomial(J)));
  return r;
}

// the holomorphic derivative on the function factor: d(f (x) eta) = df (x) eta
PQForm del_form(const PQForm& w) {
  PQForm r;
  for (auto& [J, f] : split_bar(w)) r += wedge(d_hol(f), bar_monomial(J));
  return r;
}

int dolbeault_degree(const FieldForm& X) {
  for (auto& w : X.c)
    for (auto& [m, f] : w.terms()) return mask_q(m);
  return 0;
}

FieldForm random_fieldform(Rng& rng, int d, int q, const RandomSpec& spec) {
  FieldForm X(d);
  for (int k = 0; k < d; ++k)
    if (rng.coin(2, 3)) X.c[k] = random_form(rng, d, 0, q, spec);
  return X;
}
}  // namespace

IsoReport iso_conditions_check(const MatForm& gamma, const PQForm& H, const PQForm& H2, const PQForm& beta_tilde,
                               int trials, std::uint64_t seed) {
  IsoReport rep;
  if (!beta_tilde.is_type(2, 0)) throw DomainError("beta-tilde must be a (2,0)-form");
  int d = gamma.n();
  Invariant A{gamma, H, Frame::coordinate(d)}, B{gamma, H2, Frame::coordinate(d)};
  Rng rng(seed);
  RandomSpec spec;
  spec.smooth = true;
  spec.degree = 2;
  spec.max_terms = 3;
  auto fail = [&](const std::string& name, int t, const PQForm& r) {
    std::string msg = name + " trial " + std::to_string(t) + ": " + r.str();
    for (auto& f : rep.condition_failures)
      if (f.rfind(name + " ", 0) == 0) return;
    rep.condition_failures.push_back(msg);
  };
  for (int t = 0; t < trials; ++t) {
    int p = static_cast<int>(rng.range(0, 1)), q = static_cast<int>(rng.range(0, 1));
    FieldForm X = random_fieldform(rng, d, p, spec), Y = random_fieldform(rng, d, q, spec);
    p = dolbeault_degree(X);
    q = dolbeault_degree(Y);
    int sgn = (p * q) % 2 ? -1 : 1;
    PQForm om = random_form(rng, d, 0, 1, spec);

    PQForm r1 = dbar_one_forms(beta_of(beta_tilde, X)) - beta_of(beta_tilde, dbar_fields(X)) - (A.delta(X) - B.delta(X));
    if (!r1.is_zero()) fail("cond.Delta", t, r1);

    FieldForm omX(d);
    for (int k = 0; k < d; ++k) omX.c[k] = wedge(om, X.c[k]);
    // omega acting on (1,q)-forms through the (0,*) factor
    PQForm r2 = beta_of(beta_tilde, omX) - GaussRat(-1) * wedge(om, beta_of(beta_tilde, X));
    if (!r2.is_zero()) fail("cond.star", t, r2);

    PQForm r3 = pair_form(beta_of(beta_tilde, X), Y) + GaussRat(sgn) * pair_form(beta_of(beta_tilde, Y), X);
    if (!r3.is_zero()) fail("cond.bracket0", t, r3);

    PQForm lhs = lie_form(X, beta_of(beta_tilde, Y)) - GaussRat(sgn) * lie_form(Y, beta_of(beta_tilde, X)) +
                 del_form(pair_form(beta_of(beta_tilde, X), Y)) - beta_of(beta_tilde, bracket_form(X, Y));
    PQForm r4 = lhs - (A.bracket1(X, Y) - B.bracket1(X, Y));
    if (!r4.is_zero()) fail("cond.bracket1", t, r4);
  }
  PQForm diff = H - H2;
  PQForm e1 = d_bar(beta_tilde) - kHalf * diff.part(2, 1);
  PQForm e2 = d_hol(beta_tilde) - kHalf * diff.part(3, 0);
  if (!e1.is_zero()) rep.reduced_failures.push_back("dbar beta-tilde = (H - H')^{2,1}/2 fails: " + e1.str());
  if (!e2.is_zero()) rep.reduced_failures.push_back("d beta-tilde = (H - H')^{3,0}/2 fails: " + e2.str());
  if (!diff.part(1, 2).is_zero() || !diff.part(0, 3).is_zero())
    rep.reduced_failures.push_back("H - H' has a (1,2) or (0,3) part");
  return rep;
}

// ---- Cech-Dolbeault cochains ----

Cochain<PQForm> cd_dbar_functions(const Cochain<PQForm>& c) { return cochain_map(c, dbar_functions); }
Cochain<PQForm> cd_dbar_one_forms(const Cochain<PQForm>& c) { return cochain_map(c, dbar_one_forms); }
Cochain<FieldForm> cd_dbar_fields(const Cochain<FieldForm>& c) { return cochain_map(c, dbar_fields); }


Cochain<PQForm> cd_delta(const Nerve& N, const Cochain<FieldForm>& X) {
  Cochain<PQForm> r{X.p + 1, {}};
  for (auto& s : N.simplices(X.p + 1)) {
    Simplex back(s.begin() + 1, s.end());
    auto it = X.v.find(back);
    if (it == X.v.end()) continue;
    const PolyBiholo& phi = N.phi(s[1], s[0]);
    PQForm acc;
    for (auto& [J, XJ] : it->second.split()) acc += wedge(N.delta(s[1], s[0], XJ), phi.pull(bar_monomial(J)));
    cochain_set(r, s, acc);
  }
  return r;
}

Cochain<PQForm> cd_star(const Nerve& N, const Cochain<PQForm>& f, const Cochain<FieldForm>& X) {
  Cochain<PQForm> r{f.p + X.p, {}};
  for (auto& s : N.simplices(f.p + X.p)) {
    Simplex front(s.begin(), s.begin() + f.p + 1), back(s.begin() + f.p, s.end());
    auto ia = f.v.find(front);
    auto ib = X.v.find(back);
    if (ia == f.v.end() || ib == X.v.end()) continue;
    int from = back[0], to = s[0];
    const PolyBiholo& phi = N.phi(from, to);
    auto xs = ib->second.split();
    PQForm acc;
    for (auto& [I, fI] : ia->second.terms())
      for (auto& [J, XJ] : xs) {
        PQForm core = cdo_star(fI, phi.pull(XJ)) + fI * N.delta(from, to, XJ);
        acc += wedge_all(core, bar_monomial(I), phi.pull(bar_monomial(J)));
      }
    cochain_set(r, s, acc);
  }
  return r;
}

namespace {
LocalModel model_at(const ConnectionData& c, const BData& b, int chart) { return {c.gamma.at(chart), b.B.at(chart)}; }
}  // namespace

Cochain<PQForm> cd_h(const Nerve& N, const ConnectionData& c, const BData& b, const Cochain<FieldForm>& X) {
  (void)N;
  return {X.p, [&] {
            std::map<Simplex, PQForm> v;
            for (auto& [s, x] : X.v) {
              PQForm w = h_local(model_at(c, b, s[0]), x);
              if (!w.is_zero()) v[s] = w;
            }
            return v;
          }()};
}

Cochain<PQForm> cd_bar_delta(const Nerve& N, const ConnectionData& c, const BData& b, const Cochain<FieldForm>& X) {
  (void)N;
  Cochain<PQForm> r{X.p, {}};
  for (auto& [s, x] : X.v) {
    PQForm w = bar_delta(model_at(c, b, s[0]), x);
    cochain_set(r, s, X.p % 2 ? -w : w);
  }
  return r;
}

Cochain<FieldForm> random_fieldform_cochain(const Nerve& N, Rng& rng, int p, int q, const RandomSpec& spec) {
  Cochain<FieldForm> c{p, {}};
  for (auto& s : N.simplices(p)) cochain_set(c, s, random_fieldform(rng, N.dim(), q, spec));
  return c;
}

Cochain<PQForm> random_form_cochain(const Nerve& N, Rng& rng, int p, int hol, int q, const RandomSpec& spec) {
  Cochain<PQForm> c{p, {}};
  for (auto& s : N.simplices(p)) cochain_set(c, s, random_form(rng, N.dim(), hol, q, spec));
  return c;
}

std::string CechDolbeaultReport::summary() const {
  std::ostringstream os;
  os << "Cech-Dolbeault: " << (ok() ? "pass" : "FAIL") << " (" << instances << " instances)";
  for (auto& f : failures) os << "\n  " << f;
  return os.str();
}

CechDolbeaultReport cech_dolbeault_check(const Nerve& N, const ConnectionData& c, const BData& b, int trials,
                                         std::uint64_t seed) {
  CechDolbeaultReport rep;
  rep.checked = {"D^2", "degree0.agreement", "D.Delta-check", "Delta.homotopy", "Delta-bar.delta", "D.Delta-bar"};
  Rng rng(seed);
  RandomSpec spec;
  spec.smooth = true;
  spec.degree = 2;
  spec.max_terms = 2;
  int top = 0, d = N.dim();
  for (auto& s : N.simplices()) top = std::max(top, static_cast<int>(s.size()) - 1);
  auto record = [&](const std::string& eq, int p, int q, bool ok, const std::string& detail) {
    ++rep.instances;
    if (ok) return;
    for (auto& f : rep.failures)
      if (f.rfind(eq + " ", 0) == 0) return;
    rep.failures.push_back(eq + " (" + std::to_string(p) + "," + std::to_string(q) + "): " + detail);
  };
  auto first = [](const auto& tot) -> std::string {
    for (auto& [p, x] : tot)
      for (auto& [s, w] : x.v) return simplex_str(s) + " " + w.str();
    return "";
  };
  auto Dfun = [&](const TotalCochain<PQForm>& x) { return total_d(N, x, dbar_functions); };
  auto Done = [&](const TotalCochain<PQForm>& x) { return total_d(N, x, dbar_one_forms); };
  auto Dfld = [&](const TotalCochain<FieldForm>& x) { return total_d(N, x, dbar_fields); };
  auto apply = [&](const TotalCochain<FieldForm>& x, auto op) {
    TotalCochain<PQForm> r;
    for (auto& [p, y] : x) total_accumulate(N, r, op(y));
    return r;
  };
  auto checkD = [&](const Cochain<FieldForm>& y) { return cd_delta(N, y); };
  auto barD = [&](const Cochain<FieldForm>& y) { return cd_bar_delta(N, c, b, y); };
  auto hh = [&](const Cochain<FieldForm>& y) { return cd_h(N, c, b, y); };
  auto sub = [&](TotalCochain<PQForm> a, const TotalCochain<PQForm>& o) {
    for (auto& [p, y] : o) total_accumulate(N, a, y, -1);
    return a;
  };
  auto add = [&](TotalCochain<PQForm> a, const TotalCochain<PQForm>& o) {
    for (auto& [p, y] : o) total_accumulate(N, a, y, 1);
    return a;
  };

  for (int t = 0; t < trials; ++t)
    for (int p = 0; p < top; ++p)
      for (int q = 0; q < d; ++q) {
        auto X = total_of(random_fieldform_cochain(N, rng, p, q, spec));
        auto f = total_of(random_form_cochain(N, rng, p, 0, q, spec));
        auto a = total_of(random_form_cochain(N, rng, p, 1, q, spec));
        bool ok2 = total_zero(Dfld(Dfld(X))) && total_zero(Dfun(Dfun(f))) && total_zero(Done(Done(a)));
        record("D^2", p, q, ok2, "");

        if (q == 0) {
          Cochain<VField> Xv = cochain_map(X.at(p), [&](const FieldForm& y) {
            VField v(d);
            for (int k = 0; k < d; ++k) v[k] = y.c[k].function();
            return v;
          });
          Cochain<SmoothPoly> fv = cochain_map(f.at(p), [](const PQForm& w) { return w.function(); });
          bool agree = cochain_equal(N, cd_delta(N, X.at(p)), cech_delta(N, Xv)) &&
                       cochain_equal(N, cd_star(N, f.at(p), X.at(p)), cech_star(N, fv, Xv));
          record("degree0.agreement", p, q, agree, "");
        }
        if (p + 2 <= top) {
          auto r = add(Done(apply(X, checkD)), apply(Dfld(X), checkD));
          record("D.Delta-check", p, q, total_zero(r), first(r));
        }
        if (p + 1 <= top) {
          auto lhs = sub(apply(X, checkD), apply(X, barD));
          auto rhs = sub(Done(apply(X, hh)), apply(Dfld(X), hh));
          auto r = sub(lhs, rhs);
          record("Delta.homotopy", p, q, total_zero(r), first(r));
          auto e = add(total_of(cech_differential(N, cd_bar_delta(N, c, b, X.at(p)))),
                       total_of(cd_bar_delta(N, c, b, cech_differential(N, X.at(p)))));
          record("Delta-bar.delta", p, q, total_zero(e), first(e));
          if (q + 1 < d) {
            auto r2 = add(Done(apply(X, barD)), apply(Dfld(X), barD));
            record("D.Delta-bar", p, q, total_zero(r2), first(r2));
          }
        }
      }
  return rep;
}

// ---- conformal structure ----

std::string ConformalReport::summary() const {
  std::ostringstream os;
  os << "conformal: " << (ok() ? "pass" : "FAIL") << " (Tr Gamma glues " << trace_glues << ", dA = Tr R " << dA_is_trR
     << ", nu image " << nu_image << ", dbar nu = 0 " << dbar_nu << ", L f OPE " << ope_function << ", L X OPE "
     << ope_field << ")";
  for (auto& f : failures) os << "\n  " << f;
  return os.str();
}

BGState bar_generator(const BetaGamma& bg, const LocalModel& m, const VField& X) {
  (void)bg;
  return BGState::from_field(X) - BGState::from_form(h_local(m.gamma, m.B, X));
}

ConformalReport conformal_suite(const Nerve& N, const ConnectionData& c, const BData& b, int trials,
                                std::uint64_t seed) {
  ConformalReport rep;
  int d = N.dim();
  rep.trace_glues = rep.dA_is_trR = true;
  for (auto& s : N.simplices(1)) {
    PQForm r = N.phi(s[1], s[0]).pull(c.gamma[s[1]].trace()) - c.gamma[s[0]].trace();
    if (!r.is_zero()) {
      rep.trace_glues = false;
      rep.failures.push_back("Tr Gamma does not glue on " + simplex_str(s) + ": " + r.str());
    }
  }
  for (int a = 0; a < N.size(); ++a) {
    PQForm r = de_rham(c.gamma[a].trace()) - c.R(a).trace();
    if (!r.is_zero()) {
      rep.dA_is_trR = false;
      rep.failures.push_back(N.names()[a] + ": dA - Tr R = " + r.str());
    }
  }
  rep.nu_image = rep.dbar_nu = rep.ope_function = rep.ope_field = true;
  BetaGamma bg(d, 3);
  Rng rng(seed);
  RandomSpec spec;
  spec.smooth = true;
  spec.degree = 2;
  spec.max_terms = 3;
  auto fail = [&](bool& flag, const std::string& msg) {
    if (flag) rep.failures.push_back(msg);
    flag = false;
  };
  for (int a = 0; a < N.size(); ++a) {
    LocalModel m = model_at(c, b, a);
    const std::string& name = N.names()[a];
    BGState nu;
    for (int i = 1; i <= d; ++i)
      nu += bg.nth_product(bar_generator(bg, m, VField::coord(d, i)), -1, BGState::from_form(PQForm::db(i)));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        nu += kHalf * bg.nth_product(BGState::from_form(m.gamma(i, j)), -1, BGState::from_form(m.gamma(j, i)));
    if (nu != bg.nu()) fail(rep.nu_image, name + ": image of nu = " + nu.str());
    for (auto& [k, coef] : nu.terms())
      for (int j = 1; j <= d; ++j)
        if (!coef.d_bar(j).is_zero()) fail(rep.dbar_nu, name + ": dbar nu has a nonzero coefficient");

    for (int t = 0; t < trials; ++t) {
      BGState F = BGState::function(random_poly(rng, d, spec));
      if (bg.nth_product(nu, 0, F) != bg.translation(F)) fail(rep.ope_function, name + ": L_(0) f != d f");
      for (int n = 1; n <= 3; ++n)
        if (!bg.nth_product(nu, n, F).is_zero()) fail(rep.ope_function, name + ": higher pole in L f");

      VField X = random_field(rng, d, spec);
      BGState Xb = bar_generator(bg, m, X);
      MatForm nt = nabla_tilde(m.gamma, X);
      SmoothPoly third = nt.trace().function() - eval1(m.gamma.trace(), X);
      if (bg.nth_product(nu, 0, Xb) != bg.translation(Xb)) fail(rep.ope_field, name + ": first-order pole of L X");
      if (bg.nth_product(nu, 1, Xb) != Xb) fail(rep.ope_field, name + ": second-order pole of L X");
      BGState p3 = bg.nth_product(nu, 2, Xb);
      if (p3 != BGState::function(third))
        fail(rep.ope_field, name + ": third-order pole " + p3.str() + " versus " + third.str());
      if (!bg.nth_product(nu, 3, Xb).is_zero()) fail(rep.ope_field, name + ": fourth-order pole of L X");
    }
  }
  return rep;
}

}  // namespace cdo
