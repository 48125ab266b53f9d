#include "cdo/cech.hpp"

#include <algorithm>
#include <sstream>

namespace cdo {

std::string simplex_str(const Simplex& s) {
  std::string r = "(";
  for (size_t i = 0; i < s.size(); ++i) r += (i ? "," : "") + std::to_string(s[i]);
  return r + ")";
}

Nerve::Nerve(int d, std::vector<std::string> names) : d_(d), names_(std::move(names)), id_(PolyBiholo::identity(d)) {
  if (names_.empty()) throw DomainError("nerve needs at least one chart");
  for (int a = 0; a < size(); ++a) simp_.insert({a});
}

int Nerve::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

void Nerve::set_pair(int beta, int alpha, const PolyBiholo& phi, const PQForm& xi) {
  if (!(0 <= alpha && alpha < beta && beta < size())) throw DomainError("pairs are stored as (beta, alpha) with alpha < beta");
  if (phi.dim() != d_) throw DomainError("transition dimension differs from the nerve");
  require_xi(phi, xi);
  phi_[{beta, alpha}] = phi;
  xi_[{beta, alpha}] = xi;
  tw_.erase({beta, alpha});
  simp_.insert({alpha, beta});
}

void Nerve::declare(const Simplex& s) {
  if (s.empty() || !std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
    throw DomainError("simplex must be strictly increasing: " + simplex_str(s));
  if (s.front() < 0 || s.back() >= size()) throw DomainError("simplex refers to an unknown chart");
  int n = static_cast<int>(s.size());
  for (int mask = 1; mask < (1 << n); ++mask) {
    Simplex f;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) f.push_back(s[i]);
    if (f.size() == 2 && !has_pair(f[1], f[0])) throw DomainError("no transition for " + simplex_str(f));
    simp_.insert(f);
  }
}

void Nerve::declare_all() {
  Simplex all;
  for (int a = 0; a < size(); ++a) all.push_back(a);
  declare(all);
}

std::vector<Simplex> Nerve::simplices(int p) const {
  std::vector<Simplex> r;
  for (auto& s : simp_)
    if (static_cast<int>(s.size()) == p + 1) r.push_back(s);
  return r;
}

const PolyBiholo& Nerve::phi(int beta, int alpha) const {
  if (beta == alpha) return id_;
  auto it = phi_.find({beta, alpha});
  if (it == phi_.end()) throw DomainError("no transition from chart " + std::to_string(alpha) + " to " + std::to_string(beta));
  return it->second;
}

const PQForm& Nerve::xi(int beta, int alpha) const {
  if (beta == alpha) return zero_;
  auto it = xi_.find({beta, alpha});
  if (it == xi_.end()) throw DomainError("no 2-form for pair " + std::to_string(beta) + "," + std::to_string(alpha));
  return it->second;
}

const MatForm& Nerve::theta(int beta, int alpha) const {
  if (beta == alpha) {
    if (zero_mat_.n() != d_) const_cast<MatForm&>(zero_mat_) = MatForm(d_);
    return zero_mat_;
  }
  auto it = tw_.find({beta, alpha});
  if (it == tw_.end()) it = tw_.emplace(std::make_pair(beta, alpha), theta_wz(phi(beta, alpha))).first;
  return it->second.theta;
}

const PQForm& Nerve::wz(int beta, int alpha) const {
  if (beta == alpha) return zero_;
  theta(beta, alpha);
  return tw_.at({beta, alpha}).wz;
}

PQForm Nerve::sigma(int gamma, int beta, int alpha) const {
  return sigma_cocycle(phi(gamma, beta), phi(beta, alpha));
}

PQForm Nerve::delta(int beta, int alpha, const VField& X) const {
  if (beta == alpha) return PQForm();
  return delta_with_theta(phi(beta, alpha), theta(beta, alpha), xi(beta, alpha), X);
}

std::vector<std::string> Nerve::validate() const {
  std::vector<std::string> problems;
  for (auto& [k, p] : phi_)
    if (d_hol(xi_.at(k)) != wz(k.first, k.second))
      problems.push_back("d xi != WZ on pair " + simplex_str({k.second, k.first}));
  for (auto& s : simp_) {
    if (s.size() == 2 && !has_pair(s[1], s[0])) problems.push_back("missing transition on " + simplex_str(s));
    if (s.size() == 3) {
      auto comp = phi(s[2], s[1]).after(phi(s[1], s[0]));
      if (comp.forward() != phi(s[2], s[0]).forward())
        problems.push_back("transitions do not compose on " + simplex_str(s));
    }
  }
  return problems;
}

Nerve Nerve::from_charts(const std::vector<PolyBiholo>& psi, const std::vector<PQForm>& xi0, std::vector<std::string> names) {
  int n = static_cast<int>(psi.size());
  if (n == 0 || static_cast<int>(xi0.size()) != n) throw DomainError("chart maps and 2-forms must match");
  if (names.empty())
    for (int a = 0; a < n; ++a) names.push_back("U" + std::to_string(a));
  int d = psi[0].dim();
  Nerve N(d, names);
  for (int b = 1; b < n; ++b) N.set_pair(b, 0, psi[b], xi0[b]);
  for (int a = 1; a < n; ++a) {
    PolyBiholo inv = psi[a].inverse();
    for (int b = a + 1; b < n; ++b) {
      PolyBiholo phi = psi[b].after(inv);
      PQForm rhs = xi0[b] - xi0[a] - sigma_cocycle(phi, psi[a]);
      N.set_pair(b, a, phi, inv.pull(rhs));
    }
  }
  N.declare_all();
  return N;
}

Cochain<SmoothPoly> ez_mul(const Nerve& N, const Cochain<SmoothPoly>& a, const Cochain<SmoothPoly>& b) {
  return ez_product(N, a, b, [](const SmoothPoly& x, const SmoothPoly& y) { return x * y; });
}

std::string GluingReport::summary() const {
  std::ostringstream os;
  os << "gluing: " << (ok() ? "pass" : "FAIL") << " (" << triples << " triples, " << pairs << " pairs)";
  for (auto& f : assoc_failures) os << "\n  gluing.assoc " << f;
  for (auto& f : conformal_failures) os << "\n  gluing.trace " << f;
  return os.str();
}

namespace {
PQForm assoc_entry(const Nerve& N, const Simplex& s) {
  int a = s[0], b = s[1], g = s[2];
  return N.phi(b, a).pull(N.xi(g, b)) - N.xi(g, a) + N.xi(b, a) + N.sigma(g, b, a);
}
}  // namespace

GluingReport check_gluing(const Nerve& N) {
  GluingReport rep;
  for (auto& s : N.simplices(2)) {
    ++rep.triples;
    PQForm r = assoc_entry(N, s);
    if (!r.is_zero()) rep.assoc_failures.push_back(simplex_str(s) + ": " + r.str());
  }
  for (auto& s : N.simplices(1)) {
    ++rep.pairs;
    PQForm t = N.theta(s[1], s[0]).trace();
    if (!t.is_zero()) rep.conformal_failures.push_back(simplex_str(s) + ": " + t.str());
  }
  return rep;
}

Obstructions obstruction_cocycles(const Nerve& N) {
  Obstructions o;
  o.assoc.p = 2;
  o.conformal.p = 1;
  for (auto& s : N.simplices(2)) cochain_set(o.assoc, s, assoc_entry(N, s));
  for (auto& s : N.simplices(1)) cochain_set(o.conformal, s, N.theta(s[1], s[0]).trace());
  o.assoc_closed = cochain_zero(cech_differential(N, o.assoc));
  o.conformal_closed = cochain_zero(cech_differential(N, o.conformal));
  o.assoc_entries_closed = o.conformal_entries_closed = true;
  for (auto& [s, w] : o.assoc.v)
    if (!d_hol(w).is_zero()) o.assoc_entries_closed = false;
  for (auto& [s, w] : o.conformal.v)
    if (!de_rham(w).is_zero()) o.conformal_entries_closed = false;
  return o;
}

Cochain<PQForm> cech_delta(const Nerve& N, const Cochain<VField>& X) {
  Cochain<PQForm> r{X.p + 1, {}};
  for (auto& s : N.simplices(X.p + 1)) {
    Simplex back(s.begin() + 1, s.end());
    auto it = X.v.find(back);
    if (it != X.v.end()) cochain_set(r, s, N.delta(s[1], s[0], it->second));
  }
  return r;
}

namespace {
// loop over simplices of degree p+q, handing (front value, back value on its chart, chart pair)
template <class A, class B, class F>
void ez_loop(const Nerve& N, const Cochain<A>& a, const Cochain<B>& b, F f) {
  for (auto& s : N.simplices(a.p + b.p)) {
    Simplex front(s.begin(), s.begin() + a.p + 1), back(s.begin() + a.p, s.end());
    auto ia = a.v.find(front);
    auto ib = b.v.find(back);
    if (ia == a.v.end() || ib == b.v.end()) continue;
    f(s, ia->second, ib->second, s[a.p], s[0]);
  }
}
}  // namespace

Cochain<PQForm> cech_star(const Nerve& N, const Cochain<SmoothPoly>& f, const Cochain<VField>& X) {
  Cochain<PQForm> r{f.p + X.p, {}};
  ez_loop(N, f, X, [&](const Simplex& s, const SmoothPoly& fv, const VField& Xv, int back, int front) {
    cochain_set(r, s, cdo_star(fv, N.phi(back, front).pull(Xv)) + fv * N.delta(back, front, Xv));
  });
  return r;
}

Cochain<SmoothPoly> cech_bracket0(const Nerve& N, const Cochain<VField>& X, const Cochain<VField>& Y) {
  Cochain<SmoothPoly> r{X.p + Y.p, {}};
  ez_loop(N, X, Y, [&](const Simplex& s, const VField& Xv, const VField& Yv, int back, int front) {
    cochain_set(r, s, cdo_bracket0(Xv, N.phi(back, front).pull(Yv)) + pairing(N.delta(back, front, Yv), Xv));
  });
  return r;
}

Cochain<PQForm> cech_bracket1(const Nerve& N, const Cochain<VField>& X, const Cochain<VField>& Y) {
  Cochain<PQForm> r{X.p + Y.p, {}};
  ez_loop(N, X, Y, [&](const Simplex& s, const VField& Xv, const VField& Yv, int back, int front) {
    cochain_set(r, s, cdo_bracket1(Xv, N.phi(back, front).pull(Yv)) + lie_derivative(Xv, N.delta(back, front, Yv)));
  });
  return r;
}

CechMaps cech_structure_maps(const Nerve& N, const Cochain<VField>& X, const Cochain<VField>& Y,
                             const Cochain<SmoothPoly>& f) {
  return {cech_delta(N, X), cech_star(N, f, X), cech_bracket1(N, X, Y), cech_bracket0(N, X, Y)};
}

Cochain<SmoothPoly> random_function_cochain(const Nerve& N, Rng& rng, int p, const RandomSpec& spec) {
  Cochain<SmoothPoly> c{p, {}};
  for (auto& s : N.simplices(p)) cochain_set(c, s, random_poly(rng, N.dim(), spec));
  return c;
}

Cochain<VField> random_field_cochain(const Nerve& N, Rng& rng, int p, const RandomSpec& spec) {
  Cochain<VField> c{p, {}};
  for (auto& s : N.simplices(p)) cochain_set(c, s, random_field(rng, N.dim(), spec));
  return c;
}

std::string DgReport::summary() const {
  std::ostringstream os;
  os << "homotopy dg: " << (ok() ? "pass" : "FAIL") << " (" << instances << " instances)";
  for (auto& f : failures) os << "\n  " << f;
  return os.str();
}

DgReport homotopy_dg_check(const Nerve& N, int trials, std::uint64_t seed, int delta_sign) {
  DgReport rep;
  rep.checked = {"delta.Delta", "differential.star", "differential.bracket0", "differential.bracket1"};
  Rng rng(seed);
  RandomSpec spec;
  spec.degree = 2;
  spec.max_terms = 3;
  int top = 0;
  for (auto& s : N.simplices()) top = std::max(top, static_cast<int>(s.size()) - 1);
  auto D = [&](const Cochain<VField>& X) {
    auto r = cech_delta(N, X);
    return delta_sign > 0 ? r : cochain_map(r, [](const PQForm& w) { return -w; });
  };
  auto fail = [&](const std::string& eq, int p, int q, const auto& residual) {
    if (cochain_zero(residual)) return;
    auto& [s, w] = *residual.v.begin();
    rep.failures.push_back(eq + " degrees (" + std::to_string(p) + "," + std::to_string(q) + ") on " + simplex_str(s) +
                           ": " + w.str());
  };
  auto mulf = [](const SmoothPoly& f, const VField& X) { return f * X; };
  auto mulw = [](const SmoothPoly& f, const PQForm& w) { return f * w; };
  auto pair = [](const PQForm& w, const VField& X) { return pairing(w, X); };
  auto rpair = [](const VField& X, const PQForm& w) { return pairing(w, X); };
  auto lie = [](const VField& X, const PQForm& w) { return lie_derivative(X, w); };
  auto rlie = [](const PQForm& w, const VField& Y) { return lie_derivative(Y, w); };
  auto brk = [](const VField& X, const VField& Y) { return lie_bracket(X, Y); };
  auto dh = [](const SmoothPoly& f) { return d_hol(PQForm(f)); };

  for (int t = 0; t < trials; ++t) {
    for (int q = 0; q + 2 <= top; ++q) {
      auto X = random_field_cochain(N, rng, q, spec);
      auto r = cochain_add(N, cech_differential(N, D(X)), D(cech_differential(N, X)));
      ++rep.instances;
      fail("delta.Delta", q, 0, r);
    }
    for (int p = 0; p <= top; ++p)
      for (int q = 0; p + q + 1 <= top; ++q) {
        double sp = p % 2 ? -1 : 1;
        auto f = random_function_cochain(N, rng, p, spec);
        auto X = random_field_cochain(N, rng, q, spec);
        auto Y = random_field_cochain(N, rng, q, spec);
        auto Xp = random_field_cochain(N, rng, p, spec);
        // star
        auto lhs = cochain_add(N, cech_differential(N, cech_star(N, f, X)), cech_star(N, cech_differential(N, f), X), -1);
        auto t3 = cech_star(N, f, cech_differential(N, X));
        lhs = cochain_add(N, lhs, t3, sp > 0 ? -1 : 1);
        auto rhs = cochain_map(D(ez_product(N, f, X, mulf)), [](const PQForm& w) { return -w; });
        rhs = cochain_add(N, rhs, ez_product(N, f, D(X), mulw), sp > 0 ? 1 : -1);
        ++rep.instances;
        fail("differential.star", p, q, cochain_add(N, lhs, rhs, -1));

        // bracket0 with X in degree p, Y in degree q
        auto l0 = cochain_add(N, cech_differential(N, cech_bracket0(N, Xp, Y)), cech_bracket0(N, cech_differential(N, Xp), Y), -1);
        l0 = cochain_add(N, l0, cech_bracket0(N, Xp, cech_differential(N, Y)), sp > 0 ? -1 : 1);
        // graded pairings are evaluated in Eilenberg-Zilber order, X before Delta(Y)
        auto r0 = ez_product(N, D(Xp), Y, pair);
        r0 = cochain_add(N, r0, ez_product(N, Xp, D(Y), rpair), sp > 0 ? 1 : -1);
        ++rep.instances;
        fail("differential.bracket0", p, q, cochain_add(N, l0, r0, -1));

        // bracket1
        auto l1 = cochain_add(N, cech_differential(N, cech_bracket1(N, Xp, Y)), cech_bracket1(N, cech_differential(N, Xp), Y), -1);
        l1 = cochain_add(N, l1, cech_bracket1(N, Xp, cech_differential(N, Y)), sp > 0 ? -1 : 1);
        auto r1 = ez_product(N, Xp, D(Y), lie);
        if (p % 2) r1 = cochain_map(r1, [](const PQForm& w) { return -w; });
        r1 = cochain_add(N, r1, ez_product(N, D(Xp), Y, rlie), -1);
        r1 = cochain_add(N, r1, cochain_map(ez_product(N, D(Xp), Y, pair), dh));
        r1 = cochain_add(N, r1, D(ez_product(N, Xp, Y, brk)), -1);
        ++rep.instances;
        fail("differential.bracket1", p, q, cochain_add(N, l1, r1, -1));
      }
  }
  return rep;
}

bool StaircaseReport::ok() const {
  if (!gamma_law || sigma_sign == 0) return false;
  for (auto& a : arrows)
    if (!a.ok && a.arrow.find("sigma") == std::string::npos) return false;
  return true;
}

std::string StaircaseReport::summary() const {
  std::ostringstream os;
  os << "staircase: " << (ok() ? "pass" : "FAIL") << ", transition law " << (gamma_law ? "holds" : "fails")
     << ", corner closes with "
     << (sigma_sign == 2 ? "either sign (no triple tells them apart)"
         : sigma_sign > 0 ? "+sigma"
         : sigma_sign < 0 ? "-sigma"
                          : "neither sign");
  for (auto& a : arrows) os << "\n  " << (a.ok ? "ok   " : "FAIL ") << a.arrow << (a.ok ? "" : " at " + a.witness);
  return os.str();
}

MatForm gamma_law_residual(const Nerve& N, const std::vector<MatForm>& gamma, int beta, int alpha) {
  const PolyBiholo& phi = N.phi(beta, alpha);
  MatForm g = mat_derivative(phi), gi = mat_derivative_inverse(phi);
  return gi * phi.pull(gamma.at(beta)) * g - gamma.at(alpha) + N.theta(beta, alpha);
}

std::vector<MatForm> propagate_gamma(const Nerve& N, const MatForm& gamma0) {
  std::vector<MatForm> out{gamma0};
  for (int b = 1; b < N.size(); ++b) {
    const PolyBiholo& phi = N.phi(b, 0);
    MatForm g = mat_derivative(phi), gi = mat_derivative_inverse(phi);
    out.push_back(phi.inverse().pull(g * (gamma0 - N.theta(b, 0)) * gi));
  }
  return out;
}

StaircaseReport staircase_check(const Nerve& N, const std::vector<MatForm>& gamma) {
  StaircaseReport rep;
  if (static_cast<int>(gamma.size()) != N.size()) throw DomainError("one connection form per chart required");
  rep.gamma_law = true;
  for (auto& s : N.simplices(1))
    if (!gamma_law_residual(N, gamma, s[1], s[0]).is_zero()) rep.gamma_law = false;

  std::vector<MatForm> R;
  std::vector<PQForm> CS;
  for (auto& G : gamma) {
    auto cs = connection_suite(G);
    R.push_back(cs.R);
    CS.push_back(cs.CS);
  }
  auto arrow = [&](const std::string& name, const std::vector<std::pair<Simplex, PQForm>>& residuals) {
    ArrowResult a{name, true, ""};
    for (auto& [s, r] : residuals)
      if (!r.is_zero()) {
        a.ok = false;
        a.witness = simplex_str(s) + ": " + r.str();
        break;
      }
    rep.arrows.push_back(a);
    return a.ok;
  };
  auto TthG = [&](int b, int a) { return (N.theta(b, a) * gamma[a]).trace(); };

  std::vector<std::pair<Simplex, PQForm>> r1, r5;
  for (int a = 0; a < N.size(); ++a) {
    r1.push_back({{a}, de_rham(CS[a]) - (R[a] * R[a]).trace()});
    r5.push_back({{a}, de_rham(gamma[a].trace()) - R[a].trace()});
  }
  arrow("d CS = Tr(R^R)", r1);

  std::vector<std::pair<Simplex, PQForm>> r2, r3, r6;
  Cochain<PQForm> c1{1, {}};
  for (auto& s : N.simplices(1)) {
    int a = s[0], b = s[1];
    PQForm rhs = N.wz(b, a) + de_rham(TthG(b, a));
    r2.push_back({s, N.phi(b, a).pull(CS[b]) - CS[a] - rhs});
    PQForm entry = N.xi(b, a) + TthG(b, a);
    cochain_set(c1, s, entry);
    r3.push_back({s, de_rham(entry) - rhs});
    r6.push_back({s, N.phi(b, a).pull(gamma[b].trace()) - gamma[a].trace() - N.theta(b, a).trace()});
  }
  arrow("delta CS = WZ + d Tr(theta^Gamma)", r2);
  arrow("d(xi + Tr(theta^Gamma)) = WZ + d Tr(theta^Gamma)", r3);

  auto dc1 = cech_differential(N, c1);
  std::vector<std::pair<Simplex, PQForm>> rp, rm;
  for (auto& s : N.simplices(2)) {
    int a = s[0], b = s[1], g = s[2];
    PQForm base = N.phi(b, a).pull(N.xi(g, b)) - N.xi(g, a) + N.xi(b, a);
    PQForm sig = N.sigma(g, b, a);
    PQForm lhs = cochain_at(N, dc1, s);
    rp.push_back({s, lhs - (base + sig)});
    rm.push_back({s, lhs - (base - sig)});
  }
  bool plus = arrow("delta(xi + Tr(theta^Gamma)) = assoc cocycle with +sigma", rp);
  bool minus = arrow("delta(xi + Tr(theta^Gamma)) = assoc cocycle with -sigma", rm);
  rep.sigma_sign = plus && minus ? 2 : plus ? 1 : minus ? -1 : 0;
  arrow("delta Tr Gamma = Tr theta", r6);
  arrow("d Tr Gamma = Tr R", r5);
  return rep;
}

Nerve shear_nerve(int charts) {
  if (charts < 2 || charts > 4) throw DomainError("shear nerve has 2 to 4 charts");
  SmoothPoly b1 = SmoothPoly::var(1), b2 = SmoothPoly::var(2);
  PQForm vol = wedge(PQForm::db(1), PQForm::db(2));
  auto s1 = PolyBiholo::shear(2, 2, b1 * b1);
  auto s2 = PolyBiholo::shear(2, 1, b2 * b2);
  auto s3 = PolyBiholo::shear(2, 2, SmoothPoly(2) * b1);
  std::vector<PolyBiholo> psi{PolyBiholo::identity(2), s1, s2.after(s1), s3.after(s2.after(s1))};
  std::vector<PQForm> xi0{PQForm(), PQForm(), b1 * vol, vol};
  psi.resize(charts);
  xi0.resize(charts);
  return Nerve::from_charts(psi, xi0);
}

}  // namespace cdo
