#include "cdo/algebroid.hpp"

#include <sstream>

namespace cdo {

PQForm cdo_star(const SmoothPoly& f, const VField& X) {
  PQForm r;
  int d = X.dim();
  for (int j = 1; j <= d; ++j) {
    SmoothPoly c;
    SmoothPoly fj = f.d_hol(j);
    for (int i = 1; i <= d; ++i)
      if (!X[i - 1].is_zero()) c += X[i - 1] * fj.d_hol(i);
    r -= c * PQForm::db(j);
  }
  return r;
}

SmoothPoly cdo_bracket0(const VField& X, const VField& Y) {
  SmoothPoly r;
  int d = X.dim();
  for (int i = 1; i <= d; ++i)
    for (int j = 1; j <= d; ++j) r -= X[i - 1].d_hol(j) * Y[j - 1].d_hol(i);
  return r;
}

PQForm cdo_bracket1(const VField& X, const VField& Y) {
  PQForm r;
  int d = X.dim();
  for (int k = 1; k <= d; ++k) {
    SmoothPoly c;
    for (int i = 1; i <= d; ++i)
      for (int j = 1; j <= d; ++j) c += X[i - 1].d_hol(j).d_hol(k) * Y[j - 1].d_hol(i);
    r -= c * PQForm::db(k);
  }
  return r;
}

CdoMaps cdo_maps(const SmoothPoly& f, const VField& X, const VField& Y) {
  return {cdo_star(f, X), cdo_bracket0(X, Y), cdo_bracket1(X, Y)};
}

VertexAlgebroid VertexAlgebroid::cdo(int d, std::string chart) {
  VertexAlgebroid va;
  va.d = d;
  va.chart = std::move(chart);
  va.star = cdo_star;
  va.bracket0 = cdo_bracket0;
  va.bracket1 = cdo_bracket1;
  return va;
}

std::string CheckReport::summary() const {
  std::ostringstream os;
  os << name << ": " << (ok() ? "pass" : "FAIL") << " (" << checked.size() << " identities, " << trials << " trials)";
  for (auto& w : failures) os << "\n  " << w.identity << " trial " << w.trial << ": " << w.inputs << " residual " << w.residual;
  return os.str();
}

namespace {
struct Recorder {
  CheckReport& rep;
  std::vector<bool> failed;
  void check(size_t k, int trial, bool zero, const std::function<std::string()>& inputs,
             const std::function<std::string()>& residual) {
    if (failed.size() < rep.checked.size()) failed.resize(rep.checked.size());
    if (zero || failed[k]) return;
    failed[k] = true;
    rep.failures.push_back({rep.checked[k], trial, inputs(), residual()});
  }
};

PQForm dfn(const SmoothPoly& f) { return d_hol(PQForm(f)); }
}  // namespace

CheckReport axioms_check(const VertexAlgebroid& va, int trials, std::uint64_t seed, RandomSpec spec) {
  CheckReport rep;
  rep.name = "vertex algebroid identities on " + va.chart;
  rep.trials = trials;
  rep.checked = {"bracket0.symmetric", "d.bracket0", "star.product", "bracket0.module",
                 "bracket1.module",    "bracket0.invariance", "bracket1.jacobi"};
  Recorder rec{rep, {}};
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    SmoothPoly f = random_poly(rng, va.d, spec), g = random_poly(rng, va.d, spec);
    VField X = random_field(rng, va.d, spec), Y = random_field(rng, va.d, spec), Z = random_field(rng, va.d, spec);
    auto in = [&] {
      return "f=" + f.str() + " g=" + g.str() + " X=" + X.str() + " Y=" + Y.str() + " Z=" + Z.str();
    };
    SmoothPoly xy0 = va.bracket0(X, Y), yx0 = va.bracket0(Y, X);
    PQForm xy1 = va.bracket1(X, Y), yx1 = va.bracket1(Y, X);

    SmoothPoly r0 = xy0 - yx0;
    rec.check(0, t, r0.is_zero(), in, [&] { return r0.str(); });

    PQForm r1 = dfn(xy0) - xy1 - yx1;
    rec.check(1, t, r1.is_zero(), in, [&] { return r1.str(); });

    PQForm r2 = va.star(f * g, X) - va.star(f, g * X) - f * va.star(g, X) + X.apply(f) * dfn(g) + X.apply(g) * dfn(f);
    rec.check(2, t, r2.is_zero(), in, [&] { return r2.str(); });

    VField fY = f * Y;
    PQForm fstarY = va.star(f, Y);
    SmoothPoly r3 = va.bracket0(X, fY) - f * xy0 + pairing(fstarY, X) + Y.apply(X.apply(f));
    rec.check(3, t, r3.is_zero(), in, [&] { return r3.str(); });

    PQForm r4 = va.bracket1(X, fY) - f * xy1 + lie_derivative(X, fstarY) - va.star(X.apply(f), Y) -
                va.star(f, lie_bracket(X, Y));
    rec.check(4, t, r4.is_zero(), in, [&] { return r4.str(); });

    VField xy = lie_bracket(X, Y), xz = lie_bracket(X, Z), yz = lie_bracket(Y, Z);
    PQForm xz1 = va.bracket1(X, Z);
    SmoothPoly r5 = X.apply(va.bracket0(Y, Z)) - va.bracket0(xy, Z) - va.bracket0(Y, xz) - pairing(xy1, Z) -
                    pairing(xz1, Y);
    rec.check(5, t, r5.is_zero(), in, [&] { return r5.str(); });

    PQForm r6 = lie_derivative(X, va.bracket1(Y, Z)) - lie_derivative(Y, xz1) + lie_derivative(Z, xy1) +
                va.bracket1(X, yz) - va.bracket1(Y, xz) - va.bracket1(xy, Z) - dfn(pairing(xy1, Z));
    rec.check(6, t, r6.is_zero(), in, [&] { return r6.str(); });
  }
  return rep;
}

VAMorphism VAMorphism::identity(int d) {
  return {PolyBiholo::identity(d), [](const VField&) { return PQForm(); }};
}

VAMorphism VAMorphism::pullback_only(const PolyBiholo& phi) {
  return {phi, [](const VField&) { return PQForm(); }};
}

void require_xi(const PolyBiholo& phi, const PQForm& xi) {
  if (!xi.is_type(2, 0)) throw DomainError("xi must be a (2,0)-form");
  if (d_hol(xi) != wz(phi)) throw DomainError("xi does not satisfy d xi = WZ for " + phi.str());
}

PQForm delta_with_theta(const PolyBiholo& phi, const MatForm& th, const PQForm& xi, const VField& X) {
  VField Y = phi.pull(X);
  int d = phi.dim();
  PQForm r;
  for (int i = 1; i <= d; ++i)
    for (int j = 1; j <= d; ++j) {
      SmoothPoly c = Y[j - 1].d_hol(i);
      if (!c.is_zero()) r -= c * th(i - 1, j - 1);
    }
  r -= GaussRat(qfrac(1, 2)) * (th.contract(Y) * th).trace();
  r -= GaussRat(qfrac(1, 2)) * contract(Y, xi);
  return r;
}

PQForm delta_phi_xi(const PolyBiholo& phi, const PQForm& xi, const VField& X) {
  require_xi(phi, xi);
  return delta_with_theta(phi, theta(phi), xi, X);
}

VAMorphism cdo_iso(const PolyBiholo& phi, const PQForm& xi) {
  require_xi(phi, xi);
  MatForm th = theta(phi);
  return {phi, [phi, th, xi](const VField& X) { return delta_with_theta(phi, th, xi, X); }};
}

VAMorphism compose(const VAMorphism& outer, const VAMorphism& inner) {
  // outer: objects on V -> U, inner: objects on W -> V
  if (outer.phi.dim() != inner.phi.dim()) throw DomainError("compose: chart dimensions differ");
  PolyBiholo phi = inner.phi.after(outer.phi);
  auto od = outer.delta, id = inner.delta;
  PolyBiholo ophi = outer.phi, iphi = inner.phi;
  return {phi, [=](const VField& X) { return ophi.pull(id(X)) + od(iphi.pull(X)); }};
}

CheckReport morphism_check(const VAMorphism& m, const VertexAlgebroid& source, const VertexAlgebroid& target,
                           int trials, std::uint64_t seed, RandomSpec spec) {
  CheckReport rep;
  rep.name = "morphism " + source.chart + " -> " + target.chart;
  rep.trials = trials;
  rep.checked = {"morphism.star", "morphism.bracket0", "morphism.bracket1"};
  Recorder rec{rep, {}};
  Rng rng(seed);
  const PolyBiholo& phi = m.phi;
  for (int t = 0; t < trials; ++t) {
    SmoothPoly f = random_poly(rng, source.d, spec);
    VField X = random_field(rng, source.d, spec), Y = random_field(rng, source.d, spec);
    auto in = [&] { return "f=" + f.str() + " X=" + X.str() + " Y=" + Y.str(); };
    VField pX = phi.pull(X), pY = phi.pull(Y);
    SmoothPoly pf = phi.pull(f);
    PQForm dX = m.delta(X), dY = m.delta(Y);

    PQForm r0 = target.star(pf, pX) - phi.pull(source.star(f, X)) - m.delta(f * X) + pf * dX;
    rec.check(0, t, r0.is_zero(), in, [&] { return r0.str(); });

    SmoothPoly r1 = target.bracket0(pX, pY) - phi.pull(source.bracket0(X, Y)) + pairing(dX, pY) + pairing(dY, pX);
    rec.check(1, t, r1.is_zero(), in, [&] { return r1.str(); });

    PQForm r2 = target.bracket1(pX, pY) - phi.pull(source.bracket1(X, Y)) + lie_derivative(pX, dY) -
                lie_derivative(pY, dX) + d_hol(PQForm(pairing(dX, pY))) - m.delta(lie_bracket(X, Y));
    rec.check(2, t, r2.is_zero(), in, [&] { return r2.str(); });
  }
  return rep;
}

CompositionReport composition_law_check(const PolyBiholo& phi1, const PQForm& xi1, const PolyBiholo& phi2,
                                        const PQForm& xi2, int trials, std::uint64_t seed, RandomSpec spec) {
  CompositionReport out;
  require_xi(phi1, xi1);
  require_xi(phi2, xi2);
  PolyBiholo comp = phi2.after(phi1);
  out.sigma = sigma_cocycle(phi2, phi1);
  out.eta = xi1 + phi1.pull(xi2) + out.sigma;
  out.eta_closed = d_hol(out.eta) == wz(comp);
  CheckReport& rep = out.delta;
  rep.name = "composition law";
  rep.trials = trials;
  rep.checked = {"composite.delta"};
  if (!out.eta_closed) return out;
  VAMorphism lhs = compose(cdo_iso(phi1, xi1), cdo_iso(phi2, xi2));
  VAMorphism rhs = cdo_iso(comp, out.eta);
  Recorder rec{rep, {}};
  Rng rng(seed);
  int d = phi1.dim();
  for (int t = 0; t < trials; ++t) {
    VField X = random_field(rng, d, spec);
    PQForm r = lhs.delta(X) - rhs.delta(X);
    rec.check(0, t, r.is_zero(), [&] { return "X=" + X.str(); }, [&] { return r.str(); });
  }
  return out;
}

bool conformal_preserved(const PolyBiholo& phi) { return preserves_conformal(phi); }

}  // namespace cdo
