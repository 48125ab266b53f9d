#include "cdo/cli/suites.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>

#include "cdo/dolbeault.hpp"
#include "cdo/parse.hpp"
#include "cdo/voa.hpp"

namespace cdo::cli {

bool SuiteResult::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"qseries", "genus", "polycx", "algebroid", "voa", "cech", "dolbeault"};
  return names;
}

ChernData random_chern_data(Rng& rng, int d, bool c1_zero) {
  ChernData c;
  c.d = d;
  for (auto& p : partitions(d)) {
    bool has1 = std::find(p.begin(), p.end(), 1) != p.end();
    c.numbers[p] = (c1_zero && has1) ? Q(0) : Q(rng.range(-30, 30));
  }
  return c;
}

namespace {

std::string witness_str(const Witness& w) {
  return w.identity + " trial " + std::to_string(w.trial) + ": " + w.inputs + " residual " + w.residual;
}

CheckResult from_report(const std::string& name, const CheckReport& r) {
  CheckResult c{name, r.ok(), r.summary(), ""};
  if (!r.failures.empty()) c.witness = witness_str(r.failures.front());
  return c;
}

CheckResult from_list(const std::string& name, const std::vector<std::string>& failures, const std::string& detail = "") {
  return {name, failures.empty(), detail, failures.empty() ? "" : failures.front()};
}

SmoothPoly P(const char* s) { return parse_poly(s); }
PQForm F(const char* s) { return parse_form(s); }

RandomSpec small_spec(bool smooth) {
  RandomSpec s;
  s.degree = 2;
  s.max_terms = 3;
  s.smooth = smooth;
  return s;
}

// ---- qseries ----

void qseries_suite(SuiteResult& r, const VerifyOptions& o) {
  int N = std::max(o.order, 1);
  QSeries e4 = eisenstein(4, N), e6 = eisenstein(6, N);
  QSeries lhs = e4.pow(3) - e6.pow(2);
  QSeries rhs = eta_power(24, N) * Q(1728);
  auto diff = first_difference(lhs, rhs);
  r.checks.push_back({"discriminant", !diff && series_equal(lhs, rhs), "E4^3 - E6^2 = 1728 eta^24 to order " + std::to_string(N),
                      diff ? "first difference at q^" + diff->first.get_str() + ": " + diff->second.get_str() : ""});

  // eta against the pentagonal number series
  QSeries pent(N, Q(1, 24));
  for (long k = -2 * N - 2; k <= 2 * N + 2; ++k) {
    long e = k * (3 * k - 1) / 2;
    if (e >= 0 && e <= N) pent[static_cast<int>(e)] += (k % 2 == 0) ? 1 : -1;
  }
  QSeries eta = eta_power(1, N);
  r.checks.push_back({"eta.pentagonal", series_equal(eta, pent), "eta to order " + std::to_string(N), ""});

  bool additive = true;
  for (int a = -5; a <= 5; a += 3)
    for (int b = -4; b <= 6; b += 5) additive = additive && series_equal(eta_power(a, N) * eta_power(b, N), eta_power(a + b, N));
  r.checks.push_back({"eta.additive", additive, "", ""});

  auto dec = modularity_decompose(lhs, 12, N);
  bool dec_ok = dec.status == Decomposition::Member && dec.coeffs[Monomial46{3, 0}] == 1 && dec.coeffs[Monomial46{0, 2}] == -1;
  if (N < 2) dec_ok = dec.status == Decomposition::Underdetermined;
  r.checks.push_back({"modularity.decompose", dec_ok, dec.message, ""});
}

// ---- genus ----

ChernData k3() {
  nlohmann::json j;
  j["d"] = 2;
  j["chern_numbers"] = {{"c1^2", 0}, {"c2", 24}};
  return ChernData::from_json(j);
}

void genus_suite(SuiteResult& r, const VerifyOptions& o) {
  int N = o.order;
  auto wp = witten_genus(ChernData::point(), N).value;
  r.checks.push_back({"anchor.point", series_equal(wp, QSeries::constant(1, N)), "W(point) = " + wp.str(4), ""});
  ChernData K = k3();
  auto wk = witten_genus(K, N).value;
  auto [todd, ahat] = todd_and_ahat(K);
  bool k3ok = wk[0] == 2 && todd == 2 && ahat == 2;
  r.checks.push_back({"anchor.k3", k3ok, "q^0 = " + wk[0].get_str() + ", Todd = " + todd.get_str() + ", A-hat = " + ahat.get_str(), ""});

  Rng rng(o.seed);
  int bad = 0;
  std::string witness;
  for (int t = 0; t < o.trials; ++t) {
    ChernData c = random_chern_data(rng, 1 + t % 4, true);
    auto id = character_identity_check(c, N);
    if (!id.equal && ++bad == 1)
      witness = "d = " + std::to_string(c.d) + (id.first_difference ? " at q^" + id.first_difference->first.get_str() : "");
  }
  r.checks.push_back({"character.identity", bad == 0,
                      std::to_string(o.trials) + " random Chern data with zero c1 numbers, order " + std::to_string(N), witness});

  if (o.chern) {
    auto w = witten_genus(*o.chern, N).value;
    auto [t2, a2] = todd_and_ahat(*o.chern);
    r.checks.push_back({"input.constant_term", w[0] == a2, "q^0 = " + w[0].get_str() + ", A-hat = " + a2.get_str(), ""});
    bool c1zero = true;
    for (auto& [p, v] : o.chern->numbers)
      if (std::find(p.begin(), p.end(), 1) != p.end() && v != 0) c1zero = false;
    if (c1zero) {
      auto id = character_identity_check(*o.chern, N);
      r.checks.push_back({"input.character.identity", id.equal, "", ""});
    }
  }
}

// ---- polycx ----

PolyBiholo random_tame(Rng& rng, int d, int steps) {
  RandomSpec spec;
  spec.degree = 2;
  spec.height = 3;
  PolyBiholo phi = PolyBiholo::identity(d);
  for (int k = 0; k < steps; ++k) {
    int target = static_cast<int>(rng.range(1, d));
    SmoothPoly p = random_poly(rng, d, spec);
    p = p.filter([&](const SmoothPoly::Mono& m) { return SmoothPoly::exp(m, SmoothPoly::slot(target, false)) == 0; });
    phi = PolyBiholo::shear(d, target, p).after(phi);
  }
  return phi;
}

void polycx_suite(SuiteResult& r, const VerifyOptions& o) {
  int d = o.dim;
  Rng rng(o.seed);
  RandomSpec spec = small_spec(true);
  std::vector<std::string> dd, split, mc, func;
  for (int t = 0; t < o.trials; ++t) {
    int p = static_cast<int>(rng.range(0, std::min(d, 2))), q = static_cast<int>(rng.range(0, std::min(d, 1)));
    PQForm w = random_form(rng, d, p, q, spec);
    if (!de_rham(de_rham(w)).is_zero()) dd.push_back(w.str());
    if (de_rham(w) != d_hol(w) + d_bar(w)) split.push_back(w.str());
  }
  r.checks.push_back(from_list("d.squared", dd, std::to_string(o.trials) + " random forms"));
  r.checks.push_back(from_list("d.split", split));
  int maps = std::max(1, o.trials / 4);
  for (int t = 0; t < maps; ++t) {
    PolyBiholo phi = random_tame(rng, d, 3);
    auto tw = theta_wz(phi);
    if (!(d_hol(tw.theta) + tw.theta * tw.theta).is_zero()) mc.push_back(phi.str());
    if (!d_hol(tw.wz).is_zero()) mc.push_back("WZ not closed for " + phi.str());
    PolyBiholo psi = random_tame(rng, d, 2);
    PQForm w = random_form(rng, d, 1, 0, spec);
    if (psi.after(phi).pull(w) != phi.pull(psi.pull(w))) func.push_back(phi.str() + " ; " + psi.str());
  }
  r.checks.push_back(from_list("maurer-cartan", mc, std::to_string(maps) + " tame maps"));
  r.checks.push_back(from_list("pullback.functorial", func));
}

// ---- algebroid ----

void algebroid_suite(SuiteResult& r, const VerifyOptions& o) {
  RandomSpec spec;
  spec.degree = 3;
  r.checks.push_back(from_report("axioms", axioms_check(VertexAlgebroid::cdo(o.dim), o.trials, o.seed, spec)));
  if (o.dim >= 2) {
    auto s1 = PolyBiholo::shear(o.dim, 2, P("b1^2"));
    auto s2 = PolyBiholo::shear(o.dim, 1, P("b2^2"));
    auto rs = composition_law_check(s1, PQForm(), s2, PQForm(), o.trials, o.seed + 1);
    auto c = from_report("composition.shears", rs.delta);
    c.ok = rs.ok();
    if (!rs.eta_closed) c.witness = "d eta != WZ of the composite";
    r.checks.push_back(c);
    auto m = cdo_iso(s1, PQForm());
    r.checks.push_back(from_report("morphism.shear", morphism_check(m, VertexAlgebroid::cdo(o.dim), VertexAlgebroid::cdo(o.dim),
                                                                    o.trials, o.seed + 2)));
  }
}

// ---- voa ----

void voa_suite(SuiteResult& r, const VerifyOptions& o) {
  BetaGamma bg(o.dim, 4);
  BGState top = bg.nth_product(bg.nu(), 3, bg.nu());
  r.checks.push_back({"central.charge", top == GaussRat(o.dim) * BGState::vacuum() && bg.central_charge() == Q(2 * o.dim),
                      "nu_(3) nu = " + top.str(), ""});
  auto sk = skew_symmetry_check(bg, std::max(1, o.trials / 4), o.seed, 2);
  r.checks.push_back(from_list("skew.symmetry", sk.failures, std::to_string(sk.checked) + " products"));
  if (o.dim >= 2) {
    auto shear = PolyBiholo::shear(o.dim, 2, P("b1^2"));
    auto h = hom_check(shear, PQForm(), 2, std::max(1, o.trials / 2), o.seed);
    r.checks.push_back(from_list("hom.shear", h.failures, h.summary()));
    r.findings.push_back(std::string("conformal element ") + (h.conformal_preserved ? "preserved" : "not preserved") +
                         " by the shear; Tr theta " + (h.conformal_predicate ? "= 0" : "!= 0"));
  }
}

// ---- built-in models for the Cech and Dolbeault layers ----

struct Model {
  Nerve N;
  MatForm gamma0;
  PQForm B0;
  std::string source;
};

Model model_for(const VerifyOptions& o) {
  if (o.scenario) {
    const Scenario& s = *o.scenario;
    return {s.nerve(), s.gamma0(), s.B0(), s.path};
  }
  if (o.dim == 2) {
    MatForm h = MatForm::functions({{SmoothPoly(1), P("B1*b2")}, {SmoothPoly(0), SmoothPoly(1)}});
    return {shear_nerve(3), chern_type_connection(h), F("B1*db1*db2"), "built-in 3-chart shear nerve"};
  }
  if (o.dim == 3) {
    // the inverse of a composite of three shears: WZ != 0 and the pushed-forward connection stays small
    auto c3 = PolyBiholo::shear(3, 3, P("b1^2")).after(PolyBiholo::shear(3, 2, P("b3^2"))).after(PolyBiholo::shear(3, 1, P("b2^2")));
    auto psi = c3.inverse();
    Nerve N = Nerve::from_charts({PolyBiholo::identity(3), psi}, {PQForm(), poincare_solve(wz(psi), Operator::Partial)});
    return {N, MatForm(3), PQForm(), "built-in 2-chart nerve glued by a cyclic composite of shears"};
  }
  throw DomainError("no built-in nerve for dim " + std::to_string(o.dim) + "; pass a scenario");
}

void cech_suite(SuiteResult& r, const VerifyOptions& o) {
  Model m = model_for(o);
  const Nerve& N = m.N;
  r.findings.push_back("nerve: " + m.source);
  r.checks.push_back(from_list("nerve.validate", N.validate()));
  auto g = check_gluing(N);
  std::vector<std::string> gf = g.assoc_failures;
  gf.insert(gf.end(), g.conformal_failures.begin(), g.conformal_failures.end());
  r.checks.push_back(from_list("gluing", gf, g.summary()));
  auto ob = obstruction_cocycles(N);
  r.checks.push_back({"obstructions.closed", ob.assoc_closed && ob.conformal_closed, "", ""});

  Rng rng(o.seed);
  RandomSpec spec = small_spec(false);
  std::vector<std::string> assoc;
  int top = 0;
  for (auto& s : N.simplices()) top = std::max(top, static_cast<int>(s.size()) - 1);
  for (int t = 0; t < std::max(1, o.trials / 4); ++t) {
    int pa = static_cast<int>(rng.range(0, top)), pb = static_cast<int>(rng.range(0, top - pa));
    int pc = static_cast<int>(rng.range(0, top - pa - pb));
    auto a = random_function_cochain(N, rng, pa, spec), b = random_function_cochain(N, rng, pb, spec),
         c = random_function_cochain(N, rng, pc, spec);
    auto l = ez_mul(N, ez_mul(N, a, b), c), rr = ez_mul(N, a, ez_mul(N, b, c));
    if (!cochain_zero(cochain_add(N, l, rr, -1)))
      assoc.push_back("degrees " + std::to_string(pa) + "," + std::to_string(pb) + "," + std::to_string(pc));
  }
  r.checks.push_back(from_list("ez.associativity", assoc));

  if (top >= 1) {
    auto dg = homotopy_dg_check(N, std::max(1, o.trials / 5), o.seed);
    r.checks.push_back(from_list("dg.equations", dg.failures, dg.summary()));
  }
  auto st = staircase_check(N, propagate_gamma(N, m.gamma0));
  CheckResult sc{"staircases", st.ok(), st.summary().substr(0, st.summary().find('\n')), ""};
  if (!st.gamma_law) sc.witness = "connection transition law";
  for (auto& a : st.arrows)
    if (!a.ok && a.arrow.find("sigma") == std::string::npos && sc.witness.empty()) sc.witness = a.arrow + ": " + a.witness;
  if (st.sigma_sign == 0 && sc.witness.empty()) sc.witness = "corner arrow closes with neither sign of sigma";
  r.checks.push_back(sc);
  r.findings.push_back("sigma sign closing the corner arrow: " +
                       (st.sigma_sign == 2   ? std::string("either (no triple tells them apart)")
                        : st.sigma_sign == 1 ? "+sigma"
                        : st.sigma_sign == -1 ? "-sigma"
                                              : "neither"));
}

void dolbeault_suite(SuiteResult& r, const VerifyOptions& o) {
  Model md = model_for(o);
  const Nerve& N = md.N;
  int d = N.dim();
  r.findings.push_back("nerve: " + md.source);
  ConnectionData c = ConnectionData::propagate(N, md.gamma0);
  BData b = BData::solve(N, c, md.B0);
  HForm H = HForm::build(c, b);
  r.checks.push_back(from_list("connection.data", c.check(N)));
  r.checks.push_back(from_list("B.data", b.check(N, c)));
  r.checks.push_back(from_list("H.data", H.check(N, c), "gluing, types, dH = -Tr(R^R)"));
  if (N.size() >= 2) r.checks.push_back(from_report("h.equation", check_h_equation(N, c, b, o.trials, o.seed)));

  // local checks on the first chart, or on the last when the first carries no data
  int lc = (c.gamma[0].is_zero() && b.B[0].is_zero()) ? N.size() - 1 : 0;
  LocalModel m{c.gamma[lc], b.B[lc]};
  r.findings.push_back("local checks on chart " + N.names()[lc]);
  bool type11 = curvature_is_11(m.gamma);
  if (!type11) r.findings.push_back("curvature has a (2,0) part: the invariant bracket1 formula is not compared");
  std::vector<Frame> frames{Frame::coordinate(d)};
  if (d >= 2) {
    MatForm E = MatForm::identity(d);
    E(0, 1) = PQForm(P("b2 + B1"));
    frames.emplace_back(E);
  }
  Rng rng(o.seed);
  RandomSpec spec = small_spec(true);
  std::vector<std::string> inv;
  int n_inv = std::max(1, o.trials / 5);
  for (int t = 0; t < n_inv; ++t) {
    VField X = random_field(rng, d, spec), Y = random_field(rng, d, spec);
    SmoothPoly f = random_poly(rng, d, spec);
    BarOps loc = bar_operators(m, PQForm(f), FieldForm(X), FieldForm(Y));
    if (loc.delta != bar_delta_degree0(m, X)) inv.push_back("degree-0 Delta-bar for X = " + X.str());
    for (size_t k = 0; k < frames.size(); ++k) {
      BarOps i = invariant_formulas(m.gamma, m.H(), frames[k], f, X, Y);
      std::string tag = " frame " + std::to_string(k) + " X = " + X.str() + " Y = " + Y.str();
      if (i.delta != loc.delta) inv.push_back("Delta-bar" + tag);
      if (i.star != loc.star) inv.push_back("star" + tag);
      if (i.bracket0 != loc.bracket0) inv.push_back("bracket0" + tag);
      if (type11 && i.bracket1 != loc.bracket1) inv.push_back("bracket1" + tag);
    }
  }
  r.checks.push_back(from_list("invariant.formulas", inv,
                               std::to_string(n_inv) + " samples, " + std::to_string(frames.size()) + " frames"));
  auto sq = square_zero_check(m, o.trials, o.seed);
  r.checks.push_back(from_list("square.zero", sq.failures, std::to_string(sq.cases) + " sections"));
  auto ex = local_exactness_check(m, 1, 2, o.trials, o.seed);
  r.checks.push_back(from_list("local.exactness", ex.failures, ex.summary()));
  if (N.size() >= 2) {
    auto cd = cech_dolbeault_check(N, c, b, 1, o.seed);
    r.checks.push_back(from_list("cech.dolbeault", cd.failures, cd.summary()));
  }
  auto cf = conformal_suite(N, c, b, std::max(1, o.trials / 5), o.seed);
  r.checks.push_back(from_list("conformal", cf.failures, cf.summary()));
  if (d >= 2) {
    PQForm Hm = m.H(), bt = F("b1*B2*db1*db2");
    auto same = iso_conditions_check(m.gamma, Hm, Hm, PQForm(), std::max(1, o.trials / 4), o.seed);
    auto shifted = iso_conditions_check(m.gamma, Hm, Hm - GaussRat(2) * de_rham(bt), bt, std::max(1, o.trials / 4), o.seed);
    auto bad = iso_conditions_check(m.gamma, Hm, Hm, bt, std::max(1, o.trials / 4), o.seed);
    bool ok = same.conditions_ok() && same.agree() && shifted.conditions_ok() && shifted.agree() && !bad.conditions_ok() &&
              bad.agree();
    r.checks.push_back({"iso.conditions", ok, "equal, shifted by d beta-tilde, inconsistent beta-tilde",
                        ok ? "" : same.summary() + " | " + shifted.summary() + " | " + bad.summary()});
  }
}

}  // namespace

SuiteResult run_suite(const std::string& name, const VerifyOptions& opts) {
  static const std::map<std::string, std::function<void(SuiteResult&, const VerifyOptions&)>> table{
      {"qseries", qseries_suite}, {"genus", genus_suite}, {"polycx", polycx_suite}, {"algebroid", algebroid_suite},
      {"voa", voa_suite},         {"cech", cech_suite},   {"dolbeault", dolbeault_suite}};
  auto it = table.find(name);
  if (it == table.end()) throw DomainError("unknown suite '" + name + "'");
  if (opts.dim < 1 || opts.dim > 4) throw DomainError("dim must be between 1 and 4");
  if (opts.trials < 1) throw DomainError("trials must be positive");
  if (opts.order < 0) throw DomainError("order must be non-negative");
  SuiteResult r;
  r.name = name;
  auto t0 = std::chrono::steady_clock::now();
  it->second(r, opts);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace cdo::cli
