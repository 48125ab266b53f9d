#include "doctest.h"

#include "cdo/dolbeault.hpp"
#include "cdo/parse.hpp"

using namespace cdo;

static SmoothPoly P(const char* s) { return parse_poly(s); }
static PQForm F(const char* s) { return parse_form(s); }

// h^{-1} dh for a unipotent h, so the curvature is (1,1)
static MatForm chern2() { return chern_type_connection(MatForm::functions({{SmoothPoly(1), P("B1*b2")}, {SmoothPoly(0), SmoothPoly(1)}})); }

static MatForm chern3() {
  return chern_type_connection(MatForm::functions({{SmoothPoly(1), P("B1*b2"), P("b3")},
                                                   {SmoothPoly(0), SmoothPoly(1), P("b1*B3")},
                                                   {SmoothPoly(0), SmoothPoly(0), SmoothPoly(1)}}));
}

static Frame frame2() { return Frame(MatForm::functions({{SmoothPoly(1), P("b2 + B1")}, {SmoothPoly(0), SmoothPoly(1)}})); }

static Frame frame3() {
  return Frame(MatForm::functions({{SmoothPoly(1), P("b3 + B2"), SmoothPoly(0)},
                                   {SmoothPoly(0), SmoothPoly(1), SmoothPoly(0)},
                                   {P("b2"), P("b2*b3 + B2*b2"), SmoothPoly(1)}}));
}

static RandomSpec smooth_spec(int terms = 3) {
  RandomSpec s;
  s.smooth = true;
  s.degree = 2;
  s.max_terms = terms;
  return s;
}

struct Glued {
  Nerve N;
  ConnectionData c;
  BData b;
};

static Glued glued(int charts, const MatForm& gamma0, const PQForm& B0) {
  Nerve N = shear_nerve(charts);
  ConnectionData c = ConnectionData::propagate(N, gamma0);
  BData b = BData::solve(N, c, B0);
  return {N, c, b};
}

TEST_CASE("h on trivial data") {
  Rng rng(1);
  MatForm zero(2);
  PQForm B = F("B1*db1*db2 + b2*db1*db2");
  for (int t = 0; t < 4; ++t) {
    VField Y = random_field(rng, 2, smooth_spec());
    CHECK(h_local(zero, PQForm(), Y).is_zero());
    CHECK(h_local(zero, B, Y) == -GaussRat(Q(1, 2)) * contract(Y, B));
  }
  // one explicit value: Gamma^1_1 = b2 db1, Y = d/db1, h = d_1Y^j Gamma^1_j + 1/2 Tr[Gamma(Y) Gamma] = 1/2 b2^2 db1
  MatForm G(2);
  G(0, 0) = F("b2*db1");
  CHECK(h_local(G, PQForm(), VField::coord(2, 1)) == F("1/2*b2^2*db1"));
}

TEST_CASE("connection, B and H data") {
  for (int n : {2, 3}) {
    Glued g = glued(n, chern2(), F("B1*db1*db2"));
    CHECK(g.c.check(g.N).empty());
    CHECK(g.b.check(g.N, g.c).empty());
    HForm H = HForm::build(g.c, g.b);
    CHECK(H.check(g.N, g.c).empty());
    for (int a = 0; a < g.N.size(); ++a) CHECK(curvature_is_11(g.c.gamma[a]));
  }
  // Gamma0 = 0 on the source: the other charts carry the pure-gauge term
  Glued g = glued(2, MatForm(2), PQForm());
  CHECK(g.c.check(g.N).empty());
  CHECK(!g.c.gamma[1].is_zero());
  CHECK(g.c.R(1).is_zero());
  // ignoring the transition law is caught
  ConnectionData bad{{chern2(), chern2()}};
  CHECK(!bad.check(g.N).empty());
  CHECK_THROWS_AS(chern_type_connection(MatForm::functions({{P("b1"), SmoothPoly(0)}, {SmoothPoly(0), SmoothPoly(1)}})),
                  DomainError);
}

TEST_CASE("h equation on the shear nerve") {
  Glued g = glued(2, chern2(), F("B1*db1*db2"));
  auto rep = check_h_equation(g.N, g.c, g.b, 5, 1);
  CHECK(rep.ok());
  CHECK(!rep.checked.empty());
  Glued flat = glued(2, MatForm(2), PQForm());
  CHECK(check_h_equation(flat.N, flat.c, flat.b, 3, 2).ok());
  // omitting Tr(theta ^ Gamma) in the B transition
  BData bm = BData::solve(g.N, g.c, F("B1*db1*db2"), true);
  auto mut = check_h_equation(g.N, g.c, bm, 2, 1);
  REQUIRE(!mut.ok());
  CHECK(!mut.failures[0].residual.empty());
}

TEST_CASE("local Delta-bar and the invariant formulas") {
  Glued g = glued(2, chern2(), F("B1*db1*db2"));
  LocalModel m{g.c.gamma[0], g.b.B[0]};
  Frame f1 = Frame::coordinate(2), f2 = frame2();
  Rng rng(3);
  bool nonzero = false;
  for (int k = 0; k < 4; ++k) {
    VField X = random_field(rng, 2, smooth_spec()), Y = random_field(rng, 2, smooth_spec());
    SmoothPoly f = random_poly(rng, 2, smooth_spec());
    BarOps loc = bar_operators(m, PQForm(f), FieldForm(X), FieldForm(Y));
    CHECK(loc.delta == bar_delta_degree0(m, X));
    for (const Frame* fr : {&f1, &f2}) {
      BarOps inv = invariant_formulas(m.gamma, m.H(), *fr, f, X, Y);
      CHECK(inv.delta == loc.delta);
      CHECK(inv.star == loc.star);
      CHECK(inv.bracket0 == loc.bracket0);
      CHECK(inv.bracket1 == loc.bracket1);
    }
    nonzero = nonzero || !loc.delta.is_zero();
  }
  CHECK(nonzero);
  CHECK_THROWS_AS(Frame(MatForm::functions({{P("b1"), SmoothPoly(0)}, {SmoothPoly(0), SmoothPoly(1)}})), DomainError);
}

TEST_CASE("invariant formulas in three dimensions") {
  MatForm G = chern3();
  for (PQForm B : {PQForm(), F("b3*db1*db2 + b1*B2*db2*db3")}) {
    LocalModel m{G, B};
    Rng rng(3);
    for (int k = 0; k < 3; ++k) {
      VField X = random_field(rng, 3, smooth_spec(2)), Y = random_field(rng, 3, smooth_spec(2));
      SmoothPoly f = random_poly(rng, 3, smooth_spec(2));
      BarOps loc = bar_operators(m, PQForm(f), FieldForm(X), FieldForm(Y));
      for (const Frame& fr : {Frame::coordinate(3), frame3()}) {
        BarOps inv = invariant_formulas(G, m.H(), fr, f, X, Y);
        CHECK(inv.delta == loc.delta);
        CHECK(inv.star == loc.star);
        CHECK(inv.bracket0 == loc.bracket0);
        CHECK(inv.bracket1 == loc.bracket1);
      }
    }
  }
}

TEST_CASE("bracket1 formula needs (1,1) curvature") {
  MatForm G(2);
  G(0, 0) = F("b1*B2*db1 + db2");
  G(0, 1) = F("B1*db2");
  G(1, 0) = F("b2*db1");
  G(1, 1) = F("B2*db1 - b1*db2");
  CHECK(!curvature_is_11(G));
  LocalModel m{G, PQForm()};
  Rng rng(5);
  int b1_mismatch = 0;
  for (int k = 0; k < 4; ++k) {
    VField X = random_field(rng, 2, smooth_spec()), Y = random_field(rng, 2, smooth_spec());
    SmoothPoly f = random_poly(rng, 2, smooth_spec());
    BarOps loc = bar_operators(m, PQForm(f), FieldForm(X), FieldForm(Y));
    BarOps inv = invariant_formulas(G, m.H(), Frame::coordinate(2), f, X, Y);
    CHECK(inv.delta == loc.delta);
    CHECK(inv.star == loc.star);
    CHECK(inv.bracket0 == loc.bracket0);
    b1_mismatch += inv.bracket1 != loc.bracket1;
  }
  CHECK(b1_mismatch > 0);
}

TEST_CASE("flat model reduces to the CDO") {
  LocalModel m = LocalModel::flat(2);
  Rng rng(7);
  for (int k = 0; k < 4; ++k) {
    VField X = random_field(rng, 2, smooth_spec()), Y = random_field(rng, 2, smooth_spec());
    SmoothPoly f = random_poly(rng, 2, smooth_spec());
    BarOps loc = bar_operators(m, PQForm(f), FieldForm(X), FieldForm(Y));
    CHECK(loc.delta.is_zero());
    CHECK(loc.star == cdo_star(f, X));
    CHECK(loc.bracket0 == PQForm(cdo_bracket0(X, Y)));
    CHECK(loc.bracket1 == cdo_bracket1(X, Y));
    BarOps inv = invariant_formulas(m.gamma, m.H(), frame2(), f, X, Y);
    CHECK(inv.bracket0 == PQForm(cdo_bracket0(X, Y)));
  }
  // holomorphic X: (Delta-bar X, 0)
  Section s{1, PQForm(), FieldForm(VField({P("b1*b2"), P("b1^2 + 3")}))};
  CHECK(deformed_dolbeault(m, s).is_zero());
}

TEST_CASE("deformed Dolbeault operator") {
  Glued g = glued(2, chern2(), F("B1*db1*db2"));
  LocalModel m{g.c.gamma[0], g.b.B[0]};
  Section f{0, F("b1*B2^2 + B1"), FieldForm(2)};
  Section df = deformed_dolbeault(m, f);
  CHECK(df.weight == 0);
  CHECK(df.form == dbar_functions(f.form));
  CHECK(df.form == F("2*b1*B2*dB2 + dB1"));

  auto sq = square_zero_check(m, 6, 11);
  CHECK(sq.ok());
  CHECK(sq.cases == 12);
  LocalModel m3{chern3(), F("b3*db1*db2")};
  CHECK(square_zero_check(m3, 3, 12).ok());

  Section two{2, PQForm(), FieldForm(2)};
  CHECK_THROWS_AS(deformed_dolbeault(m, two), DomainError);
}

TEST_CASE("local exactness") {
  Glued g = glued(2, chern2(), F("B1*db1*db2"));
  LocalModel m{g.c.gamma[0], g.b.B[0]};
  auto rep = local_exactness_check(m, 1, 2, 10, 4);
  CHECK(rep.ok());
  CHECK(rep.cases >= 20);

  CHECK(exact_primitive(m, Section{1, PQForm(), FieldForm(2)}).is_zero());
  // B1 dB2 is not dbar-closed
  CHECK_THROWS_AS(exact_primitive(m, Section{0, F("B1*dB2"), FieldForm(2)}), DomainError);
  // a closed weight-0 input and its primitive
  Section c0{0, F("b1*dB1"), FieldForm(2)};
  Section prim = exact_primitive(m, c0);
  CHECK(deformed_dolbeault(m, prim) == c0);
}

TEST_CASE("isomorphism conditions") {
  LocalModel m{chern2(), F("B1*db1*db2")};
  PQForm H = m.H();
  PQForm bt = F("b1*B2*db1*db2");
  auto same = iso_conditions_check(m.gamma, H, H, PQForm(), 5, 1);
  CHECK(same.conditions_ok());
  CHECK(same.agree());
  auto shifted = iso_conditions_check(m.gamma, H, H - GaussRat(2) * de_rham(bt), bt, 5, 1);
  CHECK(shifted.conditions_ok());
  CHECK(shifted.reduced_ok());
  auto bad = iso_conditions_check(m.gamma, H, H, bt, 5, 1);
  CHECK(!bad.conditions_ok());
  CHECK(!bad.reduced_ok());
  CHECK(bad.agree());
  // a holomorphic beta-tilde in three dimensions has a (3,0) part in d beta-tilde
  MatForm G3 = chern3();
  PQForm H3 = LocalModel{G3, PQForm()}.H();
  PQForm bt3 = F("b3*db1*db2");
  CHECK(!de_rham(bt3).part(3, 0).is_zero());
  auto r3 = iso_conditions_check(G3, H3, H3 - GaussRat(2) * de_rham(bt3), bt3, 3, 2);
  CHECK(r3.conditions_ok());
  CHECK(r3.agree());
  auto r3bad = iso_conditions_check(G3, H3, H3, bt3, 3, 2);
  CHECK(!r3bad.conditions_ok());
  CHECK(r3bad.agree());
}

TEST_CASE("Cech-Dolbeault total complex") {
  Glued g = glued(3, chern2(), F("B1*db1*db2"));
  auto rep = cech_dolbeault_check(g.N, g.c, g.b, 1, 5);
  CHECK(rep.ok());
  for (const char* name : {"D^2", "degree0.agreement", "D.Delta-check", "Delta.homotopy"}) {
    bool seen = false;
    for (auto& s : rep.checked) seen = seen || s == name;
    CHECK_MESSAGE(seen, name);
  }
  CHECK(rep.instances > 0);
  Glued g2 = glued(2, MatForm(2), F("b2*db1*db2"));
  CHECK(cech_dolbeault_check(g2.N, g2.c, g2.b, 1, 6).ok());
}

TEST_CASE("conformal structure") {
  Glued g = glued(2, chern2(), F("B1*db1*db2"));
  auto rep = conformal_suite(g.N, g.c, g.b, 3, 6);
  CHECK(rep.ok());

  Glued flat = glued(2, MatForm(2), PQForm());
  CHECK(conformal_suite(flat.N, flat.c, flat.b, 3, 7).ok());
  // flat model: third-order pole of L X is div X, as in the beta-gamma Virasoro action
  BetaGamma bg(2, 3);
  LocalModel m{MatForm(2), PQForm()};
  VField X({P("b1^2*b2"), P("b2^2 + b1")});
  BGState Xb = bar_generator(bg, m, X);
  CHECK(Xb == BGState::from_field(X));
  CHECK(bg.virasoro(1, Xb) == BGState::function(P("2*b1*b2 + 2*b2")));
  CHECK(bg.virasoro(1, Xb) == bg.nth_product(bg.nu(), 2, Xb));

  // a trace that ignores the transition law
  MatForm G(2);
  G(0, 0) = F("b2*db1");
  ConnectionData bad{{G, G}};
  BData zero{{PQForm(), PQForm()}};
  auto br = conformal_suite(g.N, bad, zero, 1, 8);
  CHECK(!br.trace_glues);
  CHECK(!br.ok());
}
