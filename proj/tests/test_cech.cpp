#include "doctest.h"

#include "cdo/cech.hpp"
#include "cdo/parse.hpp"

using namespace cdo;

static SmoothPoly P(const char* s) { return parse_poly(s); }
static PQForm F(const char* s) { return parse_form(s); }

static Nerve affine_nerve() {
  auto a1 = PolyBiholo::affine({{GaussRat(1), GaussRat(2)}, {GaussRat(0), GaussRat(1)}}, {GaussRat(0), GaussRat(1)});
  auto a2 = PolyBiholo::affine({{GaussRat(0), GaussRat(1)}, {GaussRat(1), GaussRat(0)}}, {GaussRat(5), GaussRat(0)});
  return Nerve::from_charts({PolyBiholo::identity(2), a1, a2.after(a1)}, {PQForm(), PQForm(), PQForm()});
}

static MatForm sample_gamma0() {
  MatForm G(2);
  G(0, 0) = F("b1*B2*db1 + db2");
  G(0, 1) = F("B1*db2");
  G(1, 0) = F("b2*db1");
  G(1, 1) = F("B2*db1 - b1*db2");
  return G;
}

static RandomSpec small() {
  RandomSpec s;
  s.degree = 2;
  s.max_terms = 3;
  return s;
}

TEST_CASE("nerves validate") {
  for (int n = 2; n <= 4; ++n) CHECK(shear_nerve(n).validate().empty());
  CHECK(affine_nerve().validate().empty());
  Nerve N(2, {"A", "B"});
  CHECK_THROWS_AS(N.declare({0, 1}), DomainError);
  CHECK_THROWS_AS(N.set_pair(0, 1, PolyBiholo::identity(2), PQForm()), DomainError);
  CHECK(shear_nerve(3).index_of("U2") == 2);
}

TEST_CASE("Cech differential") {
  Nerve id2 = Nerve::from_charts({PolyBiholo::identity(2), PolyBiholo::identity(2)}, {PQForm(), PQForm()});
  Cochain<SmoothPoly> c{0, {{{0}, P("3")}, {{1}, P("3")}}};
  CHECK(cochain_zero(cech_differential(id2, c)));

  auto aff = PolyBiholo::affine({{GaussRat(2), GaussRat(0)}, {GaussRat(1), GaussRat(1)}}, {GaussRat(1), GaussRat(0)});
  Nerve an = Nerve::from_charts({PolyBiholo::identity(2), aff}, {PQForm(), PQForm()});
  Cochain<SmoothPoly> f{0, {{{0}, P("b2")}, {{1}, P("b1*b2")}}};
  // phi^* (b1 b2) = (2 b1 + 1)(b1 + b2)
  CHECK(cochain_at(an, cech_differential(an, f), {0, 1}) == P("2*b1^2 + 2*b1*b2 + b1 + b2 - b2"));

  Nerve N = shear_nerve(4);
  Rng rng(2);
  for (int p = 0; p <= 1; ++p) {
    auto g = random_function_cochain(N, rng, p, small());
    CHECK(cochain_zero(cech_differential(N, cech_differential(N, g))));
    auto X = random_field_cochain(N, rng, p, small());
    CHECK(cochain_zero(cech_differential(N, cech_differential(N, X))));
    Cochain<PQForm> w{p, {}};
    for (auto& s : N.simplices(p)) cochain_set(w, s, random_form(rng, 2, 1, 0, small()));
    CHECK(cochain_zero(cech_differential(N, cech_differential(N, w))));
  }
}

TEST_CASE("Eilenberg-Zilber product") {
  Nerve N = shear_nerve(4);
  Rng rng(4);
  auto a0 = random_function_cochain(N, rng, 0, small()), b0 = random_function_cochain(N, rng, 0, small());
  auto ab = ez_mul(N, a0, b0);
  for (auto& s : N.simplices(0)) CHECK(cochain_at(N, ab, s) == cochain_at(N, a0, s) * cochain_at(N, b0, s));

  for (int t = 0; t < 3; ++t) {
    auto a = random_function_cochain(N, rng, 1, small());
    auto b = random_function_cochain(N, rng, 1, small());
    auto c = random_function_cochain(N, rng, 0, small());
    CHECK(cochain_equal(N, ez_mul(N, ez_mul(N, a, b), c), ez_mul(N, a, ez_mul(N, b, c))));
    CHECK(cochain_equal(N, ez_mul(N, ez_mul(N, c, a), b), ez_mul(N, c, ez_mul(N, a, b))));
    // Leibniz: delta(a b) = (delta a) b + (-1)^p a (delta b)
    auto lhs = cech_differential(N, ez_mul(N, a, c));
    auto rhs = cochain_add(N, ez_mul(N, cech_differential(N, a), c), ez_mul(N, a, cech_differential(N, c)), -1);
    CHECK(cochain_equal(N, lhs, rhs));
  }

  // graded symmetry fails on the nose
  Cochain<SmoothPoly> a{1, {{{0, 1}, P("b1")}, {{1, 2}, P("1")}}};
  Cochain<SmoothPoly> b{1, {{{0, 1}, P("1")}, {{1, 2}, P("1")}}};
  auto ab1 = ez_mul(N, a, b), ba1 = ez_mul(N, b, a);
  auto sum = cochain_add(N, ab1, ba1);  // (-1)^{1*1} = -1, so symmetry would make this zero
  CHECK_FALSE(cochain_zero(sum));
  CHECK(cochain_at(N, sum, {0, 1, 2}) == P("b1 + 1"));
}

TEST_CASE("gluing conditions") {
  // two charts: no triples
  auto g2 = check_gluing(shear_nerve(2));
  CHECK(g2.ok());
  CHECK(g2.triples == 0);
  CHECK(check_gluing(affine_nerve()).ok());
  CHECK(check_gluing(shear_nerve(3)).ok());
  CHECK(check_gluing(shear_nerve(4)).ok());

  Nerve N = shear_nerve(3);
  N.set_pair(2, 0, N.phi(2, 0), N.xi(2, 0) + F("b2*db1*db2"));
  auto bad = check_gluing(N);
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.assoc_failures.front().rfind("(0,1,2)", 0) == 0);
}

TEST_CASE("obstruction cocycles") {
  auto o = obstruction_cocycles(shear_nerve(4));
  CHECK(cochain_zero(o.assoc));
  CHECK(cochain_zero(o.conformal));
  CHECK(o.assoc_closed);
  CHECK(o.conformal_closed);

  Nerve N = shear_nerve(4);
  N.set_pair(3, 1, N.phi(3, 1), N.xi(3, 1) + F("b1^2*db1*db2"));
  auto p = obstruction_cocycles(N);
  CHECK_FALSE(cochain_zero(p.assoc));
  CHECK(p.assoc_closed);
  CHECK(p.assoc_entries_closed);
  CHECK(N.simplices(3).size() == 1);
}

TEST_CASE("Cech structure maps") {
  Rng rng(6);
  Nerve A = affine_nerve();
  auto X = random_field_cochain(A, rng, 0, small()), Y = random_field_cochain(A, rng, 1, small());
  auto f = random_function_cochain(A, rng, 0, small());
  auto m = cech_structure_maps(A, X, X, f);
  CHECK(cochain_zero(m.delta));
  for (auto& s : A.simplices(0)) CHECK(cochain_at(A, m.star, s) == cdo_star(cochain_at(A, f, s), cochain_at(A, X, s)));
  auto st = cech_star(A, f, Y);
  for (auto& s : A.simplices(1))
    CHECK(cochain_at(A, st, s) == cdo_star(cochain_at(A, f, {s[0]}), cochain_at(A, Y, s)));

  Nerve N = shear_nerve(2);
  auto Z = random_field_cochain(N, rng, 0, small());
  auto dZ = cech_delta(N, Z);
  CHECK(dZ.p == 1);
  CHECK(cochain_at(N, dZ, {0, 1}) == delta_phi_xi(N.phi(1, 0), N.xi(1, 0), cochain_at(N, Z, {1})));

  Nerve one(2, {"U"});
  auto X1 = random_field_cochain(one, rng, 0, small()), Y1 = random_field_cochain(one, rng, 0, small());
  CHECK(cochain_at(one, cech_bracket0(one, X1, Y1), {0}) == cdo_bracket0(cochain_at(one, X1, {0}), cochain_at(one, Y1, {0})));
  CHECK(cochain_at(one, cech_bracket1(one, X1, Y1), {0}) == cdo_bracket1(cochain_at(one, X1, {0}), cochain_at(one, Y1, {0})));
}

TEST_CASE("homotopy dg equations") {
  auto ra = homotopy_dg_check(affine_nerve(), 2, 1);
  CHECK(ra.ok());
  auto rs = homotopy_dg_check(shear_nerve(3), 4, 2);
  INFO(rs.summary());
  CHECK(rs.ok());
  CHECK(rs.instances == 4 * 10);
  auto r4 = homotopy_dg_check(shear_nerve(4), 1, 5);
  INFO(r4.summary());
  CHECK(r4.ok());
  auto bad = homotopy_dg_check(shear_nerve(3), 1, 3, -1);
  REQUIRE_FALSE(bad.ok());
  bool star = false;
  for (auto& f : bad.failures) star = star || f.rfind("differential.star", 0) == 0;
  CHECK(star);
}

TEST_CASE("Cech-de Rham staircases") {
  Nerve A = affine_nerve();
  std::vector<MatForm> zero(3, MatForm(2));
  auto za = staircase_check(A, zero);
  INFO(za.summary());
  CHECK(za.ok());

  {
    Nerve N = shear_nerve(3);
    auto G = propagate_gamma(N, sample_gamma0());
    auto rep = staircase_check(N, G);
    INFO(rep.summary());
    CHECK(rep.gamma_law);
    CHECK(rep.ok());
    CHECK(rep.sigma_sign == 1);
    for (auto& a : rep.arrows)
      if (a.arrow.find("-sigma") != std::string::npos) CHECK_FALSE(a.ok);
  }

  // Gamma that ignores the transition law is rejected
  Nerve N = shear_nerve(3);
  std::vector<MatForm> same(3, sample_gamma0());
  CHECK_FALSE(staircase_check(N, same).gamma_law);
}

TEST_CASE("staircase with nonzero WZ") {
  auto c3 = PolyBiholo::shear(3, 1, P("b2^2")).after(PolyBiholo::shear(3, 2, P("b3^2"))).after(PolyBiholo::shear(3, 3, P("b1^2")));
  Nerve N = Nerve::from_charts({PolyBiholo::identity(3), c3}, {PQForm(), poincare_solve(wz(c3), Operator::Partial)});
  MatForm G0(3);
  G0(0, 1) = F("B3*db1");
  G0(2, 0) = F("b2*db3");
  G0(1, 1) = F("db2");
  auto rep = staircase_check(N, propagate_gamma(N, G0));
  INFO(rep.summary());
  CHECK(rep.ok());
  CHECK_FALSE(N.wz(1, 0).is_zero());
}
