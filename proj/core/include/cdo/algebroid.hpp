#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cdo/biholo.hpp"
#include "cdo/random.hpp"

namespace cdo {

PQForm cdo_star(const SmoothPoly& f, const VField& X);              // -X^i d_i d_j f db^j
SmoothPoly cdo_bracket0(const VField& X, const VField& Y);          // -(d_j X^i)(d_i Y^j)
PQForm cdo_bracket1(const VField& X, const VField& Y);              // -(d_k d_j X^i)(d_i Y^j) db^k

struct CdoMaps {
  PQForm star;
  SmoothPoly bracket0;
  PQForm bracket1;
};
CdoMaps cdo_maps(const SmoothPoly& f, const VField& X, const VField& Y);

// a vertex algebroid on a polynomial chart; the maps can be swapped out for mutation checks
struct VertexAlgebroid {
  int d = 0;
  std::string chart = "U";
  std::function<PQForm(const SmoothPoly&, const VField&)> star;
  std::function<SmoothPoly(const VField&, const VField&)> bracket0;
  std::function<PQForm(const VField&, const VField&)> bracket1;

  static VertexAlgebroid cdo(int d, std::string chart = "U");
};

struct Witness {
  std::string identity;
  int trial = -1;
  std::string inputs;
  std::string residual;
};

struct CheckReport {
  std::string name;
  int trials = 0;
  std::vector<std::string> checked;  // identity names
  std::vector<Witness> failures;     // first failure per identity
  bool ok() const { return failures.empty(); }
  std::string summary() const;
};

CheckReport axioms_check(const VertexAlgebroid& va, int trials, std::uint64_t seed, RandomSpec spec = {});

// pullback part acts from objects on the target chart V to the source chart U
struct VAMorphism {
  PolyBiholo phi;
  std::function<PQForm(const VField&)> delta;

  static VAMorphism identity(int d);
  static VAMorphism pullback_only(const PolyBiholo& phi);
};

// throws DomainError unless d_hol(xi) == WZ_phi
void require_xi(const PolyBiholo& phi, const PQForm& xi);
PQForm delta_phi_xi(const PolyBiholo& phi, const PQForm& xi, const VField& X);
// same, with theta supplied and xi assumed valid
PQForm delta_with_theta(const PolyBiholo& phi, const MatForm& theta, const PQForm& xi, const VField& X);
VAMorphism cdo_iso(const PolyBiholo& phi, const PQForm& xi);

// compose(outer, inner) = outer o inner, inner applied first
VAMorphism compose(const VAMorphism& outer, const VAMorphism& inner);

CheckReport morphism_check(const VAMorphism& m, const VertexAlgebroid& source, const VertexAlgebroid& target,
                           int trials, std::uint64_t seed, RandomSpec spec = {});

struct CompositionReport {
  CheckReport delta;        // composite Delta versus Delta of the composite
  bool eta_closed = false;  // d eta = WZ of the composite
  PQForm eta, sigma;
  bool ok() const { return delta.ok() && eta_closed; }
};
// phi1: U -> V with xi1 on U, phi2: V -> W with xi2 on V
CompositionReport composition_law_check(const PolyBiholo& phi1, const PQForm& xi1, const PolyBiholo& phi2,
                                        const PQForm& xi2, int trials, std::uint64_t seed, RandomSpec spec = {});

bool conformal_preserved(const PolyBiholo& phi);

}  // namespace cdo
