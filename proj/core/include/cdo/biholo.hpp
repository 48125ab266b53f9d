#pragma once
#include <string>
#include <vector>

#include "cdo/forms.hpp"

namespace cdo {

// polynomial biholomorphism phi: U -> V with explicit polynomial inverse
class PolyBiholo {
 public:
  PolyBiholo() = default;
  PolyBiholo(std::vector<SmoothPoly> forward, std::vector<SmoothPoly> inverse);  // verifies both compositions
  static PolyBiholo identity(int d);
  // b -> A b + c with A invertible over the Gaussian rationals
  static PolyBiholo affine(const std::vector<std::vector<GaussRat>>& A, const std::vector<GaussRat>& c);
  // b^target -> b^target + p, p free of b^target (a triangular shear)
  static PolyBiholo shear(int d, int target, const SmoothPoly& p);

  int dim() const { return static_cast<int>(fwd_.size()); }
  const std::vector<SmoothPoly>& forward() const { return fwd_; }
  const std::vector<SmoothPoly>& inverse_map() const { return inv_; }
  PolyBiholo inverse() const;
  // (this o inner): first inner, then this
  PolyBiholo after(const PolyBiholo& inner) const;
  bool is_affine() const;

  SmoothPoly pull(const SmoothPoly& f) const;
  PQForm pull(const PQForm& w) const;
  VField pull(const VField& X) const;  // (phi^* X)(b) = g(b)^{-1} X(phi(b))
  MatForm pull(const MatForm& m) const;

  std::string str() const;

 private:
  std::vector<SmoothPoly> fwd_, inv_, fwd_bar_;
};

MatForm mat_derivative(const PolyBiholo& phi);          // g^i_j = d_j phi^i
MatForm mat_derivative_inverse(const PolyBiholo& phi);  // g^{-1} as functions on U
MatForm theta(const PolyBiholo& phi);                   // g^{-1} d g
PQForm wz(const PolyBiholo& phi);                       // Tr(theta^3)/3
struct ThetaWZ {
  MatForm theta;
  PQForm wz;
};
ThetaWZ theta_wz(const PolyBiholo& phi);
PQForm sigma_cocycle(const PolyBiholo& phi2, const PolyBiholo& phi1);
bool preserves_conformal(const PolyBiholo& phi);  // Tr theta = 0

enum class Operator { Partial, PartialBar };
// radial homotopy; throws DomainError when the input is not closed or has a degree-zero part
PQForm poincare_homotopy(const PQForm& w, Operator op);
PQForm poincare_solve(const PQForm& w, Operator op);

struct ConnectionSuite {
  MatForm R;
  PQForm CS;
};
ConnectionSuite connection_suite(const MatForm& gamma);
MatForm curvature(const MatForm& gamma);
PQForm chern_simons(const MatForm& gamma);

}  // namespace cdo
