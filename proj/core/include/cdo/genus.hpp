#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdo/qseries.hpp"

namespace cdo {

using Partition = std::vector<int>;  // weakly decreasing positive parts

std::vector<Partition> partitions(int n);
std::string chern_key(const Partition& p);  // "c1^2c2", "1" for the empty partition
Partition parse_chern_key(const std::string& key);

struct ChernData {
  int d = 0;
  std::map<Partition, Q> numbers;  // integral of c_lambda

  static ChernData point();
  static ChernData from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  const Q& number(const Partition& p) const;  // throws when absent
  void validate() const;
};

// a univariate series in a Chern root x, truncated at x^deg, q-series coefficients
struct RootSeries {
  std::vector<QSeries> c;
  RootSeries(int deg, int order);
  int deg() const { return static_cast<int>(c.size()) - 1; }
  int order() const { return c[0].order(); }
  RootSeries operator*(const RootSeries& o) const;
  RootSeries operator+(const RootSeries& o) const;
  RootSeries inverse() const;
  RootSeries log_normalized() const;  // log(F / F(0))
  static RootSeries exp_linear(const Q& a, int deg, int order);  // e^{a x}
};

// symmetric function in d roots, power-sum basis, truncated at total degree d
class SymExpansion {
 public:
  SymExpansion(int d, int order);
  static SymExpansion one(int d, int order);
  static SymExpansion multiplicative(const RootSeries& f, int d);  // prod_i f(x_i)
  static SymExpansion additive(const RootSeries& g, int d);         // sum_i g(x_i)
  static SymExpansion power_sum(int k, int d, int order);
  static SymExpansion elementary(int k, int d, int order);  // e_k = c_k

  int d() const { return d_; }
  int order() const { return order_; }
  const std::map<Partition, QSeries>& terms() const { return terms_; }

  SymExpansion operator+(const SymExpansion& o) const;
  SymExpansion operator*(const SymExpansion& o) const;
  SymExpansion operator*(const QSeries& s) const;
  SymExpansion exp() const;  // needs zero degree-0 part

  // rewrite in Chern monomials (partition of Chern indices -> coefficient)
  std::map<Partition, QSeries> in_chern_classes() const;

 private:
  void add_term(const Partition& p, const QSeries& s);
  int d_, order_;
  std::map<Partition, QSeries> terms_;
};

QSeries integrate(const SymExpansion& e, const ChernData& data);

struct GenusSeries {
  QSeries value;
  std::string provenance;
};

RootSeries ahat_root(int deg, int order);
RootSeries todd_root(int deg, int order);
SymExpansion witten_integrand(int d, int order);
SymExpansion character_integrand(int d, int order);  // without the q^{-d/12} prefactor

GenusSeries witten_genus(const ChernData& data, int order);
std::pair<Q, Q> todd_and_ahat(const ChernData& data);
GenusSeries cdo_character(const ChernData& data, int order);
// chi(M, E) by Riemann-Roch; each sign s adds the bundle with roots s*x_i (1: T, -1: cotangent)
Q euler_characteristic(const ChernData& data, const std::vector<int>& root_signs);

struct IdentityCheck {
  bool equal = false;
  std::optional<std::pair<Q, Q>> first_difference;  // exponent, lhs - rhs
  QSeries lhs, rhs;
};
IdentityCheck character_identity_check(const ChernData& data, int order);

struct ObstructionItem {
  std::string condition;  // "ch1" or "ch2"
  std::string monomial;
  Q value;
  bool holds;
};
struct ObstructionReport {
  std::vector<ObstructionItem> items;
  bool ch1_necessary = true;
  bool ch2_necessary = true;
  std::string note;
};
ObstructionReport obstruction_predicates(const ChernData& data);

}  // namespace cdo
