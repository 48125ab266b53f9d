#pragma once
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cdo/num.hpp"

namespace cdo {

// q^offset * sum_{n=0..order} c[n] q^n
class QSeries {
 public:
  QSeries() : QSeries(10) {}
  explicit QSeries(int order, Q offset = 0);
  static QSeries constant(const Q& c, int order, Q offset = 0);
  static QSeries from_coeffs(std::vector<Q> coeffs, Q offset = 0);  // order = size-1

  const Q& offset() const { return offset_; }
  int order() const { return order_; }
  const std::vector<Q>& coeffs() const { return c_; }
  const Q& operator[](int n) const { return c_.at(n); }
  Q& operator[](int n) { return c_.at(n); }
  // coefficient of q^(offset+n); zero beyond order is an error
  Q coeff_at_exponent(const Q& e) const;
  bool is_zero() const;

  QSeries truncated(int order) const;
  QSeries shifted(const Q& by) const;  // multiply by q^by
  QSeries operator-() const;
  QSeries operator*(const Q& s) const;

  friend QSeries operator+(const QSeries& a, const QSeries& b);
  friend QSeries operator-(const QSeries& a, const QSeries& b);
  friend QSeries operator*(const QSeries& a, const QSeries& b);
  QSeries invert() const;
  QSeries pow(long m) const;

  std::string str(int max_terms = -1) const;

 private:
  Q offset_;
  int order_;
  std::vector<Q> c_;
};

enum class QOp { Add, Mul, Invert, Pow };
QSeries qs_arith(const QSeries& lhs, const QSeries& rhs, QOp op, long power = 1);

// first n with a[n] != b[n] after alignment, nullopt when equal to the shared order
std::optional<std::pair<Q, Q>> first_difference(const QSeries& a, const QSeries& b);
bool series_equal(const QSeries& a, const QSeries& b);

QSeries eta_power(long m, int order);
QSeries eisenstein(int k, int order);

struct Monomial46 {
  int a = 0, b = 0;  // E4^a E6^b
  std::string name() const;
  auto operator<=>(const Monomial46&) const = default;
};
std::vector<Monomial46> modular_basis(int weight);

struct Decomposition {
  enum Status { Member, NotMember, Underdetermined, BadInput } status = BadInput;
  std::map<Monomial46, Q> coeffs;
  int mismatch_degree = -1;
  Q residual;
  std::string message;
};
Decomposition modularity_decompose(const QSeries& s, int weight, int order);

nlohmann::json to_json(const QSeries& s);
QSeries qseries_from_json(const nlohmann::json& j);

}  // namespace cdo
