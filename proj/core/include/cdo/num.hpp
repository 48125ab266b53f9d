#pragma once
#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace cdo {

using Q = mpq_class;

Q qfrac(long num, long den);
Q parse_q(const std::string& s);  // "a" or "a/b"
std::string qstr(const Q& q);

// exact complex rational a + b i
struct GaussRat {
  Q re, im;

  GaussRat() = default;
  GaussRat(long r) : re(r) {}
  GaussRat(const Q& r) : re(r) {}
  GaussRat(const Q& r, const Q& i) : re(r), im(i) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  GaussRat conj() const { return {re, -im}; }
  Q norm2() const { return re * re + im * im; }

  GaussRat operator-() const { return {-re, -im}; }
  GaussRat& operator+=(const GaussRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRat& operator-=(const GaussRat& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussRat& operator*=(const GaussRat& o);
  GaussRat& operator/=(const GaussRat& o);

  std::string str() const;
};

inline GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
inline GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
inline GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
inline GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
inline bool operator==(const GaussRat& a, const GaussRat& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

inline const GaussRat I_unit{Q(0), Q(1)};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cdo
