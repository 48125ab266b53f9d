#include "cdo/num.hpp"

namespace cdo {

Q qfrac(long num, long den) {
  if (den == 0) throw DomainError("zero denominator");
  Q q(num, den);
  q.canonicalize();
  return q;
}

Q parse_q(const std::string& s) {
  Q q;
  if (q.set_str(s, 10) != 0) throw DomainError("bad rational '" + s + "'");
  if (sgn(q.get_den()) == 0) throw DomainError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string qstr(const Q& q) { return q.get_str(); }

GaussRat& GaussRat::operator*=(const GaussRat& o) {
  Q r = re * o.re - im * o.im;
  Q i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

GaussRat& GaussRat::operator/=(const GaussRat& o) {
  Q n = o.norm2();
  if (sgn(n) == 0) throw DomainError("division by zero");
  *this *= o.conj();
  re /= n;
  im /= n;
  return *this;
}

std::string GaussRat::str() const {
  if (sgn(im) == 0) return qstr(re);
  std::string s;
  if (sgn(re) != 0) s = qstr(re) + (sgn(im) > 0 ? "+" : "");
  if (im == 1) return s + "i";
  if (im == -1) return s + "-i";
  return s + qstr(im) + "*i";
}

}  // namespace cdo
