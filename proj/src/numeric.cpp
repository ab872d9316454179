#include "egonet/numeric.hpp"

#include <cmath>
#include <cstdio>

#include "egonet/errors.hpp"

namespace egonet {

std::string tower_name(Tower t) {
  switch (t) {
    case Tower::ExactInteger: return "int";
    case Tower::ExactRational: return "rational";
    case Tower::Float: return "float";
  }
  return "?";
}

BigRat rational_pow(const BigRat& base, long long e) {
  if (e == 0) return BigRat(1);
  if (e < 0) {
    if (base == 0) throw ValidationError("zero base with negative exponent");
    return BigRat(1) / rational_pow(base, -e);
  }
  BigRat acc(1), b = base;
  long long k = e;
  while (k > 0) {
    if (k & 1) acc *= b;
    b *= b;
    k >>= 1;
  }
  return acc;
}

std::string key_digits(const BigInt& v) { return v.str(); }

std::string key_digits(const BigRat& v) {
  return boost::multiprecision::numerator(v).str() + "/" +
         boost::multiprecision::denominator(v).str();
}

std::string key_digits(double v) {
  if (v == 0.0) return "0";  // merge +0/-0
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.11e", v);  // 12 significant digits
  return buf;
}

}  // namespace egonet
