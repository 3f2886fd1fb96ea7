#include "hyperkl/rational.hpp"

#include <stdexcept>

namespace hyperkl {

std::string rat_to_string(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

Rat parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rat(BigInt(text));
    }
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) {
      throw std::invalid_argument("zero denominator in rational '" + text + "'");
    }
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational '" + text + "'");
  }
}

Rat rat_pow(long long base, long long e) {
  const BigInt b(base);
  if (e >= 0) {
    return Rat(boost::multiprecision::pow(b, static_cast<unsigned>(e)));
  }
  BigInt den = boost::multiprecision::pow(b, static_cast<unsigned>(-e));
  if (den == 0) {
    throw std::invalid_argument("rat_pow: zero base with negative exponent");
  }
  return Rat(1, den);
}

long long padic_valuation(const Rat& r, long long p) {
  if (r == 0) {
    throw std::invalid_argument("padic_valuation of zero");
  }
  if (p < 2) {
    throw std::invalid_argument("padic_valuation needs p >= 2");
  }
  const BigInt pp(p);
  long long v = 0;
  BigInt num = numerator(r);
  BigInt den = denominator(r);
  while (num % pp == 0) {
    num /= pp;
    ++v;
  }
  while (den % pp == 0) {
    den /= pp;
    --v;
  }
  return v;
}

}  // namespace hyperkl
