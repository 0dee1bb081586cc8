#include "cpcause/rational.hpp"

#include <cctype>

namespace cpcause {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// leading zeros would switch the BigInt string constructor into octal
BigInt from_digits(const std::string& s) {
  size_t i = s.find_first_not_of('0');
  if (i == std::string::npos) return BigInt(0);
  return BigInt(s.substr(i));
}

Rational pow10(int k) {
  BigInt p = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(k < 0 ? -k : k));
  return k < 0 ? Rational(BigInt(1), p) : Rational(p);
}

} // namespace

std::optional<Rational> parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    BigInt d = from_digits(den);
    if (d == 0) return std::nullopt;
    return Rational(from_digits(num), d);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!all_digits(ip) || !all_digits(fp)) return std::nullopt;
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(fp.size()));
    return Rational(from_digits(ip) * scale + from_digits(fp), scale);
  }
  if (!all_digits(text)) return std::nullopt;
  return Rational(from_digits(text));
}

std::string rational_string(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string pretty_rational(const Rational& r) {
  BigInt den = boost::multiprecision::denominator(r);
  int twos = 0, fives = 0;
  BigInt d = den;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return rational_string(r);
  int k = twos > fives ? twos : fives;
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(k));
  BigInt digits = boost::multiprecision::numerator(r) * (scale / den);
  BigInt ip = digits / scale, fp = digits % scale;
  if (k == 0 || fp == 0) return ip.str();
  std::string frac = fp.str();
  frac.insert(0, static_cast<size_t>(k) - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  return ip.str() + "." + frac;
}

namespace {

// trailing zeros carry no information next to the exact rational
std::string trim_zeros(std::string s) {
  if (s.find('.') == std::string::npos) return s;
  size_t last = s.find_last_not_of('0');
  if (s[last] == '.') --last;
  s.erase(last + 1);
  return s;
}

} // namespace

std::string decimal_string(const Rational& r, int significant) {
  if (significant < 1) significant = 1;
  if (r == 0) return "0";
  Rational v = r < 0 ? Rational(-r) : r;
  int e = 0;
  Rational t(1);
  if (v >= 1) {
    while (v >= t * 10) { t *= 10; ++e; }
  } else {
    while (v < t) { t /= 10; --e; }
  }
  // digits = round_half_up(v * 10^(significant-1-e)), exactly significant long
  Rational scaled = v * pow10(significant - 1 - e);
  BigInt num = boost::multiprecision::numerator(scaled);
  BigInt den = boost::multiprecision::denominator(scaled);
  BigInt digits = (num * 2 + den) / (den * 2);
  BigInt cap = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(significant));
  if (digits == cap) { digits /= 10; ++e; }
  std::string ds = digits.str();
  std::string sign = r < 0 ? "-" : "";
  if (e >= significant - 1) {
    ds.append(static_cast<size_t>(e - significant + 1), '0');
    return sign + ds;
  }
  if (e >= 0)
    return trim_zeros(sign + ds.substr(0, static_cast<size_t>(e) + 1) + "." +
                      ds.substr(static_cast<size_t>(e) + 1));
  std::string out = sign + "0.";
  out.append(static_cast<size_t>(-e - 1), '0');
  return trim_zeros(out + ds);
}

Rational pow_rational(const Rational& base, unsigned exp) {
  BigInt n = boost::multiprecision::pow(boost::multiprecision::numerator(base), exp);
  BigInt d = boost::multiprecision::pow(boost::multiprecision::denominator(base), exp);
  return Rational(n, d);
}

} // namespace cpcause
