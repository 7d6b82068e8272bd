#include "erglab/rational.hpp"

#include "erglab/errors.hpp"

#include <cctype>

namespace erglab {

Rat ratio(std::size_t num, std::size_t den) {
  if (den == 0) throw ValidationError("zero denominator");
  return Rat(static_cast<unsigned long>(num), static_cast<unsigned long>(den));
}

std::string to_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

boost::multiprecision::mpz_int parse_int(std::string_view s) {
  bool neg = !s.empty() && (s[0] == '-' || s[0] == '+');
  std::string_view digits = neg ? s.substr(1) : s;
  if (!all_digits(digits)) throw ValidationError("not a rational: '" + std::string(s) + "'");
  boost::multiprecision::mpz_int v{std::string(digits)};
  return s[0] == '-' ? boost::multiprecision::mpz_int(-v) : v;
}

}  // namespace

Rat parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto den = parse_int(text.substr(slash + 1));
    if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
    return Rat(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    if (!all_digits(frac)) throw ValidationError("not a rational: '" + std::string(text) + "'");
    std::string whole(text.substr(0, dot));
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    boost::multiprecision::mpz_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    auto w = parse_int(whole);
    auto f = parse_int(frac);
    bool neg = text[0] == '-';
    return Rat(w * scale + (neg ? -f : f), scale);
  }
  return Rat(parse_int(text));
}

double to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace erglab
