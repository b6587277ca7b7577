#include "toti/rational.hpp"

#include "toti/errors.hpp"

#include <cctype>

namespace toti {

Rat make_rat(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat dyadic(unsigned k) {
  BigInt den = 1;
  den <<= k;
  return Rat(BigInt(1), den);
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty())
    return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return false;
  return true;
}

}  // namespace

Rat parse_rat(std::string_view text) {
  std::string_view num = text;
  std::string_view den = "1";
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  std::string_view digits = num;
  if (!digits.empty() && digits.front() == '-')
    digits.remove_prefix(1);
  if (!all_digits(digits) || !all_digits(den))
    throw ParseError("malformed rational '" + std::string(text) + "'");
  BigInt p{std::string(num)}, q{std::string(den)};
  if (q == 0)
    throw ParseError("zero denominator in '" + std::string(text) + "'");
  BigInt g;
  mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
  if (g != 1 && !(p == 0 && q == 1))
    throw ParseError("rational '" + std::string(text) + "' is not reduced");
  return Rat(p, q);
}

std::string to_string(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

int dyadic_exponent(const Rat& r) {
  const BigInt& d = r.get_den();
  if (mpz_popcount(d.get_mpz_t()) != 1)
    return -1;
  return static_cast<int>(mpz_scan1(d.get_mpz_t(), 0));
}

}  // namespace toti
