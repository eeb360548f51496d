#include "cvn/rational.hpp"

#include <cctype>

#include "cvn/word.hpp"

namespace cvn {

std::string to_string(Integer const& z) { return z.str(); }

std::string to_string(Rational const& r) {
  Integer const num = boost::multiprecision::numerator(r);
  Integer const den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

Integer parse_integer(std::string_view text, std::string_view whole) {
  std::size_t i = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) i = 1;
  if (i == text.size()) throw ParseError("bad rational \"" + std::string(whole) + "\"");
  for (std::size_t k = i; k < text.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(text[k]))) {
      throw ParseError("bad rational \"" + std::string(whole) + "\"");
    }
  }
  Integer z(std::string(text.substr(i)));
  return text[0] == '-' ? Integer(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto const slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  Integer const num = parse_integer(text.substr(0, slash), text);
  std::string_view const den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
    throw ParseError("bad rational \"" + std::string(text) + "\": signed denominator");
  }
  Integer const den = parse_integer(den_text, text);
  if (den == 0) throw ParseError("bad rational \"" + std::string(text) + "\": zero denominator");
  return Rational(num, den);
}

}  // namespace cvn
