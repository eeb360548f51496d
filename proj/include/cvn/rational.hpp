// Exact rational arithmetic for edge lengths and nullspace computations.

#ifndef CVN_RATIONAL_HPP_
#define CVN_RATIONAL_HPP_

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cvn {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "p/q" in lowest terms, or "p" when the denominator is one.
std::string to_string(Rational const& r);
std::string to_string(Integer const& z);
// Accepts "p", "-p", "p/q" with q > 0. Throws ParseError otherwise.
Rational parse_rational(std::string_view text);

}  // namespace cvn

#endif  // CVN_RATIONAL_HPP_
