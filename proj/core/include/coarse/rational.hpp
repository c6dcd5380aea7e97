#pragma once

#include <cstdint>
#include <string>
#include <type_traits>

#include <boost/rational.hpp>

namespace coarse {

using Rational = boost::rational<std::int64_t>;

// "p/q" or "p" (integers only; no decimal notation).
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& value);
double to_double(const Rational& value);

}  // namespace coarse
// Comparing a rational with an integer recurses forever in Boost 1.74 under
// C++20 rewritten comparisons; compare against Rational instead.
namespace boost {
template <class T>
  requires std::is_integral_v<T>
bool operator==(const rational<std::int64_t>&, T) = delete;
template <class T>
  requires std::is_integral_v<T>
bool operator==(T, const rational<std::int64_t>&) = delete;
template <class T>
  requires std::is_integral_v<T>
bool operator<(const rational<std::int64_t>&, T) = delete;
template <class T>
  requires std::is_integral_v<T>
bool operator<(T, const rational<std::int64_t>&) = delete;
template <class T>
  requires std::is_integral_v<T>
bool operator>(const rational<std::int64_t>&, T) = delete;
template <class T>
  requires std::is_integral_v<T>
bool operator>(T, const rational<std::int64_t>&) = delete;
template <class T>
  requires std::is_integral_v<T>
bool operator<=(const rational<std::int64_t>&, T) = delete;
template <class T>
  requires std::is_integral_v<T>
bool operator<=(T, const rational<std::int64_t>&) = delete;
template <class T>
  requires std::is_integral_v<T>
bool operator>=(const rational<std::int64_t>&, T) = delete;
template <class T>
  requires std::is_integral_v<T>
bool operator>=(T, const rational<std::int64_t>&) = delete;
}  // namespace boost
