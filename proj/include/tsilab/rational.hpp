#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/functional/hash.hpp>

#include <cstdint>
#include <string>

namespace tsilab {

using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<boost::multiprecision::backends::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
                                          boost::multiprecision::et_off>;

inline Rat rat(long long p, long long q = 1) { return Rat(Int(p), Int(q)); }

/// Parses "p/q" or "p" (exact, no decimals). Throws std::invalid_argument on junk.
Rat parse_rat(const std::string& s);

/// Renders as "p/q", or "p" when the denominator is 1.
std::string format_rat(const Rat& r);

inline std::size_t hash_value_of(const Rat& r) {
    std::size_t seed = 0;
    boost::hash_combine(seed, boost::multiprecision::hash_value(boost::multiprecision::numerator(r)));
    boost::hash_combine(seed, boost::multiprecision::hash_value(boost::multiprecision::denominator(r)));
    return seed;
}

} // namespace tsilab
