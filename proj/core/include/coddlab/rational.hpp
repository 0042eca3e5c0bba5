#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace coddlab {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Formats a rational as "numerator/denominator" in decimal, e.g. "3/4".
/// Integers still carry the denominator: "2/1".
inline std::string rat_to_string(const Rat& r)
{
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "p/q" or a bare integer "p". Throws std::invalid_argument on
/// malformed input or zero denominator.
inline Rat rat_from_string(const std::string& s)
{
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rat(BigInt(s));
        }
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) {
            throw std::invalid_argument("rational with zero denominator: " + s);
        }
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("malformed rational: " + s);
    }
}

/// Exact conversion; every finite double is a dyadic rational.
inline Rat rat_from_double(double x)
{
    return Rat(x);
}

inline double rat_to_double(const Rat& r)
{
    return static_cast<double>(r);
}

} // namespace coddlab
