#pragma once

#include <boost/rational.hpp>

namespace kinlim {

// Exact arithmetic for integer controls; every coefficient is an integer
// combination of control products with denominators dividing 4.
using Rational = boost::rational<long long>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

}  // namespace kinlim
