#pragma once

#include "lpsvp/numeric.hpp"

#include <doctest.h>

#include <random>

namespace test {

inline double d(const lpsvp::Real& x) { return x.convert_to<double>(); }
inline double d(const lpsvp::RealApprox& x) { return x.value.convert_to<double>(); }

inline lpsvp::Rational q(const char* s) { return lpsvp::parse_rational(s); }

inline bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

}  // namespace test
