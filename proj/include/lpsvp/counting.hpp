#pragma once

#include "lpsvp/numeric.hpp"

#include <utility>
#include <vector>

namespace lpsvp {

struct CountBounds {
    Integer lo = 0;
    Integer hi = 0;
    bool is_exact() const { return lo == hi; }
};

// N_p(Z^n, r, t) query: r is carried through r^p; shift is one uniform entry or n entries.
struct ShiftedBallQuery {
    NormExponent p;
    std::size_t n = 0;
    Number radius_pow;
    std::vector<Number> shift;

    static ShiftedBallQuery uniform(const NormExponent& p, std::size_t n, const Number& radius_pow,
                                    const Number& t);
    static ShiftedBallQuery vector(const NormExponent& p, const Number& radius_pow, std::vector<Number> t);
    void validate() const;
};

// Cells allowed in one cost-axis histogram.
constexpr std::size_t kMaxCostCells = 20'000'000;

CountBounds count_exact(const ShiftedBallQuery& q);
CountBounds count_interval(const ShiftedBallQuery& q, const Rational& resolution);

// count_exact(...)^(1/n) at radius c n^(1/p).
Real growth_constant(const NormExponent& p, std::size_t n, const Rational& c);

// Upper bound on max_t N_p(Z^n, r, t) via min_tau exp(tau r^p) (max_t Theta_p(tau; t))^n.
struct DensityBound {
    RealApprox bound;
    Real tau;
    Real max_theta_upper;
};
DensityBound density_upper_bound(const NormExponent& p, std::size_t n, const Number& radius_pow);

// Certified upper bound on max_{t in [0,1/2]} Theta_p(tau; t).
Real max_theta_upper(const NormExponent& p, const Real& tau);

// Truncated power of a sparse integer-exponent polynomial: coefficients of P(x)^n for exponents <= budget.
using SparsePoly = std::vector<std::pair<long, Integer>>;
std::vector<Integer> truncated_power(const SparsePoly& poly, std::size_t n, long budget);
// Number of points with total integer cost <= budget, for coordinates grouped by cost profile.
Integer count_integer_costs(const std::vector<std::pair<SparsePoly, std::size_t>>& groups, long budget);

}  // namespace lpsvp
