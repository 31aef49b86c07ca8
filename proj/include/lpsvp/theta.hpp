#pragma once

#include "lpsvp/numeric.hpp"

#include <optional>
#include <vector>

namespace lpsvp {

// t -> min(frac(t), 1 - frac(t)), so that every shift lies in [0, 1/2].
Real canonical_shift(const Real& t);

// A shift vector stored as (canonical value, multiplicity) groups.
struct ShiftGroup {
    Real t;
    std::size_t count = 0;
};

class ShiftProfile {
public:
    ShiftProfile() = default;
    static ShiftProfile uniform(const Real& t, std::size_t n);
    static ShiftProfile from_vector(const std::vector<Real>& shifts);

    const std::vector<ShiftGroup>& groups() const { return groups_; }
    std::size_t dimension() const;
    void add(const Real& t, std::size_t count);

private:
    std::vector<ShiftGroup> groups_;
};

struct ThetaPoint {
    Real tau;
    Real shift;
    ThetaPoint(const Real& tau, const Real& shift);
};

// Raw sums S_k = sum_z |z-t|^{kp} exp(-tau |z-t|^p), k = 0, 1, 2.
struct ThetaSums {
    RealApprox s0, s1, s2;
};

ThetaSums theta_sums(const NormExponent& p, const ThetaPoint& pt);

RealApprox theta(const NormExponent& p, const Real& tau, const Real& shift);
RealApprox theta_vec(const NormExponent& p, const Real& tau, const ShiftProfile& shifts);
RealApprox log_theta_vec(const NormExponent& p, const Real& tau, const ShiftProfile& shifts);
RealApprox mu(const NormExponent& p, const Real& tau, const Real& shift);
RealApprox mu_vec(const NormExponent& p, const Real& tau, const ShiftProfile& shifts);
RealApprox variance_v(const NormExponent& p, const Real& tau, const Real& shift);
// d/dt of Theta_p(tau; t) at an uncanonicalized t.
RealApprox theta_shift_derivative(const NormExponent& p, const Real& tau, const Real& t);

RealApprox h_func(const NormExponent& p, const Real& tau, const Real& delta, const ShiftProfile& shifts);

struct HardnessConstants {
    NormExponent p;
    RealApprox W_p;
    RealApprox tau_star;
    std::optional<RealApprox> C_p;  // empty when W_p >= 2
};

HardnessConstants w_p(const NormExponent& p);
RealApprox find_p0();
Real cp_simple_bound(const Real& p);

struct ThetaUpperBound {
    RealApprox bound;
    Real tau;            // minimizer; 0 in the limiting case
    bool limiting = false;  // no lattice point inside the open ball
};

// min_tau exp(tau r^p) Theta_p(tau; t), with r given through r^p.
ThetaUpperBound count_upper_bound_theta(const NormExponent& p, const Number& radius_pow, const ShiftProfile& shifts);
ThetaUpperBound count_upper_bound_theta(const NormExponent& p, std::size_t n, const Real& r, const Real& shift);

RealApprox count_lower_bound_theta(const NormExponent& p, const Real& tau, const Real& delta, const ShiftProfile& shifts);

// Largest lower bound over a grid of delta values.
RealApprox best_lower_bound_theta(const NormExponent& p, const Real& tau, const ShiftProfile& shifts,
                                  const std::vector<Real>& delta_grid);

}  // namespace lpsvp
