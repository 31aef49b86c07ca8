#pragma once

#include "lpsvp/lattice.hpp"
#include "lpsvp/numeric.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lpsvp {

// Best shift on a grid for Theta_p(1; t) against the centered value.
struct ShiftSearch {
    Real t_best;
    RealApprox ratio;  // Theta_p(1; t_best) / Theta_p(1; 0)
    bool improves = false;  // ratio certified > 1
};
ShiftSearch shift_grid_search(const NormExponent& p, std::size_t points = 1024);

// Integer-lattice gadget constants at tau = 1.
struct GadgetParams {
    NormExponent p;
    Rational t_star;
    Rational eps;
    Real delta;
    Rational C_r_pow;  // C_r^p >= mu_p(1; t*) / (1 - eps)
    RealApprox C_r;
    RealApprox mu;
    RealApprox theta_ratio;  // Theta_p(1; t*) / Theta_p(1; 0)
    RealApprox beta_first;   // theta_ratio * exp(-eps C_r^p)
    RealApprox beta_second;  // exp(eps C_r^p (1/delta - 1)) * Theta_p(1; t*) / max_t Theta_p(1; t)
    RealApprox beta;
};

GadgetParams integer_gadget_params(const NormExponent& p, const Real& delta_target);

enum class GadgetMode { Strict, ReportOnly };

struct GadgetHypotheses {
    bool eta_range = true;        // 2 eps^2 < eta < 1
    bool eta_d_at_least_10 = true;
    bool eps_d_gap = true;        // eps d (1 - sqrt(eta))^2 >= 2 gamma^p
    bool delta_matches = true;    // gadget built with delta >= sqrt(eta)
    bool all() const { return eta_range && eta_d_at_least_10 && eps_d_gap && delta_matches; }
};

// The gadget alpha Z^{n_dagger} with target alpha (t*, ..., t*), for YES size d and ratio eta.
struct ScaledGadget {
    std::size_t m = 0;
    Rational d;
    Rational eta;
    std::size_t n_dagger = 0;
    Rational alpha_pow;
    Rational r_pow;       // 2 (1 - eps/2) eta d / eps
    Rational s_pow = 1;
    Rational gamma_pow;
    Rational r_star_pow;  // gamma^p (r^p + s^p)
    RealApprox C_tilde;   // N_p(Z^m, r*, 0) <= C_tilde^m
    Real C_dagger;
    std::size_t proof_n_dagger = 0;
    GadgetHypotheses hypotheses;
    bool report_only = false;

    Basis basis(const GadgetParams& params) const;
    std::vector<Rational> target(const GadgetParams& params) const;
};

// n_dagger from the proof's requirement, unless given.
ScaledGadget scale_gadget(const GadgetParams& params, std::size_t m, const Rational& d, const Rational& eta,
                          GadgetMode mode = GadgetMode::Strict, std::optional<std::size_t> n_dagger = std::nullopt);

struct GoodGadgetCheck {
    Integer N_zm;          // N_p(Z^m, r*, 0)
    Integer N_short;       // N_p(L, r*, 0)
    RealApprox density;    // D_p(L, ((r*)^p - d)^(1/p)), hi side used
    RealApprox r_star;
    Real lhs_hi;           // N_zm (N_short + r*/s density)
    Integer close_lo;      // N_p(L, (r^p - eta d)^(1/p), t)
    Real rhs_lo;           // 2^-m close_lo
    bool holds = false;
};

GoodGadgetCheck certify_good_gadget(const GadgetParams& params, const ScaledGadget& g);

// Smallest n_dagger (doubling then bisection) at which the certified inequality holds.
struct NDaggerSearch {
    std::size_t n_dagger = 0;
    GoodGadgetCheck check;
    std::size_t evaluations = 0;
};
NDaggerSearch search_n_dagger(const GadgetParams& params, std::size_t m, const Rational& d, const Rational& eta,
                              std::size_t cap = 1u << 16);

// int_{theta1}^{theta2} sin^(n-2)
double angle_integral(std::size_t n, double theta1, double theta2);

struct CloseProbResult {
    std::size_t trials = 0;
    std::size_t hits = 0;
    double frequency = 0;
    double sigma = 0;
    double analytic_bound = 0;
    bool report_only = false;
};

// Pr[||v - t||_2^2 <= 1 - eps] for t uniform on the sphere of radius sqrt(delta).
CloseProbResult close_prob_mc(const std::vector<double>& v, double delta, double eps, std::size_t trials,
                              std::uint64_t seed, GadgetMode mode = GadgetMode::Strict);
double close_prob_bound(std::size_t n, double delta, double eps);

struct LocalDensityResult {
    std::vector<Rational> t_prime;
    Integer count;          // N_2(L, sqrt(1 - eps) r, t')
    Integer base_count;     // N_2(L, sqrt(1 + delta) r, t)
    double bound = 0;       // close_prob_bound(n, delta, eps)
    bool meets_bound = false;  // count >= bound * base_count
    bool report_only = false;
};

LocalDensityResult local_density_shift_search(const Basis& b, const std::vector<Rational>& target,
                                              const Rational& r_squared, double eps, double delta,
                                              std::size_t trials, std::uint64_t seed,
                                              GadgetMode mode = GadgetMode::Strict, EnumOptions opts = {});

struct RadiusChainResult {
    bool found = false;
    std::size_t index = 0;
    bool endpoint_fails = false;
    Real endpoint_ratio;   // D^(steps) / N^(0)
    Real required_step;    // ((r'/r) beta)^(n/steps)
    Real step_ratio;       // D^(index+1) / N^(index), when found
    std::vector<Real> radii;
};

// Chain s^(i) = (r'/r)^(i/steps) r, i = 0..steps; dense(s) bounds D_p(L, s), centered(s) is N_p(L, s, 0).
// Returns the first i with D^(i+1) / N^(i) >= ((r'/r) beta)^(n/steps). steps = 0 picks ceil(2000 log(r'/r)).
using RadiusCount = std::function<Integer(const Real& radius)>;
RadiusChainResult pigeonhole_radius_search(const RadiusCount& dense, const RadiusCount& centered, const Real& r,
                                           const Real& r_prime, const Real& beta, std::size_t n,
                                           std::size_t steps = 0);

}  // namespace lpsvp
