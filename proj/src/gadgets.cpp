#include "lpsvp/gadgets.hpp"

#include "lpsvp/counting.hpp"
#include "lpsvp/theta.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace lpsvp {

ShiftSearch shift_grid_search(const NormExponent& p, std::size_t points) {
    if (points < 2) throw DomainError("shift grid needs at least two points");
    const Real one(1);
    RealApprox base = theta(p, one, Real(0));
    ShiftSearch out;
    out.t_best = 0;
    RealApprox best = base;
    for (std::size_t i = 1; i < points; ++i) {
        Real t = Real(i) / Real(2 * (points - 1));
        RealApprox v = theta(p, one, t);
        if (v.value > best.value) {
            best = v;
            out.t_best = t;
        }
    }
    out.ratio = best / base;
    out.improves = out.ratio.lo() > 1;
    return out;
}

namespace {

// Keeps two significant decimal digits, rounding down.
Rational two_digits_down(const Real& x) {
    Integer den = 1;
    while (floor_to_grid(x, den) < Rational(10, 1) / Rational(den)) den *= 10;
    return floor_to_grid(x, den);
}

RealApprox exact_ra(const Rational& q) { return RealApprox::exact(to_real(q)); }

}  // namespace

GadgetParams integer_gadget_params(const NormExponent& p, const Real& delta_target) {
    if (!(delta_target > 0 && delta_target < 1)) throw DomainError("delta must lie in (0, 1)");
    const std::size_t grid = 1024;
    ShiftSearch s = shift_grid_search(p, grid);
    if (!s.improves || p.p <= 2)
        throw DomainError("Theta_p(1; t) has no shift beating t = 0 for p = " + p.str() +
                          ": the centered point is not a local minimum, so there is no integer gadget (needs p > 2)");
    const Real one(1);
    const Real h = Real(1) / Real(2 * (grid - 1));
    Rational t_star;
    if (s.t_best >= Real(0.5) - h / 2) {
        t_star = Rational(1, 2);
    } else {
        Real lo = s.t_best - h;
        if (lo < 0) lo = 0;
        Real hi = s.t_best + h;
        for (int it = 0; it < 80; ++it) {
            Real mid = (lo + hi) / 2;
            if (theta_shift_derivative(p, one, mid).value > 0)
                lo = mid;
            else
                hi = mid;
        }
        Rational g = floor_to_grid((lo + hi) / 2 * 64 + Real(0.5), 1) / 64;
        t_star = max(Rational(1, 64), min(Rational(1, 2), g));
    }

    GadgetParams out;
    out.p = p;
    out.t_star = t_star;
    out.delta = delta_target;
    const Real t = to_real(t_star);
    RealApprox th = theta(p, one, t);
    out.theta_ratio = th / theta(p, one, Real(0));
    out.mu = mu(p, one, t);
    if (out.theta_ratio.lo() <= 1) throw DomainError("rounded shift no longer beats t = 0");

    // f(eps) = log alpha - eps C_r(eps)^p with C_r(eps)^p = mu / (1 - eps)
    const Real log_alpha = log(out.theta_ratio).lo();
    const Real mu_hi = out.mu.hi();
    auto feasible = [&](const Real& e) { return log_alpha - e * mu_hi / (1 - e) > 0; };
    Real boundary;
    if (feasible(delta_target)) {
        boundary = delta_target;
    } else {
        Real lo = 0, hi = delta_target;
        for (int it = 0; it < 200; ++it) {
            Real mid = (lo + hi) / 2;
            (feasible(mid) ? lo : hi) = mid;
        }
        boundary = lo;
    }
    out.eps = two_digits_down(boundary / 2);
    if (out.eps <= 0) throw PreconditionError("no admissible eps for this p");
    out.C_r_pow = ceil_to_grid(mu_hi / (1 - to_real(out.eps)), Integer(1000000000000LL));
    out.C_r = root_p(Number(out.C_r_pow), p);

    const RealApprox ec = exact_ra(out.eps * out.C_r_pow);
    out.beta_first = out.theta_ratio * exp(RealApprox::exact(Real(0)) - ec);
    const Real m_up = max_theta_upper(p, one);
    RealApprox tail = exp(ec * RealApprox::exact(Real(1) / delta_target - 1));
    out.beta_second = tail * th / RealApprox::exact(m_up);
    out.beta = out.beta_first.value <= out.beta_second.value ? out.beta_first : out.beta_second;
    if (out.beta.lo() <= 1) throw PreconditionError("beta is not certified above 1 for p = " + p.str());
    return out;
}

Basis ScaledGadget::basis(const GadgetParams& params) const {
    if (!params.p.is_integer()) throw DomainError("the gadget basis needs an integer p");
    Basis id = Basis::identity(n_dagger);
    return scale(id, RowScale{alpha_pow, params.p.integer});
}

std::vector<Rational> ScaledGadget::target(const GadgetParams& params) const {
    return std::vector<Rational>(n_dagger, params.t_star);
}

ScaledGadget scale_gadget(const GadgetParams& params, std::size_t m, const Rational& d, const Rational& eta,
                          GadgetMode mode, std::optional<std::size_t> n_dagger) {
    if (m == 0) throw DomainError("m must be positive");
    if (d <= 0) throw DomainError("d must be positive");
    if (eta <= 0 || eta >= 1) throw DomainError("eta must lie in (0, 1)");
    const NormExponent& p = params.p;
    const Rational& eps = params.eps;
    ScaledGadget g;
    g.m = m;
    g.d = d;
    g.eta = eta;
    g.report_only = mode == GadgetMode::ReportOnly;

    const Real sqrt_eta = sqrt(to_real(eta));
    Real inc = (1 / sqrt_eta - 1) * (1 / sqrt_eta - 1) / 2;
    if (inc > Real(1) / 100) inc = Real(1) / 100;
    inc *= to_real(eps);
    Rational inc_q = floor_to_grid(inc, Integer(1000000000000LL));
    if (inc_q <= 0) inc_q = floor_to_grid(inc, Integer(10) * Integer("1000000000000000000000000000000"));
    g.gamma_pow = 1 + inc_q;

    auto& hyp = g.hypotheses;
    hyp.eta_range = eta > 2 * eps * eps;
    hyp.eta_d_at_least_10 = eta * d >= 10;
    Real gap = to_real(eps * d) * (1 - sqrt_eta) * (1 - sqrt_eta);
    hyp.eps_d_gap = gap >= to_real(2 * g.gamma_pow);
    hyp.delta_matches = params.delta >= sqrt_eta * (1 - unit_roundoff() * 16);
    if (mode == GadgetMode::Strict) {
        if (!hyp.eta_range) throw PreconditionError("gadget hypothesis fails: eta must exceed 2 eps^2");
        if (!hyp.eta_d_at_least_10) throw PreconditionError("gadget hypothesis fails: eta d >= 10");
        if (!hyp.eps_d_gap)
            throw PreconditionError("gadget hypothesis fails: eps d (1 - sqrt(eta))^2 >= 2 gamma^p");
        if (!hyp.delta_matches) throw PreconditionError("gadget hypothesis fails: delta must be at least sqrt(eta)");
    }

    g.r_pow = 2 * (1 - eps / 2) * eta * d / eps;
    g.r_star_pow = g.gamma_pow * (g.r_pow + g.s_pow);

    ThetaUpperBound ub =
        count_upper_bound_theta(p, Number(g.r_star_pow), ShiftProfile::uniform(Real(0), m));
    g.C_tilde = pow(ub.bound, Real(1) / Real(m));
    const Real r_star_hi = root_p(Number(g.r_star_pow), p).hi();
    Real need = log(ub.bound.hi()) + Real(m) * log(Real(2)) + log(1 + r_star_hi);
    Real nd = need / log(params.beta.lo());
    g.C_dagger = nd / Real(m);
    g.proof_n_dagger = static_cast<std::size_t>(floor(nd).convert_to<double>()) + 1;
    g.n_dagger = n_dagger.value_or(g.proof_n_dagger);
    if (g.n_dagger == 0) throw DomainError("n_dagger must be positive");
    g.alpha_pow = 2 * eta * d / (eps * params.C_r_pow * Rational(static_cast<long>(g.n_dagger)));
    return g;
}

GoodGadgetCheck certify_good_gadget(const GadgetParams& params, const ScaledGadget& g) {
    const NormExponent& p = params.p;
    const std::size_t n = g.n_dagger;
    GoodGadgetCheck c;
    c.N_zm = count_exact(ShiftedBallQuery::uniform(p, g.m, Number(g.r_star_pow), Number(Rational(0)))).hi;
    c.N_short =
        count_exact(ShiftedBallQuery::uniform(p, n, Number(g.r_star_pow / g.alpha_pow), Number(Rational(0)))).hi;
    Rational dense_pow = (g.r_star_pow - g.d) / g.alpha_pow;
    if (dense_pow < 0)
        c.density = RealApprox::exact(Real(0));
    else
        c.density = density_upper_bound(p, n, Number(dense_pow)).bound;
    c.r_star = root_p(Number(g.r_star_pow / g.s_pow), p);
    c.lhs_hi = to_real(c.N_zm) * (to_real(c.N_short) + c.r_star.hi() * c.density.hi());
    Rational close_pow = (g.r_pow - g.eta * g.d) / g.alpha_pow;
    c.close_lo = count_exact(ShiftedBallQuery::uniform(p, n, Number(close_pow), Number(params.t_star))).lo;
    c.rhs_lo = ldexp(to_real(c.close_lo), -static_cast<int>(g.m));
    // both sides carry rounding of at most a few ulps; keep a relative margin
    c.holds = c.lhs_hi * (1 + unit_roundoff() * 1024) < c.rhs_lo;
    return c;
}

NDaggerSearch search_n_dagger(const GadgetParams& params, std::size_t m, const Rational& d, const Rational& eta,
                              std::size_t cap) {
    NDaggerSearch out;
    auto eval = [&](std::size_t n) {
        ++out.evaluations;
        return certify_good_gadget(params, scale_gadget(params, m, d, eta, GadgetMode::ReportOnly, n));
    };
    std::size_t lo = 0, hi = 1;
    GoodGadgetCheck at_hi = eval(hi);
    while (!at_hi.holds) {
        lo = hi;
        if (hi >= cap) throw PreconditionError("no gadget size up to " + std::to_string(cap) + " passes the check");
        hi = std::min(cap, hi * 2);
        at_hi = eval(hi);
    }
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        GoodGadgetCheck c = eval(mid);
        if (c.holds) {
            hi = mid;
            at_hi = c;
        } else {
            lo = mid;
        }
    }
    out.n_dagger = hi;
    out.check = at_hi;
    return out;
}

double angle_integral(std::size_t n, double theta1, double theta2) {
    const double pi = std::acos(-1.0);
    if (n < 3) throw DomainError("angle integral needs n >= 3");
    if (!(theta1 >= 0 && theta1 < theta2 && theta2 <= pi)) throw DomainError("need 0 <= theta1 < theta2 <= pi");
    const double k = static_cast<double>(n - 2);
    auto f = [k](double th) { return std::pow(std::sin(th), k); };
    double err = 0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, theta1, theta2, 20, 1e-12, &err);
}

double close_prob_bound(std::size_t n, double delta, double eps) {
    double base = (1 - 2 * eps - eps * eps / delta) / (1 + delta);
    if (base <= 0) return 0;
    return eps / (2 * std::sqrt(delta * (1 + delta))) * std::pow(base, static_cast<double>(n) / 2);
}

namespace {

void check_close_hypotheses(std::size_t n, double delta, double eps, GadgetMode mode, bool& report_only) {
    if (!(delta > 0 && delta < 0.01)) throw DomainError("random-shift hypothesis fails: delta must lie in (0, 1/100)");
    if (!(eps > 0 && eps < 0.01)) throw DomainError("random-shift hypothesis fails: eps must lie in (0, 1/100)");
    if (eps > std::sqrt(delta) / 10) throw DomainError("random-shift hypothesis fails: eps <= sqrt(delta)/10");
    report_only = n < 100;
    if (report_only && mode == GadgetMode::Strict)
        throw PreconditionError("random-shift hypothesis fails: n >= 100 (use report-only mode)");
}

constexpr std::size_t kMcBlock = 1024;

}  // namespace

CloseProbResult close_prob_mc(const std::vector<double>& v, double delta, double eps, std::size_t trials,
                              std::uint64_t seed, GadgetMode mode) {
    const std::size_t n = v.size();
    CloseProbResult out;
    check_close_hypotheses(n, delta, eps, mode, out.report_only);
    double v2 = 0;
    for (double x : v) v2 += x * x;
    if (v2 < 1 - 1e-12 || v2 > 1 + delta + 1e-12)
        throw DomainError("random-shift hypothesis fails: ||v||^2 must lie in [1, 1 + delta]");
    if (trials == 0) throw DomainError("trials must be positive");
    const double sd = std::sqrt(delta);
    const double threshold = 1 - eps;
    std::vector<double> g(n);
    std::size_t hits = 0;
    for (std::size_t block = 0; block * kMcBlock < trials; ++block) {
        std::mt19937_64 rng(derive_seed(seed, block));
        std::normal_distribution<double> normal;
        std::size_t end = std::min(trials, (block + 1) * kMcBlock);
        for (std::size_t tr = block * kMcBlock; tr < end; ++tr) {
            double gg = 0, vg = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double x = normal(rng);
                gg += x * x;
                vg += v[i] * x;
            }
            double dist2 = v2 - 2 * sd * vg / std::sqrt(gg) + delta;
            if (dist2 <= threshold) ++hits;
        }
    }
    out.trials = trials;
    out.hits = hits;
    out.frequency = static_cast<double>(hits) / static_cast<double>(trials);
    out.sigma = std::sqrt(out.frequency * (1 - out.frequency) / static_cast<double>(trials));
    out.analytic_bound = close_prob_bound(n, delta, eps);
    return out;
}

LocalDensityResult local_density_shift_search(const Basis& b, const std::vector<Rational>& target,
                                              const Rational& r_squared, double eps, double delta,
                                              std::size_t trials, std::uint64_t seed, GadgetMode mode,
                                              EnumOptions opts) {
    if (b.has_row_scales()) throw DomainError("local density search expects a basis without row scales");
    if (target.size() != b.d()) throw DomainError("target dimension does not match the basis");
    if (r_squared <= 0) throw DomainError("radius must be positive");
    if (trials == 0) throw DomainError("trials must be positive");
    const std::size_t n = b.d();
    LocalDensityResult out;
    check_close_hypotheses(n, delta, eps, mode, out.report_only);
    const NormExponent p2(2.0);
    const Rational eps_q = floor_to_grid(Real(eps), Integer(1) << 40);
    const Rational delta_q = ceil_to_grid(Real(delta), Integer(1) << 40);
    out.base_count = count_points(b, p2, Number((1 + delta_q) * r_squared), &target, opts);
    const double shift_len = std::sqrt(delta * to_double(r_squared));
    const Number inner((1 - eps_q) * r_squared);
    bool have = false;
    std::vector<double> u(n);
    for (std::size_t tr = 0; tr < trials; ++tr) {
        std::mt19937_64 rng(derive_seed(seed, tr));
        std::normal_distribution<double> normal;
        double norm = 0;
        for (auto& x : u) {
            x = normal(rng);
            norm += x * x;
        }
        norm = std::sqrt(norm);
        std::vector<Rational> t(n);
        for (std::size_t i = 0; i < n; ++i)
            t[i] = target[i] + floor_to_grid(Real(shift_len * u[i] / norm), Integer(1) << 30);
        Integer c = count_points(b, p2, inner, &t, opts);
        if (!have || c > out.count) {
            out.count = c;
            out.t_prime = t;
            have = true;
        }
    }
    out.bound = close_prob_bound(n, delta, eps);
    out.meets_bound = to_real(out.count) >= Real(out.bound) * to_real(out.base_count);
    return out;
}

RadiusChainResult pigeonhole_radius_search(const RadiusCount& dense, const RadiusCount& centered, const Real& r,
                                           const Real& r_prime, const Real& beta, std::size_t n,
                                           std::size_t steps) {
    if (!(r > 0 && r_prime > r)) throw DomainError("need 0 < r < r'");
    if (!(beta > 0)) throw DomainError("beta must be positive");
    const Real ratio = r_prime / r;
    if (steps == 0) steps = static_cast<std::size_t>(ceil(2000 * log(ratio)).convert_to<double>());
    steps = std::max<std::size_t>(steps, 1);
    RadiusChainResult out;
    out.radii.resize(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) out.radii[i] = pow(ratio, Real(i) / Real(steps)) * r;
    out.radii[steps] = r_prime;
    out.required_step = pow(ratio * beta, Real(n) / Real(steps));

    auto quotient = [](const Integer& a, const Integer& b) {
        if (b == 0) return a == 0 ? Real(0) : Real(std::numeric_limits<double>::infinity());
        return to_real(a) / to_real(b);
    };
    out.endpoint_ratio = quotient(dense(out.radii[steps]), centered(out.radii[0]));
    if (out.endpoint_ratio < pow(out.required_step, Real(steps))) {
        out.endpoint_fails = true;
        return out;
    }
    for (std::size_t i = 0; i < steps; ++i) {
        Real q = quotient(dense(out.radii[i + 1]), centered(out.radii[i]));
        if (q >= out.required_step) {
            out.found = true;
            out.index = i;
            out.step_ratio = q;
            return out;
        }
    }
    return out;
}

}  // namespace lpsvp
