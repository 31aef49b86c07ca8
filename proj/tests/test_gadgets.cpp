#include "support.hpp"

#include "lpsvp/counting.hpp"
#include "lpsvp/gadgets.hpp"
#include "lpsvp/theta.hpp"

#include <cmath>

using namespace lpsvp;
using test::d;
using test::q;

namespace {

const NormExponent P3(3.0);

const GadgetParams& params_p3_half() {
    static const GadgetParams g = integer_gadget_params(P3, sqrt(Real(1) / 2));
    return g;
}

std::vector<double> unit_vector(std::size_t n) {
    std::vector<double> v(n, 0.0);
    v[0] = 1.0;
    return v;
}

}  // namespace

TEST_SUITE("gadgets") {

TEST_CASE("shift search finds a better shift exactly when p > 2") {
    for (double p : {2.5, 3.0, 4.0}) {
        ShiftSearch s = shift_grid_search(NormExponent(p));
        CAPTURE(p);
        CHECK(s.improves);
        CHECK(s.ratio.lo() > 1);
    }
    for (double p : {1.0, 1.5, 2.0}) {
        ShiftSearch s = shift_grid_search(NormExponent(p));
        CAPTURE(p);
        CHECK(!s.improves);
    }
}

TEST_CASE("gadget constants for p = 3") {
    const GadgetParams& g = params_p3_half();
    CHECK(g.theta_ratio.lo() > 1);
    CHECK(g.beta_first.lo() > 1);
    CHECK(g.beta_second.lo() > 1);
    CHECK(g.beta.lo() > 1);
    CHECK(g.eps > 0);
    CHECK(to_real(g.eps) < g.delta);
    CHECK(g.t_star > 0);
    CHECK(g.t_star <= q("1/2"));
    // C_r^p covers mu(1; t*) / (1 - eps)
    RealApprox m = mu(P3, Real(1), to_real(g.t_star));
    CHECK(to_real(g.C_r_pow) >= m.hi() / (1 - to_real(g.eps)));
    // the ratio at t* is the grid ratio
    CHECK(d(g.theta_ratio) == doctest::Approx(1.0558620689651904).epsilon(1e-12));
    CHECK_THROWS_AS(integer_gadget_params(NormExponent(2.0), Real(0.5)), DomainError);
}

TEST_CASE("gadget constants are stable under doubled precision") {
    const GadgetParams& g = params_p3_half();
    PrecisionGuard guard(2 * working_precision());
    GadgetParams h = integer_gadget_params(P3, sqrt(Real(1) / 2));
    CHECK(abs(h.beta.value - g.beta.value) < 1e-9);
    CHECK(h.eps == g.eps);
    CHECK(h.t_star == g.t_star);
}

TEST_CASE("scaled gadget identities") {
    const GadgetParams& g = params_p3_half();
    for (auto [m, dd, eta] : {std::tuple{6, "4", "1/2"}, std::tuple{10, "30", "2/3"}, std::tuple{3, "12", "9/10"}}) {
        Rational D = q(dd), E = q(eta);
        ScaledGadget s = scale_gadget(g, m, D, E, GadgetMode::ReportOnly, std::size_t(12));
        CHECK(s.r_pow == 2 * (1 - g.eps / 2) * E * D / g.eps);
        CHECK(s.gamma_pow > 1);
        CHECK(s.r_star_pow == s.gamma_pow * (s.r_pow + s.s_pow));
        CHECK(s.alpha_pow == 2 * E * D / (g.eps * g.C_r_pow * 12));
        CHECK(s.basis(g).n() == 12);
        CHECK(s.target(g) == std::vector<Rational>(12, g.t_star));
    }
}

TEST_CASE("gadget hypotheses") {
    const GadgetParams& g = params_p3_half();
    // eta d = 2 < 10
    CHECK_THROWS_AS(scale_gadget(g, 6, 4, q("1/2"), GadgetMode::Strict), PreconditionError);
    ScaledGadget r = scale_gadget(g, 6, 4, q("1/2"), GadgetMode::ReportOnly);
    CHECK(r.report_only);
    CHECK(!r.hypotheses.eta_d_at_least_10);
    CHECK(r.proof_n_dagger > 0);
    CHECK_THROWS_AS(scale_gadget(g, 6, 4, q("3/2")), DomainError);
}

TEST_CASE("good-gadget inequality on the toy") {
    const GadgetParams& g = params_p3_half();
    ScaledGadget big = scale_gadget(g, 6, 4, q("1/2"), GadgetMode::ReportOnly, std::size_t(4000));
    GoodGadgetCheck c = certify_good_gadget(g, big);
    CHECK(c.holds);
    CHECK(c.lhs_hi < c.rhs_lo);
    // exact Z^6 count at r*
    Integer zm = count_exact(ShiftedBallQuery::uniform(P3, 6, Number(big.r_star_pow), Number(Rational(0)))).lo;
    CHECK(c.N_zm == zm);
    // the proof's n_dagger is too small for the certified check on this toy
    ScaledGadget proof = scale_gadget(g, 6, 4, q("1/2"), GadgetMode::ReportOnly);
    CHECK(proof.proof_n_dagger < 4000);
    CHECK(!certify_good_gadget(g, proof).holds);
}

TEST_CASE("angle integral") {
    const double pi = std::acos(-1.0);
    CHECK(angle_integral(3, 0, pi) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(angle_integral(100, 0, pi) <= 1.0);
    CHECK(angle_integral(200, 0, pi) <= 1.0);
    for (std::size_t n = 100; n <= 1000; n += 150) CHECK(angle_integral(n, 0, pi) <= 1.0);
    CHECK(angle_integral(4, 0, pi / 2) == doctest::Approx(pi / 4).epsilon(1e-12));
    CHECK_THROWS_AS(angle_integral(2, 0, 1), DomainError);
    CHECK_THROWS_AS(angle_integral(5, 1, 0.5), DomainError);

    // uniform directions: Pr[angle in [a, b]] dominates the unnormalized integral when the full integral is <= 1
    const std::size_t n = 100, trials = 200000;
    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal;
    const double intervals[][2] = {{1.4, 1.5}, {1.5, 1.7}, {1.2, 1.35}};
    std::size_t hits[3] = {0, 0, 0};
    std::vector<double> x(n);
    for (std::size_t t = 0; t < trials; ++t) {
        double norm = 0;
        for (auto& v : x) {
            v = normal(rng);
            norm += v * v;
        }
        double ang = std::acos(x[0] / std::sqrt(norm));
        for (int k = 0; k < 3; ++k)
            if (ang >= intervals[k][0] && ang <= intervals[k][1]) ++hits[k];
    }
    for (int k = 0; k < 3; ++k) {
        double f = double(hits[k]) / trials;
        double sigma = std::sqrt(f * (1 - f) / trials);
        CHECK(f >= angle_integral(n, intervals[k][0], intervals[k][1]) - 3 * sigma);
    }
}

TEST_CASE("random shift closeness") {
    const double delta = 1.0 / 200, eps = std::sqrt(delta) / 20;
    CloseProbResult r = close_prob_mc(unit_vector(100), delta, eps, 100000, 5);
    CHECK(r.frequency >= r.analytic_bound - 3 * r.sigma);
    CHECK(r.analytic_bound == doctest::Approx(close_prob_bound(100, delta, eps)));
    CHECK(!r.report_only);
    // same seed, same answer
    CHECK(close_prob_mc(unit_vector(100), delta, eps, 5000, 5).hits == close_prob_mc(unit_vector(100), delta, eps, 5000, 5).hits);

    double prev_f = 2;
    std::vector<double> bounds;
    for (double e : {std::sqrt(delta) / 40, std::sqrt(delta) / 20, std::sqrt(delta) / 10}) {
        CloseProbResult c = close_prob_mc(unit_vector(100), delta, e, 40000, 6);
        CHECK(c.frequency < prev_f);
        CHECK(c.frequency >= c.analytic_bound - 3 * c.sigma);
        prev_f = c.frequency;
        bounds.push_back(c.analytic_bound);
    }
    // the bound's linear prefactor in eps wins at small eps: rises, then falls
    CHECK(bounds[0] < bounds[1]);
    CHECK(bounds[2] < bounds[1]);
}

TEST_CASE("random shift hypotheses") {
    const double delta = 1.0 / 200, eps = std::sqrt(delta) / 20;
    std::vector<double> shortv(100, 0.0), longv(100, 0.0);
    shortv[0] = 0.99;
    longv[0] = std::sqrt(1 + 2 * delta);
    CHECK_THROWS_AS(close_prob_mc(shortv, delta, eps, 10, 1), DomainError);
    CHECK_THROWS_AS(close_prob_mc(longv, delta, eps, 10, 1), DomainError);
    CHECK_THROWS_AS(close_prob_mc(unit_vector(100), 0.02, 0.001, 10, 1), DomainError);
    CHECK_THROWS_AS(close_prob_mc(unit_vector(100), delta, std::sqrt(delta) / 5, 10, 1), DomainError);
    CHECK_THROWS_AS(close_prob_mc(unit_vector(20), delta, eps, 10, 1), PreconditionError);
    CHECK(close_prob_mc(unit_vector(20), delta, eps, 10, 1, GadgetMode::ReportOnly).report_only);
}

TEST_CASE("local density shift search on Z^2") {
    const double eps = 0.005, delta = 0.005;
    Basis z2 = Basis::identity(2);
    std::vector<Rational> t{Rational(0), Rational(0)};
    LocalDensityResult r = local_density_shift_search(z2, t, Rational(1), eps, delta, 200, 3, GadgetMode::ReportOnly);
    CHECK(r.report_only);
    CHECK(r.base_count == 5);
    CHECK(r.meets_bound);
    CHECK(to_real(r.count) >= Real(r.bound) * to_real(r.base_count));
    Rational eps_q = floor_to_grid(Real(eps), Integer(1) << 40);
    CHECK(r.count == count_points(z2, NormExponent(2.0), Number(1 - eps_q), &r.t_prime));
    Integer prev = 0;
    for (std::size_t trials : {5u, 20u, 80u}) {
        LocalDensityResult s = local_density_shift_search(z2, t, Rational(1), eps, delta, trials, 3, GadgetMode::ReportOnly);
        CHECK(s.count >= prev);
        prev = s.count;
    }
    CHECK_THROWS_AS(local_density_shift_search(z2, t, Rational(1), eps, delta, 5, 3), PreconditionError);
}

TEST_CASE("pigeonhole radius chain") {
    auto constant = [](const Real&) { return Integer(7); };
    RadiusChainResult flat = pigeonhole_radius_search(constant, constant, Real(1), Real(2), Real(1), 10, 10);
    CHECK(flat.endpoint_fails);
    CHECK(!flat.found);

    // one jump of 2048 between s^(6) and s^(7); required step 2 on a 10-step chain from 1 to 2
    const double cut = std::pow(2.0, 6.5 / 10);
    auto jump = [&](const Real& s) { return d(s) >= cut ? Integer(2048) : Integer(1); };
    RadiusChainResult j = pigeonhole_radius_search(jump, jump, Real(1), Real(2), Real(1), 10, 10);
    CHECK(!j.endpoint_fails);
    REQUIRE(j.found);
    CHECK(j.index == 6);

    // exact counts on Z^8
    const NormExponent P2(2.0);
    auto count_at = [&](const Real& s, const Rational& shift) {
        Rational r2 = floor_to_grid(s * s, Integer(1) << 40);
        return count_exact(ShiftedBallQuery::uniform(P2, 8, Number(r2), Number(shift))).lo;
    };
    auto dense = [&](const Real& s) {
        Integer a = count_at(s, Rational(0)), b = count_at(s, Rational(1, 2));
        return a > b ? a : b;
    };
    auto centered = [&](const Real& s) { return count_at(s, Rational(0)); };
    RadiusChainResult z = pigeonhole_radius_search(dense, centered, Real(1), Real(2), Real(0.6), 8, 16);
    CHECK(!z.endpoint_fails);
    REQUIRE(z.found);
    Real ratio = to_real(dense(z.radii[z.index + 1])) / to_real(centered(z.radii[z.index]));
    CHECK(ratio >= z.required_step);
    CHECK(ratio == z.step_ratio);
    CHECK(z.radii.size() == 17);
    CHECK(pigeonhole_radius_search(dense, centered, Real(1), Real(2), Real(0.6), 8).radii.size() ==
          std::size_t(std::ceil(2000 * std::log(2.0))) + 1);
}

}
