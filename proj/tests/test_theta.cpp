#include "support.hpp"

#include "lpsvp/counting.hpp"
#include "lpsvp/theta.hpp"

using namespace lpsvp;
using test::d;

namespace {

const NormExponent P1(1.0), P2(2.0), P3(3.0);

// Central differences of log theta in tau.
double dlog(const NormExponent& p, double tau, double t, double h) {
    auto lt = [&](double x) { return d(log(theta(p, Real(x), Real(t)))); };
    return (lt(tau + h) - lt(tau - h)) / (2 * h);
}
double d2log(const NormExponent& p, double tau, double t, double h) {
    auto lt = [&](double x) { return d(log(theta(p, Real(x), Real(t)))); };
    return (lt(tau + h) - 2 * lt(tau) + lt(tau - h)) / (h * h);
}

}  // namespace

TEST_SUITE("theta_engine") {

TEST_CASE("theta series values") {
    // frozen from an independent mpmath summation
    CHECK(d(theta(P2, log(Real(2)), Real(0))) == doctest::Approx(2.12893682721187716).epsilon(1e-15));
    CHECK(d(theta(P2, Real(1), Real(0))) == doctest::Approx(1.77263720482665215).epsilon(1e-15));
    CHECK(d(theta(P2, Real(1), Real(0.5))) == doctest::Approx(1.77227049698437995).epsilon(1e-15));
    CHECK(d(theta(P2, Real(200), Real(0))) == doctest::Approx(1.0).epsilon(1e-15));
    RealApprox th = theta(P3, Real(1), Real(0.25));
    CHECK(th.err < 1e-30);
}

TEST_CASE("theta shift canonicalization") {
    Real a = theta(P2, Real(1), Real(0.5)).value;
    CHECK(theta(P2, Real(1), Real(-0.5)).value == a);
    CHECK(theta(P2, Real(1), Real(1.5)).value == a);
    CHECK(canonical_shift(Real(0.75)) == Real(0.25));
    CHECK(d(canonical_shift(Real(-0.1))) == doctest::Approx(0.1));
}

TEST_CASE("theta rejects nonpositive tau") {
    CHECK_THROWS_AS(theta(P2, Real(0), Real(0)), DomainError);
    CHECK_THROWS_AS(mu(P2, Real(-1), Real(0)), DomainError);
    CHECK_THROWS_AS(h_func(P2, Real(1), Real(0), ShiftProfile::uniform(Real(0), 1)), DomainError);
}

TEST_CASE("theta_vec products") {
    Real t0 = theta(P3, Real(0.7), Real(0)).value;
    CHECK(d(theta_vec(P3, Real(0.7), ShiftProfile::uniform(Real(0), 5))) == doctest::Approx(d(pow(t0, 5))).epsilon(1e-14));
    CHECK(d(theta_vec(P3, Real(0.7), ShiftProfile())) == 1.0);
    auto mixed = ShiftProfile::from_vector({Real(0.5), Real(0)});
    CHECK(d(theta_vec(P2, Real(1), mixed)) == doctest::Approx(3.14159261997113293).epsilon(1e-15));
    CHECK(d(log_theta_vec(P2, Real(1), mixed)) == doctest::Approx(std::log(3.14159261997113293)).epsilon(1e-14));
}

TEST_CASE("mu and variance values") {
    CHECK(d(mu(P2, Real(1), Real(0))) == doctest::Approx(0.498979130832820462).epsilon(1e-15));
    CHECK(d(variance_v(P2, Real(1), Real(0))) == doctest::Approx(0.508032794317132755).epsilon(1e-15));
    CHECK(d(mu(P2, Real(80), Real(0.5))) == doctest::Approx(0.25).epsilon(1e-12));
    auto sh = ShiftProfile::from_vector({Real(0.5), Real(0), Real(0.25)});
    double sum = d(mu(P3, Real(1), Real(0.5))) + d(mu(P3, Real(1), Real(0))) + d(mu(P3, Real(1), Real(0.25)));
    CHECK(d(mu_vec(P3, Real(1), sh)) == doctest::Approx(sum).epsilon(1e-14));
}

TEST_CASE("derivative identities against finite differences") {
    CHECK(-dlog(P2, 1.0, 0.0, 1e-4) == doctest::Approx(d(mu(P2, Real(1), Real(0)))).epsilon(1e-6));
    for (const auto* p : {&P1, &P2, &P3})
        for (double tau : {0.5, 1.0, 2.0})
            for (double t : {0.0, 0.25, 0.5}) {
                CAPTURE(p->str());
                CAPTURE(tau);
                CAPTURE(t);
                CHECK(test::rel_close(-dlog(*p, tau, t, 1e-4), d(mu(*p, Real(tau), Real(t))), 1e-5));
                CHECK(test::rel_close(d2log(*p, tau, t, 1e-3), d(variance_v(*p, Real(tau), Real(t))), 1e-5));
            }
}

TEST_CASE("variance is positive") {
    for (const auto* p : {&P1, &P2, &P3})
        for (double tau : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
            for (double t : {0.0, 0.25, 0.5}) CHECK(variance_v(*p, Real(tau), Real(t)).lo() > 0);
}

TEST_CASE("log theta is convex and theta decreases in tau") {
    for (const auto* p : {&P1, &P2, &P3})
        for (double t : {0.0, 0.3, 0.5})
            for (double tau : {0.2, 0.9, 3.0}) {
                double a = d(log(theta(*p, Real(tau), Real(t))));
                double b = d(log(theta(*p, Real(tau + 0.4), Real(t))));
                double c = d(log(theta(*p, Real(tau + 0.8), Real(t))));
                CHECK(b <= (a + c) / 2);
                CHECK(c < b);
                CHECK(b < a);
            }
}

TEST_CASE("h_func") {
    auto z = ShiftProfile::uniform(Real(0), 1);
    // frozen from an independent mpmath evaluation of the three series
    CHECK(d(h_func(P2, Real(1), Real(0.5), z)) == doctest::Approx(-1.34565166481473685).epsilon(1e-14));
    CHECK(d(h_func(P2, Real(1), Real(1e-12), z)) == doctest::Approx(-d(theta(P2, Real(1), Real(0)))).epsilon(1e-9));
    for (double delta : {0.01, 0.3, 2.0})
        for (double t : {0.0, 0.5}) {
            auto s = ShiftProfile::uniform(Real(t), 3);
            CHECK(h_func(P3, Real(1), Real(delta), s).hi() < theta_vec(P3, Real(1 + delta), s).lo());
        }
}

TEST_CASE("hardness constants") {
    HardnessConstants h3 = w_p(P3);
    REQUIRE(h3.C_p);
    CHECK(std::abs(d(h3.C_p->value) - 3.01717780317660) < 1e-9);
    HardnessConstants h5 = w_p(NormExponent(5.0));
    REQUIRE(h5.C_p);
    CHECK(std::abs(d(h5.C_p->value) - 1.3018669052709) < 1e-9);
    // tau* solves mu(tau*; 0) = 2^-p
    CHECK(d(mu(P3, h3.tau_star.value, Real(0))) == doctest::Approx(0.125).epsilon(1e-12));
    HardnessConstants h2 = w_p(P2);
    CHECK(h2.W_p.lo() > 2);
    CHECK(!h2.C_p);
    CHECK(w_p(NormExponent(2.2)).W_p.hi() < 2);
    CHECK(w_p(NormExponent(2.1)).W_p.lo() > 2);
}

TEST_CASE("p0") {
    RealApprox p0 = find_p0();
    CHECK(std::abs(d(p0.value) - 2.13972134795007) < 1e-9);
    CHECK(std::abs(d(w_p(NormExponent(p0.value)).W_p.value) - 2) < 1e-8);
}

TEST_CASE("simple C_p bound") {
    double expect = 1 / (1 - (3 + std::log2(3 * std::exp(1.0))) / 8);
    CHECK(d(cp_simple_bound(Real(3))) == doctest::Approx(expect).epsilon(1e-14));
    for (int p = 3; p <= 20; ++p) CHECK(w_p(NormExponent(double(p))).C_p->hi() < cp_simple_bound(Real(p)));
    CHECK(d(cp_simple_bound(Real(60))) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(cp_simple_bound(Real(2.5)), DomainError);
}

TEST_CASE("theta upper bound on counts") {
    auto z2 = ShiftProfile::uniform(Real(0), 2);
    CHECK(count_upper_bound_theta(P2, Number(Rational(1)), z2).bound.lo() >= 5);
    auto b64 = count_upper_bound_theta(P2, Number(Rational(16)), ShiftProfile::uniform(Real(0), 64));
    double root = std::pow(d(b64.bound.value), 1.0 / 64);
    CHECK(root >= 2.05);
    CHECK(root <= 2.20);
    double prev = 1e300;
    for (int k = 12; k >= 1; --k) {
        double b = d(count_upper_bound_theta(P3, Number(Rational(k, 4)), ShiftProfile::uniform(Real(0.3), 4)).bound.hi());
        CHECK(b <= prev);
        prev = b;
    }
    // no lattice point strictly inside: limiting case
    auto lim = count_upper_bound_theta(P2, Number(Rational(1, 100)), ShiftProfile::uniform(Real(0.5), 2));
    CHECK(lim.limiting);
    CHECK(lim.bound.lo() >= 0);
}

TEST_CASE("H lower bound") {
    auto z = ShiftProfile::uniform(Real(0), 8);
    // huge delta: vacuous, the bound certifies less than one point
    CHECK(count_lower_bound_theta(P2, Real(1), Real(500), ShiftProfile::uniform(Real(0.5), 8)).hi() < 1);
    CHECK(count_lower_bound_theta(P2, Real(1), Real(1) / 10, z).hi() < 0);
    CHECK(count_lower_bound_theta(P2, Real(1), Real(500), z).hi() < 1);
    // exact count at radius mu^(1/p) dominates every lower bound
    Real m = mu_vec(P2, Real(1), z).value;
    Rational rpow = floor_to_grid(m, Integer(1) << 64);
    Integer exact = count_exact(ShiftedBallQuery::uniform(P2, 8, Number(rpow), Number(Rational(0)))).hi;
    std::vector<Real> grid;
    for (double c : {0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0}) {
        Real delta = Real(c) / sqrt(Real(8));
        grid.push_back(delta);
        CHECK(count_lower_bound_theta(P2, Real(1), delta, z).hi() <= to_real(exact));
    }
    RealApprox best = best_lower_bound_theta(P2, Real(1), z, grid);
    CHECK(best.hi() <= to_real(exact));
    CHECK(best.lo() > 0);
    // within e^(c sqrt n); c is reported, the bound is loose at this n
    double c = std::log(d(to_real(exact)) / d(best.value)) / std::sqrt(8.0);
    MESSAGE("n=8 log-gap constant c = " << c);
    CHECK(c < 5);
}

}
