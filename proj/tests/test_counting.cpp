#include "support.hpp"

#include "lpsvp/counting.hpp"
#include "lpsvp/oracles.hpp"
#include "lpsvp/theta.hpp"

using namespace lpsvp;
using test::d;
using test::q;

namespace {

CountBounds exact_uniform(unsigned p, std::size_t n, const Rational& rpow, const Rational& t) {
    return count_exact(ShiftedBallQuery::uniform(NormExponent(double(p)), n, Number(rpow), Number(t)));
}

}  // namespace

TEST_SUITE("integer_counting") {

TEST_CASE("small exact counts") {
    CHECK(exact_uniform(2, 2, 1, 0).lo == 5);
    CHECK(exact_uniform(2, 2, 1, 0).is_exact());
    // 20 coordinates at shift 1/2: exactly the {0,1} completions
    for (unsigned p : {3u, 5u, 7u}) {
        Rational rpow = Rational(20) / Rational(Integer(1) << p);
        CHECK(exact_uniform(p, 20, rpow, Rational(1, 2)).lo == Integer(1) << 20);
    }
}

TEST_CASE("exact count matches the box scan") {
    // at most three nonzero entries in {-1, 0, 1}: 1 + 24 + 264 + 1760
    CHECK(exact_uniform(2, 12, 3, 0).lo == 2049);
    CHECK(brute_force_count(NormExponent(2.0), std::vector<Rational>(12, 0), Number(Rational(3)), -2, 2) == 2049);
}

TEST_CASE("exact count agrees with enumeration on random rational queries") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 40; ++it) {
        std::size_t n = 1 + rng() % 4;
        unsigned p = 1 + rng() % 4;
        std::vector<Number> shift;
        std::vector<Rational> sr;
        for (std::size_t i = 0; i < n; ++i) {
            Rational t(long(rng() % 9) - 4, 1 + long(rng() % 4));
            shift.emplace_back(t);
            sr.push_back(t);
        }
        Rational rpow(long(rng() % 13), 1 + long(rng() % 3));
        auto qy = ShiftedBallQuery::vector(NormExponent(double(p)), Number(rpow), shift);
        CAPTURE(n);
        CAPTURE(p);
        CAPTURE(to_string(rpow));
        long box = long(std::ceil(std::pow(to_double(rpow), 1.0 / p))) + 6;
        Integer want = brute_force_count(NormExponent(double(p)), sr, Number(rpow), -box, box);
        CHECK(count_exact(qy).lo == want);
    }
}

TEST_CASE("symmetry and monotonicity") {
    NormExponent P3(3.0);
    std::vector<Number> a{Number(q("1/3")), Number(q("-1/4")), Number(q("0"))};
    std::vector<Number> b{Number(q("0")), Number(q("1/3")), Number(q("1/4"))};
    Number rp(q("5/2"));
    CHECK(count_exact(ShiftedBallQuery::vector(P3, rp, a)).lo == count_exact(ShiftedBallQuery::vector(P3, rp, b)).lo);
    Integer prev = 0;
    for (int k = 0; k <= 40; ++k) {
        Integer c = exact_uniform(3, 4, Rational(k, 4), Rational(1, 3)).lo;
        CHECK(c >= prev);
        prev = c;
    }
    CHECK(exact_uniform(3, 3, 4, Rational(1, 3)).lo <= exact_uniform(3, 4, 4, Rational(1, 3)).lo);
}

TEST_CASE("exact count refuses irrational data") {
    auto irr = ShiftedBallQuery::uniform(NormExponent(2.5), 3, Number(Rational(2)), Number(Rational(0)));
    CHECK_THROWS_AS(count_exact(irr), PreconditionError);
    auto irr_shift = ShiftedBallQuery::uniform(NormExponent(2.0), 3, Number(Rational(2)),
                                               Number(RealApprox::exact(sqrt(Real(2)) / 4)));
    CHECK_THROWS_AS(count_exact(irr_shift), PreconditionError);
}

TEST_CASE("interval counts") {
    NormExponent P25(2.5);
    auto qy = ShiftedBallQuery::uniform(P25, 6, Number(RealApprox::exact(pow(Real(2), Real(2.5)))), Number(q("3/10")));
    CountBounds c = count_interval(qy, q("1/1000000"));
    // frozen from a direct scan of {-3, ..., 4}^6
    CHECK(c.lo == 682);
    CHECK(c.hi == 682);
    Integer prev_lo = -1, prev_hi = Integer(1) << 40;
    for (const char* res : {"1/8", "1/16", "1/32", "1/64", "1/128"}) {
        CountBounds w = count_interval(qy, q(res));
        CHECK(w.lo <= 682);
        CHECK(w.hi >= 682);
        CHECK(w.lo >= prev_lo);
        CHECK(w.hi <= prev_hi);
        prev_lo = w.lo;
        prev_hi = w.hi;
    }
    auto rq = ShiftedBallQuery::uniform(NormExponent(3.0), 5, Number(q("7/2")), Number(q("1/4")));
    Integer e = count_exact(rq).lo;
    CountBounds ci = count_interval(rq, q("1/100"));
    CHECK(ci.lo <= e);
    CHECK(ci.hi >= e);
    CHECK_THROWS(count_interval(rq, Rational(0)));
}

TEST_CASE("growth constant") {
    Real g256 = growth_constant(NormExponent(2.0), 256, Rational(1, 2));
    CHECK(d(g256) >= 2.06);
    CHECK(d(g256) <= 2.11);
    CHECK(d(g256) >= 2.0867 - 0.05);
    Real g64 = growth_constant(NormExponent(2.0), 64, Rational(1, 2));
    CHECK(d(g64) <= d(g256) + 0.05);
}

TEST_CASE("density upper bound") {
    NormExponent P3(3.0);
    Rational rp(8);
    DensityBound db = density_upper_bound(P3, 8, Number(rp));
    CHECK(db.bound.value > 0);
    CHECK(boost::multiprecision::isfinite(db.bound.value));
    CHECK(db.bound.hi() >= to_real(exact_uniform(3, 8, rp, 0).hi));
    CHECK(db.bound.hi() >= to_real(exact_uniform(3, 8, rp, Rational(1, 2)).hi));
    CHECK(db.bound.hi() >= to_real(exact_uniform(3, 8, rp, Rational(1, 3)).hi));
    Real prev = 0;
    for (int k = 1; k <= 10; ++k) {
        Real b = density_upper_bound(P3, 8, Number(Rational(k))).bound.hi();
        CHECK(b >= prev);
        prev = b;
    }
    CHECK(max_theta_upper(P3, Real(1)) >= theta(P3, Real(1), Real(0.5)).hi());
}

TEST_CASE("theta sandwich on counts") {
    for (unsigned p : {1u, 2u, 3u})
        for (double t : {0.0, 0.25, 0.5})
            for (int k : {1, 3, 7}) {
                Rational rp(k, 2);
                Rational tr = Rational(int(t * 4), 4);
                Integer c = exact_uniform(p, 5, rp, tr).lo;
                auto ub = count_upper_bound_theta(NormExponent(double(p)), Number(rp),
                                                  ShiftProfile::uniform(to_real(tr), 5));
                CHECK(ub.bound.hi() >= to_real(c));
            }
}

TEST_CASE("polynomial powers") {
    // (1 + 2x)^3 = 1 + 6x + 12x^2 + 8x^3
    SparsePoly poly{{0, Integer(1)}, {1, Integer(2)}};
    auto c = truncated_power(poly, 3, 2);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == 1);
    CHECK(c[1] == 6);
    CHECK(c[2] == 12);
}

}
