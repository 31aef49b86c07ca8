#include "support.hpp"

#include "lpsvp/oracles.hpp"

#include <set>

using namespace lpsvp;
using test::q;

namespace {

const NormExponent P2(2.0), P3(3.0);

Basis random_basis(std::mt19937_64& rng, std::size_t n, long span) {
    while (true) {
        std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
        for (auto& r : rows)
            for (auto& v : r) v = Rational(long(rng() % (2 * span + 1)) - span);
        if (exact_rank(rows) == n) return Basis(rows);
    }
}

}  // namespace

TEST_SUITE("oracles") {

TEST_CASE("svp on Z^5") {
    CHECK(svp_decide(Basis::identity(5), P2, Number(Rational(1))).decision == Decision::Yes);
    CHECK(svp_decide(Basis::identity(5), P2, Number(q("9801/10000"))).decision == Decision::No);
}

TEST_CASE("cvp on Z^3 at the deep hole") {
    std::vector<Rational> t(3, q("1/2"));
    OracleResult yes = cvp_decide(Basis::identity(3), t, P2, Number(q("3/4")));
    CHECK(yes.decision == Decision::Yes);
    REQUIRE(yes.witness);
    CHECK(yes.witness->size() == 3);
    CHECK(cvp_decide(Basis::identity(3), t, P2, Number(q("3/4") - q("1/1000000"))).decision == Decision::No);
}

TEST_CASE("decisions agree with the box scan") {
    std::mt19937_64 rng(8);
    for (int it = 0; it < 30; ++it) {
        Basis b = random_basis(rng, 3, 2);
        const NormExponent& p = (it % 2) ? P2 : P3;
        Number rp(Rational(long(1 + rng() % 6)));
        std::vector<Rational> t{Rational(long(rng() % 7), 4), Rational(long(rng() % 5), 3), Rational(1, 2)};
        // unimodular-ish small bases keep short vectors inside a modest box
        bool svp_scan = box_scan(b, p, rp, nullptr, 12).size() > 1;
        bool cvp_scan = !box_scan(b, p, rp, &t, 12).empty();
        OracleResult s = svp_decide(b, p, rp);
        OracleResult c = cvp_decide(b, t, p, rp);
        CAPTURE(it);
        if (svp_scan) CHECK(s.decision == Decision::Yes);
        if (cvp_scan) CHECK(c.decision == Decision::Yes);
        // a YES witness is genuine
        if (s.decision == Decision::Yes) {
            REQUIRE(s.witness);
            CHECK(leq_inclusive(weighted_cost(b.residual(*s.witness, nullptr), b.scales(), p), rp));
        }
        if (c.decision == Decision::Yes) {
            REQUIRE(c.witness);
            CHECK(leq_inclusive(weighted_cost(b.residual(*c.witness, &t), b.scales(), p), rp));
        }
        if (s.decision == Decision::No) CHECK(!svp_scan);
        if (c.decision == Decision::No) CHECK(!cvp_scan);
    }
}

TEST_CASE("svp at lambda1 and just below") {
    std::mt19937_64 rng(4);
    for (int it = 0; it < 10; ++it) {
        Basis b = random_basis(rng, 3, 3);
        Minimum m = lambda1(b, P3);
        CHECK(svp_decide(b, P3, m.value_pow).decision == Decision::Yes);
        CHECK(svp_decide(b, P3, m.value_pow - Number(q("1/1000"))).decision == Decision::No);
    }
}

TEST_CASE("oracle refuses instead of guessing") {
    OracleBudget budget;
    budget.rank_cap = 3;
    OracleResult r = svp_decide(Basis::identity(4), P2, Number(Rational(1)), budget);
    CHECK(r.decision == Decision::Refused);
    CHECK(!r.reason.empty());
    CHECK(std::string(to_string(Decision::Refused)) == "REFUSED");
}

TEST_CASE("brute-force counter") {
    CHECK(brute_force_count(P2, {Rational(0), Rational(0)}, Number(Rational(1)), -3, 3) == 5);
    CHECK(brute_force_count(NormExponent(1.0), {q("1/2"), q("1/2")}, Number(Rational(1)), -3, 3) == 4);
    CHECK(brute_force_count(NormExponent(2.5), {q("3/10")}, Number(RealApprox::exact(Real(1))), -3, 3) == 2);
}

TEST_CASE("exact cover search") {
    SetCoverInstance a{2, {{0}, {1}, {0, 1}}, 2};
    CoverSearchResult ra = exact_cover_search(a, 4);
    CHECK(!ra.refused);
    REQUIRE(ra.exact);
    CHECK(*ra.exact == std::vector<std::size_t>{2});
    SetCoverInstance forced{2, {{0}, {1}}, 2};
    REQUIRE(exact_cover_search(forced, 4).exact);
    CHECK(exact_cover_search(forced, 4).exact->size() == 2);
    CHECK(!exact_cover_search(forced, 1).exact);

    SetCoverInstance b{3, {{0, 1}, {1, 2}}, 2};
    CoverSearchResult rb = exact_cover_search(b, 4);
    CHECK(!rb.exact);
    REQUIRE(rb.cover);
    CHECK(rb.cover->size() == 2);

    SetCoverInstance wide{70, {{0}}, 1};
    CHECK(exact_cover_search(wide, 4).refused);
}

}
