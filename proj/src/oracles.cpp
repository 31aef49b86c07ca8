#include "lpsvp/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <chrono>
#include <cstdint>

namespace lpsvp {

void SetCoverInstance::validate() const {
    if (universe_size == 0) throw DomainError("empty universe");
    if (eta <= 0 || eta > 1) throw DomainError("eta must lie in (0, 1]");
    for (std::size_t j = 0; j < sets.size(); ++j)
        for (std::size_t u : sets[j])
            if (u >= universe_size)
                throw DomainError("set " + std::to_string(j) + " has element " + std::to_string(u) +
                                  " outside the universe");
}

EnumOptions OracleBudget::enum_options() const {
    EnumOptions o;
    o.rank_cap = rank_cap;
    o.node_budget = node_budget;
    o.time_cap_seconds = time_cap_seconds;
    return o;
}

const char* to_string(Decision d) {
    switch (d) {
        case Decision::Yes: return "YES";
        case Decision::No: return "NO";
        default: return "REFUSED";
    }
}

namespace {

template <class F>
OracleResult guarded(F&& f) {
    OracleResult res;
    try {
        f(res);
    } catch (const RankCapExceeded& e) {
        res = {Decision::Refused, e.what(), std::nullopt};
    } catch (const BudgetExceeded& e) {
        res = {Decision::Refused, e.what(), std::nullopt};
    } catch (const PreconditionError& e) {
        res = {Decision::Refused, e.what(), std::nullopt};
    }
    return res;
}

}  // namespace

OracleResult svp_decide(const Basis& b, const NormExponent& p, const Number& r_pow, const OracleBudget& budget) {
    return guarded([&](OracleResult& res) {
        PointEnumerator en(b, p, budget.enum_options());
        res.decision = Decision::No;
        en.run(nullptr, r_pow, [&](const LatticePoint& pt) {
            if (std::all_of(pt.coeffs.begin(), pt.coeffs.end(), [](long c) { return c == 0; })) return true;
            res.decision = Decision::Yes;
            res.witness = pt.coeffs;
            return false;
        });
    });
}

OracleResult cvp_decide(const Basis& b, const std::vector<Rational>& target, const NormExponent& p,
                        const Number& r_pow, const OracleBudget& budget) {
    if (target.size() != b.d()) throw DomainError("target dimension does not match the basis");
    return guarded([&](OracleResult& res) {
        PointEnumerator en(b, p, budget.enum_options());
        res.decision = Decision::No;
        en.run(&target, r_pow, [&](const LatticePoint& pt) {
            res.decision = Decision::Yes;
            res.witness = pt.coeffs;
            return false;
        });
    });
}

std::vector<std::vector<long>> box_scan(const Basis& b, const NormExponent& p, const Number& r_pow,
                                        const std::vector<Rational>* target, long box) {
    const std::size_t n = b.n();
    if (box < 0) throw DomainError("box half-width must be nonnegative");
    double cells = std::pow(2.0 * box + 1, static_cast<double>(n));
    if (cells > 5e7) throw PreconditionError("coefficient box too large to scan");
    std::vector<std::vector<long>> out;
    std::vector<long> x(n, -box);
    if (n == 0) return out;
    while (true) {
        Number c = weighted_cost(b.residual(x, target), b.scales(), p);
        if (leq_inclusive(c, r_pow)) out.push_back(x);
        std::size_t i = 0;
        while (i < n && x[i] == box) x[i++] = -box;
        if (i == n) break;
        ++x[i];
    }
    return out;
}

namespace {

struct BoxCounter {
    std::vector<std::vector<std::int64_t>> cost;  // per coordinate, per value, scaled to integers
    std::int64_t budget = 0;
    std::uint64_t count = 0;

    void go(std::size_t i, std::int64_t acc) {
        if (i == cost.size()) {
            if (acc <= budget) ++count;
            return;
        }
        for (std::int64_t c : cost[i]) go(i + 1, acc + c);
    }
};

struct SlowBoxCounter {
    std::vector<std::vector<Number>> cost;
    Number budget;
    Integer count = 0;

    void go(std::size_t i, const Number& acc) {
        if (i == cost.size()) {
            if (leq_inclusive(acc, budget)) ++count;
            return;
        }
        for (const Number& c : cost[i]) go(i + 1, acc + c);
    }
};

}  // namespace

Integer brute_force_count(const NormExponent& p, const std::vector<Rational>& shift, const Number& r_pow, long lo,
                          long hi) {
    const std::size_t n = shift.size();
    if (n == 0) return 1;
    if (hi < lo) return 0;
    std::vector<std::vector<Number>> cost(n);
    bool exact = r_pow.is_exact();
    for (std::size_t i = 0; i < n; ++i)
        for (long v = lo; v <= hi; ++v) {
            cost[i].push_back(abs_pow(Rational(v) - shift[i], p));
            exact = exact && cost[i].back().is_exact();
        }
    if (exact) {
        Integer den = denominator(r_pow.rational());
        for (const auto& row : cost)
            for (const auto& c : row) den = lcm(den, Integer(denominator(c.rational())));
        Integer top = 0;
        BoxCounter bc;
        bc.cost.resize(n);
        bool fits = true;
        for (std::size_t i = 0; i < n && fits; ++i) {
            Integer mx = 0;
            for (const auto& c : cost[i]) {
                Rational sc = c.rational() * Rational(den);
                Integer z = numerator(sc);
                if (z > mx) mx = z;
                if (msb(z + 1) > 61) {
                    fits = false;
                    break;
                }
                bc.cost[i].push_back(z.convert_to<std::int64_t>());
            }
            top += mx;
            if (top > (Integer(1) << 61)) fits = false;
        }
        if (fits) {
            Rational b = r_pow.rational() * Rational(den);
            Integer bz = numerator(b);
            if (bz > top) bz = top;
            bc.budget = bz.convert_to<std::int64_t>();
            bc.go(0, 0);
            return Integer(bc.count);
        }
    }
    SlowBoxCounter sc{std::move(cost), r_pow, 0};
    sc.go(0, Number(Rational(0)));
    return sc.count;
}

namespace {

struct CoverDfs {
    std::vector<std::uint64_t> masks;
    std::vector<std::vector<std::size_t>> by_element;
    std::uint64_t full = 0;
    bool disjoint = false;
    std::size_t cap = 0;
    std::uint64_t nodes = 0;
    std::uint64_t node_budget = 50'000'000;
    std::vector<std::size_t> cur, best;
    bool found = false;

    void go(std::uint64_t covered) {
        if (++nodes > node_budget) throw BudgetExceeded("cover search node budget exceeded");
        if (covered == full) {
            if (!found || cur.size() < best.size()) {
                best = cur;
                found = true;
            }
            return;
        }
        std::size_t limit = found ? best.size() - 1 : cap;
        if (cur.size() >= limit) return;
        int u = std::countr_zero(~covered & full);
        for (std::size_t j : by_element[u]) {
            if (disjoint && (masks[j] & covered)) continue;
            cur.push_back(j);
            go(covered | masks[j]);
            cur.pop_back();
        }
    }
};

}  // namespace

CoverSearchResult exact_cover_search(const SetCoverInstance& esc, std::size_t size_cap) {
    esc.validate();
    CoverSearchResult res;
    if (esc.universe_size > 64) {
        res.refused = true;
        res.reason = "universe larger than 64 elements";
        return res;
    }
    CoverDfs dfs;
    dfs.full = esc.universe_size == 64 ? ~0ULL : ((1ULL << esc.universe_size) - 1);
    dfs.by_element.resize(esc.universe_size);
    for (std::size_t j = 0; j < esc.sets.size(); ++j) {
        std::uint64_t m = 0;
        for (std::size_t u : esc.sets[j]) m |= 1ULL << u;
        dfs.masks.push_back(m);
        if (m == 0) continue;
        for (std::size_t u : esc.sets[j]) {
            auto& v = dfs.by_element[u];
            if (v.empty() || v.back() != j) v.push_back(j);
        }
    }
    dfs.cap = size_cap;
    try {
        for (bool disjoint : {true, false}) {
            dfs.disjoint = disjoint;
            dfs.found = false;
            dfs.best.clear();
            dfs.cur.clear();
            dfs.nodes = 0;
            dfs.go(0);
            if (dfs.found) (disjoint ? res.exact : res.cover) = dfs.best;
        }
    } catch (const BudgetExceeded& e) {
        res.refused = true;
        res.reason = e.what();
    }
    return res;
}

}  // namespace lpsvp
