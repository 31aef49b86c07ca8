#pragma once

#include "lpsvp/lattice.hpp"
#include "lpsvp/setcover.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lpsvp {

struct OracleBudget {
    std::size_t rank_cap = 14;
    long coefficient_box = 6;  // half-width for box scans
    double time_cap_seconds = 120;
    std::uint64_t node_budget = 200'000'000;

    EnumOptions enum_options() const;
};

enum class Decision { Yes, No, Refused };
const char* to_string(Decision d);

struct OracleResult {
    Decision decision = Decision::Refused;
    std::string reason;                         // set when refused
    std::optional<std::vector<long>> witness;   // coefficients of a vector within r
};

// lambda_1(L) <= r, with r given through r^p.
OracleResult svp_decide(const Basis& b, const NormExponent& p, const Number& r_pow, const OracleBudget& budget = {});
// dist(t, L) <= r
OracleResult cvp_decide(const Basis& b, const std::vector<Rational>& target, const NormExponent& p,
                        const Number& r_pow, const OracleBudget& budget = {});

// Lattice points Bx, x in [-box, box]^n, with ||Bx - t||_p^p <= r^p. Independent of the enumerator.
std::vector<std::vector<long>> box_scan(const Basis& b, const NormExponent& p, const Number& r_pow,
                                        const std::vector<Rational>* target, long box);

// |{z in Z^n : ||z - t||_p^p <= r^p}| by scanning z in [lo, hi]^n.
Integer brute_force_count(const NormExponent& p, const std::vector<Rational>& shift, const Number& r_pow, long lo,
                          long hi);

struct CoverSearchResult {
    bool refused = false;
    std::string reason;
    std::optional<std::vector<std::size_t>> exact;  // minimal disjoint cover
    std::optional<std::vector<std::size_t>> cover;  // minimal cover, overlaps allowed
};

CoverSearchResult exact_cover_search(const SetCoverInstance& esc, std::size_t size_cap);

}  // namespace lpsvp
