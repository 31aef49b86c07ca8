#pragma once

#include "lpsvp/numeric.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace lpsvp {

// Row multiplier radicand^(1/root) > 0.
struct RowScale {
    Rational radicand = 1;
    unsigned root = 1;

    bool is_one() const { return radicand == 1; }
    // sigma^p, exact when root divides the integer p
    Number power(const NormExponent& p) const;
    RealApprox value() const;
    bool operator==(const RowScale& o) const { return radicand == o.radicand && root == o.root; }
};

RowScale combine(const RowScale& a, const RowScale& b);

// d x n generator matrix with real entries sigma_i * Q_ij. Columns are the basis vectors.
class Basis {
public:
    Basis() = default;
    Basis(std::vector<std::vector<Rational>> rows, std::vector<RowScale> scales = {});
    static Basis identity(std::size_t n);
    static Basis from_columns(const std::vector<std::vector<Rational>>& cols);

    std::size_t d() const { return rows_.size(); }
    std::size_t n() const { return n_; }
    const Rational& at(std::size_t i, std::size_t j) const { return rows_[i][j]; }
    const std::vector<std::vector<Rational>>& rows() const { return rows_; }
    const RowScale& scale(std::size_t i) const { return scales_[i]; }
    const std::vector<RowScale>& scales() const { return scales_; }
    bool has_row_scales() const;

    // Q x - tau in the scaled frame.
    std::vector<Rational> residual(const std::vector<long>& x, const std::vector<Rational>* target) const;
    std::vector<long double> column_values(std::size_t j) const;
    // |det|^2 of the Gram matrix of Q (scales ignored).
    Rational gram_determinant() const;

private:
    std::vector<std::vector<Rational>> rows_;
    std::vector<RowScale> scales_;
    std::size_t n_ = 0;
};

std::size_t exact_rank(const std::vector<std::vector<Rational>>& rows);

// sum_i sigma_i^p |v_i|^p
Number weighted_cost(const std::vector<Rational>& v, const std::vector<RowScale>& scales, const NormExponent& p);

struct RankCapExceeded : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct BudgetExceeded : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct EnumOptions {
    std::size_t rank_cap = 14;
    std::uint64_t node_budget = 200'000'000;
    double time_cap_seconds = 0;  // 0: none
};

struct LatticePoint {
    std::vector<long> coeffs;
    Number cost;  // ||Bx - t||_p^p
};

// Visits every lattice point with ||Bx - t||_p^p <= radius_pow. Enumerates an l2 ball that
// contains the l_p ball and filters each leaf exactly.
class PointEnumerator {
public:
    PointEnumerator(const Basis& b, const NormExponent& p, EnumOptions opts = {});

    // visit returns false to stop
    void run(const std::vector<Rational>* target, const Number& radius_pow,
             const std::function<bool(const LatticePoint&)>& visit);
    // Lower the radius for the rest of the current run.
    void shrink(const Number& radius_pow);
    // Nearest-plane rounding of target.
    std::vector<long> babai(const std::vector<Rational>& target);
    std::uint64_t nodes() const { return nodes_; }
    // Reduced basis columns as coefficient vectors in the input basis.
    const std::vector<std::vector<long>>& transform() const { return U_; }

private:
    void set_l2_bound(const Number& radius_pow);
    long double prepare(const std::vector<Rational>* target);
    std::vector<long> to_coeffs() const;
    bool accept(const std::vector<long>& x, LatticePoint& out) const;
    bool recurse(int level, long double partial);

    const Basis& b_;
    NormExponent p_;
    EnumOptions opts_;
    std::size_t n_;
    std::vector<std::vector<long>> U_;
    std::vector<std::vector<long double>> mu_;
    std::vector<long double> bstar2_;
    std::vector<std::vector<long double>> bstar_;
    std::vector<long double> weights_;
    std::vector<Number> exact_weights_;

    // per run
    const std::vector<Rational>* target_ = nullptr;
    Number radius_pow_;
    long double radius_pow_ld_ = 0;
    long double l2_bound_ = 0;
    std::vector<long double> c_;
    std::vector<long> y_;
    std::vector<long double> target_ld_;
    const std::function<bool(const LatticePoint&)>* visit_ = nullptr;
    std::uint64_t nodes_ = 0;
    std::chrono::steady_clock::time_point deadline_;
};

std::vector<LatticePoint> enumerate_points(const Basis& b, const NormExponent& p, const Number& radius_pow,
                                           const std::vector<Rational>* target, EnumOptions opts = {});
Integer count_points(const Basis& b, const NormExponent& p, const Number& radius_pow,
                     const std::vector<Rational>* target, EnumOptions opts = {});

struct Minimum {
    Number value_pow;  // lambda_1^p or dist^p
    RealApprox value;
    std::vector<long> coeffs;
};

Minimum lambda1(const Basis& b, const NormExponent& p, EnumOptions opts = {});
Minimum dist(const Basis& b, const std::vector<Rational>& target, const NormExponent& p, EnumOptions opts = {});

// Primitive vectors of length <= r, counted once per sign pair.
Integer count_primitive(const Basis& b, const NormExponent& p, const Number& radius_pow, EnumOptions opts = {});

// sum_{z >= 0} N_p(L, (g r^p - (z^p - g) s^p)^(1/p), z t) - 1 with g = gamma^p; nonnegative radicands only.
Integer annoying_count(const Basis& b, const std::vector<Rational>& target, const NormExponent& p,
                       const Number& r_pow, const Number& s_pow, const Number& gamma_pow, EnumOptions opts = {});

Basis direct_sum(const Basis& b1, const Basis& b2);
Basis scale(const Basis& b, const Rational& alpha);
// Every row multiplied by sigma.
Basis scale(const Basis& b, const RowScale& sigma);

bool is_prime(const Integer& q);
Integer next_prime(const Integer& from);

struct SparsifyResult {
    Basis basis;
    std::vector<Integer> z;                   // the linear form mod q
    std::vector<std::vector<Integer>> transform;  // new columns in old coefficients (n x n, column-major)
};

SparsifyResult sparsify(const Basis& b, const Integer& q, std::uint64_t seed);
// The form z drawn by sparsify for this seed.
std::vector<Integer> sparsify_form(std::size_t n, const Integer& q, std::uint64_t seed);

struct SurvivalStats {
    std::size_t trials = 0;
    std::size_t hits = 0;
    double frequency = 0;
    double sigma = 0;
    Integer primitive_count;  // N = xi_p(L, r)
    double bound_lo = 0;      // N/q - N^2/q^2
    double bound_hi = 0;      // N/q
    bool preconditions_hold = false;
    bool always = false;      // r >= q lambda_1: every trial succeeds
};

SurvivalStats sparsify_survival_stats(const Basis& b, const NormExponent& p, const Number& radius_pow,
                                      const Integer& q, std::size_t trials, std::uint64_t seed,
                                      EnumOptions opts = {});

struct CvpInstance {
    Basis basis;
    std::vector<Rational> target;
    Number r_pow;
    NormExponent p;
};

struct SvpInstance {
    Basis basis;
    Number r_pow;
    NormExponent p;
};

struct AgCvpInstance {
    Basis basis;
    std::vector<Rational> target;
    Number r_pow;
    Number s_pow;
    Number gamma_pow;
    Integer A;
    Integer G;
    NormExponent p;
};

}  // namespace lpsvp
