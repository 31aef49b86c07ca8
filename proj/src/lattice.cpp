#include "lpsvp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace lpsvp {

Number RowScale::power(const NormExponent& p) const {
    if (radicand == 1) return Number(Rational(1));
    if (p.is_integer() && p.integer % root == 0) return Number(rational_pow(radicand, p.integer / root));
    Real base = to_real(radicand);
    return Number(pow(RealApprox(base, ulp_of(base)), p.p / Real(root)));
}

RealApprox RowScale::value() const {
    if (root == 1) return RealApprox(to_real(radicand), ulp_of(to_real(radicand)));
    return lpsvp::root(radicand, root);
}

RowScale combine(const RowScale& a, const RowScale& b) {
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    unsigned l = std::lcm(a.root, b.root);
    return {rational_pow(a.radicand, l / a.root) * rational_pow(b.radicand, l / b.root), l};
}

std::size_t exact_rank(const std::vector<std::vector<Rational>>& rows_in) {
    auto m = rows_in;
    if (m.empty()) return 0;
    const std::size_t d = m.size(), n = m[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < d; ++col) {
        std::size_t piv = rank;
        while (piv < d && m[piv][col] == 0) ++piv;
        if (piv == d) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t i = rank + 1; i < d; ++i) {
            if (m[i][col] == 0) continue;
            Rational f = m[i][col] / m[rank][col];
            for (std::size_t j = col; j < n; ++j) m[i][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

Basis::Basis(std::vector<std::vector<Rational>> rows, std::vector<RowScale> scales)
    : rows_(std::move(rows)), scales_(std::move(scales)) {
    if (rows_.empty()) throw DomainError("basis needs at least one row");
    n_ = rows_[0].size();
    for (const auto& r : rows_)
        if (r.size() != n_) throw DomainError("basis rows have different lengths");
    if (scales_.empty()) scales_.assign(rows_.size(), RowScale{});
    if (scales_.size() != rows_.size()) throw DomainError("one row scale per row is required");
    for (const auto& s : scales_)
        if (s.radicand <= 0 || s.root == 0) throw DomainError("row scales must be positive");
    if (n_ > 0 && exact_rank(rows_) != n_) throw DomainError("basis columns are linearly dependent");
}

Basis Basis::identity(std::size_t n) {
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1;
    return Basis(std::move(rows));
}

Basis Basis::from_columns(const std::vector<std::vector<Rational>>& cols) {
    if (cols.empty()) throw DomainError("basis needs at least one column");
    std::vector<std::vector<Rational>> rows(cols[0].size(), std::vector<Rational>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows.size()) throw DomainError("basis columns have different lengths");
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i][j] = cols[j][i];
    }
    return Basis(std::move(rows));
}

bool Basis::has_row_scales() const {
    return std::any_of(scales_.begin(), scales_.end(), [](const RowScale& s) { return !s.is_one(); });
}

std::vector<Rational> Basis::residual(const std::vector<long>& x, const std::vector<Rational>* target) const {
    std::vector<Rational> v(d());
    for (std::size_t i = 0; i < d(); ++i) {
        Rational acc = 0;
        for (std::size_t j = 0; j < n_; ++j)
            if (x[j] != 0 && rows_[i][j] != 0) acc += rows_[i][j] * x[j];
        if (target) acc -= (*target)[i];
        v[i] = acc;
    }
    return v;
}

std::vector<long double> Basis::column_values(std::size_t j) const {
    std::vector<long double> c(d());
    for (std::size_t i = 0; i < d(); ++i) {
        long double s = scales_[i].is_one() ? 1.0L : scales_[i].value().value.convert_to<long double>();
        c[i] = s * rows_[i][j].convert_to<long double>();
    }
    return c;
}

Rational Basis::gram_determinant() const {
    std::vector<std::vector<Rational>> g(n_, std::vector<Rational>(n_));
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = a; b < n_; ++b) {
            Rational s = 0;
            for (std::size_t i = 0; i < d(); ++i) s += rows_[i][a] * rows_[i][b];
            g[a][b] = g[b][a] = s;
        }
    Rational det = 1;
    for (std::size_t c = 0; c < n_; ++c) {
        std::size_t piv = c;
        while (piv < n_ && g[piv][c] == 0) ++piv;
        if (piv == n_) return 0;
        if (piv != c) {
            std::swap(g[piv], g[c]);
            det = -det;
        }
        det *= g[c][c];
        for (std::size_t i = c + 1; i < n_; ++i) {
            if (g[i][c] == 0) continue;
            Rational f = g[i][c] / g[c][c];
            for (std::size_t j = c; j < n_; ++j) g[i][j] -= f * g[c][j];
        }
    }
    return det;
}

Number weighted_cost(const std::vector<Rational>& v, const std::vector<RowScale>& scales, const NormExponent& p) {
    Number acc(Rational(0));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        Number t = abs_pow(v[i], p);
        acc = acc + (scales[i].is_one() ? t : scales[i].power(p) * t);
    }
    return acc;
}

namespace {

long checked_sub_mul(long a, long q, long b) {
    long prod, out;
    if (__builtin_mul_overflow(q, b, &prod) || __builtin_sub_overflow(a, prod, &out))
        throw PreconditionError("coefficient overflow during basis preconditioning");
    return out;
}

long double dot(const std::vector<long double>& a, const std::vector<long double>& b) {
    long double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

PointEnumerator::PointEnumerator(const Basis& b, const NormExponent& p, EnumOptions opts)
    : b_(b), p_(p), opts_(opts), n_(b.n()) {
    if (n_ > opts_.rank_cap)
        throw RankCapExceeded("lattice rank " + std::to_string(n_) + " exceeds the enumeration cap " +
                              std::to_string(opts_.rank_cap));
    const std::size_t d = b.d();
    // floating GSO bounds are only trusted for moderate entries
    for (const auto& row : b.rows())
        for (const auto& v : row)
            if (mpz_sizeinbase(numerator(v).backend().data(), 2) > 40 ||
                mpz_sizeinbase(denominator(v).backend().data(), 2) > 40)
                throw PreconditionError("basis entry " + to_string(v) + " is too large for the enumerator");
    std::vector<std::vector<long double>> cols(n_);
    for (std::size_t j = 0; j < n_; ++j) cols[j] = b.column_values(j);
    U_.assign(n_, std::vector<long>(n_, 0));
    for (std::size_t j = 0; j < n_; ++j) U_[j][j] = 1;

    mu_.assign(n_, std::vector<long double>(n_, 0));
    bstar_.assign(n_, std::vector<long double>(d, 0));
    bstar2_.assign(n_, 0);
    auto gso = [&] {
        for (std::size_t i = 0; i < n_; ++i) {
            bstar_[i] = cols[i];
            for (std::size_t j = 0; j < i; ++j) {
                mu_[i][j] = dot(cols[i], bstar_[j]) / bstar2_[j];
                for (std::size_t k = 0; k < d; ++k) bstar_[i][k] -= mu_[i][j] * bstar_[j][k];
            }
            mu_[i][i] = 1;
            bstar2_[i] = dot(bstar_[i], bstar_[i]);
        }
    };
    // internal LLL preconditioning, delta = 0.99
    gso();
    std::size_t k = 1;
    std::size_t guard = 0;
    while (k < n_) {
        if (++guard > 100000) break;
        bool changed = false;
        for (std::size_t jj = k; jj-- > 0;) {
            long double m = mu_[k][jj];
            if (std::fabs(m) <= 0.5L) continue;
            long q = std::llround(m);
            for (std::size_t i = 0; i < d; ++i) cols[k][i] -= q * cols[jj][i];
            for (std::size_t i = 0; i < n_; ++i) U_[k][i] = checked_sub_mul(U_[k][i], q, U_[jj][i]);
            for (std::size_t l = 0; l <= jj; ++l) mu_[k][l] -= q * mu_[jj][l];
            changed = true;
        }
        if (changed) gso();
        if (bstar2_[k] < (0.99L - mu_[k][k - 1] * mu_[k][k - 1]) * bstar2_[k - 1]) {
            std::swap(cols[k], cols[k - 1]);
            std::swap(U_[k], U_[k - 1]);
            gso();
            k = std::max<std::size_t>(1, k - 1);
        } else {
            ++k;
        }
    }
    gso();
    weights_.resize(d);
    exact_weights_.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        exact_weights_[i] = b.scale(i).power(p);
        weights_[i] = exact_weights_[i].value().convert_to<long double>();
    }
}

void PointEnumerator::set_l2_bound(const Number& radius_pow) {
    radius_pow_ = radius_pow;
    Real rp = radius_pow.approx().hi();
    if (rp < 0) {
        l2_bound_ = -1;
        radius_pow_ld_ = -1;
        return;
    }
    radius_pow_ld_ = rp.convert_to<long double>();
    long double r = rp == 0 ? 0.0L : std::pow(radius_pow_ld_, 1.0L / p_.p.convert_to<long double>());
    long double pd = p_.p.convert_to<long double>();
    long double factor = pd > 2 ? std::pow(static_cast<long double>(b_.d()), 0.5L - 1.0L / pd) : 1.0L;
    l2_bound_ = r * factor * r * factor * (1 + 1e-6L) + 1e-12L;
}

void PointEnumerator::shrink(const Number& radius_pow) {
    if (compare(radius_pow, radius_pow_) == Order::Less) set_l2_bound(radius_pow);
}

bool PointEnumerator::accept(const std::vector<long>& x, LatticePoint& out) const {
    const std::size_t d = b_.d();
    const long double pd = p_.p.convert_to<long double>();
    long double cost = 0;
    for (std::size_t i = 0; i < d; ++i) {
        long double v = 0;
        for (std::size_t j = 0; j < n_; ++j)
            if (x[j] != 0) v += b_.at(i, j).convert_to<long double>() * x[j];
        if (target_) v -= (*target_)[i].convert_to<long double>();
        v = std::fabs(v);
        if (v != 0) cost += weights_[i] * (p_.integer == 2 ? v * v : std::pow(v, pd));
    }
    if (cost > radius_pow_ld_ * (1 + 1e-9L) + 1e-300L) return false;
    std::vector<Rational> res = b_.residual(x, target_);
    Number c = weighted_cost(res, b_.scales(), p_);
    if (!leq_inclusive(c, radius_pow_)) return false;
    out.coeffs = x;
    out.cost = std::move(c);
    return true;
}

bool PointEnumerator::recurse(int level, long double partial) {
    if (++nodes_ > opts_.node_budget)
        throw BudgetExceeded("enumeration node budget of " + std::to_string(opts_.node_budget) + " exceeded");
    if (opts_.time_cap_seconds > 0 && (nodes_ & 4095) == 0 && std::chrono::steady_clock::now() > deadline_)
        throw BudgetExceeded("enumeration time cap exceeded");
    long double center = c_[level];
    for (std::size_t j = level + 1; j < n_; ++j) center -= mu_[j][level] * y_[j];
    long double rem = l2_bound_ - partial;
    if (rem < 0) return true;
    long double width = std::sqrt(rem / bstar2_[level]);
    long lo = static_cast<long>(std::ceil(center - width));
    long hi = static_cast<long>(std::floor(center + width));
    for (long y = lo; y <= hi; ++y) {
        long double diff = y - center;
        long double np = partial + diff * diff * bstar2_[level];
        if (np > l2_bound_) continue;
        y_[level] = y;
        if (level == 0) {
            std::vector<long> x = to_coeffs();
            LatticePoint pt;
            if (accept(x, pt) && !(*visit_)(pt)) return false;
        } else if (!recurse(level - 1, np)) {
            return false;
        }
    }
    return true;
}

long double PointEnumerator::prepare(const std::vector<Rational>* target) {
    const std::size_t d = b_.d();
    if (target && target->size() != d) throw DomainError("target dimension does not match the basis");
    target_ = target;
    target_ld_.assign(d, 0);
    if (target)
        for (std::size_t i = 0; i < d; ++i) {
            long double s = b_.scale(i).is_one() ? 1.0L : b_.scale(i).value().value.convert_to<long double>();
            target_ld_[i] = s * (*target)[i].convert_to<long double>();
        }
    c_.assign(n_, 0);
    std::vector<long double> perp = target_ld_;
    for (std::size_t i = 0; i < n_; ++i) {
        c_[i] = dot(target_ld_, bstar_[i]) / bstar2_[i];
        for (std::size_t k = 0; k < d; ++k) perp[k] -= c_[i] * bstar_[i][k];
    }
    y_.assign(n_, 0);
    return dot(perp, perp);
}

std::vector<long> PointEnumerator::to_coeffs() const {
    std::vector<long> x(n_, 0);
    for (std::size_t j = 0; j < n_; ++j) {
        if (y_[j] == 0) continue;
        for (std::size_t i = 0; i < n_; ++i) x[i] = checked_sub_mul(x[i], -y_[j], U_[j][i]);
    }
    return x;
}

std::vector<long> PointEnumerator::babai(const std::vector<Rational>& target) {
    prepare(&target);
    for (std::size_t level = n_; level-- > 0;) {
        long double center = c_[level];
        for (std::size_t j = level + 1; j < n_; ++j) center -= mu_[j][level] * y_[j];
        y_[level] = std::lround(center);
    }
    return to_coeffs();
}

void PointEnumerator::run(const std::vector<Rational>* target, const Number& radius_pow,
                          const std::function<bool(const LatticePoint&)>& visit) {
    long double perp2 = prepare(target);
    visit_ = &visit;
    nodes_ = 0;
    deadline_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(opts_.time_cap_seconds));
    set_l2_bound(radius_pow);
    if (l2_bound_ < 0 || n_ == 0) return;
    recurse(static_cast<int>(n_) - 1, std::max<long double>(0, perp2 * (1 - 1e-9L)));
}

std::vector<LatticePoint> enumerate_points(const Basis& b, const NormExponent& p, const Number& radius_pow,
                                           const std::vector<Rational>* target, EnumOptions opts) {
    PointEnumerator e(b, p, opts);
    std::vector<LatticePoint> out;
    e.run(target, radius_pow, [&](const LatticePoint& pt) {
        out.push_back(pt);
        return true;
    });
    return out;
}

Integer count_points(const Basis& b, const NormExponent& p, const Number& radius_pow,
                     const std::vector<Rational>* target, EnumOptions opts) {
    PointEnumerator e(b, p, opts);
    Integer count = 0;
    e.run(target, radius_pow, [&](const LatticePoint&) {
        ++count;
        return true;
    });
    return count;
}

namespace {

bool is_zero(const std::vector<long>& x) {
    return std::all_of(x.begin(), x.end(), [](long v) { return v == 0; });
}

Minimum finish(const NormExponent& p, Number cost, std::vector<long> coeffs) {
    Minimum m;
    m.value = root_p(cost, p);
    m.value_pow = std::move(cost);
    m.coeffs = std::move(coeffs);
    return m;
}

}  // namespace

Minimum lambda1(const Basis& b, const NormExponent& p, EnumOptions opts) {
    PointEnumerator e(b, p, opts);
    const std::size_t n = b.n();
    if (n == 0) throw DomainError("lambda1 of the zero lattice");
    std::optional<Number> best;
    std::vector<long> arg;
    for (const auto& col : e.transform()) {
        Number c = weighted_cost(b.residual(col, nullptr), b.scales(), p);
        if (!best || compare(c, *best) == Order::Less) {
            best = c;
            arg = col;
        }
    }
    e.run(nullptr, *best, [&](const LatticePoint& pt) {
        if (is_zero(pt.coeffs)) return true;
        if (compare(pt.cost, *best) == Order::Less) {
            best = pt.cost;
            arg = pt.coeffs;
            e.shrink(*best);
        }
        return true;
    });
    return finish(p, *best, arg);
}

Minimum dist(const Basis& b, const std::vector<Rational>& target, const NormExponent& p, EnumOptions opts) {
    PointEnumerator e(b, p, opts);
    std::vector<long> arg = e.babai(target);
    Number best = weighted_cost(b.residual(arg, &target), b.scales(), p);
    if (!(best.is_exact() && best.rational() == 0)) {
        e.run(&target, best, [&](const LatticePoint& pt) {
            if (compare(pt.cost, best) == Order::Less) {
                best = pt.cost;
                arg = pt.coeffs;
                e.shrink(best);
            }
            return !(best.is_exact() && best.rational() == 0);
        });
    }
    return finish(p, best, arg);
}

Integer count_primitive(const Basis& b, const NormExponent& p, const Number& radius_pow, EnumOptions opts) {
    PointEnumerator e(b, p, opts);
    Integer count = 0;
    e.run(nullptr, radius_pow, [&](const LatticePoint& pt) {
        long g = 0;
        for (long v : pt.coeffs) g = std::gcd(g, std::labs(v));
        if (g == 1) ++count;
        return true;
    });
    return count / 2;
}

Integer annoying_count(const Basis& b, const std::vector<Rational>& target, const NormExponent& p,
                       const Number& r_pow, const Number& s_pow, const Number& gamma_pow, EnumOptions opts) {
    if (sign(r_pow) <= 0 || sign(s_pow) <= 0) throw DomainError("annoying_count needs r, s > 0");
    if (compare(gamma_pow, Number(Rational(1))) == Order::Less) throw DomainError("annoying_count needs gamma >= 1");
    if (target.size() != b.d()) throw DomainError("target dimension does not match the basis");
    PointEnumerator e(b, p, opts);
    Integer total = 0;
    const Number zero(Rational(0));
    for (long z = 0;; ++z) {
        Number zp = abs_pow(Rational(z), p);
        Number rad = gamma_pow * r_pow - (zp - gamma_pow) * s_pow;
        if (compare(rad, zero) == Order::Less) break;
        std::vector<Rational> zt(target.size());
        for (std::size_t i = 0; i < target.size(); ++i) zt[i] = target[i] * z;
        e.run(&zt, rad, [&](const LatticePoint&) {
            ++total;
            return true;
        });
    }
    return total - 1;
}

Basis direct_sum(const Basis& b1, const Basis& b2) {
    const std::size_t d1 = b1.d(), d2 = b2.d(), n1 = b1.n(), n2 = b2.n();
    std::vector<std::vector<Rational>> rows(d1 + d2, std::vector<Rational>(n1 + n2));
    std::vector<RowScale> scales;
    for (std::size_t i = 0; i < d1; ++i) {
        for (std::size_t j = 0; j < n1; ++j) rows[i][j] = b1.at(i, j);
        scales.push_back(b1.scale(i));
    }
    for (std::size_t i = 0; i < d2; ++i) {
        for (std::size_t j = 0; j < n2; ++j) rows[d1 + i][n1 + j] = b2.at(i, j);
        scales.push_back(b2.scale(i));
    }
    return Basis(std::move(rows), std::move(scales));
}

Basis scale(const Basis& b, const Rational& alpha) {
    if (alpha == 0) throw DomainError("scale factor must be nonzero");
    auto rows = b.rows();
    for (auto& r : rows)
        for (auto& v : r) v *= alpha;
    return Basis(std::move(rows), b.scales());
}

Basis scale(const Basis& b, const RowScale& sigma) {
    if (sigma.radicand <= 0) throw DomainError("scale factor must be positive");
    std::vector<RowScale> scales;
    for (const auto& s : b.scales()) scales.push_back(combine(s, sigma));
    return Basis(b.rows(), std::move(scales));
}

bool is_prime(const Integer& q) {
    if (q < 2) return false;
    if (q < (1 << 20)) {
        long v = q.convert_to<long>();
        for (long f = 2; f * f <= v; ++f)
            if (v % f == 0) return false;
        return true;
    }
    // 40 Miller-Rabin rounds: error below 2^-80
    return mpz_probab_prime_p(q.backend().data(), 40) > 0;
}

Integer next_prime(const Integer& from) {
    Integer c = from < 2 ? Integer(2) : from;
    while (!is_prime(c)) ++c;
    return c;
}

std::vector<Integer> sparsify_form(std::size_t n, const Integer& q, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const std::size_t bits = msb(q) + 1;
    std::vector<Integer> z(n);
    for (auto& v : z) {
        while (true) {
            Integer c = 0;
            std::size_t have = 0;
            while (have < bits) {
                c <<= 64;
                c += gen();
                have += 64;
            }
            c >>= static_cast<unsigned>(have - bits);
            if (c < q) {
                v = c;
                break;
            }
        }
    }
    return z;
}

SparsifyResult sparsify(const Basis& b, const Integer& q, std::uint64_t seed) {
    if (q < 101) throw DomainError("sparsification modulus must be at least 101");
    if (!is_prime(q)) throw DomainError("sparsification modulus must be prime");
    const std::size_t n = b.n();
    SparsifyResult out;
    out.z = sparsify_form(n, q, seed);
    out.transform.assign(n, std::vector<Integer>(n, 0));
    std::size_t k = n;
    for (std::size_t j = 0; j < n; ++j)
        if (out.z[j] != 0) {
            k = j;
            break;
        }
    if (k == n) {
        for (std::size_t j = 0; j < n; ++j) out.transform[j][j] = 1;
        out.basis = b;
        return out;
    }
    Integer inv;
    mpz_invert(inv.backend().data(), out.z[k].backend().data(), q.backend().data());
    for (std::size_t j = 0; j < n; ++j) {
        if (j == k) {
            out.transform[j][k] = q;
        } else {
            out.transform[j][j] = 1;
            Integer c = (out.z[j] * inv) % q;
            out.transform[j][k] = c == 0 ? Integer(0) : Integer(-c);
        }
    }
    auto rows = b.rows();
    for (auto& r : rows) {
        std::vector<Rational> nr(n, Rational(0));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                if (out.transform[j][i] != 0 && r[i] != 0) nr[j] += r[i] * Rational(out.transform[j][i]);
        r = std::move(nr);
    }
    out.basis = Basis(std::move(rows), b.scales());
    return out;
}

SurvivalStats sparsify_survival_stats(const Basis& b, const NormExponent& p, const Number& radius_pow,
                                      const Integer& q, std::size_t trials, std::uint64_t seed, EnumOptions opts) {
    if (trials == 0) throw DomainError("at least one trial is required");
    if (q < 101 || !is_prime(q)) throw DomainError("sparsification modulus must be a prime >= 101");
    SurvivalStats st;
    st.trials = trials;
    Minimum l1 = lambda1(b, p, opts);
    Number qlam = power_p(Number(Rational(q)), p) * l1.value_pow;
    st.always = compare(radius_pow, qlam) != Order::Less;
    const double qd = q.convert_to<double>();
    if (st.always) {
        // q times a shortest vector survives every draw
        st.hits = trials;
        st.preconditions_hold = false;
    } else {
        st.primitive_count = count_primitive(b, p, radius_pow, opts);
        std::vector<std::vector<long>> shorts;
        PointEnumerator e(b, p, opts);
        e.run(nullptr, radius_pow, [&](const LatticePoint& pt) {
            if (!is_zero(pt.coeffs)) shorts.push_back(pt.coeffs);
            return true;
        });
        for (std::size_t t = 0; t < trials; ++t) {
            std::vector<Integer> z = sparsify_form(b.n(), q, derive_seed(seed, t));
            bool hit = false;
            for (const auto& x : shorts) {
                Integer s = 0;
                for (std::size_t j = 0; j < x.size(); ++j)
                    if (x[j] != 0) s += z[j] * x[j];
                if (s % q == 0) {
                    hit = true;
                    break;
                }
            }
            if (hit) ++st.hits;
        }
        const double N = st.primitive_count.convert_to<double>();
        st.preconditions_hold = N <= qd / (20 * std::log(qd));
    }
    const double N = st.primitive_count.convert_to<double>();
    st.bound_hi = st.always ? 1.0 : N / qd;
    st.bound_lo = st.always ? 1.0 : N / qd - N * N / (qd * qd);
    st.frequency = static_cast<double>(st.hits) / static_cast<double>(trials);
    const double pr = std::min(1.0, st.bound_hi);
    st.sigma = std::sqrt(pr * (1 - pr) / static_cast<double>(trials));
    return st;
}

}  // namespace lpsvp
