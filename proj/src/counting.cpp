#include "lpsvp/counting.hpp"

#include "lpsvp/theta.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace lpsvp {

ShiftedBallQuery ShiftedBallQuery::uniform(const NormExponent& p, std::size_t n, const Number& radius_pow,
                                           const Number& t) {
    ShiftedBallQuery q;
    q.p = p;
    q.n = n;
    q.radius_pow = radius_pow;
    q.shift = {t};
    return q;
}

ShiftedBallQuery ShiftedBallQuery::vector(const NormExponent& p, const Number& radius_pow, std::vector<Number> t) {
    ShiftedBallQuery q;
    q.p = p;
    q.n = t.size();
    q.radius_pow = radius_pow;
    q.shift = std::move(t);
    return q;
}

void ShiftedBallQuery::validate() const {
    if (n < 1) throw DomainError("query dimension must be at least 1");
    if (shift.size() != 1 && shift.size() != n) throw DomainError("shift must be uniform or have n entries");
}

namespace {

constexpr std::size_t kDenseLimit = 4'000'000;
constexpr std::size_t kSparseStateLimit = 2'000'000;

Rational canonical_rational(const Rational& s) {
    Rational f = s - Rational(floor_rational(s));
    Rational g = Rational(1) - f;
    return f < g ? f : g;
}

SparsePoly normalize(SparsePoly poly) {
    std::sort(poly.begin(), poly.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparsePoly out;
    for (auto& [e, c] : poly) {
        if (c == 0) continue;
        if (!out.empty() && out.back().first == e)
            out.back().second += c;
        else
            out.emplace_back(e, c);
    }
    return out;
}

long to_long_checked(const Integer& z) {
    if (z > Integer(std::numeric_limits<long>::max() / 4)) throw DomainError("cost exceeds the cost-axis range");
    return z.convert_to<long>();
}

Integer sum_prefix(const std::vector<Integer>& f, long upto) {
    Integer s = 0;
    long lim = std::min<long>(upto, static_cast<long>(f.size()) - 1);
    for (long k = 0; k <= lim; ++k) s += f[k];
    return s;
}

// Sparse state DP, coordinate by coordinate.
Integer count_sparse(const std::vector<std::pair<SparsePoly, std::size_t>>& groups, long budget) {
    std::map<long, Integer> states{{0, Integer(1)}};
    for (const auto& [poly, mult] : groups) {
        for (std::size_t rep = 0; rep < mult; ++rep) {
            std::map<long, Integer> next;
            for (const auto& [s, c] : states)
                for (const auto& [e, w] : poly) {
                    if (s + e > budget) break;
                    next[s + e] += c * w;
                }
            states.swap(next);
            if (states.size() > kSparseStateLimit) throw DomainError("cost histogram exceeds the state limit");
            if (states.empty()) return 0;
        }
    }
    Integer total = 0;
    for (const auto& kv : states) total += kv.second;
    return total;
}

}  // namespace

std::vector<Integer> truncated_power(const SparsePoly& raw, std::size_t n, long budget) {
    if (budget < 0) return {};
    std::vector<Integer> f(static_cast<std::size_t>(budget) + 1);
    SparsePoly poly = normalize(raw);
    if (n == 0) {
        f[0] = 1;
        return f;
    }
    if (poly.empty()) return f;
    const long e0 = poly.front().first;
    const Integer p0 = poly.front().second;
    const long offset = static_cast<long>(n) * e0;
    if (offset > budget) return f;
    const long K = budget - offset;
    std::vector<std::pair<long, Integer>> rest;
    for (std::size_t j = 1; j < poly.size(); ++j)
        if (poly[j].first - e0 <= K) rest.emplace_back(poly[j].first - e0, poly[j].second);
    std::vector<Integer> g(static_cast<std::size_t>(K) + 1);
    g[0] = integer_pow(p0, static_cast<unsigned>(n));
    const long n1 = static_cast<long>(n) + 1;
    Integer acc, tmp;
    for (long k = 1; k <= K; ++k) {
        acc = 0;
        for (const auto& [e, c] : rest) {
            if (e > k) break;
            const Integer& prev = g[k - e];
            if (prev == 0) continue;
            tmp = c * prev;
            tmp *= (n1 * e - k);
            acc += tmp;
        }
        if (acc != 0) g[k] = acc / (p0 * k);
    }
    for (long k = 0; k <= K; ++k) f[offset + k] = g[k];
    return f;
}

Integer count_integer_costs(const std::vector<std::pair<SparsePoly, std::size_t>>& groups, long budget) {
    if (budget < 0) return 0;
    if (static_cast<std::size_t>(budget) + 1 > kDenseLimit) return count_sparse(groups, budget);
    std::vector<Integer> acc;
    for (const auto& [poly, mult] : groups) {
        std::vector<Integer> f = truncated_power(poly, mult, budget);
        if (acc.empty()) {
            acc = std::move(f);
            continue;
        }
        std::vector<Integer> next(static_cast<std::size_t>(budget) + 1);
        for (long i = 0; i <= budget; ++i) {
            if (acc[i] == 0) continue;
            for (long j = 0; i + j <= budget; ++j)
                if (f[j] != 0) next[i + j] += acc[i] * f[j];
        }
        acc.swap(next);
    }
    if (acc.empty()) return 1;
    return sum_prefix(acc, budget);
}

CountBounds count_exact(const ShiftedBallQuery& q) {
    q.validate();
    if (!q.p.is_integer()) throw PreconditionError("count_exact needs an integer p; use count_interval");
    const unsigned p = q.p.integer;
    std::vector<Rational> shifts;
    shifts.reserve(q.shift.size());
    for (const auto& s : q.shift) {
        if (!s.is_exact()) throw PreconditionError("count_exact needs rational shifts; use count_interval");
        shifts.push_back(canonical_rational(s.rational()));
    }
    Integer q0 = 1;
    for (const auto& s : shifts) q0 = boost::multiprecision::lcm(q0, denominator(s));
    if (q0 > 1 << 20) throw PreconditionError("shift denominators too large for exact counting");
    const Integer scale = integer_pow(q0, p);

    long b_lo = 0, b_hi = 0;
    if (q.radius_pow.is_exact()) {
        Integer b = floor_rational(q.radius_pow.rational() * Rational(scale));
        if (b < 0) return {0, 0};
        b_lo = b_hi = to_long_checked(b);
    } else {
        RealApprox r = q.radius_pow.approx();
        Real s = to_real(scale);
        Real lo = floor(r.lo() * s), hi = floor(r.hi() * s);
        if (hi < 0) return {0, 0};
        b_lo = lo < 0 ? -1 : lo.convert_to<long>();
        b_hi = hi.convert_to<long>();
    }
    if (static_cast<std::size_t>(b_hi) + 1 > kMaxCostCells && q.n > 64)
        throw PreconditionError("cost budget exceeds the histogram limit");

    std::map<Integer, std::size_t> mult;
    if (q.shift.size() == 1)
        mult[numerator(shifts[0] * Rational(q0))] = q.n;
    else
        for (const auto& s : shifts) ++mult[numerator(s * Rational(q0))];

    std::vector<std::pair<SparsePoly, std::size_t>> groups;
    const Integer bmax = b_hi;
    for (const auto& [a, m] : mult) {
        SparsePoly poly;
        for (long j = 0;; ++j) {
            Integer wl = a + Integer(j) * q0;
            Integer wr = Integer(j + 1) * q0 - a;
            Integer cl = integer_pow(wl, p), cr = integer_pow(wr, p);
            bool any = false;
            if (cl <= bmax) {
                poly.emplace_back(cl.convert_to<long>(), Integer(1));
                any = true;
            }
            if (cr <= bmax) {
                poly.emplace_back(cr.convert_to<long>(), Integer(1));
                any = true;
            }
            if (!any) break;
        }
        groups.emplace_back(normalize(std::move(poly)), m);
    }
    CountBounds out;
    out.hi = count_integer_costs(groups, b_hi);
    out.lo = b_lo == b_hi ? out.hi : count_integer_costs(groups, b_lo);
    return out;
}

CountBounds count_interval(const ShiftedBallQuery& q, const Rational& resolution) {
    q.validate();
    if (resolution <= 0) throw DomainError("resolution must be positive");
    const Real eps = to_real(resolution);
    RealApprox R = q.radius_pow.approx();
    if (R.hi() < 0) return {0, 0};
    Real bh = floor(R.hi() / eps);
    Real bl = floor(R.lo() / eps);
    if (bh > Real(kMaxCostCells) * 50)
        throw PreconditionError("resolution yields a cost axis beyond the configured cell limit");
    const long b_hi = bh.convert_to<long>();
    const long b_lo = bl < 0 ? -1 : bl.convert_to<long>();

    struct Key {
        Real value, err;
    };
    std::vector<std::pair<Key, std::size_t>> keys;
    auto add_key = [&](const Number& s, std::size_t m) {
        RealApprox t = s.is_exact() ? RealApprox(to_real(canonical_rational(s.rational())), Real(0))
                                    : RealApprox(canonical_shift(s.approx().value), s.approx().err);
        if (s.is_exact()) t.err = ulp_of(t.value);
        for (auto& [k, c] : keys)
            if (k.value == t.value && k.err == t.err) {
                c += m;
                return;
            }
        keys.push_back({{t.value, t.err}, m});
    };
    if (q.shift.size() == 1)
        add_key(q.shift[0], q.n);
    else
        for (const auto& s : q.shift) add_key(s, 1);

    std::vector<std::pair<SparsePoly, std::size_t>> hi_groups, lo_groups;
    for (const auto& [k, m] : keys) {
        SparsePoly hi_poly, lo_poly;
        for (long j = 0;; ++j) {
            bool any = false;
            for (int side = 0; side < 2; ++side) {
                Real d = side == 0 ? Real(j) + k.value : Real(j + 1) - k.value;
                Real dlo = d - k.err, dhi = d + k.err;
                if (dlo < 0) dlo = 0;
                Real clo = dlo == 0 ? Real(0) : pow(dlo, q.p.p);
                Real chi = pow(dhi, q.p.p);
                clo -= 4 * ulp_of(clo);
                chi += 4 * ulp_of(chi) + unit_roundoff();
                Real fl = floor(clo / eps);
                if (fl < 0) fl = 0;
                if (fl > b_hi) continue;
                any = true;
                hi_poly.emplace_back(fl.convert_to<long>(), Integer(1));
                Real cl = ceil(chi / eps);
                if (cl <= b_hi) lo_poly.emplace_back(cl.convert_to<long>(), Integer(1));
            }
            if (!any) break;
        }
        hi_groups.emplace_back(normalize(std::move(hi_poly)), m);
        lo_groups.emplace_back(normalize(std::move(lo_poly)), m);
    }
    CountBounds out;
    out.hi = count_integer_costs(hi_groups, b_hi);
    out.lo = count_integer_costs(lo_groups, b_lo);
    return out;
}

Real growth_constant(const NormExponent& p, std::size_t n, const Rational& c) {
    if (c <= 0) throw DomainError("growth constant needs c > 0");
    Number rp = power_p(Number(c), p) * Number(Rational(static_cast<long>(n)));
    if (!rp.is_exact()) {
        // round the radius to a rational, so the count is exact
        RealApprox a = rp.approx();
        rp = Number(floor_to_grid(a.value, Integer(1) << 64));
    }
    ShiftedBallQuery q = ShiftedBallQuery::uniform(p, n, rp, Number(Rational(0)));
    CountBounds cb = p.is_integer() ? count_exact(q) : count_interval(q, Rational(1, 1 << 20));
    Real v = to_real(cb.lo);
    return pow(v, Real(1) / Real(static_cast<long>(n)));
}

namespace {

// Upper bound on Theta_p(tau; t) for t in [a, b] subset of [0, 1/2]: the smaller of a
// monotone termwise bound and a second-order expansion around the midpoint.
Real theta_cell_upper(const NormExponent& p, const Real& tau, const Real& a, const Real& b) {
    const Real u = unit_roundoff();
    const Real thr = boost::multiprecision::ldexp(Real(1), -static_cast<int>(working_precision()) - 8);
    const Real& P = p.p;
    Real s = 0, curv = 0;
    bool curv_ok = true;
    // sup of |d^2/dx^2 exp(-tau x^P)| for x in [xa, xb]
    auto second = [&](const Real& xa, const Real& xb) {
        Real e = exp(-tau * (xa == 0 ? Real(0) : pow(xa, P)));
        Real lead = tau * tau * P * P * pow(xb, 2 * P - 2);
        Real low;
        if (P >= 2)
            low = tau * P * (P - 1) * pow(xb, P - 2);
        else if (xa > 0)
            low = tau * P * (P - 1) * pow(xa, P - 2);
        else {
            curv_ok = P == 1 ? curv_ok : false;
            low = 0;
        }
        return e * (lead + low);
    };
    const Real min_xp = Real(4) / tau;
    for (long j = 0;; ++j) {
        Real dl = a + j, dr = Real(1) - b + j;
        s += exp(-tau * (dl == 0 ? Real(0) : pow(dl, P)));
        s += exp(-tau * pow(dr, P));
        curv += second(dl, b + j) + second(dr, Real(1) - a + j);
        Real X = a + j + 1;
        if (pow(X, P) < min_xp) continue;
        Real xp = pow(X, P);
        Real tail = 2 * exp(-tau * xp) / (-expm1(-tau * P * pow(X, P - 1)));
        if (tail <= thr * s) {
            Real crude = (s + tail) * (1 + 16 * u);
            // p = 1 has a kink at t = 0, where the expansion does not apply
            if (!curv_ok || (P == 1 && a == 0)) return crude;
            curv += 4 * tail * tau * tau * P * P * pow(X, 2 * P);
            Real m = (a + b) / 2, h = (b - a) / 2;
            RealApprox th = theta(p, tau, m);
            RealApprox dth = theta_shift_derivative(p, tau, m);
            Real taylor = (th.hi() + abs(dth.value) * h + dth.err * h + curv * h * h / 2) * (1 + 16 * u);
            return taylor < crude ? taylor : crude;
        }
    }
}

}  // namespace

Real max_theta_upper(const NormExponent& p, const Real& tau) {
    if (!(tau > 0)) throw DomainError("tau must be positive");
    struct Cell {
        Real a, b, upper;
    };
    const Real tol = boost::multiprecision::ldexp(Real(1), -30);
    Real best_lower = 0;
    std::vector<Cell> work, done;
    const int initial = 64;
    for (int i = 0; i < initial; ++i) {
        Real a = Real(i) / (2 * initial), b = Real(i + 1) / (2 * initial);
        work.push_back({a, b, theta_cell_upper(p, tau, a, b)});
        Real lo = theta(p, tau, (a + b) / 2).lo();
        if (lo > best_lower) best_lower = lo;
    }
    for (Real e : {Real(0), Real(1) / 2}) {
        Real lo = theta(p, tau, e).lo();
        if (lo > best_lower) best_lower = lo;
    }
    int evaluations = 0;
    while (!work.empty()) {
        Cell c = work.back();
        work.pop_back();
        if (c.upper <= best_lower) continue;
        if (c.upper <= best_lower * (1 + tol) || evaluations > 6000) {
            done.push_back(c);
            continue;
        }
        Real m = (c.a + c.b) / 2;
        Real lo = theta(p, tau, m).lo();
        if (lo > best_lower) best_lower = lo;
        work.push_back({c.a, m, theta_cell_upper(p, tau, c.a, m)});
        work.push_back({m, c.b, theta_cell_upper(p, tau, m, c.b)});
        evaluations += 3;
    }
    Real best_upper = best_lower;
    for (const auto& c : done)
        if (c.upper > best_upper) best_upper = c.upper;
    return best_upper;
}

DensityBound density_upper_bound(const NormExponent& p, std::size_t n, const Number& radius_pow) {
    if (sign(radius_pow) <= 0) throw DomainError("density bound needs r > 0");
    const RealApprox R = radius_pow.approx();
    const Real nn = Real(static_cast<long>(n));
    auto estimate = [&](const Real& tau) {
        Real m = 0;
        for (int i = 0; i <= 32; ++i) {
            Real v = theta(p, tau, Real(i) / 64).value;
            if (v > m) m = v;
        }
        return tau * R.value + nn * log(m);
    };
    Real best_tau = 1, best = estimate(Real(1));
    for (int k = -12; k <= 24; ++k) {
        Real tau = boost::multiprecision::ldexp(Real(1), k);
        Real v = estimate(tau);
        if (v < best) {
            best = v;
            best_tau = tau;
        }
    }
    Real lo = log(best_tau / 2), hi = log(best_tau * 2);
    const Real phi = (sqrt(Real(5)) - 1) / 2;
    Real x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    Real f1 = estimate(exp(x1)), f2 = estimate(exp(x2));
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = estimate(exp(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = estimate(exp(x2));
        }
    }
    Real tau = exp((lo + hi) / 2);
    Real mu = max_theta_upper(p, tau);
    RealApprox lg = RealApprox::exact(tau) * R + RealApprox::exact(nn) * log(RealApprox(mu, ulp_of(mu)));
    RealApprox b = exp(lg);
    return {b, tau, mu};
}

}  // namespace lpsvp
