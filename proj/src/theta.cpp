#include "lpsvp/theta.hpp"

#include <cmath>

namespace lpsvp {

namespace {

Real tail_threshold() {
    return boost::multiprecision::ldexp(Real(1), -static_cast<int>(working_precision()) - 8);
}

void require_tau(const Real& tau) {
    if (!(tau > 0)) throw DomainError("tau must be positive");
}

// Bound on sum_{d >= X, step 1} d^{kp} exp(-tau d^p) for one side.
Real side_tail(const NormExponent& p, const Real& tau, const Real& X, int k) {
    Real xp = pow(X, p.p);
    Real slope = p.p * pow(X, p.p - 1);
    if (k == 0) return exp(-tau * xp) / (-expm1(-tau * slope));
    return pow(xp, k) * exp(-tau * xp) / (-expm1(-tau * slope / 2));
}

}  // namespace

Real canonical_shift(const Real& t) {
    Real f = t - floor(t);
    Real g = 1 - f;
    return f < g ? f : g;
}

ShiftProfile ShiftProfile::uniform(const Real& t, std::size_t n) {
    ShiftProfile s;
    s.add(t, n);
    return s;
}

ShiftProfile ShiftProfile::from_vector(const std::vector<Real>& shifts) {
    ShiftProfile s;
    for (const auto& t : shifts) s.add(t, 1);
    return s;
}

void ShiftProfile::add(const Real& t, std::size_t count) {
    if (count == 0) return;
    Real c = canonical_shift(t);
    for (auto& g : groups_)
        if (g.t == c) {
            g.count += count;
            return;
        }
    groups_.push_back({c, count});
}

std::size_t ShiftProfile::dimension() const {
    std::size_t n = 0;
    for (const auto& g : groups_) n += g.count;
    return n;
}

ThetaPoint::ThetaPoint(const Real& tau_, const Real& shift_) : tau(tau_), shift(canonical_shift(shift_)) {
    require_tau(tau);
}

ThetaSums theta_sums(const NormExponent& p, const ThetaPoint& pt) {
    const Real& tau = pt.tau;
    const Real& t = pt.shift;
    const Real u = unit_roundoff();
    const Real thr = tail_threshold();
    Real s0 = 0, s1 = 0, s2 = 0, e0 = 0, e1 = 0, e2 = 0;
    auto add_term = [&](const Real& d) {
        Real dp = d == 0 ? Real(0) : pow(d, p.p);
        Real w = exp(-tau * dp);
        Real rel = (4 + tau * dp) * u;
        s0 += w;
        e0 += w * rel;
        Real w1 = dp * w;
        s1 += w1;
        e1 += w1 * (rel + u);
        Real w2 = dp * w1;
        s2 += w2;
        e2 += w2 * (rel + 2 * u);
    };
    const Real min_xp = Real(4) / tau;
    for (long j = 0;; ++j) {
        add_term(Real(j) + t);
        add_term(Real(j) + 1 - t);
        Real X = Real(j + 1) + t;
        if (pow(X, p.p) < min_xp) continue;
        Real t0 = 2 * side_tail(p, tau, X, 0);
        if (t0 > thr * s0) continue;
        Real t1 = 2 * side_tail(p, tau, X, 1);
        Real t2 = 2 * side_tail(p, tau, X, 2);
        if (t1 <= thr * s1 && t2 <= thr * s2) {
            return {RealApprox(s0, e0 + t0 + ulp_of(s0)), RealApprox(s1, e1 + t1 + ulp_of(s1)),
                    RealApprox(s2, e2 + t2 + ulp_of(s2))};
        }
        if (j > 100000000) throw DomainError("theta series failed to converge");
    }
}

RealApprox theta(const NormExponent& p, const Real& tau, const Real& shift) {
    return theta_sums(p, ThetaPoint(tau, shift)).s0;
}

RealApprox log_theta_vec(const NormExponent& p, const Real& tau, const ShiftProfile& shifts) {
    require_tau(tau);
    RealApprox acc = RealApprox::exact(Real(0));
    for (const auto& g : shifts.groups()) {
        RealApprox lt = log(theta(p, tau, g.t));
        acc = acc + RealApprox::exact(Real(g.count)) * lt;
    }
    return acc;
}

RealApprox theta_vec(const NormExponent& p, const Real& tau, const ShiftProfile& shifts) {
    require_tau(tau);
    RealApprox acc = RealApprox::exact(Real(1));
    for (const auto& g : shifts.groups()) {
        RealApprox th = theta(p, tau, g.t);
        acc = acc * pow(th, Real(g.count));
    }
    return acc;
}

RealApprox mu(const NormExponent& p, const Real& tau, const Real& shift) {
    ThetaSums s = theta_sums(p, ThetaPoint(tau, shift));
    return s.s1 / s.s0;
}

RealApprox mu_vec(const NormExponent& p, const Real& tau, const ShiftProfile& shifts) {
    RealApprox acc = RealApprox::exact(Real(0));
    for (const auto& g : shifts.groups()) acc = acc + RealApprox::exact(Real(g.count)) * mu(p, tau, g.t);
    return acc;
}

RealApprox variance_v(const NormExponent& p, const Real& tau, const Real& shift) {
    ThetaSums s = theta_sums(p, ThetaPoint(tau, shift));
    RealApprox m = s.s1 / s.s0;
    return s.s2 / s.s0 - m * m;
}

RealApprox theta_shift_derivative(const NormExponent& p, const Real& tau, const Real& t) {
    require_tau(tau);
    const Real u = unit_roundoff();
    const Real thr = tail_threshold();
    Real base = floor(t);
    Real acc = 0, err = 0, mag = 0;
    const Real min_xp = Real(4) / tau;
    for (long j = 0;; ++j) {
        for (int side = 0; side < 2; ++side) {
            Real z = side == 0 ? base - j : base + 1 + j;
            Real d = z - t;
            Real ad = abs(d);
            if (ad == 0) continue;
            Real dp = pow(ad, p.p);
            Real w = tau * p.p * pow(ad, p.p - 1) * exp(-tau * dp);
            acc += d > 0 ? w : Real(-w);
            mag += w;
            err += w * (6 + tau * dp) * u;
        }
        Real X = Real(j + 1);
        if (pow(X, p.p) < min_xp) continue;
        Real tail = 2 * tau * p.p * side_tail(p, tau, X, 1);
        if (tail <= thr * (mag + 1)) return {acc, err + tail + ulp_of(acc)};
    }
}

RealApprox h_func(const NormExponent& p, const Real& tau, const Real& delta, const ShiftProfile& shifts) {
    require_tau(tau);
    if (!(delta > 0)) throw DomainError("delta must be positive");
    RealApprox th1 = theta_vec(p, tau + delta, shifts);
    RealApprox th0 = theta_vec(p, tau, shifts);
    RealApprox th2 = theta_vec(p, tau + 2 * delta, shifts);
    RealApprox m0 = mu_vec(p, tau, shifts);
    RealApprox m2 = mu_vec(p, tau + 2 * delta, shifts);
    RealApprox d = RealApprox::exact(delta);
    RealApprox zero = RealApprox::exact(Real(0));
    return th1 - exp(zero - d * m0) * th0 - exp(d * m2) * th2;
}

namespace {

// tau with target = f(tau) for a decreasing f, by bisection in log tau.
template <class F>
Real solve_decreasing(F f, const Real& target) {
    Real lo = 1, hi = 1;
    int guard = 0;
    while (f(lo) < target) {
        lo /= 2;
        if (++guard > 4000) throw DomainError("stationarity bracket not found");
    }
    while (f(hi) > target) {
        hi *= 2;
        if (++guard > 4000) throw DomainError("stationarity bracket not found");
    }
    const Real tol = boost::multiprecision::ldexp(Real(1), -60);
    while (hi - lo > tol * lo) {
        Real mid = sqrt(lo * hi);
        if (f(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return sqrt(lo * hi);
}

}  // namespace

HardnessConstants w_p(const NormExponent& p) {
    const Real target = pow(Real(2), -p.p);
    auto f = [&](const Real& tau) { return mu(p, tau, Real(0)).value; };
    Real tau = solve_decreasing(f, target);
    RealApprox th = theta(p, tau, Real(0));
    RealApprox w = exp(RealApprox::exact(tau * target)) * th;
    // W at the located tau exceeds the true minimum by at most |f'(tau)| * |tau - tau*|, with |tau - tau*| <= 2^-60 tau.
    Real slope = abs(target - mu(p, tau, Real(0)).value);
    Real dtau = boost::multiprecision::ldexp(tau, -59);
    w.err += w.value * slope * dtau;
    HardnessConstants h{p, w, RealApprox(tau, dtau), std::nullopt};
    if (w.hi() < 2) {
        RealApprox lg = log(w) / RealApprox::exact(log(Real(2)));
        h.C_p = RealApprox::exact(Real(1)) / (RealApprox::exact(Real(1)) - lg);
    }
    return h;
}

RealApprox find_p0() {
    Real lo = 2, hi = Real(5) / 2;
    auto g = [](const Real& p) { return w_p(NormExponent(p)).W_p.value - 2; };
    if (!(g(lo) > 0 && g(hi) < 0)) throw std::logic_error("no sign change of W_p - 2 on [2, 2.5]");
    for (int it = 0; it < 56; ++it) {
        Real mid = (lo + hi) / 2;
        if (g(mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    return {(lo + hi) / 2, hi - lo};
}

Real cp_simple_bound(const Real& p) {
    if (!(p >= 3)) throw DomainError("cp_simple_bound requires p >= 3");
    Real c = p + log(3 * exp(Real(1))) / log(Real(2));
    return 1 / (1 - pow(Real(2), -p) * c);
}

ThetaUpperBound count_upper_bound_theta(const NormExponent& p, const Number& radius_pow,
                                        const ShiftProfile& shifts) {
    if (sign(radius_pow) <= 0 && radius_pow.is_exact() && radius_pow.rational() <= 0)
        throw DomainError("radius must be positive");
    RealApprox inf = RealApprox::exact(Real(0));
    for (const auto& g : shifts.groups())
        if (g.t > 0) inf = inf + RealApprox::exact(Real(g.count)) * pow(RealApprox::exact(g.t), p.p);
    Order ord = compare(radius_pow, Number(inf));
    if (ord != Order::Greater) {
        Real b = 0;
        if (ord != Order::Less) {
            b = 1;
            for (const auto& g : shifts.groups())
                if (g.t == Real(1) / 2) b *= pow(Real(2), Real(g.count));
        }
        return {RealApprox::exact(b), Real(0), true};
    }
    const RealApprox R = radius_pow.approx();
    auto f = [&](const Real& tau) { return mu_vec(p, tau, shifts).value; };
    Real tau = solve_decreasing(f, R.value);
    RealApprox lb = RealApprox::exact(tau) * R + log_theta_vec(p, tau, shifts);
    return {exp(lb), tau, false};
}

ThetaUpperBound count_upper_bound_theta(const NormExponent& p, std::size_t n, const Real& r, const Real& shift) {
    if (!(r > 0)) throw DomainError("radius must be positive");
    Real rp = pow(r, p.p);
    return count_upper_bound_theta(p, Number(RealApprox(rp, 2 * ulp_of(rp))), ShiftProfile::uniform(shift, n));
}

RealApprox count_lower_bound_theta(const NormExponent& p, const Real& tau, const Real& delta,
                                   const ShiftProfile& shifts) {
    RealApprox h = h_func(p, tau, delta, shifts);
    RealApprox m2 = mu_vec(p, tau + 2 * delta, shifts);
    return exp(RealApprox::exact(tau) * m2) * h;
}

RealApprox best_lower_bound_theta(const NormExponent& p, const Real& tau, const ShiftProfile& shifts,
                                  const std::vector<Real>& delta_grid) {
    RealApprox best(Real(0), Real(0));
    bool have = false;
    for (const auto& d : delta_grid) {
        RealApprox v = count_lower_bound_theta(p, tau, d, shifts);
        if (!have || v.lo() > best.lo()) {
            best = v;
            have = true;
        }
    }
    return best;
}

}  // namespace lpsvp
