#include "lpsvp/numeric.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace lpsvp {

namespace {

unsigned g_bits = 0;

unsigned digits10_for_bits(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

void apply_bits(unsigned bits) {
    g_bits = bits;
    Real::default_precision(digits10_for_bits(bits));
}

unsigned initial_bits() {
    if (const char* env = std::getenv("LPSVP_PRECISION")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 32 && v <= 100000) return static_cast<unsigned>(v);
    }
    return 128;
}

}  // namespace

unsigned working_precision() {
    if (g_bits == 0) apply_bits(initial_bits());
    return g_bits;
}

void set_working_precision(unsigned bits) {
    if (bits < 32) throw DomainError("precision below 32 bits");
    apply_bits(bits);
}

PrecisionGuard::PrecisionGuard(unsigned bits) : saved_(working_precision()) { set_working_precision(bits); }
PrecisionGuard::~PrecisionGuard() { apply_bits(saved_); }

Real unit_roundoff() {
    unsigned bits = working_precision();
    return boost::multiprecision::ldexp(Real(1), -static_cast<int>(bits) + 2);
}

Real ulp_of(const Real& x) { return abs(x) * unit_roundoff(); }

Real to_real(const Integer& z) {
    working_precision();
    Real r;
    mpfr_set_z(r.backend().data(), z.backend().data(), MPFR_RNDN);
    return r;
}

Real to_real(const Rational& q) {
    working_precision();
    Real r;
    mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
    return r;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational parse_rational(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw DomainError("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational num = parse_rational(s.substr(0, slash));
        Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) throw DomainError("zero denominator in '" + raw + "'");
        return num / den;
    }
    bool neg = false;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') {
        neg = s[i] == '-';
        ++i;
    }
    std::string digits;
    long exp10 = 0;
    bool seen_dot = false, any = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            any = true;
            if (seen_dot) --exp10;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if (c == 'e' || c == 'E') {
            std::size_t used = 0;
            long e = 0;
            try {
                e = std::stol(s.substr(i + 1), &used);
            } catch (...) {
                throw DomainError("bad exponent in '" + raw + "'");
            }
            if (used != s.size() - i - 1) throw DomainError("bad exponent in '" + raw + "'");
            exp10 += e;
            break;
        } else {
            throw DomainError("bad rational literal '" + raw + "'");
        }
    }
    if (!any) throw DomainError("bad rational literal '" + raw + "'");
    if (exp10 > 100000 || exp10 < -100000) throw DomainError("exponent out of range in '" + raw + "'");
    auto nz = digits.find_first_not_of('0');
    Integer mant(nz == std::string::npos ? std::string("0") : digits.substr(nz));
    Integer scale = integer_pow(Integer(10), static_cast<unsigned>(std::labs(exp10)));
    Rational q = exp10 >= 0 ? Rational(mant * scale) : Rational(mant, scale);
    return neg ? Rational(-q) : q;
}

std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

std::string to_string(const Real& x, int digits) {
    std::ostringstream out;
    out.precision(digits);
    out << x;
    return out.str();
}

Rational rational_pow(const Rational& q, unsigned k) {
    Rational result = 1, base = q;
    while (k) {
        if (k & 1u) result *= base;
        k >>= 1u;
        if (k) base *= base;
    }
    return result;
}

Integer integer_pow(const Integer& z, unsigned k) {
    Integer result = 1, base = z;
    while (k) {
        if (k & 1u) result *= base;
        k >>= 1u;
        if (k) base *= base;
    }
    return result;
}

Integer floor_rational(const Rational& q) {
    Integer n = numerator(q), d = denominator(q);
    Integer f = n / d;
    if (n < 0 && f * d != n) f -= 1;
    return f;
}

Integer ceil_rational(const Rational& q) { return -floor_rational(-q); }

Rational floor_to_grid(const Real& x, const Integer& den) {
    Real scaled = floor(x * to_real(den));
    Integer num;
    mpfr_get_z(num.backend().data(), scaled.backend().data(), MPFR_RNDD);
    return Rational(num, den);
}

Rational ceil_to_grid(const Real& x, const Integer& den) {
    Real scaled = ceil(x * to_real(den));
    Integer num;
    mpfr_get_z(num.backend().data(), scaled.backend().data(), MPFR_RNDU);
    return Rational(num, den);
}

RealApprox::RealApprox() : value(0), err(0) {}
RealApprox::RealApprox(Real v, Real e) : value(std::move(v)), err(std::move(e)) {
    if (err < 0) err = -err;
}
RealApprox RealApprox::exact(const Real& v) { return {v, Real(0)}; }

RealApprox operator+(const RealApprox& a, const RealApprox& b) {
    Real v = a.value + b.value;
    return {v, a.err + b.err + ulp_of(v)};
}

RealApprox operator-(const RealApprox& a, const RealApprox& b) {
    Real v = a.value - b.value;
    return {v, a.err + b.err + ulp_of(v)};
}

RealApprox operator*(const RealApprox& a, const RealApprox& b) {
    Real v = a.value * b.value;
    return {v, abs(a.value) * b.err + abs(b.value) * a.err + a.err * b.err + ulp_of(v)};
}

RealApprox operator/(const RealApprox& a, const RealApprox& b) {
    Real blo = abs(b.value) - b.err;
    if (blo <= 0) throw DomainError("division by an interval containing zero");
    Real v = a.value / b.value;
    Real e = (a.err + abs(v) * b.err) / blo;
    return {v, e + ulp_of(v)};
}

RealApprox exp(const RealApprox& a) {
    Real v = exp(a.value);
    Real e = v * expm1(a.err);
    return {v, e + ulp_of(v)};
}

RealApprox log(const RealApprox& a) {
    if (a.lo() <= 0) throw DomainError("log of a nonpositive interval");
    Real v = log(a.value);
    return {v, a.err / a.lo() + ulp_of(v) + unit_roundoff()};
}

RealApprox pow(const RealApprox& a, const Real& e) {
    if (a.err == 0 && a.value == 0) return RealApprox::exact(e == 0 ? Real(1) : Real(0));
    if (a.lo() <= 0) {
        if (e < 0 || e != floor(e)) throw DomainError("pow of a nonpositive interval");
        Real v = pow(a.value, e);
        Real m = abs(a.value) + a.err;
        Real err = e == 0 ? Real(0) : e * pow(m, e - 1) * a.err;
        return {v, err + ulp_of(v)};
    }
    Real v = pow(a.value, e);
    Real d1 = pow(a.lo(), e - 1), d2 = pow(a.hi(), e - 1);
    Real err = abs(e) * (d1 > d2 ? d1 : d2) * a.err;
    return {v, err + ulp_of(v)};
}

RealApprox root(const Rational& radicand, unsigned k) {
    if (radicand < 0) throw DomainError("root of a negative rational");
    if (k == 1) {
        Real v = to_real(radicand);
        return {v, ulp_of(v)};
    }
    Real v = pow(to_real(radicand), Real(1) / Real(k));
    return {v, 4 * ulp_of(v)};
}

Number::Number() : exact_(true), q_(0) {}
Number::Number(const Rational& q) : exact_(true), q_(q) {}
Number::Number(const RealApprox& x) : exact_(false), x_(x) {}

const Rational& Number::rational() const {
    if (!exact_) throw DomainError("number is not an exact rational");
    return q_;
}

RealApprox Number::approx() const {
    if (!exact_) return x_;
    Real v = to_real(q_);
    return {v, ulp_of(v)};
}

std::string Number::str() const { return exact_ ? to_string(q_) : to_string(x_.value, 30); }

Number operator+(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) return Number(Rational(a.q_ + b.q_));
    return Number(a.approx() + b.approx());
}

Number operator-(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) return Number(Rational(a.q_ - b.q_));
    return Number(a.approx() - b.approx());
}

Number operator*(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) return Number(Rational(a.q_ * b.q_));
    return Number(a.approx() * b.approx());
}

Number operator/(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) {
        if (b.q_ == 0) throw DomainError("division by zero");
        return Number(Rational(a.q_ / b.q_));
    }
    return Number(a.approx() / b.approx());
}

Order compare(const Number& a, const Number& b) {
    if (a.is_exact() && b.is_exact()) {
        const Rational& x = a.rational();
        const Rational& y = b.rational();
        if (x < y) return Order::Less;
        if (x > y) return Order::Greater;
        return Order::Equal;
    }
    RealApprox d = a.approx() - b.approx();
    if (d.lo() > 0) return Order::Greater;
    if (d.hi() < 0) return Order::Less;
    return Order::Ambiguous;
}

bool leq_inclusive(const Number& a, const Number& b) { return compare(a, b) != Order::Greater; }

int sign(const Number& a) {
    switch (compare(a, Number(Rational(0)))) {
        case Order::Less: return -1;
        case Order::Greater: return 1;
        default: return 0;
    }
}

NormExponent::NormExponent(const Real& value) : p(value) {
    if (!(value >= 1)) throw DomainError("norm exponent must satisfy p >= 1");
    if (value > 1e6) throw DomainError("norm exponent must be finite");
    if (value == floor(value) && value <= 64) integer = value.convert_to<unsigned>();
}

std::string NormExponent::str() const { return is_integer() ? std::to_string(integer) : to_string(p, 20); }

Number abs_pow(const Rational& a, const NormExponent& p) {
    Rational m = a < 0 ? Rational(-a) : a;
    if (p.is_integer()) return Number(rational_pow(m, p.integer));
    if (m == 0) return Number(Rational(0));
    Real base = to_real(m);
    return Number(pow(RealApprox(base, ulp_of(base)), p.p));
}

RealApprox root_p(const Number& x, const NormExponent& p) {
    if (x.is_exact()) {
        if (x.rational() < 0) throw DomainError("root of a negative number");
        if (x.rational() == 0) return RealApprox::exact(Real(0));
        if (p.is_integer()) return root(x.rational(), p.integer);
    }
    RealApprox a = x.approx();
    if (a.hi() <= 0) return RealApprox::exact(Real(0));
    if (a.lo() <= 0) {
        Real hi = pow(a.hi(), 1 / p.p);
        return {hi / 2, hi / 2};
    }
    return pow(a, 1 / p.p);
}

Number power_p(const Number& x, const NormExponent& p) {
    if (x.is_exact() && p.is_integer()) return Number(rational_pow(x.rational(), p.integer));
    return Number(pow(x.approx(), p.p));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

}  // namespace lpsvp

namespace {
const bool g_precision_ready = (lpsvp::working_precision(), true);
}
