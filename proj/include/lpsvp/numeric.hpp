#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpsvp {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

// Input outside an operation's domain.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A documented precondition does not hold; callers should treat this as a refusal.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Working precision in bits. Defaults to 128, or LPSVP_PRECISION if set.
unsigned working_precision();
void set_working_precision(unsigned bits);

class PrecisionGuard {
public:
    explicit PrecisionGuard(unsigned bits);
    ~PrecisionGuard();
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    unsigned saved_;
};

// 2^-bits at the current working precision.
Real unit_roundoff();
Real ulp_of(const Real& x);

Real to_real(const Rational& q);
Real to_real(const Integer& z);
double to_double(const Rational& q);

Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);
std::string to_string(const Real& x, int digits = 20);

Rational rational_pow(const Rational& q, unsigned k);
Integer integer_pow(const Integer& z, unsigned k);
Integer floor_rational(const Rational& q);
Integer ceil_rational(const Rational& q);

// Rational approximations on a grid of 1/den.
Rational floor_to_grid(const Real& x, const Integer& den);
Rational ceil_to_grid(const Real& x, const Integer& den);

struct RealApprox {
    Real value;
    Real err;

    RealApprox();
    RealApprox(Real v, Real e);
    static RealApprox exact(const Real& v);
    Real lo() const { return value - err; }
    Real hi() const { return value + err; }
};

RealApprox operator+(const RealApprox& a, const RealApprox& b);
RealApprox operator-(const RealApprox& a, const RealApprox& b);
RealApprox operator*(const RealApprox& a, const RealApprox& b);
RealApprox operator/(const RealApprox& a, const RealApprox& b);
RealApprox exp(const RealApprox& a);
RealApprox log(const RealApprox& a);
// a^e with an exact real exponent; requires a.lo() > 0 unless e is a nonnegative integer.
RealApprox pow(const RealApprox& a, const Real& e);
RealApprox root(const Rational& radicand, unsigned k);

// Exact rational or certified real.
class Number {
public:
    Number();
    Number(const Rational& q);  // NOLINT
    Number(const RealApprox& x);  // NOLINT
    static Number from_int(long long v) { return Number(Rational(v)); }

    bool is_exact() const { return exact_; }
    const Rational& rational() const;
    RealApprox approx() const;
    Real value() const { return approx().value; }
    std::string str() const;

    friend Number operator+(const Number& a, const Number& b);
    friend Number operator-(const Number& a, const Number& b);
    friend Number operator*(const Number& a, const Number& b);
    friend Number operator/(const Number& a, const Number& b);

private:
    bool exact_ = true;
    Rational q_;
    RealApprox x_;
};

enum class Order { Less, Equal, Greater, Ambiguous };

Order compare(const Number& a, const Number& b);
// a <= b, where a certified comparison that cannot separate the two counts as a tie.
bool leq_inclusive(const Number& a, const Number& b);
int sign(const Number& a);  // -1, 0, 1; ambiguous near zero reports 0

// p as given, plus its integer value when p is a positive integer.
struct NormExponent {
    Real p;
    unsigned integer = 0;  // 0 when p is not a positive integer

    NormExponent() = default;
    explicit NormExponent(const Real& value);
    explicit NormExponent(double value) : NormExponent(Real(value)) {}
    bool is_integer() const { return integer != 0; }
    std::string str() const;
};

// |a|^p for rational a: exact when p is an integer.
Number abs_pow(const Rational& a, const NormExponent& p);
// x^(1/p) for a nonnegative number.
RealApprox root_p(const Number& x, const NormExponent& p);
Number power_p(const Number& x, const NormExponent& p);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace lpsvp
