#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmt {

// Exact rational scalars.  GMP-backed, always canonical (lowest terms,
// positive denominator); every operation in this library is exact.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

using Vec = std::vector<Rational>;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated internal invariant: a bug, not bad input.
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

inline Rational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0)
        throw InputError("rational with zero denominator");
    return Rational(num, den);  // canonicalizes
}

// Strict "p/q" or "p" syntax, optional leading '-'.  Rejects anything else.
Rational parse_rational(const std::string& s);

// Canonical rendering: "p" when q == 1, otherwise "p/q".
std::string to_string(const Rational& q);

inline bool is_zero(const Vec& v) {
    for (const auto& x : v)
        if (x != 0)
            return false;
    return true;
}

inline Vec zero_vec(size_t n) { return Vec(n, Rational(0)); }

inline Vec unit_vec(size_t n, size_t i) {
    Vec v(n, Rational(0));
    v[i] = 1;
    return v;
}

inline void add_scaled(Vec& dst, const Rational& c, const Vec& src) {
    if (c == 0)
        return;
    for (size_t i = 0; i < dst.size(); ++i)
        dst[i] += c * src[i];
}

inline Vec scaled(const Vec& v, const Rational& c) {
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i)
        r[i] = c * v[i];
    return r;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

inline Vec vec_add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] + b[i];
    return r;
}

// Koszul sign for commuting elements of the given degrees.
inline int koszul(int deg_a, int deg_b) {
    return (deg_a % 2 != 0 && deg_b % 2 != 0) ? -1 : 1;
}

inline int parity_sign(long long exponent) { return (exponent % 2 == 0) ? 1 : -1; }

}  // namespace bmt
