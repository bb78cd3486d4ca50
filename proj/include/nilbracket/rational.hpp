#pragma once

// Exact rational scalars and the nearest-integer bracket.
//
// Rational is GMP's canonical mpq (coprime numerator/denominator, positive
// denominator). All operations in this library are exact; doubles appear only
// as advisory renderings and never feed back into computations.

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nilbracket {

using Int = mpz_class;
using Rational = mpq_class;

// num/den with canonicalization (the raw two-argument mpq_class constructor
// leaves the fraction unreduced).
inline Rational make_rational(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
    Rational r(static_cast<long>(num), static_cast<long>(den));
    r.canonicalize();
    return r;
}

inline Rational make_rational(const Int& num, const Int& den) {
    if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
    Rational r(num);
    Rational d(den);
    return Rational(r / d);
}

// Accepts "p", "-p", "p/q" with arbitrary-precision parts. Rejects anything
// else, including zero denominators.
inline Rational parse_rational(const std::string& text) {
    std::size_t begin = 0, end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    const std::string s = text.substr(begin, end - begin);

    auto is_integer = [](const std::string& t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };

    const std::size_t slash = s.find('/');
    std::string num_part = (slash == std::string::npos) ? s : s.substr(0, slash);
    std::string den_part = (slash == std::string::npos) ? "1" : s.substr(slash + 1);
    if (!is_integer(num_part) || !is_integer(den_part))
        throw std::invalid_argument("parse_rational: malformed rational '" + text + "'");
    if (!num_part.empty() && num_part[0] == '+') num_part.erase(0, 1);
    if (!den_part.empty() && den_part[0] == '+') den_part.erase(0, 1);

    Int num(num_part), den(den_part);
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator in '" + text + "'");
    return make_rational(num, den);
}

// Canonical "p" or "p/q" form; round-trips exactly through parse_rational.
inline std::string to_string(const Rational& x) { return x.get_str(); }

inline std::string to_string(const Int& x) { return x.get_str(); }

inline double to_double(const Rational& x) { return x.get_d(); }

inline Int floor_int(const Rational& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), mpq_numref(x.get_mpq_t()), mpq_denref(x.get_mpq_t()));
    return q;
}

// Minimum integer m with |x - m| = dist_to_int(x); half-integer ties resolve
// to the smaller integer, so the residual x - nearest_int(x) lies in (-1/2, 1/2].
inline Int nearest_int(const Rational& x) {
    Int fl = floor_int(x);
    Rational frac = x - Rational(fl);
    if (2 * frac > 1) return Int(fl + 1);
    return fl;
}

// Distance from x to the nearest integer, in [0, 1/2].
inline Rational dist_to_int(const Rational& x) {
    Rational r = x - Rational(nearest_int(x));
    return Rational(abs(r));
}

// Fractional residual x - nearest_int(x), in (-1/2, 1/2].
inline Rational bracket_residual(const Rational& x) {
    return Rational(x - Rational(nearest_int(x)));
}

// Representative of x mod 1 in [0, 1).
inline Rational mod_one(const Rational& x) {
    return Rational(x - Rational(floor_int(x)));
}

inline Int factorial(unsigned k) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), k);
    return f;
}

// Polynomial binomial n(n-1)...(n-k+1)/k!, an integer for every integer n,
// negative n included (e.g. binomial(-5, 2) = 15).
inline Int binomial(const Int& n, unsigned k) {
    if (k == 0) return Int(1);
    Int prod(1);
    for (unsigned t = 0; t < k; ++t) prod *= n - static_cast<long>(t);
    Int result;
    Int fact = factorial(k);
    mpz_divexact(result.get_mpz_t(), prod.get_mpz_t(), fact.get_mpz_t());
    return result;
}

inline Int binomial(long long n, unsigned k) { return binomial(Int(static_cast<long>(n)), k); }

inline Int int_pow(const Int& base, unsigned p) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), p);
    return r;
}

inline Rational rational_pow(const Rational& base, unsigned p) {
    Rational r(1);
    for (unsigned t = 0; t < p; ++t) r *= base;
    return r;
}

}  // namespace nilbracket
