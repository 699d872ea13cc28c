#ifndef DEJONG_RATIONAL_HPP
#define DEJONG_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dejong {

// Exact rational scalar. All identities of the exact engine are asserted
// with equality on this type; it never rounds.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational rational_abs(const Rational& q) { return abs(q); }

// |x| * x, closed over the rationals.
inline Rational theta(const Rational& x) {
    Rational sq = x * x;
    return sgn(x) < 0 ? Rational(-sq) : sq;
}

inline double theta(double x) { return x < 0 ? -(x * x) : x * x; }

inline Rational pow_int(const Rational& base, unsigned k) {
    Rational acc(1);
    for (unsigned i = 0; i < k; ++i) acc *= base;
    return acc;
}

inline double pow_int(double base, unsigned k) {
    double acc = 1.0;
    for (unsigned i = 0; i < k; ++i) acc *= base;
    return acc;
}

// Canonical string form: "num" or "num/den".
inline std::string rational_str(const Rational& q) { return q.get_str(); }

// Accepts "num", "num/den", and exact decimal literals ("-0.25", "1.5e-3").
// Decimals are converted without rounding: 0.1 parses as 1/10.
std::optional<Rational> parse_rational(std::string_view text);

inline Rational parse_rational_or_throw(std::string_view text) {
    auto q = parse_rational(text);
    if (!q) throw std::invalid_argument("not a rational literal: " + std::string(text));
    return *q;
}

}  // namespace dejong

#endif
