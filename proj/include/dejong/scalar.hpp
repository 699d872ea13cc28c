#ifndef DEJONG_SCALAR_HPP
#define DEJONG_SCALAR_HPP

#include <cmath>
#include <cstdint>

#include "dejong/rational.hpp"

namespace dejong {

// Real-mode comparisons against zero use this tolerance; rational mode
// compares exactly and never consults it.
inline constexpr double kEpsNum = 1e-10;

// Real-mode conditioning groups outcomes by W-value quantized to this grid.
inline constexpr double kGroupQuantum = 1e-12;

inline constexpr std::uint64_t kDefaultMaxOutcomes = std::uint64_t(1) << 24;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static bool is_nonneg(const Rational& x) { return sgn(x) >= 0; }
    static double to_double(const Rational& x) { return x.get_d(); }
    static Rational from_rational(const Rational& q) { return q; }
    static Rational from_ratio(long num, long den) { return make_rational(num, den); }
    static Rational abs(const Rational& x) { return ::abs(x); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static bool is_zero(double x) { return std::fabs(x) <= kEpsNum; }
    static bool is_nonneg(double x) { return x >= -kEpsNum; }
    static double to_double(double x) { return x; }
    static double from_rational(const Rational& q) { return q.get_d(); }
    static double from_ratio(long num, long den) {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static double abs(double x) { return std::fabs(x); }
};

}  // namespace dejong

#endif
