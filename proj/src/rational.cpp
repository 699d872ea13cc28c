#include "dejong/rational.hpp"

#include <cctype>

namespace dejong {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (text.empty()) return std::nullopt;

    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        std::string_view num = text.substr(0, slash);
        std::string_view den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return std::nullopt;
        mpz_class n(std::string(num), 10), d(std::string(den), 10);
        if (d == 0) return std::nullopt;
        Rational q(n, d);
        q.canonicalize();
        if (negative) q = -q;
        return q;
    }

    // Integer or decimal, with optional exponent.
    std::string_view mantissa = text;
    long exponent = 0;
    auto epos = text.find_first_of("eE");
    if (epos != std::string_view::npos) {
        mantissa = text.substr(0, epos);
        std::string_view es = text.substr(epos + 1);
        bool eneg = false;
        if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
            eneg = es.front() == '-';
            es.remove_prefix(1);
        }
        if (!all_digits(es) || es.size() > 6) return std::nullopt;
        exponent = std::stol(std::string(es));
        if (eneg) exponent = -exponent;
    }

    std::string digits;
    long frac_digits = 0;
    auto dot = mantissa.find('.');
    if (dot == std::string_view::npos) {
        if (!all_digits(mantissa)) return std::nullopt;
        digits = std::string(mantissa);
    } else {
        std::string_view ipart = mantissa.substr(0, dot);
        std::string_view fpart = mantissa.substr(dot + 1);
        if (ipart.empty() && fpart.empty()) return std::nullopt;
        if (!ipart.empty() && !all_digits(ipart)) return std::nullopt;
        if (!fpart.empty() && !all_digits(fpart)) return std::nullopt;
        digits = std::string(ipart) + std::string(fpart);
        frac_digits = static_cast<long>(fpart.size());
        if (digits.empty()) return std::nullopt;
    }

    mpz_class n(digits, 10);
    Rational q(n);
    long net = exponent - frac_digits;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
    if (net < 0)
        q /= Rational(scale);
    else
        q *= Rational(scale);
    q.canonicalize();
    if (negative) q = -q;
    return q;
}

}  // namespace dejong
