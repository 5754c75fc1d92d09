#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace pidlat {

// Exact probability arithmetic. All mass bookkeeping stays rational; floats
// appear only at the final entropy/log step.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace detail

// Accepts "3/4", "1", "0.25", with an optional leading sign.
inline Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) throw input_error("empty rational literal: '" + std::string(text) + "'");

    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        if (!detail::all_digits(num) || !detail::all_digits(den))
            throw input_error("malformed rational literal: '" + std::string(text) + "'");
        BigInt d{std::string(den)};
        if (d == 0) throw input_error("rational with zero denominator: '" + std::string(text) + "'");
        value = Rational(BigInt{std::string(num)}, d);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view whole = s.substr(0, dot);
        std::string_view frac = s.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (!detail::all_digits(whole) || (!frac.empty() && !detail::all_digits(frac)))
            throw input_error("malformed decimal literal: '" + std::string(text) + "'");
        BigInt scale = 1;
        for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
        BigInt num = BigInt{std::string(whole)} * scale;
        if (!frac.empty()) num += BigInt{std::string(frac)};
        value = Rational(num, scale);
    } else {
        if (!detail::all_digits(s))
            throw input_error("malformed rational literal: '" + std::string(text) + "'");
        value = Rational(BigInt{std::string(s)});
    }
    if (negative) value = -value;
    return value;
}

inline std::string format_rational(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// -p*log2(p) for one exact mass; p = 1 contributes exactly 0.
inline double entropy_term(const Rational& p) {
    if (p == 0 || p == 1) return 0.0;
    double pd = to_double(p);
    return -pd * std::log2(pd);
}

} // namespace pidlat
