#include "gale/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

namespace gale {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Rational pow10(long e) {
    Integer p = 1;
    for (long i = 0; i < (e < 0 ? -e : e); ++i) p *= 10;
    return e < 0 ? Rational(1, p) : Rational(p);
}

// Decimal literal with optional sign, fraction part and exponent, converted exactly.
Rational parse_decimal(std::string_view s) {
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = s.substr(e + 1);
        s = s.substr(0, e);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (!all_digits(exp_text) || exp_text.size() > 6)
            throw std::invalid_argument("bad exponent");
        std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
        if (exp_negative) exponent = -exponent;
    }
    std::string_view int_part = s, frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        int_part = s.substr(0, dot);
        frac_part = s.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) throw std::invalid_argument("empty number");
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
        throw std::invalid_argument("not a number");
    std::string digits(int_part);
    digits += frac_part;
    // A leading zero would make the string constructor read octal.
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
    Integer mantissa(digits.empty() ? std::string("0") : digits);
    Rational value = Rational(mantissa) * pow10(exponent - static_cast<long>(frac_part.size()));
    return negative ? Rational(-value) : value;
}

} // namespace

bool is_fraction_literal(std::string_view text) {
    return trim(text).find('/') != std::string_view::npos;
}

Rational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty literal");
    try {
        if (auto slash = s.find('/'); slash != std::string_view::npos) {
            Rational num = parse_decimal(trim(s.substr(0, slash)));
            Rational den = parse_decimal(trim(s.substr(slash + 1)));
            if (den == 0) throw std::invalid_argument("zero denominator");
            return num / den;
        }
        return parse_decimal(s);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed numeric literal '" + std::string(s) + "'");
    }
}

std::string to_string(const Rational& q) { return q.str(); }

std::string to_string(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

} // namespace gale
