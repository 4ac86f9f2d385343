#include "qwalk/rational.hpp"

#include "qwalk/error.hpp"

#include <cctype>

namespace qwalk {

namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

// cpp_int reads a leading 0 as an octal prefix.
cpp_int decimal_integer(std::string_view digits) {
    const auto first = digits.find_first_not_of('0');
    if (first == std::string_view::npos) return 0;
    return cpp_int{std::string(digits.substr(first))};
}

cpp_int parse_integer(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) {
        throw SchemaError("malformed rational '" + std::string(whole) + "'");
    }
    cpp_int value = decimal_integer(s);
    return negative ? cpp_int(-value) : value;
}

cpp_int pow10(long n) {
    cpp_int p = 1;
    for (long i = 0; i < n; ++i) p *= 10;
    return p;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw SchemaError("empty rational string");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        cpp_int num = parse_integer(s.substr(0, slash), text);
        cpp_int den = parse_integer(s.substr(slash + 1), text);
        if (den == 0) throw SchemaError("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }

    // Decimal with optional fraction and exponent.
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        cpp_int ex = parse_integer(s.substr(e + 1), text);
        if (ex > 400 || ex < -400) throw SchemaError("exponent out of range in '" + std::string(text) + "'");
        exponent = ex.convert_to<long>();
        s = s.substr(0, e);
    }
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    std::string digits;
    long frac_digits = 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot);
        std::string_view fp = s.substr(dot + 1);
        if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) {
            throw SchemaError("malformed decimal '" + std::string(text) + "'");
        }
        digits = std::string(ip) + std::string(fp);
        frac_digits = static_cast<long>(fp.size());
    } else {
        if (!all_digits(s)) throw SchemaError("malformed number '" + std::string(text) + "'");
        digits = std::string(s);
    }
    cpp_int mantissa = decimal_integer(digits);
    if (negative) mantissa = -mantissa;
    long scale = exponent - frac_digits;
    if (scale >= 0) return Rational(mantissa * pow10(scale));
    return Rational(mantissa, pow10(-scale));
}

std::string format_rational(const Rational& value) {
    return boost::multiprecision::numerator(value).str() + "/" + boost::multiprecision::denominator(value).str();
}

}  // namespace qwalk
