#include "patlake/rational.hpp"

#include "patlake/error.hpp"

namespace patlake {
namespace {

// Decimal digits only; the string constructor reads a leading 0 as octal.
boost::multiprecision::cpp_int decimal_int(std::string_view digits) {
    auto nz = digits.find_first_not_of('0');
    return nz == std::string_view::npos ? boost::multiprecision::cpp_int(0)
                                        : boost::multiprecision::cpp_int(std::string(digits.substr(nz)));
}

}  // namespace

std::string to_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

Rational parse_rational(std::string_view text) {
    auto bad = [&] { return Error(ErrorCode::Format, "malformed rational '" + std::string(text) + "'"); };
    auto parse_int = [&](std::string_view s) {
        std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
        if (s.size() == start) throw bad();
        for (std::size_t i = start; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') throw bad();
        boost::multiprecision::cpp_int v = decimal_int(s.substr(start));
        return start ? boost::multiprecision::cpp_int(-v) : v;
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    auto num = parse_int(text.substr(0, slash));
    auto den = parse_int(text.substr(slash + 1));
    if (den <= 0) throw bad();
    return Rational(num, den);
}

Rational parse_decimal(std::string_view text) {
    auto dot = text.find('.');
    if (dot == std::string_view::npos) return parse_rational(text);
    auto bad = [&] { return Error(ErrorCode::Format, "malformed number '" + std::string(text) + "'"); };
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (negative) whole.remove_prefix(1);
    if (whole.empty() && frac.empty()) throw bad();
    std::string digits = std::string(whole) + std::string(frac);
    for (char c : digits)
        if (c < '0' || c > '9') throw bad();
    boost::multiprecision::cpp_int num = decimal_int(digits);
    boost::multiprecision::cpp_int den = boost::multiprecision::pow(boost::multiprecision::cpp_int(10),
                                                                    static_cast<unsigned>(frac.size()));
    Rational r(num, den);
    return negative ? Rational(-r) : r;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace patlake
