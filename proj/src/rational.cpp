#include "eqlearn/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace eqlearn {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && body.front() == '-') {
        negative = true;
        body.remove_prefix(1);
    }
    auto slash = body.find('/');
    std::string_view num = body.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational r(n, d);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

Rational parse_decimal(std::string_view text)
{
    auto dot = text.find('.');
    if (dot == std::string_view::npos)
        return parse_rational(text);
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (negative)
        whole.remove_prefix(1);
    if (whole.empty())
        whole = "0";
    if (!all_digits(whole) || !all_digits(frac))
        throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Rational r(mpz_class(std::string(whole), 10) * scale + mpz_class(std::string(frac), 10), scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& value)
{
    Rational v = value;
    v.canonicalize();
    if (v.get_den() == 1)
        return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

double to_double(const Rational& value) { return value.get_d(); }

Rational pow2(int exponent)
{
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    return exponent < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

mpz_class to_mpz(std::uint64_t value)
{
    mpz_class hi(static_cast<unsigned long>(value >> 32));
    mpz_class lo(static_cast<unsigned long>(value & 0xffffffffu));
    return (hi << 32) + lo;
}

} // namespace eqlearn
