#include "nnproof/rational.hpp"

#include <cctype>

namespace nnproof {

namespace {

bool is_integer_literal(std::string_view text)
{
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '-' || text[i] == '+'))
        ++i;
    if (i == text.size())
        return false;
    for (; i < text.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            return false;
    return true;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    const auto slash = text.find('/');
    const auto numerator = text.substr(0, slash);
    if (!is_integer_literal(numerator))
        throw ParseError("invalid rational '" + std::string(text) + "'");

    std::string num(numerator);
    if (num.front() == '+')
        num.erase(0, 1);
    Rational result;
    if (slash == std::string_view::npos) {
        result = mpz_class(num);
        return result;
    }
    const auto denominator = text.substr(slash + 1);
    if (!is_integer_literal(denominator) || denominator.front() == '-' || denominator.front() == '+')
        throw ParseError("invalid rational '" + std::string(text) + "'");
    const mpz_class den{std::string(denominator)};
    if (den == 0)
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    result = Rational(mpz_class(num), den);
    result.canonicalize();
    return result;
}

std::string format_rational(const Rational &value)
{
    // mpq get_str already omits a unit denominator.
    return value.get_str();
}

} // namespace nnproof
