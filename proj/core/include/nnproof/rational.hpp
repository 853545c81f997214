#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nnproof {

/// Exact arbitrary-precision rational. All coefficients and bounds use it.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Parses "p", "-p" or "p/q" (q > 0 after normalization). Throws ParseError.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers are printed without denominator.
std::string format_rational(const Rational &value);

/// num/den in lowest terms. mpq_class(num, den) alone does not reduce, and
/// comparisons on unreduced values are unreliable.
inline Rational ratio(long num, long den)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline int sign(const Rational &value) { return sgn(value); }

} // namespace nnproof
