#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace mulfs {

using Rational = mpq_class;
using Integer = mpz_class;

// Canonical text form "p/q" with q > 0 and gcd(p, q) = 1; integers keep the "/1".
inline std::string to_string(const Rational& q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Accepts "p/q" or "p" with optional sign; the result is reduced.
inline Rational parse_rational(std::string_view text)
{
    auto bad = [&] { return std::invalid_argument("malformed rational \"" + std::string(text) + "\""); };
    if (text.empty()) throw bad();
    const auto slash = text.find('/');
    auto digits_ok = [](std::string_view s, bool allow_sign) {
        if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return true;
    };
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false)) throw bad();
    Integer p(std::string(num.front() == '+' ? num.substr(1) : num), 10);
    Integer q(std::string(den), 10);
    if (q == 0) throw std::invalid_argument("zero denominator in \"" + std::string(text) + "\"");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

inline Rational factorial(int n)
{
    Integer f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return Rational(f);
}

} // namespace mulfs
