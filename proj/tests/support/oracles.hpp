#pragma once

// Independent reference implementations used to cross-check the library.
// Nothing here calls into the code under test except for plain data types.

#include <mulfs/algebra.hpp>
#include <mulfs/partition.hpp>
#include <mulfs/series.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <vector>

namespace oracle {

using mulfs::Rational;

// Truncated scalar power series sum_k c[k] z^k.
using Poly = std::vector<Rational>;

inline Poly multiply(const Poly& a, const Poly& b)
{
    const std::size_t len = std::min(a.size(), b.size());
    Poly out(len);
    for (std::size_t i = 0; i < len; ++i)
        for (std::size_t j = 0; i + j < len; ++j) out[i + j] += a[i] * b[j];
    return out;
}

// a(b(z)) by Horner's rule; b must have zero constant term.
inline Poly substitute(const Poly& a, const Poly& b)
{
    const std::size_t len = std::min(a.size(), b.size());
    Poly out(len);
    for (std::size_t k = a.size(); k-- > 0;) {
        out = multiply(out, b);
        if (k < len) out[0] += a[k];
    }
    return out;
}

// Reciprocal by long division.
inline Poly reciprocal(const Poly& a)
{
    Poly out(a.size());
    for (std::size_t n = 0; n < a.size(); ++n) {
        Rational acc = n == 0 ? Rational(1) : Rational(0);
        for (std::size_t k = 1; k <= n; ++k) acc -= a[k] * out[n - k];
        out[n] = acc / a[0];
    }
    return out;
}

// Compositional inverse by fixed-point iteration g <- (z - (f - f_1 z) o g) / f_1.
inline Poly reversion(const Poly& f)
{
    Poly z(f.size());
    if (f.size() > 1) z[1] = 1;
    Poly higher = f;
    if (higher.size() > 1) higher[1] = 0;
    Poly g = z;
    for (std::size_t it = 0; it < f.size(); ++it) {
        const Poly h = substitute(higher, g);
        for (std::size_t k = 0; k < f.size(); ++k) g[k] = (z[k] - h[k]) / f[1];
    }
    return g;
}

inline mulfs::MFSeries to_series(const Poly& p)
{
    const auto desc = mulfs::AlgebraDescriptor::scalar();
    mulfs::MFSeries s(desc, static_cast<int>(p.size()) - 1);
    for (std::size_t k = 0; k < p.size(); ++k) s[static_cast<int>(k)].raw()[0] = p[k];
    return s;
}

inline Poly to_poly(const mulfs::MFSeries& s)
{
    Poly p;
    for (int k = 0; k <= s.order(); ++k) p.push_back(s[k].raw()[0]);
    return p;
}

// Free cumulants kappa_1..kappa_N of a scalar distribution from moments m_1..m_N
// through m_n = sum_s kappa_s sum_{i_1 + .. + i_s = n - s} m_{i_1} .. m_{i_s}.
inline std::vector<Rational> free_cumulants(const std::vector<Rational>& moments)
{
    const std::size_t len = moments.size();
    Poly m(len + 1);
    m[0] = 1;
    for (std::size_t k = 0; k < len; ++k) m[k + 1] = moments[k];
    std::vector<Rational> kappa(len + 1);
    // powers[s] = M(z)^s, with M = sum m_k z^k.
    std::vector<Poly> powers{Poly(len + 1)};
    powers[0][0] = 1;
    for (std::size_t s = 1; s <= len; ++s) powers.push_back(multiply(powers.back(), m));
    for (std::size_t n = 1; n <= len; ++n) {
        Rational acc = m[n];
        for (std::size_t s = 1; s < n; ++s) acc -= kappa[s] * powers[s][n - s];
        kappa[n] = acc;
    }
    kappa.erase(kappa.begin());
    return kappa;
}

// 2x2 rational matrices, row-major.
using Matrix2 = std::array<Rational, 4>;

inline Matrix2 to_matrix(const mulfs::AlgebraElement& x) { return {x[0], x[1], x[2], x[3]}; }

inline Matrix2 multiply(const Matrix2& a, const Matrix2& b)
{
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline Rational determinant(const Matrix2& a) { return a[0] * a[3] - a[1] * a[2]; }

inline Matrix2 adjugate_inverse(const Matrix2& a)
{
    const Rational det = determinant(a);
    return {a[3] / det, -a[1] / det, -a[2] / det, a[0] / det};
}

// Families of subsets of {1..n} (as bitmasks) filtered by the defining conditions.
namespace detail {

inline std::vector<int> elements(unsigned mask)
{
    std::vector<int> out;
    for (int i = 0; i < 32; ++i)
        if (mask & (1u << i)) out.push_back(i + 1);
    return out;
}

inline bool crossing(unsigned e, unsigned f)
{
    const auto a = elements(e), b = elements(f);
    for (int i1 : a)
        for (int i2 : a)
            for (int j1 : b)
                for (int j2 : b)
                    if (i1 < j1 && j1 < i2 && i2 < j2) return true;
    return false;
}

inline bool nearly_disjoint(unsigned e, unsigned f)
{
    const int min_e = std::countr_zero(e), min_f = std::countr_zero(f);
    const int size_e = std::popcount(e), size_f = std::popcount(f);
    for (int i = 0; i < 32; ++i) {
        if (!((e & f) & (1u << i))) continue;
        const bool first = i == min_e && size_e > 1 && i != min_f;
        const bool second = i != min_e && i == min_f && size_f > 1;
        if (!first && !second) return false;
    }
    return true;
}

inline bool is_interval(unsigned e)
{
    const unsigned shifted = e >> std::countr_zero(e);
    return (shifted & (shifted + 1)) == 0;
}

} // namespace detail

inline std::vector<mulfs::Partition> brute_force(int n, mulfs::PartitionMode mode)
{
    using mulfs::PartitionMode;
    const unsigned full = (1u << n) - 1;
    std::vector<unsigned> candidates;
    for (unsigned s = 1; s <= full; ++s)
        if (mode != PartitionMode::ip || detail::is_interval(s)) candidates.push_back(s);
    auto compatible = [&](unsigned e, unsigned f) {
        if (mode != PartitionMode::ncl && (e & f)) return false;
        if (mode == PartitionMode::ip) return true;
        return !detail::crossing(e, f) && detail::nearly_disjoint(e, f);
    };
    std::vector<mulfs::Partition> out;
    std::vector<unsigned> chosen;
    auto search = [&](auto&& self, std::size_t next, unsigned covered) -> void {
        if (covered == full) {
            mulfs::Partition p{n, {}};
            for (unsigned s : chosen) p.blocks.push_back(detail::elements(s));
            std::sort(p.blocks.begin(), p.blocks.end());
            out.push_back(std::move(p));
        }
        for (std::size_t i = next; i < candidates.size(); ++i) {
            const unsigned s = candidates[i];
            if (!std::all_of(chosen.begin(), chosen.end(), [&](unsigned c) { return compatible(c, s); })) continue;
            chosen.push_back(s);
            self(self, i + 1, covered | s);
            chosen.pop_back();
        }
    };
    search(search, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace oracle
