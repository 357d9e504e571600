#pragma once

#include "rational.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace mulfs {

// Dense square matrix over the rationals, row-major.
class RationalMatrix {
public:
    explicit RationalMatrix(std::size_t size) : size_(size), entries_(size * size) {}

    static RationalMatrix identity(std::size_t size)
    {
        RationalMatrix m(size);
        for (std::size_t i = 0; i < size; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t size() const noexcept { return size_; }
    Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * size_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return entries_[r * size_ + c]; }

    std::vector<Rational> apply(const std::vector<Rational>& x) const
    {
        std::vector<Rational> y(size_);
        for (std::size_t r = 0; r < size_; ++r)
            for (std::size_t c = 0; c < size_; ++c)
                if (sgn(x[c]) != 0) y[r] += (*this)(r, c) * x[c];
        return y;
    }

    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

private:
    std::size_t size_;
    std::vector<Rational> entries_;
};

// Gauss-Jordan elimination with first-nonzero pivoting; nullopt when singular.
inline std::optional<RationalMatrix> inverse(RationalMatrix a)
{
    const std::size_t n = a.size();
    RationalMatrix inv = RationalMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && sgn(a(pivot, col)) == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        if (pivot != col)
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a(pivot, c), a(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        const Rational scale = 1 / a(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            a(col, c) *= scale;
            inv(col, c) *= scale;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || sgn(a(r, col)) == 0) continue;
            const Rational factor = a(r, col);
            for (std::size_t c = 0; c < n; ++c) {
                a(r, c) -= factor * a(col, c);
                inv(r, c) -= factor * inv(col, c);
            }
        }
    }
    return inv;
}

} // namespace mulfs
