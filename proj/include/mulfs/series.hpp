#pragma once

#include "algebra.hpp"
#include "errors.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mulfs {

inline constexpr std::size_t default_max_cells = std::size_t{1} << 20;

// Largest table (number of basis tuples) a single component may hold.
// MULFFS_MAX_CELLS overrides the default.
inline std::size_t max_cells()
{
    if (const char* env = std::getenv("MULFFS_MAX_CELLS")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return default_max_cells;
}

// d^k, refusing results above the cell cap.
inline std::size_t tuple_count(std::size_t d, int k)
{
    const std::size_t cap = max_cells();
    std::size_t n = 1;
    for (int i = 0; i < k; ++i) {
        if (n > cap / d) throw SizeGuardExceeded("dense table " + std::to_string(d) + "^" + std::to_string(k) +
                                                  " exceeds the cell cap " + std::to_string(cap));
        n *= d;
    }
    return n;
}

inline std::size_t tuple_index(std::span<const std::size_t> tuple, std::size_t d)
{
    std::size_t idx = 0;
    for (auto i : tuple) idx = idx * d + i;
    return idx;
}

inline std::vector<std::size_t> tuple_digits(std::size_t idx, int k, std::size_t d)
{
    std::vector<std::size_t> t(static_cast<std::size_t>(k));
    for (int j = k - 1; j >= 0; --j) {
        t[static_cast<std::size_t>(j)] = idx % d;
        idx /= d;
    }
    return t;
}

// A k-linear map B^k -> B stored by its values on basis tuples, row-major.
class MultilinearMap {
public:
    MultilinearMap(AlgebraDescriptor desc, int degree)
        : desc_(std::move(desc)), degree_(degree), size_(tuple_count(desc_.dim(), degree)), values_(size_ * desc_.dim())
    {
        if (degree < 0) throw PreconditionViolation("negative degree");
    }

    const AlgebraDescriptor& descriptor() const noexcept { return desc_; }
    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return size_; }

    AlgebraElement value(std::size_t tuple) const
    {
        const std::size_t d = desc_.dim();
        return {desc_, std::vector<Rational>(values_.begin() + static_cast<std::ptrdiff_t>(tuple * d),
                                             values_.begin() + static_cast<std::ptrdiff_t>((tuple + 1) * d))};
    }

    void set(std::size_t tuple, const AlgebraElement& v)
    {
        require_same(desc_, v.descriptor());
        std::copy(v.coords().begin(), v.coords().end(), values_.begin() + static_cast<std::ptrdiff_t>(tuple * desc_.dim()));
    }

    const std::vector<Rational>& raw() const noexcept { return values_; }
    std::vector<Rational>& raw() noexcept { return values_; }

    AlgebraElement operator()(std::span<const AlgebraElement> args) const
    {
        if (static_cast<int>(args.size()) != degree_)
            throw ArityMismatch("degree " + std::to_string(degree_) + " map applied to " + std::to_string(args.size()) +
                                " arguments");
        const std::size_t d = desc_.dim();
        if (degree_ == 0) return value(0);
        // Contract one argument at a time against the leading tuple index.
        std::vector<Rational> current;
        const std::vector<Rational>* src = &values_;
        std::size_t stride = values_.size() / d;
        for (const auto& x : args) {
            require_same(desc_, x.descriptor());
            std::vector<Rational> next(stride);
            for (std::size_t a = 0; a < d; ++a) {
                if (sgn(x[a]) == 0) continue;
                const std::size_t base = a * stride;
                for (std::size_t r = 0; r < stride; ++r)
                    if (sgn((*src)[base + r]) != 0) next[r] += x[a] * (*src)[base + r];
            }
            current = std::move(next);
            src = &current;
            stride /= d;
        }
        return {desc_, std::move(current)};
    }

    AlgebraElement operator()(std::initializer_list<AlgebraElement> args) const
    {
        return (*this)(std::span<const AlgebraElement>(args.begin(), args.size()));
    }

    bool is_zero() const
    {
        return std::all_of(values_.begin(), values_.end(), [](const Rational& q) { return sgn(q) == 0; });
    }

    MultilinearMap& operator+=(const MultilinearMap& o)
    {
        check_compatible(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    MultilinearMap& operator-=(const MultilinearMap& o)
    {
        check_compatible(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
        return *this;
    }
    MultilinearMap& operator*=(const Rational& q)
    {
        for (auto& v : values_) v *= q;
        return *this;
    }

    friend bool operator==(const MultilinearMap& a, const MultilinearMap& b)
    {
        return a.desc_ == b.desc_ && a.degree_ == b.degree_ && a.values_ == b.values_;
    }

private:
    void check_compatible(const MultilinearMap& o) const
    {
        require_same(desc_, o.desc_);
        if (degree_ != o.degree_) throw ArityMismatch("degree mismatch in multilinear map arithmetic");
    }

    AlgebraDescriptor desc_;
    int degree_;
    std::size_t size_;
    std::vector<Rational> values_;
};

inline AlgebraElement eval_multilinear(const MultilinearMap& map, std::span<const AlgebraElement> args) { return map(args); }

// Builds a degree-k map from f(tuple digits) evaluated on every basis tuple.
template <class F>
MultilinearMap tabulate(const AlgebraDescriptor& desc, int k, F&& f)
{
    MultilinearMap out(desc, k);
    std::vector<std::size_t> digits(static_cast<std::size_t>(k), 0);
    const std::size_t d = desc.dim();
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        out.set(idx, f(std::as_const(digits)));
        for (int j = k - 1; j >= 0; --j) {
            auto& digit = digits[static_cast<std::size_t>(j)];
            if (++digit < d) break;
            digit = 0;
        }
    }
    return out;
}

// Truncated series (alpha_0, ..., alpha_N).
class MFSeries {
public:
    MFSeries(AlgebraDescriptor desc, int order) : desc_(std::move(desc))
    {
        if (order < 0) throw PreconditionViolation("negative truncation order");
        components_.reserve(static_cast<std::size_t>(order) + 1);
        for (int k = 0; k <= order; ++k) components_.emplace_back(desc_, k);
    }

    static MFSeries zero(const AlgebraDescriptor& desc, int order) { return {desc, order}; }
    static MFSeries constant(const AlgebraElement& b, int order)
    {
        MFSeries s(b.descriptor(), order);
        s[0].set(0, b);
        return s;
    }
    static MFSeries one(const AlgebraDescriptor& desc, int order) { return constant(AlgebraElement::unit(desc), order); }

    // I = (0, id, 0, ...).
    static MFSeries identity(const AlgebraDescriptor& desc, int order)
    {
        MFSeries s(desc, order);
        if (order >= 1)
            for (std::size_t a = 0; a < desc.dim(); ++a) s[1].set(a, AlgebraElement::basis(desc, a));
        return s;
    }

    const AlgebraDescriptor& descriptor() const noexcept { return desc_; }
    int order() const noexcept { return static_cast<int>(components_.size()) - 1; }

    const MultilinearMap& operator[](int k) const { return components_.at(static_cast<std::size_t>(k)); }
    MultilinearMap& operator[](int k) { return components_.at(static_cast<std::size_t>(k)); }

    AlgebraElement constant_term() const { return components_.front().value(0); }

    MFSeries truncated(int order) const
    {
        if (order > this->order()) throw TruncationError("cannot raise truncation order");
        MFSeries s(desc_, order);
        for (int k = 0; k <= order; ++k) s[k] = (*this)[k];
        return s;
    }

    friend bool operator==(const MFSeries& a, const MFSeries& b)
    {
        return a.desc_ == b.desc_ && a.components_ == b.components_;
    }

private:
    AlgebraDescriptor desc_;
    std::vector<MultilinearMap> components_;
};

namespace detail {

inline void require_order(const MFSeries& a, int n, const char* what)
{
    if (a.order() < n)
        throw TruncationError(std::string(what) + " needs component " + std::to_string(n) + " but the series has order " +
                              std::to_string(a.order()));
}

inline std::size_t ipow(std::size_t d, int k)
{
    std::size_t r = 1;
    for (int i = 0; i < k; ++i) r *= d;
    return r;
}

// Ordered compositions (p_1, ..., p_k) of n with every p_i >= 1.
inline std::vector<std::vector<int>> compositions(int n)
{
    std::vector<std::vector<int>> out;
    if (n <= 0) return out;
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        std::vector<int> parts{1};
        for (int i = 0; i < n - 1; ++i) {
            if (mask & (1u << i))
                parts.push_back(1);
            else
                ++parts.back();
        }
        out.push_back(std::move(parts));
    }
    return out;
}

// Values beta_{p_j}(e_t[block j]) for the blocks of a composition of a degree-n tuple index.
inline std::vector<AlgebraElement> block_values(const std::vector<const MultilinearMap*>& inner, const std::vector<int>& parts,
                                                std::size_t tuple, int n, std::size_t d)
{
    std::vector<AlgebraElement> vals;
    vals.reserve(parts.size());
    int end = 0;
    for (std::size_t j = 0; j < parts.size(); ++j) {
        end += parts[j];
        const std::size_t sub = (tuple / ipow(d, n - end)) % ipow(d, parts[j]);
        vals.push_back(inner[static_cast<std::size_t>(parts[j])]->value(sub));
    }
    return vals;
}

} // namespace detail

inline MFSeries series_sum(const MFSeries& a, const MFSeries& b)
{
    require_same(a.descriptor(), b.descriptor());
    MFSeries s(a.descriptor(), std::min(a.order(), b.order()));
    for (int k = 0; k <= s.order(); ++k) {
        s[k] = a[k];
        s[k] += b[k];
    }
    return s;
}

inline MFSeries series_difference(const MFSeries& a, const MFSeries& b)
{
    require_same(a.descriptor(), b.descriptor());
    MFSeries s(a.descriptor(), std::min(a.order(), b.order()));
    for (int k = 0; k <= s.order(); ++k) {
        s[k] = a[k];
        s[k] -= b[k];
    }
    return s;
}

inline MFSeries scaled(MFSeries a, const Rational& q)
{
    for (int k = 0; k <= a.order(); ++k) a[k] *= q;
    return a;
}

// (a b)_n(b_1..b_n) = sum_k a_k(b_1..b_k) b_{n-k}(b_{k+1}..b_n)
inline MFSeries series_product(const MFSeries& a, const MFSeries& b)
{
    require_same(a.descriptor(), b.descriptor());
    const auto& desc = a.descriptor();
    const std::size_t d = desc.dim();
    MFSeries s(desc, std::min(a.order(), b.order()));
    for (int n = 0; n <= s.order(); ++n) {
        auto& out = s[n];
        for (std::size_t t = 0; t < out.size(); ++t) {
            AlgebraElement acc = AlgebraElement::zero(desc);
            for (int k = 0; k <= n; ++k) {
                const std::size_t split = detail::ipow(d, n - k);
                multiply_accumulate(acc, a[k].value(t / split), b[n - k].value(t % split));
            }
            out.set(t, acc);
        }
    }
    return s;
}

inline MFSeries operator+(const MFSeries& a, const MFSeries& b) { return series_sum(a, b); }
inline MFSeries operator-(const MFSeries& a, const MFSeries& b) { return series_difference(a, b); }
inline MFSeries operator-(const MFSeries& a) { return scaled(a, Rational(-1)); }
inline MFSeries operator*(const MFSeries& a, const MFSeries& b) { return series_product(a, b); }

inline MFSeries series_compose(const MFSeries& a, const MFSeries& b)
{
    require_same(a.descriptor(), b.descriptor());
    if (!b[0].is_zero()) throw NonzeroConstantTerm("composition requires an inner series with zero constant term");
    const auto& desc = a.descriptor();
    const std::size_t d = desc.dim();
    MFSeries s(desc, std::min(a.order(), b.order()));
    s[0] = a[0];
    std::vector<const MultilinearMap*> inner;
    for (int p = 0; p <= s.order(); ++p) inner.push_back(&b[p]);
    for (int n = 1; n <= s.order(); ++n) {
        const auto comps = detail::compositions(n);
        auto& out = s[n];
        for (std::size_t t = 0; t < out.size(); ++t) {
            AlgebraElement acc = AlgebraElement::zero(desc);
            for (const auto& parts : comps) {
                const auto vals = detail::block_values(inner, parts, t, n, d);
                if (std::any_of(vals.begin(), vals.end(), [](const AlgebraElement& v) { return v.is_zero(); })) continue;
                acc += a[static_cast<int>(parts.size())](vals);
            }
            out.set(t, acc);
        }
    }
    return s;
}

// Left inverse by the recursion a'_n = -sum_{k<n} a'_k a_{n-k} a_0^{-1}; it is two-sided.
inline MFSeries series_mul_inverse(const MFSeries& a)
{
    const auto& desc = a.descriptor();
    const std::size_t d = desc.dim();
    const AlgebraElement inv0 = alg_invert(a.constant_term());
    MFSeries s(desc, a.order());
    s[0].set(0, inv0);
    for (int n = 1; n <= a.order(); ++n) {
        auto& out = s[n];
        for (std::size_t t = 0; t < out.size(); ++t) {
            AlgebraElement acc = AlgebraElement::zero(desc);
            for (int k = 0; k < n; ++k) {
                const std::size_t split = detail::ipow(d, n - k);
                multiply_accumulate(acc, s[k].value(t / split), a[n - k].value(t % split));
            }
            out.set(t, -(acc * inv0));
        }
    }
    return s;
}

inline MFSeries series_comp_inverse(const MFSeries& a)
{
    if (!a[0].is_zero()) throw NonzeroConstantTerm("composition inverse requires zero constant term");
    detail::require_order(a, 1, "composition inverse");
    const auto& desc = a.descriptor();
    const std::size_t d = desc.dim();
    RationalMatrix linear(d);
    for (std::size_t c = 0; c < d; ++c) {
        const auto col = a[1].value(c);
        for (std::size_t r = 0; r < d; ++r) linear(r, c) = col[r];
    }
    const auto linear_inv = inverse(linear);
    if (!linear_inv) throw NotCompInvertible("linear part of the series is singular");

    MFSeries s(desc, a.order());
    for (std::size_t c = 0; c < d; ++c) {
        std::vector<Rational> col(d);
        for (std::size_t r = 0; r < d; ++r) col[r] = (*linear_inv)(r, c);
        s[1].set(c, AlgebraElement(desc, std::move(col)));
    }
    std::vector<const MultilinearMap*> inner;
    for (int p = 0; p <= a.order(); ++p) inner.push_back(&s[p]);
    for (int n = 2; n <= a.order(); ++n) {
        const auto comps = detail::compositions(n);
        auto& out = s[n];
        for (std::size_t t = 0; t < out.size(); ++t) {
            AlgebraElement acc = AlgebraElement::zero(desc);
            for (const auto& parts : comps) {
                if (parts.size() < 2) continue;
                const auto vals = detail::block_values(inner, parts, t, n, d);
                acc += a[static_cast<int>(parts.size())](vals);
            }
            out.set(t, -AlgebraElement(desc, linear_inv->apply(acc.coords())));
        }
    }
    return s;
}

// Least n with a nonzero component; nullopt when every retained component vanishes.
inline std::optional<int> lower_degree(const MFSeries& a)
{
    for (int k = 0; k <= a.order(); ++k)
        if (!a[k].is_zero()) return k;
    return std::nullopt;
}

} // namespace mulfs
