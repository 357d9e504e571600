#pragma once

#include "algebra.hpp"
#include "partition.hpp"
#include "series.hpp"

#include <span>
#include <string>
#include <vector>

namespace mulfs {

namespace detail {

inline const MultilinearMap& component(const MFSeries& a, int k)
{
    require_order(a, k, "partition evaluation");
    return a[k];
}

// Rightmost block that is an interval (largest minimum among interval blocks).
inline const Block& rightmost_interval(const Partition& p)
{
    const Block* best = nullptr;
    for (const auto& b : p.blocks)
        if (b.back() - b.front() + 1 == static_cast<int>(b.size()) && (!best || b.front() > best->front())) best = &b;
    if (!best) throw PreconditionViolation("partition " + to_string(p) + " has no interval block");
    return *best;
}

inline std::vector<AlgebraElement> slice(std::span<const AlgebraElement> b, int from, int to)
{
    // 1-based inclusive range b_from .. b_to
    if (to < from) return {};
    return {b.begin() + (from - 1), b.begin() + to};
}

} // namespace detail

// alpha_pi[b_1, ..., b_n] for pi in NC(n + 1).
inline AlgebraElement alpha_bracket(const MFSeries& alpha, const Partition& pi, std::span<const AlgebraElement> b)
{
    const int n = static_cast<int>(b.size());
    if (pi.n != n + 1) throw ArityMismatch("partition of " + std::to_string(pi.n) + " points needs " + std::to_string(pi.n - 1) + " arguments");
    if (pi.blocks.size() == 1) return detail::component(alpha, n)(b);

    const Block& block = detail::rightmost_interval(pi);
    const int m = block.front();
    const int len = static_cast<int>(block.size());
    const Partition rest = restrict_renumber(pi, complement(block, pi.n));
    const auto& inner_map = detail::component(alpha, len - 1);
    if (block.back() == n + 1) {
        const AlgebraElement inner = inner_map(detail::slice(b, m, n));
        return alpha_bracket(alpha, rest, detail::slice(b, 1, m - 2)) * b[static_cast<std::size_t>(m - 2)] * inner;
    }
    std::vector<AlgebraElement> args = detail::slice(b, 1, m - 2);
    args.push_back(b[static_cast<std::size_t>(m - 2)] * inner_map(detail::slice(b, m, m + len - 2)) *
                   b[static_cast<std::size_t>(m + len - 2)]);
    for (auto& x : detail::slice(b, m + len, n)) args.push_back(std::move(x));
    return alpha_bracket(alpha, rest, args);
}

namespace detail {

struct AngleContext {
    std::span<const MFSeries> family;
    std::vector<AlgebraElement> constants;
    std::vector<AlgebraElement> inverses;
};

inline AngleContext make_angle_context(std::span<const MFSeries> family)
{
    AngleContext ctx{family, {}, {}};
    for (const auto& a : family) {
        ctx.constants.push_back(a.constant_term());
        ctx.inverses.push_back(alg_invert(ctx.constants.back()));
    }
    return ctx;
}

inline bool constant_on_blocks(const Partition& pi, const std::vector<int>& iota)
{
    for (const auto& b : pi.blocks)
        for (int x : b)
            if (iota[static_cast<std::size_t>(x - 1)] != iota[static_cast<std::size_t>(b.front() - 1)]) return false;
    return true;
}

inline AlgebraElement angle(const AngleContext& ctx, const Partition& pi, const std::vector<int>& iota, std::span<const AlgebraElement> b)
{
    const int n = static_cast<int>(b.size());
    const auto& desc = ctx.family.front().descriptor();
    if (!constant_on_blocks(pi, iota)) return AlgebraElement::zero(desc);

    auto pick = [&](int position) { return static_cast<std::size_t>(iota[static_cast<std::size_t>(position - 1)] - 1); };
    // Slots b_from .. b_to each multiplied on the right by the constant term of series s.
    auto weighted = [&](int from, int to, std::size_t s) {
        std::vector<AlgebraElement> out;
        for (int j = from; j <= to; ++j) out.push_back(b[static_cast<std::size_t>(j - 1)] * ctx.constants[s]);
        return out;
    };

    if (pi.blocks.size() == 1) {
        const std::size_t s = pick(1);
        return component(ctx.family[s], n)(weighted(1, n, s));
    }
    const Block& block = rightmost_interval(pi);
    const int m = block.front();
    const int len = static_cast<int>(block.size());
    const std::size_t s = pick(m);
    const auto& inner_map = component(ctx.family[s], len - 1);
    const bool doubly = cover_counts(pi)[static_cast<std::size_t>(m)] == 2;

    if (!doubly) {
        const Partition rest = restrict_renumber(pi, complement(block, pi.n));
        std::vector<int> rest_iota;
        for (int j = 1; j <= pi.n; ++j)
            if (j < m || j > block.back()) rest_iota.push_back(iota[static_cast<std::size_t>(j - 1)]);
        if (block.back() == n + 1) {
            const AlgebraElement inner = inner_map(weighted(m, n, s));
            return angle(ctx, rest, rest_iota, slice(b, 1, m - 2)) * b[static_cast<std::size_t>(m - 2)] * inner;
        }
        std::vector<AlgebraElement> args = slice(b, 1, m - 2);
        args.push_back(b[static_cast<std::size_t>(m - 2)] * inner_map(weighted(m, m + len - 2, s)) *
                       b[static_cast<std::size_t>(m + len - 2)]);
        for (auto& x : slice(b, m + len, n)) args.push_back(std::move(x));
        return angle(ctx, rest, rest_iota, args);
    }

    // m is also covered by an earlier block: keep m, drop m+1 .. m+len-1.
    Partition without{pi.n, {}};
    for (const auto& other : pi.blocks)
        if (other != block) without.blocks.push_back(other);
    std::vector<int> keep;
    std::vector<int> rest_iota;
    for (int j = 1; j <= pi.n; ++j)
        if (j <= m || j > block.back()) {
            keep.push_back(j);
            rest_iota.push_back(iota[static_cast<std::size_t>(j - 1)]);
        }
    const Partition rest = restrict_renumber(without, keep);
    std::vector<AlgebraElement> args = slice(b, 1, m - 2);
    args.push_back(b[static_cast<std::size_t>(m - 2)] * inner_map(weighted(m, m + len - 2, s)) * ctx.inverses[s]);
    for (auto& x : slice(b, m + len - 1, n)) args.push_back(std::move(x));
    return angle(ctx, rest, rest_iota, args);
}

} // namespace detail

// alpha^iota_pi<b_1, ..., b_n> for pi in NCL(n + 1); iota takes values in 1..family.size().
inline AlgebraElement alpha_angle_indexed(std::span<const MFSeries> family, const std::vector<int>& iota, const Partition& pi,
                                          std::span<const AlgebraElement> b)
{
    if (family.empty()) throw PreconditionViolation("empty series family");
    if (pi.n != static_cast<int>(b.size()) + 1 || static_cast<int>(iota.size()) != pi.n)
        throw ArityMismatch("partition, index map and arguments disagree in size");
    for (int i : iota)
        if (i < 1 || i > static_cast<int>(family.size())) throw PreconditionViolation("index map value outside the family");
    return detail::angle(detail::make_angle_context(family), pi, iota, b);
}

// alpha_pi<b_1, ..., b_n> for pi in NCL(n + 1); needs an invertible constant term.
inline AlgebraElement alpha_angle(const MFSeries& alpha, const Partition& pi, std::span<const AlgebraElement> b)
{
    return alpha_angle_indexed(std::span<const MFSeries>(&alpha, 1), std::vector<int>(static_cast<std::size_t>(pi.n), 1), pi, b);
}

namespace detail {

inline std::vector<AlgebraElement> basis_args(const AlgebraDescriptor& desc, const std::vector<std::size_t>& tuple)
{
    std::vector<AlgebraElement> args;
    for (auto a : tuple) args.push_back(AlgebraElement::basis(desc, a));
    return args;
}

} // namespace detail

// Moments from the R-transform: sum of alpha_pi[...] over NC(n + 1).
inline MFSeries moments_from_r(const MFSeries& alpha, int order)
{
    detail::require_order(alpha, order, "moments from R-transform");
    const auto& desc = alpha.descriptor();
    MFSeries out(desc, order);
    for (int n = 0; n <= order; ++n) {
        const auto parts = enumerate(n + 1, PartitionMode::nc);
        out[n] = tabulate(desc, n, [&](const std::vector<std::size_t>& tuple) {
            const auto args = detail::basis_args(desc, tuple);
            AlgebraElement acc = AlgebraElement::zero(desc);
            for (const auto& pi : parts) acc += alpha_bracket(alpha, pi, args);
            return acc;
        });
    }
    return out;
}

// Moments from the T-transform: sum of alpha_pi<...> over NCL(n + 1).
inline MFSeries moments_from_t(const MFSeries& alpha, int order)
{
    detail::require_order(alpha, order, "moments from T-transform");
    const auto& desc = alpha.descriptor();
    const auto ctx = detail::make_angle_context(std::span<const MFSeries>(&alpha, 1));
    MFSeries out(desc, order);
    for (int n = 0; n <= order; ++n) {
        const auto parts = enumerate(n + 1, PartitionMode::ncl);
        const std::vector<int> iota(static_cast<std::size_t>(n) + 1, 1);
        out[n] = tabulate(desc, n, [&](const std::vector<std::size_t>& tuple) {
            const auto args = detail::basis_args(desc, tuple);
            AlgebraElement acc = AlgebraElement::zero(desc);
            for (const auto& pi : parts) acc += detail::angle(ctx, pi, iota, args);
            return acc;
        });
    }
    return out;
}

inline MFSeries r_inverse(const MFSeries& rt, int order) { return moments_from_r(rt, order); }
inline MFSeries t_inverse(const MFSeries& tt, int order) { return moments_from_t(tt, order); }

// ((1 + beta I)^{-1} beta) o (I + I beta I)^{<-1>}
inline MFSeries r_transform(const MFSeries& beta)
{
    const auto& desc = beta.descriptor();
    const int n = beta.order();
    const MFSeries id = MFSeries::identity(desc, n);
    const MFSeries one = MFSeries::one(desc, n);
    const MFSeries outer = series_mul_inverse(one + beta * id) * beta;
    return series_compose(outer, series_comp_inverse(id + id * beta * id));
}

// The defining relation (I + I beta I)^{<-1>} = (1 + I rt)^{-1} I.
inline bool r_characterization_holds(const MFSeries& beta, const MFSeries& rt)
{
    const auto& desc = beta.descriptor();
    const int n = std::min(beta.order(), rt.order());
    const MFSeries b = beta.truncated(n), r = rt.truncated(n);
    const MFSeries id = MFSeries::identity(desc, n);
    const MFSeries one = MFSeries::one(desc, n);
    return series_comp_inverse(id + id * b * id) == series_mul_inverse(one + id * r) * id;
}

// (beta o (I beta)^{<-1>}) (1 + I)^{-1}
inline MFSeries t_transform(const MFSeries& beta)
{
    const auto& desc = beta.descriptor();
    const int n = beta.order();
    const MFSeries id = MFSeries::identity(desc, n);
    const MFSeries one = MFSeries::one(desc, n);
    if (n >= 1) {
        try {
            alg_invert(beta.constant_term());
        } catch (const SingularError&) {
            throw SingularError("T-transform needs an invertible constant term");
        }
    }
    return series_compose(beta, series_comp_inverse(id * beta)) * series_mul_inverse(one + id);
}

// The defining relation (tt o (I beta)) (1 + I beta) = beta.
inline bool t_characterization_holds(const MFSeries& beta, const MFSeries& tt)
{
    const auto& desc = beta.descriptor();
    const int n = std::min(beta.order(), tt.order());
    const MFSeries b = beta.truncated(n), t = tt.truncated(n);
    const MFSeries id = MFSeries::identity(desc, n);
    const MFSeries one = MFSeries::one(desc, n);
    return series_compose(t, id * b) * (one + id * b) == b;
}

inline MFSeries s_transform(const MFSeries& beta) { return series_mul_inverse(t_transform(beta)); }

inline MFSeries free_additive_convolution(const MFSeries& beta1, const MFSeries& beta2, int order)
{
    return r_inverse(r_transform(beta1) + r_transform(beta2), order);
}

// (t_x o (t_y I t_y^{-1})) t_y
inline MFSeries twisted_t_product(const MFSeries& tx, const MFSeries& ty)
{
    const auto& desc = tx.descriptor();
    const int n = std::min(tx.order(), ty.order());
    const MFSeries id = MFSeries::identity(desc, n);
    const MFSeries twist = ty.truncated(n) * id * series_mul_inverse(ty.truncated(n));
    return series_compose(tx.truncated(n), twist) * ty.truncated(n);
}

inline MFSeries free_multiplicative_convolution(const MFSeries& beta1, const MFSeries& beta2, int order)
{
    return t_inverse(twisted_t_product(t_transform(beta1), t_transform(beta2)), order);
}

// ---------------------------------------------------------------------------
// Scalar case

// sum over NCL(n) of a_0^{n - |pi|} prod_B a_{|B| - 1}.
inline Rational scalar_moments(const std::vector<Rational>& alpha, int n)
{
    if (alpha.empty() || sgn(alpha.front()) == 0) throw PreconditionViolation("scalar moments need a nonzero constant coefficient");
    if (static_cast<int>(alpha.size()) < n) throw TruncationError("scalar moments of order " + std::to_string(n) + " need " + std::to_string(n) + " coefficients");
    std::vector<Rational> powers{Rational(1)};
    for (int k = 1; k <= n; ++k) powers.push_back(powers.back() * alpha.front());
    Rational total = 0;
    for_each_partition(n, PartitionMode::ncl, [&](const Partition& pi) {
        Rational term = powers[static_cast<std::size_t>(n - static_cast<int>(pi.size()))];
        for (const auto& b : pi.blocks) term *= alpha[b.size() - 1];
        total += term;
    });
    return total;
}

// Coefficients w^0 .. w^count-1 of (1 - w - sqrt(1 - 6w + w^2)) / (2w).
inline std::vector<Rational> schroder_generating_function(int count)
{
    const int len = count + 1;
    std::vector<Rational> f(static_cast<std::size_t>(len));
    f[0] = 1;
    if (len > 1) f[1] = -6;
    if (len > 2) f[2] = 1;
    std::vector<Rational> root(static_cast<std::size_t>(len));
    root[0] = 1;
    for (int k = 1; k < len; ++k) {
        Rational acc = f[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j) acc -= root[static_cast<std::size_t>(j)] * root[static_cast<std::size_t>(k - j)];
        root[static_cast<std::size_t>(k)] = acc / 2;
    }
    std::vector<Rational> out;
    for (int k = 0; k < count; ++k) {
        Rational numerator = -root[static_cast<std::size_t>(k + 1)];
        if (k == 0) numerator -= 1;
        out.push_back(numerator / 2);
    }
    return out;
}

struct IdentityCheck {
    std::string identity;
    int n = 0;
    Integer expected;
    Rational actual;
    bool pass = false;
};

// For n = 1..max_n compares r_{n-1} with |NCL(n)|, the all-ones scalar moment, the
// generating-function coefficient, and the Catalan-weighted sum over NC(n).
inline std::vector<IdentityCheck> schroder_identities(int max_n)
{
    if (max_n < 1 || max_n > max_enumeration_n)
        throw SizeGuardExceeded("identity checks are limited to 1 <= n <= " + std::to_string(max_enumeration_n));
    std::vector<IdentityCheck> report;
    const auto series = schroder_generating_function(max_n);
    const std::vector<Rational> ones(static_cast<std::size_t>(max_n), Rational(1));
    auto record = [&](std::string name, int n, const Rational& actual) {
        const Integer expected = schroder(n - 1);
        report.push_back({std::move(name), n, expected, actual, actual == Rational(expected)});
    };
    for (int n = 1; n <= max_n; ++n) {
        record("ncl-count", n, Rational(Integer(std::to_string(count_partitions(n, PartitionMode::ncl)))));
        record("scalar-moments", n, scalar_moments(ones, n));
        record("generating-function", n, series[static_cast<std::size_t>(n - 1)]);
        Integer sum = 0;
        for (const auto& [sigma, weight] : ncl_by_sigma(n)) sum += weight;
        record("catalan-sum", n, Rational(sum));
    }
    return report;
}

} // namespace mulfs
