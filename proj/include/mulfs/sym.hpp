#pragma once

#include "series.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace mulfs {

// Average over all permutations of the arguments.
inline MultilinearMap symmetrize(const MultilinearMap& map)
{
    const int k = map.degree();
    if (k <= 1) return map;
    const auto& desc = map.descriptor();
    const std::size_t d = desc.dim();
    const Rational weight = 1 / factorial(k);
    return tabulate(desc, k, [&](const std::vector<std::size_t>& tuple) {
        std::vector<int> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<std::size_t> permuted(tuple.size());
        AlgebraElement acc = AlgebraElement::zero(desc);
        do {
            for (std::size_t j = 0; j < permuted.size(); ++j) permuted[j] = tuple[static_cast<std::size_t>(perm[j])];
            acc += map.value(tuple_index(permuted, d));
        } while (std::next_permutation(perm.begin(), perm.end()));
        return weight * acc;
    });
}

inline MFSeries symmetrize(const MFSeries& a)
{
    MFSeries s = a;
    for (int k = 2; k <= a.order(); ++k) s[k] = symmetrize(a[k]);
    return s;
}

inline MFSeries sym_product(const MFSeries& a, const MFSeries& b) { return symmetrize(series_product(a, b)); }

inline MFSeries sym_compose(const MFSeries& a, const MFSeries& b) { return symmetrize(series_compose(a, b)); }

// A map B -> B assumed homogeneous of the given degree.
struct HomogeneousPolynomial {
    AlgebraDescriptor descriptor;
    int degree = 0;
    std::function<AlgebraElement(const AlgebraElement&)> evaluate;
};

inline HomogeneousPolynomial diagonal(MultilinearMap map)
{
    const auto desc = map.descriptor();
    const int m = map.degree();
    return {desc, m, [map = std::move(map)](const AlgebraElement& b) {
                return map(std::vector<AlgebraElement>(static_cast<std::size_t>(map.degree()), b));
            }};
}

// Symmetric m-linear map recovered by the m-th finite difference of P divided by m!.
inline MultilinearMap polarize(const HomogeneousPolynomial& p)
{
    const auto& desc = p.descriptor;
    const int m = p.degree;
    if (m == 0) {
        MultilinearMap out(desc, 0);
        out.set(0, p.evaluate(AlgebraElement::zero(desc)));
        return out;
    }
    const Rational weight = 1 / factorial(m);
    return tabulate(desc, m, [&](const std::vector<std::size_t>& tuple) {
        AlgebraElement acc = AlgebraElement::zero(desc);
        for (unsigned subset = 1; subset < (1u << m); ++subset) {
            AlgebraElement point = AlgebraElement::zero(desc);
            int size = 0;
            for (int j = 0; j < m; ++j)
                if (subset & (1u << j)) {
                    point[tuple[static_cast<std::size_t>(j)]] += 1;
                    ++size;
                }
            const AlgebraElement value = p.evaluate(point);
            if ((m - size) % 2 == 0)
                acc += value;
            else
                acc -= value;
        }
        return weight * acc;
    });
}

// sum_k a_k(b, ..., b) over the retained components.
inline AlgebraElement evaluate_diagonal(const MFSeries& a, const AlgebraElement& b)
{
    AlgebraElement acc = AlgebraElement::zero(a.descriptor());
    for (int k = 0; k <= a.order(); ++k) acc += a[k](std::vector<AlgebraElement>(static_cast<std::size_t>(k), b));
    return acc;
}

} // namespace mulfs
