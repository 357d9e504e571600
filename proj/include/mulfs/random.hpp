#pragma once

#include "algebra.hpp"
#include "series.hpp"

#include <random>

namespace mulfs {

// Random exact data for property checks: coordinates u / 2^e with u in [-3, 3]
// and e in {0, 1, 2}.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    Rational coordinate()
    {
        std::uniform_int_distribution<int> numerator(-3, 3);
        std::uniform_int_distribution<int> exponent(0, 2);
        const int u = numerator(engine_);
        Rational q(u, 1 << exponent(engine_));
        q.canonicalize();
        return q;
    }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    AlgebraElement element(const AlgebraDescriptor& desc)
    {
        std::vector<Rational> c(desc.dim());
        for (auto& x : c) x = coordinate();
        return {desc, std::move(c)};
    }

    AlgebraElement invertible_element(const AlgebraDescriptor& desc)
    {
        while (true) {
            AlgebraElement x = element(desc);
            try {
                alg_invert(x);
                return x;
            } catch (const SingularError&) {
            }
        }
    }

    MultilinearMap multilinear(const AlgebraDescriptor& desc, int degree)
    {
        MultilinearMap m(desc, degree);
        for (auto& x : m.raw()) x = coordinate();
        return m;
    }

    enum class Constant { random, zero, unit, invertible };

    MFSeries series(const AlgebraDescriptor& desc, int order, Constant constant = Constant::random)
    {
        MFSeries s(desc, order);
        for (int k = 0; k <= order; ++k) s[k] = multilinear(desc, k);
        switch (constant) {
        case Constant::random: break;
        case Constant::zero: s[0] = MultilinearMap(desc, 0); break;
        case Constant::unit: s[0].set(0, AlgebraElement::unit(desc)); break;
        case Constant::invertible: s[0].set(0, invertible_element(desc)); break;
        }
        return s;
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace mulfs
