#pragma once

#include "algebra.hpp"
#include "errors.hpp"
#include "series.hpp"

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mulfs {

// The algebra B together with the size m of the index set {1..m}.
struct FockSpace {
    AlgebraDescriptor algebra;
    int index_set_size = 2;
    friend bool operator==(const FockSpace&, const FockSpace&) = default;
};

// Basis vector of level k: a word of k letters (index i, basis a) followed by the
// right slot e_j. A letter is stored as (i - 1) * d + a.
struct FockKey {
    std::vector<int> word;
    int slot = 0;

    friend bool operator<(const FockKey& x, const FockKey& y)
    {
        if (x.word.size() != y.word.size()) return x.word.size() < y.word.size();
        if (x.word != y.word) return x.word < y.word;
        return x.slot < y.slot;
    }
    friend bool operator==(const FockKey&, const FockKey&) = default;
};

class FockVector {
public:
    using Terms = std::map<FockKey, Rational>;

    FockVector(FockSpace space, int cap) : space_(std::move(space)), cap_(cap) {}

    // The vacuum 1 Omega.
    static FockVector vacuum(const FockSpace& space, int cap)
    {
        FockVector v(space, cap);
        const auto& unit = space.algebra.unit();
        for (std::size_t j = 0; j < unit.size(); ++j) v.add({{}, static_cast<int>(j)}, unit[j]);
        return v;
    }

    const FockSpace& space() const noexcept { return space_; }
    int cap() const noexcept { return cap_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    void add(const FockKey& key, const Rational& coeff)
    {
        if (sgn(coeff) == 0) return;
        auto [it, fresh] = terms_.try_emplace(key, coeff);
        if (!fresh) {
            it->second += coeff;
            if (sgn(it->second) == 0) terms_.erase(it);
        }
    }

    // Component in B Omega.
    AlgebraElement level_zero() const
    {
        AlgebraElement out = AlgebraElement::zero(space_.algebra);
        for (const auto& [key, coeff] : terms_) {
            if (!key.word.empty()) break;
            out[static_cast<std::size_t>(key.slot)] = coeff;
        }
        return out;
    }

    int max_level() const { return terms_.empty() ? 0 : static_cast<int>(terms_.rbegin()->first.word.size()); }

    friend bool operator==(const FockVector& a, const FockVector& b) { return a.space_ == b.space_ && a.terms_ == b.terms_; }

private:
    FockSpace space_;
    int cap_;
    Terms terms_;
};

// One summand of an operator.
struct FockPrimitive {
    enum class Kind { left, right, creation, annihilation, annihilation_creation };
    Kind kind;
    int index = 0;                        // creation / annihilation*
    std::vector<AlgebraElement> element;  // left / right: the multiplier (one entry)
    std::vector<MultilinearMap> map;      // annihilation*: alpha_n (one entry)
};

// A finite sum of primitives.
class FockOperator {
public:
    explicit FockOperator(FockSpace space) : space_(std::move(space)) {}

    // lambda(b): left multiplication on the first tensor factor (on B Omega, b . b_0).
    static FockOperator left(const FockSpace& space, const AlgebraElement& b)
    {
        return single(space, {FockPrimitive::Kind::left, 0, {b}, {}});
    }
    // rho(b): right multiplication on the final slot.
    static FockOperator right(const FockSpace& space, const AlgebraElement& b)
    {
        return single(space, {FockPrimitive::Kind::right, 0, {b}, {}});
    }
    // L_i: tensoring with delta_i on the left.
    static FockOperator creation(const FockSpace& space, int i)
    {
        return single(space, {FockPrimitive::Kind::creation, i, {}, {}});
    }
    // V_{i,n}(alpha_n).
    static FockOperator annihilation(const FockSpace& space, int i, const MultilinearMap& alpha)
    {
        return single(space, {FockPrimitive::Kind::annihilation, i, {}, {alpha}});
    }
    // W_{i,n}(alpha_n).
    static FockOperator annihilation_creation(const FockSpace& space, int i, const MultilinearMap& alpha)
    {
        return single(space, {FockPrimitive::Kind::annihilation_creation, i, {}, {alpha}});
    }

    const FockSpace& space() const noexcept { return space_; }
    const std::vector<FockPrimitive>& summands() const noexcept { return summands_; }

    FockOperator& operator+=(const FockOperator& o)
    {
        if (!(space_ == o.space_)) throw DescriptorMismatch("operators act on different Fock spaces");
        summands_.insert(summands_.end(), o.summands_.begin(), o.summands_.end());
        return *this;
    }
    friend FockOperator operator+(FockOperator a, const FockOperator& b) { return a += b; }

private:
    static FockOperator single(const FockSpace& space, FockPrimitive prim)
    {
        if (prim.index < 0 || prim.index > space.index_set_size)
            throw PreconditionViolation("index " + std::to_string(prim.index) + " outside the index set");
        for (const auto& e : prim.element) require_same(space.algebra, e.descriptor());
        for (const auto& m : prim.map) require_same(space.algebra, m.descriptor());
        FockOperator op(space);
        op.summands_.push_back(std::move(prim));
        return op;
    }

    FockSpace space_;
    std::vector<FockPrimitive> summands_;
};

// V_i(alpha) = sum_n V_{i,n}(alpha_n) over the retained components.
inline FockOperator annihilation_series(const FockSpace& space, int i, const MFSeries& alpha)
{
    FockOperator op(space);
    for (int n = 0; n <= alpha.order(); ++n) op += FockOperator::annihilation(space, i, alpha[n]);
    return op;
}

// W_i(alpha) = sum_n W_{i,n}(alpha_n).
inline FockOperator annihilation_creation_series(const FockSpace& space, int i, const MFSeries& alpha)
{
    FockOperator op(space);
    for (int n = 0; n <= alpha.order(); ++n) op += FockOperator::annihilation_creation(space, i, alpha[n]);
    return op;
}

// L_i + V_i(alpha).
inline FockOperator additive_canonical(const FockSpace& space, int i, const MFSeries& alpha)
{
    return FockOperator::creation(space, i) + annihilation_series(space, i, alpha);
}

// V_i(alpha) + W_i(alpha).
inline FockOperator multiplicative_canonical(const FockSpace& space, int i, const MFSeries& alpha)
{
    return annihilation_series(space, i, alpha) + annihilation_creation_series(space, i, alpha);
}

struct ApplyOptions {
    bool lossy = false; // drop terms created above the cap instead of failing
};

namespace detail {

class FockApplier {
public:
    FockApplier(const FockVector& in, FockVector& out, const ApplyOptions& opts)
        : in_(in), out_(out), opts_(opts), desc_(in.space().algebra), d_(static_cast<int>(desc_.dim()))
    {
    }

    void run(const FockPrimitive& prim)
    {
        for (const auto& [key, coeff] : in_.terms()) apply(prim, key, coeff);
    }

private:
    int letter(int index, int basis) const { return (index - 1) * d_ + basis; }
    int letter_index(int l) const { return l / d_ + 1; }
    int letter_basis(int l) const { return l % d_; }

    void emit(FockKey key, const Rational& coeff)
    {
        if (sgn(coeff) == 0) return;
        if (static_cast<int>(key.word.size()) > out_.cap()) {
            if (opts_.lossy) return;
            throw CapExceeded("Fock level " + std::to_string(key.word.size()) + " exceeds cap " + std::to_string(out_.cap()));
        }
        out_.add(key, coeff);
    }

    // Replace letter at position 0 of rest (index i, basis a) by (i, v e_a).
    void emit_left_multiplied(const AlgebraElement& v, const std::vector<int>& rest, int slot, const Rational& coeff)
    {
        if (rest.empty()) {
            const AlgebraElement r = v * AlgebraElement::basis(desc_, static_cast<std::size_t>(slot));
            for (int c = 0; c < d_; ++c) emit({{}, c}, coeff * r[static_cast<std::size_t>(c)]);
            return;
        }
        const int index = letter_index(rest.front());
        const AlgebraElement r = v * AlgebraElement::basis(desc_, static_cast<std::size_t>(letter_basis(rest.front())));
        for (int c = 0; c < d_; ++c) {
            if (sgn(r[static_cast<std::size_t>(c)]) == 0) continue;
            FockKey key{rest, slot};
            key.word.front() = letter(index, c);
            emit(std::move(key), coeff * r[static_cast<std::size_t>(c)]);
        }
    }

    // Prepend (index, v) expanded over the coordinates of v.
    void emit_prepended(int index, const AlgebraElement& v, const std::vector<int>& rest, int slot, const Rational& coeff)
    {
        for (int c = 0; c < d_; ++c) {
            if (sgn(v[static_cast<std::size_t>(c)]) == 0) continue;
            FockKey key;
            key.word.reserve(rest.size() + 1);
            key.word.push_back(letter(index, c));
            key.word.insert(key.word.end(), rest.begin(), rest.end());
            key.slot = slot;
            emit(std::move(key), coeff * v[static_cast<std::size_t>(c)]);
        }
    }

    void apply(const FockPrimitive& prim, const FockKey& key, const Rational& coeff)
    {
        using K = FockPrimitive::Kind;
        switch (prim.kind) {
        case K::left: emit_left_multiplied(prim.element.front(), key.word, key.slot, coeff); return;
        case K::right: {
            const AlgebraElement r = AlgebraElement::basis(desc_, static_cast<std::size_t>(key.slot)) * prim.element.front();
            for (int c = 0; c < d_; ++c) emit({key.word, c}, coeff * r[static_cast<std::size_t>(c)]);
            return;
        }
        case K::creation: emit_prepended(prim.index, AlgebraElement::unit(desc_), key.word, key.slot, coeff); return;
        case K::annihilation:
        case K::annihilation_creation: break;
        }
        const MultilinearMap& alpha = prim.map.front();
        const int n = alpha.degree();
        const bool creates = prim.kind == K::annihilation_creation;
        if (n == 0) {
            if (creates)
                emit_prepended(prim.index, alpha.value(0), key.word, key.slot, coeff);
            else
                emit_left_multiplied(alpha.value(0), key.word, key.slot, coeff);
            return;
        }
        if (static_cast<int>(key.word.size()) < n) return;
        std::size_t tuple = 0;
        for (int j = 0; j < n; ++j) {
            const int l = key.word[static_cast<std::size_t>(j)];
            if (letter_index(l) != prim.index) return;
            tuple = tuple * static_cast<std::size_t>(d_) + static_cast<std::size_t>(letter_basis(l));
        }
        const AlgebraElement v = alpha.value(tuple);
        const std::vector<int> rest(key.word.begin() + n, key.word.end());
        if (creates)
            emit_prepended(prim.index, v, rest, key.slot, coeff);
        else
            emit_left_multiplied(v, rest, key.slot, coeff);
    }

    const FockVector& in_;
    FockVector& out_;
    const ApplyOptions& opts_;
    AlgebraDescriptor desc_;
    int d_;
};

} // namespace detail

inline FockVector apply(const FockOperator& op, const FockVector& v, const ApplyOptions& opts = {})
{
    if (!(op.space() == v.space())) throw DescriptorMismatch("operator and vector live in different Fock spaces");
    FockVector out(v.space(), v.cap());
    for (const auto& prim : op.summands()) detail::FockApplier(v, out, opts).run(prim);
    return out;
}

inline FockVector apply(const AlgebraElement& b, const FockVector& v, const ApplyOptions& opts = {})
{
    return apply(FockOperator::left(v.space(), b), v, opts);
}

// A product of operators and left multiplications, written left to right.
using FockItem = std::variant<FockOperator, AlgebraElement>;

inline FockVector apply_word(std::span<const FockItem> word, FockVector v, const ApplyOptions& opts = {})
{
    for (auto it = word.rbegin(); it != word.rend(); ++it) v = std::visit([&](const auto& x) { return apply(x, v, opts); }, *it);
    return v;
}

// Level-zero component of (word) Omega. The default cap is the word length, which is
// the highest level any product of the given length can reach.
inline AlgebraElement expectation(const FockSpace& space, std::span<const FockItem> word, int cap = -1)
{
    if (cap < 0) cap = static_cast<int>(word.size());
    return apply_word(word, FockVector::vacuum(space, cap)).level_zero();
}

namespace detail {

// Applies Z = factors[0] ... factors[last] to v.
inline FockVector apply_product(std::span<const FockOperator> factors, FockVector v)
{
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) v = apply(*it, v);
    return v;
}

} // namespace detail

// Distribution series of the product Z of the given factors up to order N:
// component n on (e_{a_1}, ..., e_{a_n}) is the level-zero part of Z e_{a_1} Z ... e_{a_n} Z Omega.
// Vectors are shared between tuples with a common suffix. The cap is (N + 1) times
// the number of factors.
inline MFSeries distribution_series(std::span<const FockOperator> factors, int order)
{
    if (factors.empty()) throw PreconditionViolation("distribution series of an empty product");
    const FockSpace& space = factors.front().space();
    const auto& desc = space.algebra;
    const std::size_t d = desc.dim();
    const int cap = (order + 1) * static_cast<int>(factors.size());
    MFSeries out(desc, order);

    // v = Z e_{a_1} ... Z Omega for a suffix of length n; index holds the suffix tuple index.
    struct Frame {
        FockVector vec;
        std::size_t index;
    };
    std::vector<Frame> level{{detail::apply_product(factors, FockVector::vacuum(space, cap)), 0}};
    out[0].set(0, level.front().vec.level_zero());
    for (int n = 1; n <= order; ++n) {
        std::vector<Frame> next;
        const std::size_t stride = detail::ipow(d, n - 1);
        for (const auto& frame : level)
            for (std::size_t a = 0; a < d; ++a) {
                FockVector v = apply(AlgebraElement::basis(desc, a), frame.vec);
                v = detail::apply_product(factors, std::move(v));
                const std::size_t index = a * stride + frame.index;
                out[n].set(index, v.level_zero());
                if (n < order) next.push_back({std::move(v), index});
            }
        level = std::move(next);
    }
    return out;
}

inline MFSeries distribution_series(const FockOperator& z, int order)
{
    return distribution_series(std::span<const FockOperator>(&z, 1), order);
}

namespace detail {

// Moments E(Z b_1 Z ... b_n Z) for explicit arguments.
inline AlgebraElement alternating_moment(const FockOperator& z, std::span<const AlgebraElement> args, int cap)
{
    std::vector<FockItem> word{z};
    for (const auto& b : args) {
        word.emplace_back(b);
        word.emplace_back(z);
    }
    return expectation(z.space(), word, cap);
}

} // namespace detail

// The alpha with distribution_series(L_1 + V_1(alpha)) = beta, by solving degree by degree.
inline MFSeries canonical_additive(const MFSeries& beta, int index_set_size = 1)
{
    const auto& desc = beta.descriptor();
    const FockSpace space{desc, index_set_size};
    MFSeries alpha(desc, beta.order());
    alpha[0] = beta[0];
    for (int n = 1; n <= beta.order(); ++n) {
        // With alpha_n = 0 the moment equals beta_n minus the correction.
        const FockOperator x = additive_canonical(space, 1, alpha.truncated(n - 1));
        alpha[n] = tabulate(desc, n, [&](const std::vector<std::size_t>& tuple) {
            std::vector<AlgebraElement> args;
            for (auto a : tuple) args.push_back(AlgebraElement::basis(desc, a));
            return beta[n].value(tuple_index(tuple, desc.dim())) - detail::alternating_moment(x, args, n + 1);
        });
    }
    return alpha;
}

// The alpha with distribution_series(V_1(alpha) + W_1(alpha)) = beta; beta_0 must be invertible.
inline MFSeries canonical_multiplicative(const MFSeries& beta, int index_set_size = 1)
{
    const auto& desc = beta.descriptor();
    const FockSpace space{desc, index_set_size};
    const AlgebraElement inv0 = alg_invert(beta.constant_term());
    MFSeries alpha(desc, beta.order());
    alpha[0] = beta[0];
    for (int n = 1; n <= beta.order(); ++n) {
        const FockOperator y = multiplicative_canonical(space, 1, alpha.truncated(n - 1));
        alpha[n] = tabulate(desc, n, [&](const std::vector<std::size_t>& tuple) {
            // alpha_n(c_1, ..., c_n) with c_j = b_j alpha_0, so b_j = c_j alpha_0^{-1}.
            std::vector<AlgebraElement> args;
            for (auto a : tuple) args.push_back(AlgebraElement::basis(desc, a) * inv0);
            return beta[n](args) - detail::alternating_moment(y, args, n + 1);
        });
    }
    return alpha;
}

} // namespace mulfs
