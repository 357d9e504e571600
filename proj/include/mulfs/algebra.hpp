#pragma once

#include "errors.hpp"
#include "linalg.hpp"
#include "rational.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mulfs {

enum class AlgebraKind { scalar, matrix };

// A finite-dimensional unital algebra over Q given by structure constants:
// e_i e_j = sum_k c(i, j, k) e_k. Descriptors are cheap to copy and compare.
class AlgebraDescriptor {
public:
    struct Term {
        std::size_t index;
        Rational coeff;
    };

    static AlgebraDescriptor scalar()
    {
        auto data = std::make_shared<Data>();
        data->kind = AlgebraKind::scalar;
        data->matrix_size = 1;
        data->dim = 1;
        data->products.assign(1, {Term{0, Rational(1)}});
        data->unit = {Rational(1)};
        return AlgebraDescriptor(std::move(data));
    }

    // Full matrix algebra M_m(Q) with basis E_ij at index (i-1)*m + (j-1).
    static AlgebraDescriptor matrix(int m)
    {
        if (m < 1) throw PreconditionViolation("matrix algebra size must be at least 1");
        const auto size = static_cast<std::size_t>(m);
        auto data = std::make_shared<Data>();
        data->kind = AlgebraKind::matrix;
        data->matrix_size = m;
        data->dim = size * size;
        data->products.resize(data->dim * data->dim);
        data->unit.assign(data->dim, Rational(0));
        for (std::size_t i = 0; i < size; ++i) {
            data->unit[i * size + i] = 1;
            for (std::size_t j = 0; j < size; ++j)
                for (std::size_t l = 0; l < size; ++l)
                    data->products[(i * size + j) * data->dim + (j * size + l)].push_back(Term{i * size + l, Rational(1)});
        }
        return AlgebraDescriptor(std::move(data));
    }

    AlgebraKind kind() const noexcept { return data_->kind; }
    int matrix_size() const noexcept { return data_->matrix_size; }
    std::size_t dim() const noexcept { return data_->dim; }
    const std::vector<Rational>& unit() const noexcept { return data_->unit; }

    // Nonzero structure constants of e_i e_j.
    std::span<const Term> product(std::size_t i, std::size_t j) const { return data_->products[i * data_->dim + j]; }

    Rational structure_constant(std::size_t i, std::size_t j, std::size_t k) const
    {
        for (const auto& t : product(i, j))
            if (t.index == k) return t.coeff;
        return Rational(0);
    }

    std::string describe() const
    {
        return kind() == AlgebraKind::scalar ? std::string("scalar") : "matrix(" + std::to_string(matrix_size()) + ")";
    }

    friend bool operator==(const AlgebraDescriptor& a, const AlgebraDescriptor& b)
    {
        return a.data_ == b.data_ || (a.kind() == b.kind() && a.matrix_size() == b.matrix_size());
    }

private:
    struct Data {
        AlgebraKind kind{};
        int matrix_size = 1;
        std::size_t dim = 1;
        std::vector<std::vector<Term>> products;
        std::vector<Rational> unit;
    };

    explicit AlgebraDescriptor(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

    std::shared_ptr<const Data> data_;
};

inline AlgebraDescriptor make_algebra(AlgebraKind kind, int m = 1)
{
    return kind == AlgebraKind::scalar ? AlgebraDescriptor::scalar() : AlgebraDescriptor::matrix(m);
}

inline void require_same(const AlgebraDescriptor& a, const AlgebraDescriptor& b)
{
    if (!(a == b)) throw DescriptorMismatch("algebra mismatch: " + a.describe() + " vs " + b.describe());
}

class AlgebraElement {
public:
    AlgebraElement(AlgebraDescriptor desc, std::vector<Rational> coords) : desc_(std::move(desc)), coords_(std::move(coords))
    {
        if (coords_.size() != desc_.dim())
            throw DescriptorMismatch("element has " + std::to_string(coords_.size()) + " coordinates, algebra has dimension " +
                                     std::to_string(desc_.dim()));
    }

    static AlgebraElement zero(const AlgebraDescriptor& desc) { return {desc, std::vector<Rational>(desc.dim())}; }
    static AlgebraElement unit(const AlgebraDescriptor& desc) { return {desc, desc.unit()}; }
    static AlgebraElement basis(const AlgebraDescriptor& desc, std::size_t i)
    {
        std::vector<Rational> c(desc.dim());
        c.at(i) = 1;
        return {desc, std::move(c)};
    }
    static AlgebraElement scalar_multiple(const AlgebraDescriptor& desc, const Rational& q)
    {
        AlgebraElement u = unit(desc);
        u *= q;
        return u;
    }

    const AlgebraDescriptor& descriptor() const noexcept { return desc_; }
    std::size_t dim() const noexcept { return coords_.size(); }
    const std::vector<Rational>& coords() const noexcept { return coords_; }
    const Rational& operator[](std::size_t i) const { return coords_[i]; }
    Rational& operator[](std::size_t i) { return coords_[i]; }

    bool is_zero() const
    {
        for (const auto& c : coords_)
            if (sgn(c) != 0) return false;
        return true;
    }

    AlgebraElement& operator+=(const AlgebraElement& o)
    {
        require_same(desc_, o.desc_);
        for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
        return *this;
    }
    AlgebraElement& operator-=(const AlgebraElement& o)
    {
        require_same(desc_, o.desc_);
        for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
        return *this;
    }
    AlgebraElement& operator*=(const Rational& q)
    {
        for (auto& c : coords_) c *= q;
        return *this;
    }

    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    friend AlgebraElement operator-(AlgebraElement a)
    {
        for (auto& c : a.coords_) c = -c;
        return a;
    }
    friend AlgebraElement operator*(const Rational& q, AlgebraElement a) { return a *= q; }
    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b)
    {
        return a.desc_ == b.desc_ && a.coords_ == b.coords_;
    }

private:
    AlgebraDescriptor desc_;
    std::vector<Rational> coords_;
};

// acc += x * y, skipping zero coordinates.
inline void multiply_accumulate(AlgebraElement& acc, const AlgebraElement& x, const AlgebraElement& y)
{
    const auto& desc = acc.descriptor();
    require_same(desc, x.descriptor());
    require_same(desc, y.descriptor());
    Rational xy;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        if (sgn(x[i]) == 0) continue;
        for (std::size_t j = 0; j < y.dim(); ++j) {
            if (sgn(y[j]) == 0) continue;
            xy = x[i] * y[j];
            for (const auto& t : desc.product(i, j)) acc[t.index] += xy * t.coeff;
        }
    }
}

inline AlgebraElement alg_mul(const AlgebraElement& x, const AlgebraElement& y)
{
    AlgebraElement r = AlgebraElement::zero(x.descriptor());
    multiply_accumulate(r, x, y);
    return r;
}

inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return alg_mul(a, b); }

// Matrix of y |-> x y in the basis of the algebra.
inline RationalMatrix left_multiplication_matrix(const AlgebraElement& x)
{
    const auto& desc = x.descriptor();
    RationalMatrix m(desc.dim());
    for (std::size_t j = 0; j < desc.dim(); ++j) {
        const AlgebraElement col = x * AlgebraElement::basis(desc, j);
        for (std::size_t r = 0; r < desc.dim(); ++r) m(r, j) = col[r];
    }
    return m;
}

inline AlgebraElement alg_invert(const AlgebraElement& x)
{
    const auto& desc = x.descriptor();
    const auto inv = inverse(left_multiplication_matrix(x));
    if (!inv) throw SingularError("element is not invertible in " + desc.describe());
    AlgebraElement y(desc, inv->apply(desc.unit()));
    if (!(y * x == AlgebraElement::unit(desc))) throw SingularError("left inverse is not a right inverse in " + desc.describe());
    return y;
}

} // namespace mulfs
