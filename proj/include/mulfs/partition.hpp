#pragma once

#include "errors.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mulfs {

using Block = std::vector<int>;

// A family of blocks over {1..n}. Blocks are kept sorted internally and the
// list is sorted lexicographically (hence by minimum for linked partitions).
// Validity is established by validate(); restrictions may produce families
// that are not partitions of any mode.
struct Partition {
    int n = 0;
    std::vector<Block> blocks;

    std::size_t size() const noexcept { return blocks.size(); }
    friend auto operator<=>(const Partition&, const Partition&) = default;
};

enum class PartitionMode { ncl, nc, ip };

inline std::string to_string(const Partition& p)
{
    std::string out;
    for (const auto& b : p.blocks) {
        out += '(';
        for (std::size_t i = 0; i < b.size(); ++i) out += (i ? "," : "") + std::to_string(b[i]);
        out += ')';
    }
    return out;
}

inline std::string to_string(PartitionMode mode)
{
    switch (mode) {
    case PartitionMode::ncl: return "ncl";
    case PartitionMode::nc: return "nc";
    case PartitionMode::ip: return "ip";
    }
    return "?";
}

inline Partition canonical(int n, std::vector<Block> blocks)
{
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end());
    blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
    return {n, std::move(blocks)};
}

inline Partition full_partition(int n)
{
    Block b(static_cast<std::size_t>(n));
    std::iota(b.begin(), b.end(), 1);
    return {n, {std::move(b)}};
}

inline Partition singletons(int n)
{
    Partition p{n, {}};
    for (int i = 1; i <= n; ++i) p.blocks.push_back({i});
    return p;
}

// Number of blocks containing each element; index 0 unused.
inline std::vector<int> cover_counts(const Partition& p)
{
    std::vector<int> count(static_cast<std::size_t>(p.n) + 1, 0);
    for (const auto& b : p.blocks)
        for (int x : b)
            if (x >= 1 && x <= p.n) ++count[static_cast<std::size_t>(x)];
    return count;
}

namespace detail {

// True when there are a < b < c < d with a, c in first and b, d in second.
inline bool crosses_ordered(const Block& first, const Block& second)
{
    std::size_t i = 0, j = 0;
    int stage = 0; // number of pattern letters matched: first, second, first, second
    int last = 0;
    while (stage < 4) {
        const Block& want = (stage % 2 == 0) ? first : second;
        std::size_t& pos = (stage % 2 == 0) ? i : j;
        while (pos < want.size() && want[pos] <= last) ++pos;
        if (pos == want.size()) return false;
        last = want[pos];
        ++stage;
    }
    return true;
}

inline bool crossing(const Block& e, const Block& f) { return crosses_ordered(e, f) || crosses_ordered(f, e); }

inline bool nearly_disjoint(const Block& e, const Block& f)
{
    for (int x : e) {
        if (!std::binary_search(f.begin(), f.end(), x)) continue;
        const bool first = x == e.front() && e.size() > 1 && x != f.front();
        const bool second = x != e.front() && x == f.front() && f.size() > 1;
        if (!first && !second) return false;
    }
    return true;
}

inline std::optional<InvalidPartition> diagnose(const Partition& p, PartitionMode mode)
{
    using R = InvalidPartition::Reason;
    if (p.n < 1) return InvalidPartition(R::malformed, "ground set must be nonempty");
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
        const auto& b = p.blocks[i];
        if (b.empty()) return InvalidPartition(R::malformed, "empty block");
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j] < 1 || b[j] > p.n)
                return InvalidPartition(R::malformed, "element " + std::to_string(b[j]) + " outside 1.." + std::to_string(p.n));
            if (j && b[j] <= b[j - 1]) return InvalidPartition(R::malformed, "repeated element within a block");
        }
        if (i && p.blocks[i] == p.blocks[i - 1]) return InvalidPartition(R::malformed, "repeated block");
    }
    const auto count = cover_counts(p);
    for (int x = 1; x <= p.n; ++x) {
        if (count[static_cast<std::size_t>(x)] == 0)
            return InvalidPartition(R::coverage_gap, "element " + std::to_string(x) + " is not covered");
        if (count[static_cast<std::size_t>(x)] > 2)
            return InvalidPartition(R::triple_cover, "element " + std::to_string(x) + " lies in more than two blocks");
    }
    for (std::size_t i = 0; i < p.blocks.size(); ++i)
        for (std::size_t j = i + 1; j < p.blocks.size(); ++j) {
            const auto pair = to_string(Partition{p.n, {p.blocks[i], p.blocks[j]}});
            if (crossing(p.blocks[i], p.blocks[j])) return InvalidPartition(R::crossing, "blocks " + pair + " cross");
            if (!nearly_disjoint(p.blocks[i], p.blocks[j]))
                return InvalidPartition(R::not_nearly_disjoint, "blocks " + pair + " are not nearly disjoint");
        }
    if (mode != PartitionMode::ncl)
        for (int x = 1; x <= p.n; ++x)
            if (count[static_cast<std::size_t>(x)] > 1)
                return InvalidPartition(R::shared_element, "element " + std::to_string(x) + " is shared by two blocks");
    if (mode == PartitionMode::ip)
        for (const auto& b : p.blocks)
            if (b.back() - b.front() + 1 != static_cast<int>(b.size()))
                return InvalidPartition(R::not_interval, "block " + to_string(Partition{p.n, {b}}) + " is not an interval");
    return std::nullopt;
}

} // namespace detail

inline bool is_valid(const Partition& p, PartitionMode mode) { return !detail::diagnose(p, mode).has_value(); }

inline Partition validate(std::vector<Block> blocks, int n, PartitionMode mode)
{
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end());
    Partition p{n, std::move(blocks)};
    if (auto err = detail::diagnose(p, mode)) throw *err;
    return p;
}

// Parses parenthesis notation such as "(1,2)(2,3)". The ground set is 1..max element
// unless n is given.
inline Partition parse_partition(std::string_view text, int n = 0)
{
    std::vector<Block> blocks;
    int largest = 0;
    std::size_t i = 0;
    auto fail = [&] { return InvalidPartition(InvalidPartition::Reason::malformed, "cannot parse \"" + std::string(text) + "\""); };
    while (i < text.size()) {
        if (text[i] == ' ') {
            ++i;
            continue;
        }
        if (text[i] != '(') throw fail();
        ++i;
        Block b;
        while (true) {
            std::size_t start = i;
            while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
            if (start == i) throw fail();
            b.push_back(std::stoi(std::string(text.substr(start, i - start))));
            largest = std::max(largest, b.back());
            if (i < text.size() && text[i] == ',') {
                ++i;
                continue;
            }
            if (i < text.size() && text[i] == ')') {
                ++i;
                break;
            }
            throw fail();
        }
        blocks.push_back(std::move(b));
    }
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end());
    return {n ? n : largest, std::move(blocks)};
}

// ---------------------------------------------------------------------------
// Element encodings

struct SValue {
    int k = 0;
    bool starred = true; // {0, starred} marks a non-minimal element

    static constexpr SValue non_minimal() { return {0, true}; }
    bool is_non_minimal() const noexcept { return starred && k == 0; }
    friend auto operator<=>(const SValue&, const SValue&) = default;
};

using SEncoding = std::vector<SValue>;
using KEncoding = std::vector<int>;

inline std::string to_string(const SEncoding& s)
{
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i].k) + (s[i].starred ? "*" : "");
    return out + ")";
}

inline SEncoding s_encode(const Partition& p)
{
    const auto count = cover_counts(p);
    SEncoding s(static_cast<std::size_t>(p.n), SValue::non_minimal());
    for (const auto& b : p.blocks) {
        const int m = b.front();
        s[static_cast<std::size_t>(m - 1)] = {static_cast<int>(b.size()) - 1, count[static_cast<std::size_t>(m)] == 2};
    }
    return s;
}

namespace detail {

inline std::optional<Partition> peel(const SEncoding& s)
{
    const int n = static_cast<int>(s.size());
    if (n == 0) return std::nullopt;
    int m = n;
    while (m >= 1 && s[static_cast<std::size_t>(m - 1)].is_non_minimal()) --m;
    if (m == 0) return std::nullopt;
    const SValue v = s[static_cast<std::size_t>(m - 1)];
    if (m == 1) {
        if (v.starred || v.k != n - 1) return std::nullopt;
        return full_partition(n);
    }
    const int k = v.k;
    if (m + k > n) return std::nullopt;
    Block interval(static_cast<std::size_t>(k) + 1);
    std::iota(interval.begin(), interval.end(), m);
    SEncoding rest(s.begin(), s.begin() + (m - 1));
    if (v.starred) rest.push_back(SValue::non_minimal());
    rest.insert(rest.end(), s.begin() + (m + k), s.end());
    auto inner = peel(rest);
    if (!inner) return std::nullopt;
    const int shift = v.starred ? k : k + 1;
    const int keep = v.starred ? m : m - 1; // elements up to keep stay in place
    Partition out{n, {}};
    for (auto b : inner->blocks) {
        for (int& x : b)
            if (x > keep) x += shift;
        out.blocks.push_back(std::move(b));
    }
    out.blocks.push_back(std::move(interval));
    std::sort(out.blocks.begin(), out.blocks.end());
    return out;
}

} // namespace detail

inline Partition s_decode(const SEncoding& s)
{
    auto p = detail::peel(s);
    if (!p || !is_valid(*p, PartitionMode::ncl) || s_encode(*p) != s)
        throw NoPreimage("no linked partition has encoding " + to_string(s));
    return *p;
}

inline KEncoding k_encode(const Partition& p)
{
    KEncoding k(static_cast<std::size_t>(p.n), -1);
    for (const auto& b : p.blocks) k[static_cast<std::size_t>(b.front() - 1)] = static_cast<int>(b.size()) - 1;
    return k;
}

inline Partition k_decode(const KEncoding& k)
{
    SEncoding s;
    for (int v : k) {
        if (v < -1) throw NoPreimage("encoding entries must be at least -1");
        s.push_back(v < 0 ? SValue::non_minimal() : SValue{v, false});
    }
    auto p = detail::peel(s);
    if (!p || !is_valid(*p, PartitionMode::nc) || k_encode(*p) != k) throw NoPreimage("no noncrossing partition has this encoding");
    return *p;
}

// ---------------------------------------------------------------------------
// Enumeration

inline constexpr int max_enumeration_n = 12;

namespace detail {

using EncodingVisitor = std::function<void(const SEncoding&)>;

inline int last_minimal_position(const SEncoding& s)
{
    int m = static_cast<int>(s.size());
    while (m >= 1 && s[static_cast<std::size_t>(m - 1)].is_non_minimal()) --m;
    return m;
}

// Every encoding of a linked (or, without stars, noncrossing) partition of {1..n},
// built by inserting an interval block to the right of the last block minimum.
inline void generate_encodings(int n, bool allow_starred, const EncodingVisitor& visit)
{
    SEncoding full(static_cast<std::size_t>(n), SValue::non_minimal());
    full[0] = {n - 1, false};
    visit(full);
    for (int k = 0; n - k - 1 >= 1; ++k) {
        const int inner = n - k - 1;
        generate_encodings(inner, allow_starred, [&](const SEncoding& s) {
            for (int m = last_minimal_position(s) + 1; m <= inner + 1; ++m) {
                SEncoding out(s.begin(), s.begin() + (m - 1));
                out.push_back({k, false});
                out.insert(out.end(), static_cast<std::size_t>(k), SValue::non_minimal());
                out.insert(out.end(), s.begin() + (m - 1), s.end());
                visit(out);
            }
        });
    }
    if (!allow_starred) return;
    for (int k = 1; n - k >= 1; ++k) {
        const int inner = n - k;
        generate_encodings(inner, allow_starred, [&](const SEncoding& s) {
            for (int m = last_minimal_position(s) + 1; m <= inner; ++m) {
                SEncoding out(s.begin(), s.begin() + (m - 1));
                out.push_back({k, true});
                out.insert(out.end(), static_cast<std::size_t>(k), SValue::non_minimal());
                out.insert(out.end(), s.begin() + m, s.end());
                visit(out);
            }
        });
    }
}

inline void check_enumeration_size(int n)
{
    if (n < 1) throw PreconditionViolation("enumeration needs n >= 1");
    if (n > max_enumeration_n)
        throw SizeGuardExceeded("enumeration is limited to n <= " + std::to_string(max_enumeration_n));
}

} // namespace detail

// Calls visit on every partition of the mode, in generation order.
inline void for_each_partition(int n, PartitionMode mode, const std::function<void(const Partition&)>& visit)
{
    detail::check_enumeration_size(n);
    if (mode == PartitionMode::ip) {
        for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
            Partition p{n, {{1}}};
            for (int x = 2; x <= n; ++x) {
                if (mask & (1u << (x - 2)))
                    p.blocks.push_back({x});
                else
                    p.blocks.back().push_back(x);
            }
            visit(p);
        }
        return;
    }
    detail::generate_encodings(n, mode == PartitionMode::ncl, [&](const SEncoding& s) { visit(*detail::peel(s)); });
}

inline std::vector<Partition> enumerate(int n, PartitionMode mode)
{
    std::vector<Partition> out;
    for_each_partition(n, mode, [&](const Partition& p) { out.push_back(p); });
    std::sort(out.begin(), out.end());
    return out;
}

inline std::uint64_t count_partitions(int n, PartitionMode mode)
{
    detail::check_enumeration_size(n);
    if (mode == PartitionMode::ip) return std::uint64_t{1} << (n - 1);
    std::uint64_t total = 0;
    detail::generate_encodings(n, mode == PartitionMode::ncl, [&](const SEncoding&) { ++total; });
    return total;
}

// ---------------------------------------------------------------------------
// Structure maps

inline Partition generated_nc(const Partition& p)
{
    std::vector<std::size_t> parent(p.blocks.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
    std::map<int, std::size_t> owner;
    for (std::size_t i = 0; i < p.blocks.size(); ++i)
        for (int x : p.blocks[i]) {
            auto [it, fresh] = owner.emplace(x, i);
            if (!fresh) parent[find(i)] = find(it->second);
        }
    std::map<std::size_t, Block> merged;
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
        auto& b = merged[find(i)];
        b.insert(b.end(), p.blocks[i].begin(), p.blocks[i].end());
    }
    std::vector<Block> blocks;
    for (auto& [root, b] : merged) {
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        blocks.push_back(std::move(b));
    }
    return canonical(p.n, std::move(blocks));
}

inline Partition unlinking(const Partition& p)
{
    const auto count = cover_counts(p);
    std::vector<Block> blocks;
    for (const auto& b : p.blocks) {
        if (count[static_cast<std::size_t>(b.front())] == 2)
            blocks.emplace_back(b.begin() + 1, b.end());
        else
            blocks.push_back(b);
    }
    return canonical(p.n, std::move(blocks));
}

enum class PartitionOrder { blockwise, nc };

inline bool blockwise_leq(const Partition& p, const Partition& q)
{
    return std::all_of(p.blocks.begin(), p.blocks.end(), [&](const Block& e) {
        return std::any_of(q.blocks.begin(), q.blocks.end(),
                           [&](const Block& f) { return std::includes(f.begin(), f.end(), e.begin(), e.end()); });
    });
}

inline bool refines(const Partition& p, const Partition& q, PartitionOrder order)
{
    if (p.n != q.n) throw PreconditionViolation("partitions of different ground sets");
    if (order == PartitionOrder::blockwise) return blockwise_leq(p, q);
    const Partition ph = generated_nc(p), qh = generated_nc(q);
    if (!blockwise_leq(ph, qh)) return false;
    return ph != qh || blockwise_leq(unlinking(p), unlinking(q));
}

// Renumbered restriction to the sorted subset x of {1..n}.
inline Partition restrict_renumber(const Partition& p, const std::vector<int>& x)
{
    if (x.empty()) throw PreconditionViolation("restriction to an empty set");
    std::vector<int> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Block> blocks;
    for (const auto& b : p.blocks) {
        Block r;
        for (int e : b) {
            auto it = std::lower_bound(sorted.begin(), sorted.end(), e);
            if (it != sorted.end() && *it == e) r.push_back(static_cast<int>(it - sorted.begin()) + 1);
        }
        if (!r.empty()) blocks.push_back(std::move(r));
    }
    return canonical(static_cast<int>(sorted.size()), std::move(blocks));
}

inline std::vector<int> interval(int lo, int hi)
{
    std::vector<int> v;
    for (int i = lo; i <= hi; ++i) v.push_back(i);
    return v;
}

inline std::vector<int> complement(const std::vector<int>& x, int n)
{
    std::vector<int> v;
    for (int i = 1; i <= n; ++i)
        if (std::find(x.begin(), x.end(), i) == x.end()) v.push_back(i);
    return v;
}

inline bool splits(const std::vector<int>& j, const Partition& p)
{
    return std::all_of(p.blocks.begin(), p.blocks.end(), [&](const Block& b) {
        const auto inside = std::count_if(b.begin(), b.end(), [&](int e) { return std::find(j.begin(), j.end(), e) != j.end(); });
        return inside == 0 || inside == static_cast<std::ptrdiff_t>(b.size());
    });
}

inline Partition oplus(const Partition& p, const Partition& q)
{
    Partition out{p.n + q.n, p.blocks};
    for (auto b : q.blocks) {
        for (int& x : b) x += p.n;
        out.blocks.push_back(std::move(b));
    }
    std::sort(out.blocks.begin(), out.blocks.end());
    return out;
}

// Linked partitions whose generated noncrossing partition is the full block
// correspond to NC(n-1).
inline Partition ncl1_u(const Partition& p)
{
    if (generated_nc(p) != full_partition(p.n) || p.n < 2)
        throw PreconditionViolation("partition " + to_string(p) + " does not generate the full block");
    return restrict_renumber(unlinking(p), interval(2, p.n));
}

inline Partition ncl1_v(const Partition& tau)
{
    if (!is_valid(tau, PartitionMode::nc)) throw PreconditionViolation("argument " + to_string(tau) + " is not noncrossing");
    std::vector<Block> blocks;
    for (const auto& b : tau.blocks) {
        Block nb{b.front()};
        for (int x : b) nb.push_back(x + 1);
        blocks.push_back(std::move(nb));
    }
    return canonical(tau.n + 1, std::move(blocks));
}

inline const Block& block_containing(const Partition& p, int x)
{
    for (const auto& b : p.blocks)
        if (std::binary_search(b.begin(), b.end(), x)) return b;
    throw PreconditionViolation("element " + std::to_string(x) + " is not covered");
}

inline bool is_nclo(const Partition& p)
{
    const Partition hat = generated_nc(p);
    return block_containing(hat, 1).back() == p.n;
}

// Decomposition along the block containing 1. For partitions where 1 and n lie in
// one block of the generated partition, parts = (p_1..p_k); otherwise the final
// part is the remainder to the right.
struct DcDecomposition {
    bool nclo = true;
    std::vector<Partition> parts;
    friend bool operator==(const DcDecomposition&, const DcDecomposition&) = default;
};

inline DcDecomposition decompose_dc(const Partition& p)
{
    if (p.n < 2) throw PreconditionViolation("decomposition needs n >= 2");
    const Block& first = block_containing(p, 1);
    const Partition hat = generated_nc(p);
    const Block& hull = block_containing(hat, 1);
    const auto count = cover_counts(p);
    Partition without_first{p.n, {}};
    for (const auto& b : p.blocks)
        if (b != first) without_first.blocks.push_back(b);

    const std::size_t k = first.size() - 1;
    std::vector<int> r(k + 2);
    for (std::size_t j = 1; j <= k; ++j)
        r[j] = *(std::lower_bound(hull.begin(), hull.end(), first[j]) - 1);
    r[k + 1] = hull.back();

    DcDecomposition out;
    out.nclo = hull.back() == p.n;
    for (std::size_t j = 1; j <= k; ++j) {
        const Partition& source = count[static_cast<std::size_t>(first[j])] == 2 ? without_first : p;
        out.parts.push_back(restrict_renumber(source, interval(r[j] + 1, r[j + 1])));
    }
    if (!out.nclo) out.parts.push_back(restrict_renumber(p, interval(r[k + 1] + 1, p.n)));
    return out;
}

namespace detail {

inline Partition compose_dco(const std::vector<Partition>& parts)
{
    if (parts.empty()) throw PreconditionViolation("decomposition with no parts");
    int offset = 1;
    Block first{1};
    std::vector<Block> blocks;
    for (const auto& part : parts) {
        if (!is_valid(part, PartitionMode::ncl)) throw PreconditionViolation("part " + to_string(part) + " is not a linked partition");
        const Partition hat = generated_nc(part);
        const Block& top = block_containing(hat, part.n);
        first.push_back(offset + top.front());
        for (const auto& b : part.blocks) {
            if (top.size() == 1 && b == top) continue;
            Block shifted = b;
            for (int& x : shifted) x += offset;
            blocks.push_back(std::move(shifted));
        }
        offset += part.n;
    }
    blocks.push_back(std::move(first));
    return validate(std::move(blocks), offset, PartitionMode::ncl);
}

} // namespace detail

inline Partition compose_dc(const DcDecomposition& dec)
{
    if (dec.nclo) return detail::compose_dco(dec.parts);
    if (dec.parts.empty()) throw PreconditionViolation("decomposition is missing its remainder part");
    const std::vector<Partition> head(dec.parts.begin(), dec.parts.end() - 1);
    const Partition left = head.empty() ? full_partition(1) : detail::compose_dco(head);
    return oplus(left, dec.parts.back());
}

// ---------------------------------------------------------------------------
// Counting

inline Integer binomial(unsigned long n, unsigned long k)
{
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline Integer catalan(int k)
{
    if (k == 0) return 1;
    const auto uk = static_cast<unsigned long>(k);
    return binomial(2 * uk, uk - 1) / k;
}

inline Integer schroder(int n)
{
    std::vector<Integer> r{1};
    for (int m = 1; m <= n; ++m) {
        Integer next = r[static_cast<std::size_t>(m - 1)];
        for (int k = 0; k < m; ++k) next += r[static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(m - 1 - k)];
        r.push_back(next);
    }
    return r[static_cast<std::size_t>(n)];
}

inline Integer catalan_product(const Partition& sigma)
{
    Integer prod = 1;
    for (const auto& b : sigma.blocks) prod *= catalan(static_cast<int>(b.size()) - 1);
    return prod;
}

// Each noncrossing partition of {1..n} paired with the product of c_{|B|-1} over its blocks.
inline std::vector<std::pair<Partition, Integer>> ncl_by_sigma(int n)
{
    std::vector<std::pair<Partition, Integer>> out;
    for (auto& sigma : enumerate(n, PartitionMode::nc)) {
        Integer w = catalan_product(sigma);
        out.emplace_back(std::move(sigma), std::move(w));
    }
    return out;
}

} // namespace mulfs
