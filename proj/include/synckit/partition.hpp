#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "synckit/error.hpp"

namespace synckit {

/// A surjective map from cells 0..n-1 onto colors 0..rank-1.
///
/// Colors are always numbered by first occurrence in cell order, so two
/// partitions describe the same equivalence relation iff they compare equal.
class Partition {
public:
    Partition() = default;

    /// Builds a partition from arbitrary integer labels; equal labels mean
    /// equal colors.
    static Partition from_labels(std::span<const int> labels)
    {
        Partition p;
        p.assignment_.resize(labels.size());
        std::unordered_map<int, int> renumber;
        for (std::size_t c = 0; c < labels.size(); ++c) {
            auto [it, inserted] = renumber.try_emplace(labels[c], static_cast<int>(renumber.size()));
            p.assignment_[c] = it->second;
        }
        p.rank_ = static_cast<int>(renumber.size());
        return p;
    }

    static Partition from_labels(const std::vector<int>& labels)
    {
        return from_labels(std::span<const int>(labels));
    }

    /// Every cell in its own color (the bottom element).
    static Partition trivial(std::size_t n)
    {
        Partition p;
        p.assignment_.resize(n);
        std::iota(p.assignment_.begin(), p.assignment_.end(), 0);
        p.rank_ = static_cast<int>(n);
        return p;
    }

    /// All cells share one color.
    static Partition single(std::size_t n)
    {
        Partition p;
        p.assignment_.assign(n, 0);
        p.rank_ = n == 0 ? 0 : 1;
        return p;
    }

    /// Builds a partition from explicit color blocks of cell indices. Cells not
    /// listed become singletons.
    static Partition from_blocks(std::size_t n, const std::vector<std::vector<int>>& blocks)
    {
        std::vector<int> labels(n, -1);
        int next = 0;
        for (const auto& block : blocks) {
            for (int c : block) {
                if (c < 0 || static_cast<std::size_t>(c) >= n)
                    throw Error(ErrorKind::UnknownCell, "cell index " + std::to_string(c) + " out of range");
                if (labels[c] != -1)
                    throw Error(ErrorKind::MalformedDocument,
                                "cell index " + std::to_string(c) + " listed twice");
                labels[c] = next;
            }
            ++next;
        }
        for (auto& l : labels)
            if (l == -1)
                l = next++;
        return from_labels(labels);
    }

    std::size_t size() const noexcept { return assignment_.size(); }
    int rank() const noexcept { return rank_; }
    int operator[](std::size_t cell) const { return assignment_[cell]; }
    const std::vector<int>& assignment() const noexcept { return assignment_; }

    bool is_trivial() const noexcept { return static_cast<std::size_t>(rank_) == assignment_.size(); }

    /// Cells grouped by color, each block in increasing cell order.
    std::vector<std::vector<int>> colors() const
    {
        std::vector<std::vector<int>> out(rank_);
        for (std::size_t c = 0; c < assignment_.size(); ++c)
            out[assignment_[c]].push_back(static_cast<int>(c));
        return out;
    }

    /// Colors present in a set of cells, sorted.
    std::vector<int> image(std::span<const int> cells) const
    {
        std::vector<int> out;
        out.reserve(cells.size());
        for (int c : cells)
            out.push_back(assignment_[c]);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    friend bool operator==(const Partition&, const Partition&) = default;

    /// Rank ascending, then lexicographic canonical assignment.
    friend std::strong_ordering operator<=>(const Partition& a, const Partition& b)
    {
        if (auto cmp = a.rank_ <=> b.rank_; cmp != 0)
            return cmp;
        return a.assignment_ <=> b.assignment_;
    }

private:
    std::vector<int> assignment_;
    int rank_ = 0;
};

namespace detail {

inline void require_same_domain(const Partition& a, const Partition& b)
{
    if (a.size() != b.size())
        throw Error(ErrorKind::DomainMismatch, "partitions on " + std::to_string(a.size()) + " and " +
                                                   std::to_string(b.size()) + " cells");
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1)
    {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (size_[a] < size_[b])
            std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
};

} // namespace detail

/// True iff `a` is finer than (or equal to) `b`.
inline bool refines(const Partition& a, const Partition& b)
{
    detail::require_same_domain(a, b);
    // a <= b iff each a-color maps into a single b-color.
    std::vector<int> target(a.rank(), -1);
    for (std::size_t c = 0; c < a.size(); ++c) {
        int& t = target[a[c]];
        if (t == -1)
            t = b[c];
        else if (t != b[c])
            return false;
    }
    return true;
}

/// Least upper bound under refinement.
inline Partition join(const Partition& a, const Partition& b)
{
    detail::require_same_domain(a, b);
    detail::DisjointSets sets(a.size());
    std::vector<int> first_a(a.rank(), -1), first_b(b.rank(), -1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        int c = static_cast<int>(i);
        if (first_a[a[i]] == -1)
            first_a[a[i]] = c;
        else
            sets.unite(first_a[a[i]], c);
        if (first_b[b[i]] == -1)
            first_b[b[i]] = c;
        else
            sets.unite(first_b[b[i]], c);
    }
    std::vector<int> labels(a.size());
    for (std::size_t c = 0; c < a.size(); ++c)
        labels[c] = sets.find(static_cast<int>(c));
    return Partition::from_labels(labels);
}

/// Greatest lower bound: colors are the nonempty pairwise intersections.
inline Partition meet(const Partition& a, const Partition& b)
{
    detail::require_same_domain(a, b);
    std::vector<int> labels(a.size());
    for (std::size_t c = 0; c < a.size(); ++c)
        labels[c] = a[c] * b.rank() + b[c];
    return Partition::from_labels(labels);
}

/// The partition B/A on the colors of A, defined by (B/A)(A(c)) = B(c).
inline Partition quotient_partition(const Partition& b, const Partition& a)
{
    detail::require_same_domain(a, b);
    std::vector<int> labels(a.rank(), -1);
    for (std::size_t c = 0; c < a.size(); ++c) {
        int& l = labels[a[c]];
        if (l == -1)
            l = b[c];
        else if (l != b[c])
            throw Error(ErrorKind::NotARefinement, "quotient B/A requires A to refine B");
    }
    return Partition::from_labels(labels);
}

/// outer o inner, where `outer` partitions the colors of `inner`.
inline Partition compose(const Partition& outer, const Partition& inner)
{
    if (outer.size() != static_cast<std::size_t>(inner.rank()))
        throw Error(ErrorKind::DomainMismatch, "outer partition must act on the colors of the inner one");
    std::vector<int> labels(inner.size());
    for (std::size_t c = 0; c < inner.size(); ++c)
        labels[c] = outer[inner[c]];
    return Partition::from_labels(labels);
}

/// Dense 0/1 characteristic matrix, cells by colors.
struct PartitionMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<int> data;

    int operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    friend bool operator==(const PartitionMatrix&, const PartitionMatrix&) = default;
};

inline PartitionMatrix partition_matrix(const Partition& a)
{
    PartitionMatrix p{a.size(), static_cast<std::size_t>(a.rank()), {}};
    p.data.assign(p.rows * p.cols, 0);
    for (std::size_t c = 0; c < a.size(); ++c)
        p.data[c * p.cols + a[c]] = 1;
    return p;
}

inline PartitionMatrix operator*(const PartitionMatrix& x, const PartitionMatrix& y)
{
    if (x.cols != y.rows)
        throw Error(ErrorKind::DomainMismatch, "matrix dimensions do not chain");
    PartitionMatrix out{x.rows, y.cols, std::vector<int>(x.rows * y.cols, 0)};
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k)
            if (int v = x(i, k); v != 0)
                for (std::size_t j = 0; j < y.cols; ++j)
                    out.data[i * out.cols + j] += v * y(k, j);
    return out;
}

// Text form: colors separated by '/', cells by ','. When every cell id is a
// single character the commas may be dropped ("12/45"). Unlisted cells are
// singletons.

namespace detail {

inline bool all_single_char(std::span<const std::string> ids)
{
    return std::all_of(ids.begin(), ids.end(), [](const std::string& s) { return s.size() == 1; });
}

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

} // namespace detail

inline Partition parse_partition(std::string_view text, std::span<const std::string> ids)
{
    std::unordered_map<std::string_view, int> index;
    for (std::size_t i = 0; i < ids.size(); ++i)
        index.emplace(ids[i], static_cast<int>(i));
    const bool compact = detail::all_single_char(ids);

    auto lookup = [&](std::string_view name) {
        auto it = index.find(name);
        if (it == index.end())
            throw Error(ErrorKind::UnknownCell, "unknown cell '" + std::string(name) + "' in partition");
        return it->second;
    };

    std::vector<std::vector<int>> blocks;
    text = detail::trim(text);
    if (!text.empty()) {
        for (auto token : detail::split(text, '/')) {
            token = detail::trim(token);
            if (token.empty())
                throw Error(ErrorKind::MalformedDocument, "empty color in partition '" + std::string(text) + "'");
            std::vector<int> block;
            if (token.find(',') != std::string_view::npos) {
                for (auto name : detail::split(token, ','))
                    block.push_back(lookup(detail::trim(name)));
            } else if (index.contains(token)) {
                block.push_back(index.at(token));
            } else if (compact) {
                for (char ch : token)
                    block.push_back(lookup(std::string_view(&ch, 1)));
            } else {
                block.push_back(lookup(token));
            }
            blocks.push_back(std::move(block));
        }
    }
    return Partition::from_blocks(ids.size(), blocks);
}

inline std::string format_partition(const Partition& a, std::span<const std::string> ids)
{
    if (ids.size() != a.size())
        throw Error(ErrorKind::PartitionDomainMismatch, "partition and id list differ in size");
    const char* sep = detail::all_single_char(ids) ? "" : ",";
    std::string out;
    for (const auto& block : a.colors()) {
        if (!out.empty())
            out += '/';
        for (std::size_t i = 0; i < block.size(); ++i) {
            if (i)
                out += sep;
            out += ids[block[i]];
        }
    }
    return out;
}

} // namespace synckit
