#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "synckit/network.hpp"
#include "synckit/partition.hpp"

namespace synckit {

/// A partition together with its quotient matrix Q, so that M P = P Q.
struct BalancedCertificate {
    Partition partition;
    std::vector<MonoidSpec::value_type> quotient_matrix; // rank x rank, row = receiving color
    std::vector<CellType> color_types;

    int rank() const noexcept { return partition.rank(); }

    MonoidSpec::value_type q(int k, int l) const
    {
        return quotient_matrix[static_cast<std::size_t>(k) * partition.rank() + l];
    }
};

inline bool is_type_refining(const Network& net, const Partition& a)
{
    require_domain(net, a);
    return refines(a, type_partition(net));
}

inline void require_type_refining(const Network& net, const Partition& a)
{
    if (!is_type_refining(net, a))
        throw Error(ErrorKind::NotTypeRefining, "partition mixes cell types");
}

namespace detail {

inline bool balanced_unchecked(const Network& net, const Partition& a)
{
    std::vector<int> rep(a.rank(), -1);
    std::vector<std::vector<MonoidSpec::value_type>> rows(a.rank());
    for (int c = 0; c < static_cast<int>(net.size()); ++c) {
        auto row = row_sum_values(net, a, c);
        if (rep[a[c]] == -1) {
            rep[a[c]] = c;
            rows[a[c]] = std::move(row);
        } else if (row != rows[a[c]]) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/// Certificate iff every color has a constant row_color_sum.
inline std::optional<BalancedCertificate> is_balanced(const Network& net, const Partition& a)
{
    require_type_refining(net, a);
    const int r = a.rank();
    BalancedCertificate cert{a, std::vector<MonoidSpec::value_type>(static_cast<std::size_t>(r) * r), {}};
    cert.color_types.assign(r, 0);
    std::vector<bool> seen(r, false);
    for (int c = 0; c < static_cast<int>(net.size()); ++c) {
        const auto row = detail::row_sum_values(net, a, c);
        const int k = a[c];
        auto first = cert.quotient_matrix.begin() + static_cast<std::ptrdiff_t>(k) * r;
        if (!seen[k]) {
            std::copy(row.begin(), row.end(), first);
            cert.color_types[k] = net.type(c);
            seen[k] = true;
        } else if (!std::equal(row.begin(), row.end(), first)) {
            return std::nullopt;
        }
    }
    return cert;
}

namespace detail {

inline std::string quotient_cell_name(const Network& net, const std::vector<int>& block)
{
    const bool compact = all_single_char(net.ids());
    std::string name;
    for (std::size_t i = 0; i < block.size(); ++i) {
        if (i && !compact)
            name += '+';
        name += net.id(block[i]);
    }
    return name;
}

} // namespace detail

/// G / bowtie: one cell per color, adjacency Q, types carried over.
inline Network quotient_network(const Network& net, const BalancedCertificate& bp)
{
    const auto blocks = bp.partition.colors();
    std::vector<std::string> ids;
    for (const auto& block : blocks)
        ids.push_back(detail::quotient_cell_name(net, block));
    std::vector<Edge> edges;
    const int r = bp.rank();
    for (int k = 0; k < r; ++k)
        for (int l = 0; l < r; ++l)
            if (!net.monoid(bp.color_types[k], bp.color_types[l]).is_zero(bp.q(k, l)))
                edges.push_back({l, k, bp.q(k, l)});
    return Network(std::move(ids), bp.color_types, net.monoids(), edges);
}

/// Coarsest balanced partition finer than `a`, by signature refinement:
/// split colors on (color, row_color_sum) until nothing changes.
inline Partition cir_balanced(const Network& net, const Partition& a)
{
    require_type_refining(net, a);
    Partition current = a;
    while (true) {
        std::map<std::pair<int, std::vector<MonoidSpec::value_type>>, int> keys;
        std::vector<int> labels(net.size());
        for (int c = 0; c < static_cast<int>(net.size()); ++c) {
            auto key = std::make_pair(current[c], detail::row_sum_values(net, current, c));
            labels[c] = keys.try_emplace(std::move(key), static_cast<int>(keys.size())).first->second;
        }
        Partition next = Partition::from_labels(labels);
        if (next.rank() == current.rank())
            return current;
        current = std::move(next);
    }
}

/// Partitions ordered by rank then assignment (top first, bottom last), with
/// the Hasse diagram of the refinement order.
struct BalancedLattice {
    std::vector<Partition> elements;
    std::vector<std::pair<int, int>> cover_edges; // (finer, coarser)
    int top = 0;
    int bottom = 0;

    std::size_t size() const noexcept { return elements.size(); }

    std::optional<int> index_of(const Partition& a) const
    {
        auto it = std::lower_bound(elements.begin(), elements.end(), a);
        if (it == elements.end() || *it != a)
            return std::nullopt;
        return static_cast<int>(it - elements.begin());
    }

    bool contains(const Partition& a) const { return index_of(a).has_value(); }
};

/// Sorts, deduplicates and computes cover edges by transitive reduction.
inline BalancedLattice make_lattice(std::vector<Partition> elements)
{
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    BalancedLattice out;
    out.elements = std::move(elements);
    const std::size_t m = out.elements.size();
    if (m == 0)
        return out;
    out.top = 0;
    out.bottom = static_cast<int>(m - 1);

    // above[j] has bit i set iff element j is strictly finer than element i
    const std::size_t words = (m + 63) / 64;
    std::vector<std::uint64_t> above(m * words, 0);
    auto bit = [&](std::size_t row, std::size_t i) { return (above[row * words + i / 64] >> (i % 64)) & 1u; };
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i)
            if (out.elements[i].rank() < out.elements[j].rank() && refines(out.elements[j], out.elements[i]))
                above[j * words + i / 64] |= std::uint64_t{1} << (i % 64);

    std::vector<std::uint64_t> covers(words);
    for (std::size_t j = 0; j < m; ++j) {
        std::copy_n(above.begin() + static_cast<std::ptrdiff_t>(j * words), words, covers.begin());
        for (std::size_t k = 0; k < m; ++k)
            if (bit(j, k))
                for (std::size_t w = 0; w < words; ++w)
                    covers[w] &= ~above[k * words + w];
        for (std::size_t i = 0; i < m; ++i)
            if ((covers[i / 64] >> (i % 64)) & 1u)
                out.cover_edges.emplace_back(static_cast<int>(j), static_cast<int>(i));
    }
    std::sort(out.cover_edges.begin(), out.cover_edges.end());
    return out;
}

inline constexpr std::size_t kDefaultMaxCells = 12;

/// Enumeration cap: SYNCKIT_MAX_CELLS when set to a positive integer, else 12.
inline std::size_t default_max_cells()
{
    if (const char* env = std::getenv("SYNCKIT_MAX_CELLS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<std::size_t>(v);
    }
    return kDefaultMaxCells;
}

/// Calls `visit` on every partition refining the type partition, as
/// canonical restricted growth strings.
template <class Visit>
void for_each_type_refining(const Network& net, Visit&& visit)
{
    const int n = static_cast<int>(net.size());
    std::vector<int> labels(n, 0);
    std::vector<CellType> color_type;
    auto rec = [&](auto&& self, int cell) -> void {
        if (cell == n) {
            visit(Partition::from_labels(labels));
            return;
        }
        const int used = static_cast<int>(color_type.size());
        for (int k = 0; k < used; ++k)
            if (color_type[k] == net.type(cell)) {
                labels[cell] = k;
                self(self, cell + 1);
            }
        labels[cell] = used;
        color_type.push_back(net.type(cell));
        self(self, cell + 1);
        color_type.pop_back();
    };
    rec(rec, 0);
}

/// Every balanced partition of `net`.
inline BalancedLattice enumerate_balanced(const Network& net, std::size_t max_cells = default_max_cells())
{
    if (net.size() > max_cells)
        throw Error(ErrorKind::TooLarge, std::to_string(net.size()) + " cells exceeds the enumeration cap of " +
                                             std::to_string(max_cells));
    std::vector<Partition> found;
    for_each_type_refining(net, [&](Partition p) {
        if (detail::balanced_unchecked(net, p))
            found.push_back(std::move(p));
    });
    return make_lattice(std::move(found));
}

/// Meet inside the balanced lattice: cir of the plain meet.
inline Partition lattice_meet(const Network& net, const Partition& b1, const Partition& b2)
{
    if (!is_balanced(net, b1) || !is_balanced(net, b2))
        throw Error(ErrorKind::NotBalanced, "lattice meet needs balanced arguments");
    return cir_balanced(net, meet(b1, b2));
}

/// L / A = {B / A : B in L, B >= A}, a lattice on the colors of A.
inline BalancedLattice lattice_quotient(const BalancedLattice& lattice, const Partition& a)
{
    if (!lattice.contains(a))
        throw Error(ErrorKind::NotInLattice, "quotient element is not in the lattice");
    std::vector<Partition> out;
    for (const auto& b : lattice.elements)
        if (b.size() == a.size() && refines(a, b))
            out.push_back(quotient_partition(b, a));
    return make_lattice(std::move(out));
}

/// Same-colored cells agree on every row_color_sum entry except possibly
/// their own color's.
inline bool is_exo_balanced(const Network& net, const Partition& a)
{
    require_type_refining(net, a);
    std::vector<int> rep(a.rank(), -1);
    std::vector<std::vector<MonoidSpec::value_type>> rows(a.rank());
    for (int c = 0; c < static_cast<int>(net.size()); ++c) {
        auto row = detail::row_sum_values(net, a, c);
        const int k = a[c];
        if (rep[k] == -1) {
            rep[k] = c;
            rows[k] = std::move(row);
            continue;
        }
        for (int l = 0; l < a.rank(); ++l)
            if (l != k && row[l] != rows[k][l])
                return false;
    }
    return true;
}

/// Hasse diagram in DOT, coarser partitions drawn above finer ones.
inline std::string lattice_to_dot(const BalancedLattice& lattice, std::span<const std::string> ids)
{
    std::ostringstream out;
    out << "digraph lattice {\n  rankdir=BT;\n  node [shape=plaintext];\n";
    for (std::size_t i = 0; i < lattice.size(); ++i)
        out << "  n" << i << " [label=" << detail::dot_quote(format_partition(lattice.elements[i], ids)) << "];\n";
    for (auto [lo, hi] : lattice.cover_edges)
        out << "  n" << lo << " -> n" << hi << " [arrowhead=none];\n";
    out << "}\n";
    return out.str();
}

} // namespace synckit
