#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synckit/connectivity.hpp"
#include "synckit/synchrony.hpp"

namespace synckit {

enum class ColorClass { Strong, Rooted, Weak };

constexpr std::string_view to_string(ColorClass c) noexcept
{
    switch (c) {
    case ColorClass::Strong: return "strong";
    case ColorClass::Rooted: return "rooted";
    case ColorClass::Weak: return "weak";
    }
    return "?";
}

constexpr char class_letter(ColorClass c) noexcept
{
    return c == ColorClass::Strong ? 'S' : c == ColorClass::Rooted ? 'R' : 'W';
}

/// Which neighborhood a matched/invariant predicate looks at.
struct NeighborhoodKind {
    enum Kind { Nin, Vin, VinK, Rin };
    Kind kind = Nin;
    int k = 1; // only for VinK

    static NeighborhoodKind n() { return {Nin, 1}; }
    static NeighborhoodKind v() { return {Vin, 1}; }
    static NeighborhoodKind vk(int k)
    {
        if (k < 1)
            throw Error(ErrorKind::PreconditionFailed, "VinK needs k >= 1");
        return {VinK, k};
    }
    static NeighborhoodKind r() { return {Rin, 1}; }

    std::string name() const
    {
        switch (kind) {
        case Nin: return "n";
        case Vin: return "v";
        case VinK: return "vk:" + std::to_string(k);
        case Rin: return "r";
        }
        return "?";
    }
};

/// Accepts "n", "v", "vk:<k>", "r".
inline NeighborhoodKind parse_neighborhood_kind(std::string_view s)
{
    if (s == "n")
        return NeighborhoodKind::n();
    if (s == "v")
        return NeighborhoodKind::v();
    if (s == "r")
        return NeighborhoodKind::r();
    if (s.starts_with("vk:")) {
        const std::string digits(s.substr(3));
        if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            return NeighborhoodKind::vk(std::stoi(digits));
    }
    throw Error(ErrorKind::MalformedDocument, "neighborhood kind must be n, v, vk:<k> or r");
}

inline CellSet neighborhood(const Network& net, int c, NeighborhoodKind kind)
{
    switch (kind.kind) {
    case NeighborhoodKind::Nin: return in_neighborhood(net, c);
    case NeighborhoodKind::Vin: return cumulative_in(net, c);
    case NeighborhoodKind::VinK: return cumulative_in_k(net, c, kind.k);
    case NeighborhoodKind::Rin: return in_reachability(net, c);
    }
    return {};
}

namespace detail {

inline ColorClass classify_cells(const std::vector<CellSet>& reach, const std::vector<int>& cells)
{
    CellSet inter = reach[cells.front()], uni = reach[cells.front()];
    for (std::size_t i = 1; i < cells.size(); ++i) {
        const CellSet& r = reach[cells[i]];
        CellSet a, b;
        std::set_intersection(inter.begin(), inter.end(), r.begin(), r.end(), std::back_inserter(a));
        std::set_union(uni.begin(), uni.end(), r.begin(), r.end(), std::back_inserter(b));
        inter = std::move(a);
        uni = std::move(b);
    }
    if (inter.empty())
        return ColorClass::Weak;
    return inter.size() == uni.size() ? ColorClass::Strong : ColorClass::Rooted;
}

inline ColorClass combine(const std::vector<ColorClass>& classes)
{
    ColorClass out = ColorClass::Strong;
    for (ColorClass c : classes)
        if (static_cast<int>(c) > static_cast<int>(out))
            out = c;
    return out;
}

} // namespace detail

/// Strong if all cells share one R- set, Rooted if the sets merely
/// intersect, Weak otherwise.
inline ColorClass classify_color(const Network& net, const std::vector<int>& color)
{
    if (color.empty())
        throw Error(ErrorKind::EmptyColor, "cannot classify an empty color");
    for (int c : color)
        detail::require_cell(net, c);
    return detail::classify_cells(all_in_reachability(net), color);
}

/// Class of each color of `a`, in canonical color order.
inline std::vector<ColorClass> classify_colors(const Network& net, const Partition& a)
{
    require_domain(net, a);
    const auto reach = all_in_reachability(net);
    std::vector<ColorClass> out;
    for (const auto& block : a.colors())
        out.push_back(detail::classify_cells(reach, block));
    return out;
}

inline ColorClass classify_partition(const Network& net, const Partition& a)
{
    return detail::combine(classify_colors(net, a));
}

/// Precomputed reachability for classifying many partitions of one network.
class Classifier {
public:
    explicit Classifier(const Network& net) : reach_(all_in_reachability(net)), size_(net.size()) {}

    ColorClass operator()(const Partition& a) const
    {
        if (a.size() != size_)
            throw Error(ErrorKind::PartitionDomainMismatch, "partition does not match the network");
        std::vector<ColorClass> classes;
        for (const auto& block : a.colors())
            classes.push_back(detail::classify_cells(reach_, block));
        return detail::combine(classes);
    }

private:
    std::vector<CellSet> reach_;
    std::size_t size_;
};

/// Same-colored cells see the same set of colors in their neighborhoods.
inline bool is_matched(const Network& net, const Partition& a, NeighborhoodKind kind)
{
    require_domain(net, a);
    std::vector<std::optional<std::vector<int>>> seen(a.rank());
    for (int c = 0; c < static_cast<int>(net.size()); ++c) {
        auto img = a.image(neighborhood(net, c, kind));
        auto& slot = seen[a[c]];
        if (!slot)
            slot = std::move(img);
        else if (*slot != img)
            return false;
    }
    return true;
}

/// bowtie(U_G(c)) equals U_Q(bowtie(c)) for every cell, Q the quotient.
inline bool is_invariant(const Network& net, const BalancedCertificate& bp, NeighborhoodKind kind)
{
    require_domain(net, bp.partition);
    const Network q = quotient_network(net, bp);
    std::vector<std::optional<CellSet>> in_q(q.size());
    for (int c = 0; c < static_cast<int>(net.size()); ++c) {
        const int k = bp.partition[c];
        if (!in_q[k])
            in_q[k] = neighborhood(q, k, kind);
        if (bp.partition.image(neighborhood(net, c, kind)) != *in_q[k])
            return false;
    }
    return true;
}

/// Top of the strong balanced partitions: cir(types ^ SCC).
inline Partition top_strong(const Network& net)
{
    return cir_balanced(net, meet(type_partition(net), scc_decomposition(net)));
}

struct TopNonweak {
    Partition partition;
    bool valid = false; ///< every rooted lattice element is R- matched
};

/// cir(types ^ RDC), flagged by whether the lattice meets the hypothesis
/// that makes it the top non-weak element.
inline TopNonweak top_nonweak(const Network& net, const BalancedLattice& lattice)
{
    TopNonweak out{cir_balanced(net, meet(type_partition(net), rdc_decomposition(net))), true};
    const Classifier cls(net);
    for (const auto& b : lattice.elements)
        if (cls(b) == ColorClass::Rooted && !is_matched(net, b, NeighborhoodKind::r())) {
            out.valid = false;
            break;
        }
    return out;
}

inline TopNonweak top_nonweak(const Network& net) { return top_nonweak(net, enumerate_balanced(net)); }

// ---- join and quotient tables ------------------------------------------------

struct JoinEntry {
    int left = 0, right = 0, join = 0; // lattice indices
    ColorClass left_class{}, right_class{}, join_class{};
};

struct JoinTableReport {
    std::vector<JoinEntry> entries; ///< unordered pairs, left <= right
    bool rooted_matched = true;     ///< all rooted elements R- matched
    std::vector<JoinEntry> general_violations;
    std::vector<JoinEntry> matched_violations; ///< only filled when rooted_matched

    /// counts[a][b][j]: pairs of classes (a, b) with a <= b whose join is j
    int counts[3][3][3] = {};

    bool ok() const { return general_violations.empty() && matched_violations.empty(); }
};

namespace detail {

inline bool join_allowed_general(ColorClass a, ColorClass b, ColorClass j)
{
    using C = ColorClass;
    if (a == C::Weak || b == C::Weak)
        return j == C::Weak;
    if (a == C::Strong && b == C::Strong)
        return j == C::Strong;
    return j != C::Strong;
}

inline bool join_allowed_matched(ColorClass a, ColorClass b, ColorClass j)
{
    using C = ColorClass;
    if (a == C::Weak || b == C::Weak)
        return j == C::Weak;
    if (a == C::Strong && b == C::Strong)
        return j == C::Strong;
    return j == C::Rooted;
}

} // namespace detail

/// Classes of every pair in the lattice and of their join, checked against
/// the general join table and, when its hypothesis holds, the R- matched one.
inline JoinTableReport join_table_report(const Network& net, const BalancedLattice& lattice)
{
    JoinTableReport report;
    const Classifier cls(net);
    std::vector<ColorClass> classes;
    for (const auto& b : lattice.elements) {
        classes.push_back(cls(b));
        if (classes.back() == ColorClass::Rooted && !is_matched(net, b, NeighborhoodKind::r()))
            report.rooted_matched = false;
    }
    for (int i = 0; i < static_cast<int>(lattice.size()); ++i)
        for (int j = i; j < static_cast<int>(lattice.size()); ++j) {
            const Partition jn = join(lattice.elements[i], lattice.elements[j]);
            const auto idx = lattice.index_of(jn);
            if (!idx)
                throw Error(ErrorKind::NotInLattice, "lattice is not closed under join");
            JoinEntry e{i, j, *idx, classes[i], classes[j], classes[*idx]};
            auto lo = std::min(static_cast<int>(e.left_class), static_cast<int>(e.right_class));
            auto hi = std::max(static_cast<int>(e.left_class), static_cast<int>(e.right_class));
            ++report.counts[lo][hi][static_cast<int>(e.join_class)];
            if (!detail::join_allowed_general(e.left_class, e.right_class, e.join_class))
                report.general_violations.push_back(e);
            if (report.rooted_matched && !detail::join_allowed_matched(e.left_class, e.right_class, e.join_class))
                report.matched_violations.push_back(e);
            report.entries.push_back(e);
        }
    if (!report.rooted_matched)
        report.matched_violations.clear();
    return report;
}

struct QuotientEntry {
    int element = 0;          ///< index in the lattice of G
    Partition image;          ///< A / bowtie on the quotient cells
    ColorClass in_g{}, in_q{};
};

struct QuotientClassReport {
    bool precondition_met = false; ///< bowtie is R- invariant
    std::vector<QuotientEntry> entries;
    std::vector<QuotientEntry> violations; ///< only filled when precondition_met
    bool ok() const { return violations.empty(); }
};

namespace detail {

inline bool quotient_allowed(ColorClass g, ColorClass q)
{
    return static_cast<int>(q) <= static_cast<int>(g);
}

} // namespace detail

/// For each lattice element A >= bowtie, the class of A in G and of A/bowtie
/// in G/bowtie. Transitions that raise the class are violations when bowtie
/// is R- invariant; otherwise the entries are reported unchecked.
inline QuotientClassReport quotient_class_report(const Network& net, const BalancedCertificate& bp,
                                                 const BalancedLattice& lattice)
{
    QuotientClassReport report;
    report.precondition_met = is_invariant(net, bp, NeighborhoodKind::r());
    const Network q = quotient_network(net, bp);
    const Classifier cls_g(net), cls_q(q);
    for (int i = 0; i < static_cast<int>(lattice.size()); ++i) {
        const Partition& a = lattice.elements[i];
        if (!refines(bp.partition, a))
            continue;
        QuotientEntry e{i, quotient_partition(a, bp.partition), cls_g(a), {}};
        e.in_q = cls_q(e.image);
        if (report.precondition_met && !detail::quotient_allowed(e.in_g, e.in_q))
            report.violations.push_back(e);
        report.entries.push_back(std::move(e));
    }
    return report;
}

} // namespace synckit
