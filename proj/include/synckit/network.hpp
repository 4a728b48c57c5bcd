#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "synckit/error.hpp"
#include "synckit/monoid.hpp"
#include "synckit/partition.hpp"

namespace synckit {

/// A directed edge by cell index. `from` sends, `to` receives.
struct Edge {
    int from = 0;
    int to = 0;
    MonoidSpec::value_type weight = 1;
};

/// Typed cells with a monoid-valued in-adjacency matrix.
///
/// Row = receiving cell, column = sending cell: adjacency(c, d) is the total
/// weight of edges d -> c. Parallel edges are folded on construction.
class Network {
public:
    using value_type = MonoidSpec::value_type;

    Network() = default;

    /// `monoids` is either empty (int-add everywhere), a single entry shared by
    /// every type pair, or T*T entries indexed (receiver-1)*T + (sender-1).
    Network(std::vector<std::string> ids, std::vector<CellType> types, std::vector<MonoidSpec> monoids,
            std::span<const Edge> edges = {})
        : ids_(std::move(ids)), types_(std::move(types))
    {
        if (ids_.size() != types_.size())
            throw Error(ErrorKind::MalformedDocument, "cell id and type lists differ in length");
        for (std::size_t i = 0; i < ids_.size(); ++i)
            if (!index_.emplace(ids_[i], static_cast<int>(i)).second)
                throw Error(ErrorKind::DuplicateCellId, "cell '" + ids_[i] + "' declared twice");

        std::set<CellType> seen(types_.begin(), types_.end());
        type_count_ = static_cast<int>(seen.size());
        if (!seen.empty() && (*seen.begin() != 1 || *seen.rbegin() != type_count_))
            throw Error(ErrorKind::MalformedDocument, "cell types must form the range 1..T");

        const auto pairs = static_cast<std::size_t>(type_count_) * type_count_;
        if (monoids.empty())
            monoids_.assign(pairs, MonoidSpec{});
        else if (monoids.size() == 1)
            monoids_.assign(pairs, monoids.front());
        else if (monoids.size() == pairs)
            monoids_ = std::move(monoids);
        else
            throw Error(ErrorKind::MalformedDocument, "monoid family has the wrong number of type pairs");

        const std::size_t n = ids_.size();
        adjacency_.resize(n * n);
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t d = 0; d < n; ++d)
                adjacency_[c * n + d] = monoid(types_[c], types_[d]).zero();
        for (const Edge& e : edges) {
            if (e.from < 0 || e.to < 0 || static_cast<std::size_t>(e.from) >= n ||
                static_cast<std::size_t>(e.to) >= n)
                throw Error(ErrorKind::UnknownCellInEdge, "edge endpoint out of range");
            auto& slot = adjacency_[static_cast<std::size_t>(e.to) * n + e.from];
            slot = monoid(types_[e.to], types_[e.from]).add(slot, e.weight);
        }
    }

    std::size_t size() const noexcept { return ids_.size(); }
    int type_count() const noexcept { return type_count_; }

    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::string& id(int cell) const { return ids_.at(cell); }
    const std::vector<CellType>& types() const noexcept { return types_; }
    CellType type(int cell) const { return types_.at(cell); }

    int index_of(std::string_view id) const
    {
        auto it = index_.find(std::string(id));
        if (it == index_.end())
            throw Error(ErrorKind::UnknownCell, "no cell named '" + std::string(id) + "'");
        return it->second;
    }

    bool contains(std::string_view id) const { return index_.contains(std::string(id)); }

    const MonoidSpec& monoid(CellType receiver, CellType sender) const
    {
        return monoids_[static_cast<std::size_t>(receiver - 1) * type_count_ + (sender - 1)];
    }

    const std::vector<MonoidSpec>& monoids() const noexcept { return monoids_; }

    bool homogeneous_monoid() const
    {
        return std::all_of(monoids_.begin(), monoids_.end(),
                           [&](const MonoidSpec& m) { return m == monoids_.front(); });
    }

    /// Raw folded weight of d -> c.
    value_type value(int c, int d) const { return adjacency_[static_cast<std::size_t>(c) * size() + d]; }

    Weight weight(int c, int d) const
    {
        return Weight{value(c, d), types_[c], types_[d], monoid(types_[c], types_[d])};
    }

    bool has_edge(int c, int d) const { return !monoid(types_[c], types_[d]).is_zero(value(c, d)); }

    /// All nonzero entries as edges, ordered by receiver then sender.
    std::vector<Edge> edges() const
    {
        std::vector<Edge> out;
        const int n = static_cast<int>(size());
        for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d)
                if (has_edge(c, d))
                    out.push_back({d, c, value(c, d)});
        return out;
    }

    /// Copy with extra edges folded in.
    Network with_edges(std::span<const Edge> extra) const
    {
        auto all = edges();
        all.insert(all.end(), extra.begin(), extra.end());
        return Network(ids_, types_, monoids_, all);
    }

    friend bool operator==(const Network& a, const Network& b)
    {
        return a.ids_ == b.ids_ && a.types_ == b.types_ && a.monoids_ == b.monoids_ &&
               a.adjacency_ == b.adjacency_;
    }

private:
    std::vector<std::string> ids_;
    std::vector<CellType> types_;
    std::unordered_map<std::string, int> index_;
    int type_count_ = 0;
    std::vector<MonoidSpec> monoids_;
    std::vector<value_type> adjacency_;
};

/// The cell type partition.
inline Partition type_partition(const Network& net)
{
    return Partition::from_labels(net.types());
}

inline void require_domain(const Network& net, const Partition& a)
{
    if (a.size() != net.size())
        throw Error(ErrorKind::PartitionDomainMismatch, "partition covers " + std::to_string(a.size()) +
                                                            " cells, network has " + std::to_string(net.size()));
}

namespace detail {

/// Row m_c P as raw monoid values. Entries for colors whose type differs from
/// every sender stay at the zero of the receiver's first type pair.
inline std::vector<MonoidSpec::value_type> row_sum_values(const Network& net, const Partition& a, int c)
{
    std::vector<MonoidSpec::value_type> out(a.rank());
    std::vector<bool> set(a.rank(), false);
    const int n = static_cast<int>(net.size());
    for (int d = 0; d < n; ++d) {
        const int k = a[d];
        const MonoidSpec& m = net.monoid(net.type(c), net.type(d));
        if (!set[k]) {
            out[k] = net.value(c, d);
            set[k] = true;
        } else {
            out[k] = m.add(out[k], net.value(c, d));
        }
    }
    return out;
}

} // namespace detail

/// Entry k is the monoid sum of adjacency(c, d) over cells d of color k.
///
/// A color mixing sender types has no single monoid; its entry reports the
/// receiver's pair with the first sender of that color.
inline std::vector<Weight> row_color_sum(const Network& net, const Partition& a, int c)
{
    require_domain(net, a);
    if (c < 0 || static_cast<std::size_t>(c) >= net.size())
        throw Error(ErrorKind::UnknownCell, "cell index out of range");
    auto values = detail::row_sum_values(net, a, c);
    std::vector<Weight> out;
    out.reserve(values.size());
    for (const auto& block : a.colors()) {
        const CellType sender = net.type(block.front());
        out.push_back(Weight{values[out.size()], net.type(c), sender, net.monoid(net.type(c), sender)});
    }
    return out;
}

/// Induced subnetwork on `cells` (kept in the given order). Types are
/// renumbered 1..T' preserving their relative order.
struct Subnetwork {
    Network network;
    std::vector<int> cells;         ///< subnetwork index -> original index
    std::vector<CellType> type_map; ///< new type - 1 -> original type
};

inline Subnetwork induced_subnetwork(const Network& net, std::vector<int> cells)
{
    std::vector<CellType> kept;
    for (int c : cells)
        kept.push_back(net.type(c));
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    auto renumber = [&](CellType t) {
        return static_cast<CellType>(std::lower_bound(kept.begin(), kept.end(), t) - kept.begin() + 1);
    };

    std::vector<std::string> ids;
    std::vector<CellType> types;
    for (int c : cells) {
        ids.push_back(net.id(c));
        types.push_back(renumber(net.type(c)));
    }
    std::vector<MonoidSpec> monoids;
    for (CellType r : kept)
        for (CellType s : kept)
            monoids.push_back(net.monoid(r, s));
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = 0; j < cells.size(); ++j)
            if (net.has_edge(cells[i], cells[j]))
                edges.push_back({static_cast<int>(j), static_cast<int>(i), net.value(cells[i], cells[j])});
    return {Network(std::move(ids), std::move(types), std::move(monoids), edges), std::move(cells),
            std::move(kept)};
}

// ---- JSON ------------------------------------------------------------------

namespace detail {

inline MonoidSpec parse_monoid_name(const nlohmann::json& j)
{
    if (!j.is_string())
        throw Error(ErrorKind::MalformedDocument, "monoid must be a string");
    auto m = monoid_from_name(j.get<std::string>());
    if (!m)
        throw Error(ErrorKind::UnsupportedMonoid, "unknown monoid '" + j.get<std::string>() + "'");
    return *m;
}

inline MonoidSpec::value_type parse_weight(const nlohmann::json& j)
{
    if (j.is_number_integer())
        return j.get<MonoidSpec::value_type>();
    if (j.is_string() && (j == "inf" || j == "infinity"))
        return MonoidSpec::infinity;
    throw Error(ErrorKind::MalformedDocument, "edge weight must be an integer");
}

inline nlohmann::json weight_json(MonoidSpec::value_type v)
{
    if (v == MonoidSpec::infinity)
        return "inf";
    return v;
}

} // namespace detail

/// Reads {"monoid", "cells": [{"id","type"}], "edges": [{"from","to","weight"}]}.
/// An optional "monoids" list of {"receiver","sender","monoid"} overrides
/// individual type pairs. Omitted edge weights default to 1.
inline Network parse_network(const nlohmann::json& doc)
{
    try {
        if (!doc.is_object())
            throw Error(ErrorKind::MalformedDocument, "network document must be an object");
        MonoidSpec base{};
        if (doc.contains("monoid"))
            base = detail::parse_monoid_name(doc.at("monoid"));

        if (!doc.contains("cells") || !doc.at("cells").is_array())
            throw Error(ErrorKind::MalformedDocument, "missing 'cells' array");
        std::vector<std::string> ids;
        std::vector<CellType> types;
        for (const auto& cell : doc.at("cells")) {
            if (!cell.is_object() || !cell.contains("id"))
                throw Error(ErrorKind::MalformedDocument, "cell entries need an 'id'");
            const auto& id = cell.at("id");
            ids.push_back(id.is_string() ? id.get<std::string>() : id.dump());
            types.push_back(cell.value("type", 1));
        }

        int type_count = 0;
        for (CellType t : types)
            type_count = std::max(type_count, t);
        std::vector<MonoidSpec> monoids{base};
        if (doc.contains("monoids")) {
            monoids.assign(static_cast<std::size_t>(type_count) * type_count, base);
            for (const auto& entry : doc.at("monoids")) {
                const int r = entry.at("receiver").get<int>();
                const int s = entry.at("sender").get<int>();
                if (r < 1 || s < 1 || r > type_count || s > type_count)
                    throw Error(ErrorKind::MalformedDocument, "monoid override for unknown type pair");
                monoids[static_cast<std::size_t>(r - 1) * type_count + (s - 1)] =
                    detail::parse_monoid_name(entry.at("monoid"));
            }
        }

        std::unordered_map<std::string, int> index;
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (!index.emplace(ids[i], static_cast<int>(i)).second)
                throw Error(ErrorKind::DuplicateCellId, "cell '" + ids[i] + "' declared twice");

        std::vector<Edge> edges;
        if (doc.contains("edges")) {
            for (const auto& e : doc.at("edges")) {
                auto endpoint = [&](const char* key) {
                    const auto& v = e.at(key);
                    std::string name = v.is_string() ? v.get<std::string>() : v.dump();
                    auto it = index.find(name);
                    if (it == index.end())
                        throw Error(ErrorKind::UnknownCellInEdge, "edge refers to unknown cell '" + name + "'");
                    return it->second;
                };
                Edge edge{endpoint("from"), endpoint("to"), 1};
                if (e.contains("weight"))
                    edge.weight = detail::parse_weight(e.at("weight"));
                edges.push_back(edge);
            }
        }
        return Network(std::move(ids), std::move(types), std::move(monoids), edges);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::MalformedDocument, ex.what());
    }
}

inline Network parse_network(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::MalformedDocument, ex.what());
    }
    return parse_network(doc);
}

inline Network parse_network(const std::string& text) { return parse_network(std::string_view(text)); }
inline Network parse_network(const char* text) { return parse_network(std::string_view(text)); }

inline Network load_network(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::MalformedDocument, "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str());
}

/// Inverse of parse_network; edges are written folded.
inline nlohmann::json to_json(const Network& net)
{
    nlohmann::json doc;
    doc["monoid"] = net.monoids().empty() ? "int-add" : std::string(net.monoids().front().name());
    if (!net.homogeneous_monoid()) {
        auto& list = doc["monoids"] = nlohmann::json::array();
        for (int r = 1; r <= net.type_count(); ++r)
            for (int s = 1; s <= net.type_count(); ++s)
                list.push_back({{"receiver", r}, {"sender", s}, {"monoid", net.monoid(r, s).name()}});
    }
    auto& cells = doc["cells"] = nlohmann::json::array();
    for (std::size_t c = 0; c < net.size(); ++c)
        cells.push_back({{"id", net.ids()[c]}, {"type", net.types()[c]}});
    auto& edges = doc["edges"] = nlohmann::json::array();
    for (const Edge& e : net.edges())
        edges.push_back({{"from", net.id(e.from)}, {"to", net.id(e.to)}, {"weight", detail::weight_json(e.weight)}});
    return doc;
}

// ---- DOT -------------------------------------------------------------------

namespace detail {

inline std::string dot_quote(std::string_view s)
{
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\')
            out += '\\';
        out += ch;
    }
    return out + '"';
}

inline constexpr const char* kShapes[] = {"circle", "box", "diamond", "hexagon", "triangle", "octagon",
                                          "pentagon", "house", "invtriangle", "doublecircle"};
inline constexpr const char* kFills[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
                                         "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};

inline std::string weight_label(MonoidSpec::value_type v)
{
    return v == MonoidSpec::infinity ? "inf" : std::to_string(v);
}

} // namespace detail

/// GraphViz digraph. Node shape follows the cell type, fill follows the
/// color of `a` when given. Edges run sender -> receiver.
inline std::string export_dot(const Network& net, const std::optional<Partition>& a = std::nullopt)
{
    if (a)
        require_domain(net, *a);
    std::ostringstream out;
    out << "digraph network {\n";
    for (std::size_t c = 0; c < net.size(); ++c) {
        const int t = net.types()[c] - 1;
        out << "  " << detail::dot_quote(net.ids()[c]) << " [shape=" << detail::kShapes[t % std::size(detail::kShapes)];
        if (a)
            out << ", style=filled, fillcolor=\"" << detail::kFills[(*a)[c] % std::size(detail::kFills)] << "\"";
        out << "];\n";
    }
    for (const Edge& e : net.edges())
        out << "  " << detail::dot_quote(net.id(e.from)) << " -> " << detail::dot_quote(net.id(e.to))
            << " [label=\"" << detail::weight_label(e.weight) << "\"];\n";
    out << "}\n";
    return out.str();
}

} // namespace synckit
