#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "synckit/network.hpp"
#include "synckit/partition.hpp"

namespace synckit {

using CellSet = std::vector<int>; // sorted, unique cell indices

namespace detail {

inline void require_cell(const Network& net, int c)
{
    if (c < 0 || static_cast<std::size_t>(c) >= net.size())
        throw Error(ErrorKind::UnknownCell, "cell index " + std::to_string(c) + " out of range");
}

// senders[c] = cells d with a nonzero weight d -> c
inline std::vector<std::vector<int>> in_lists(const Network& net)
{
    const int n = static_cast<int>(net.size());
    std::vector<std::vector<int>> out(n);
    for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
            if (net.has_edge(c, d))
                out[c].push_back(d);
    return out;
}

inline std::vector<std::vector<int>> out_lists(const Network& net)
{
    const int n = static_cast<int>(net.size());
    std::vector<std::vector<int>> out(n);
    for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
            if (net.has_edge(c, d))
                out[d].push_back(c);
    return out;
}

} // namespace detail

/// N-(c): senders with a nonzero folded weight into c.
inline CellSet in_neighborhood(const Network& net, int c)
{
    detail::require_cell(net, c);
    CellSet out;
    for (int d = 0; d < static_cast<int>(net.size()); ++d)
        if (net.has_edge(c, d))
            out.push_back(d);
    return out;
}

/// V_k-(c): cells with a directed path of at most k edges ending at c.
inline CellSet cumulative_in_k(const Network& net, int c, int k)
{
    detail::require_cell(net, c);
    if (k < 0)
        throw Error(ErrorKind::PreconditionFailed, "k must be nonnegative");
    const auto senders = detail::in_lists(net);
    std::vector<bool> seen(net.size(), false);
    std::vector<int> frontier{c};
    seen[c] = true;
    for (int step = 0; step < k && !frontier.empty(); ++step) {
        std::vector<int> next;
        for (int x : frontier)
            for (int d : senders[x])
                if (!seen[d]) {
                    seen[d] = true;
                    next.push_back(d);
                }
        frontier = std::move(next);
    }
    CellSet out;
    for (int d = 0; d < static_cast<int>(net.size()); ++d)
        if (seen[d])
            out.push_back(d);
    return out;
}

/// V-(c) = {c} u N-(c).
inline CellSet cumulative_in(const Network& net, int c) { return cumulative_in_k(net, c, 1); }

/// R-(c): every cell with a directed path to c, including c.
inline CellSet in_reachability(const Network& net, int c)
{
    return cumulative_in_k(net, c, static_cast<int>(net.size()));
}

/// Partition into strongly connected components (iterative Tarjan).
inline Partition scc_decomposition(const Network& net)
{
    const int n = static_cast<int>(net.size());
    const auto succ = detail::out_lists(net);
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
    std::vector<bool> on_stack(n, false);
    int counter = 0, components = 0;

    struct Frame {
        int v;
        std::size_t next;
    };
    std::vector<Frame> call;
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1)
            continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next < succ[f.v].size()) {
                const int w = succ[f.v][f.next++];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const int v = f.v;
            call.pop_back();
            if (!call.empty())
                low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = components;
                } while (w != v);
                ++components;
            }
        }
    }
    return Partition::from_labels(comp);
}

/// The block DAG of SCCs. Block ids follow the canonical colors of
/// `scc_partition`; edges point from sender block to receiver block.
struct Condensation {
    Partition scc_partition;
    std::vector<std::pair<int, int>> dag_edges; // sorted, unique
    std::vector<int> roots;                     // blocks without incoming edges
};

inline Condensation condensation(const Network& net)
{
    Condensation out{scc_decomposition(net), {}, {}};
    const Partition& s = out.scc_partition;
    const int n = static_cast<int>(net.size());
    std::vector<bool> has_in(s.rank(), false);
    for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
            if (s[c] != s[d] && net.has_edge(c, d)) {
                out.dag_edges.emplace_back(s[d], s[c]);
                has_in[s[c]] = true;
            }
    std::sort(out.dag_edges.begin(), out.dag_edges.end());
    out.dag_edges.erase(std::unique(out.dag_edges.begin(), out.dag_edges.end()), out.dag_edges.end());
    for (int k = 0; k < s.rank(); ++k)
        if (!has_in[k])
            out.roots.push_back(k);
    return out;
}

/// R- for every cell. Cells of one SCC share their set, so each block is
/// searched once.
inline std::vector<CellSet> all_in_reachability(const Network& net)
{
    const Partition scc = scc_decomposition(net);
    std::vector<CellSet> per_block(scc.rank());
    std::vector<bool> done(scc.rank(), false);
    std::vector<CellSet> out(net.size());
    for (int c = 0; c < static_cast<int>(net.size()); ++c) {
        const int b = scc[c];
        if (!done[b]) {
            per_block[b] = in_reachability(net, c);
            done[b] = true;
        }
        out[c] = per_block[b];
    }
    return out;
}

/// Cells grouped by the set of root blocks they are reachable from.
inline Partition rdc_decomposition(const Network& net)
{
    const Condensation cond = condensation(net);
    const auto reach = all_in_reachability(net);
    std::vector<bool> is_root(cond.scc_partition.rank(), false);
    for (int r : cond.roots)
        is_root[r] = true;

    std::map<std::vector<int>, int> groups;
    std::vector<int> labels(net.size());
    for (std::size_t c = 0; c < net.size(); ++c) {
        std::vector<int> roots;
        for (int d : reach[c])
            if (is_root[cond.scc_partition[d]])
                roots.push_back(cond.scc_partition[d]);
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        labels[c] = groups.try_emplace(std::move(roots), static_cast<int>(groups.size())).first->second;
    }
    return Partition::from_labels(labels);
}

} // namespace synckit
