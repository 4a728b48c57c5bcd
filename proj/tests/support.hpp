#pragma once

#include <string>
#include <vector>

#include "oracles.hpp"
#include "synckit/synckit.hpp"

namespace testing_support {

inline synckit::Network fixture(const std::string& name)
{
    return synckit::load_network(std::string(SYNCKIT_FIXTURES) + "/" + name + ".json");
}

inline std::string fixture_path(const std::string& name)
{
    return std::string(SYNCKIT_FIXTURES) + "/" + name + ".json";
}

inline synckit::Partition part(const synckit::Network& net, const std::string& text)
{
    return synckit::parse_partition(text, net.ids());
}

inline std::string show(const synckit::Network& net, const synckit::Partition& a)
{
    return synckit::format_partition(a, net.ids());
}

inline synckit::Partition from_oracle(const oracle::Labels& l) { return synckit::Partition::from_labels(l); }

/// Cell indices of the named cells, sorted.
inline synckit::CellSet cells(const synckit::Network& net, const std::vector<std::string>& names)
{
    synckit::CellSet out;
    for (const auto& n : names)
        out.push_back(net.index_of(n));
    std::sort(out.begin(), out.end());
    return out;
}

inline synckit::CellSet to_cellset(const oracle::Set& s) { return {s.begin(), s.end()}; }

} // namespace testing_support
