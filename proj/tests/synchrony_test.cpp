#include <random>
#include <set>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace synckit;
using namespace testing_support;

namespace {

bool same_structure(const Network& a, const Network& b)
{
    if (a.types() != b.types())
        return false;
    for (int c = 0; c < static_cast<int>(a.size()); ++c)
        for (int d = 0; d < static_cast<int>(a.size()); ++d)
            if (a.value(c, d) != b.value(c, d))
                return false;
    return true;
}

Partition random_type_refining(std::mt19937_64& rng, const Network& net)
{
    std::vector<int> labels(net.size());
    const int k = 1 + static_cast<int>(rng() % net.size());
    for (auto& l : labels)
        l = static_cast<int>(rng() % k);
    return meet(Partition::from_labels(labels), type_partition(net));
}

TEST(Synchrony, TypedTriangleCertificate)
{
    const Network net = fixture("typed_triangle");
    const auto cert = is_balanced(net, part(net, "12/3"));
    ASSERT_TRUE(cert);
    EXPECT_EQ(cert->quotient_matrix, (std::vector<std::int64_t>{1, 1, 2, 1}));
    EXPECT_EQ(cert->color_types, (std::vector<CellType>{1, 2}));

    const auto bottom = is_balanced(net, Partition::trivial(3));
    ASSERT_TRUE(bottom);
    for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d)
            EXPECT_EQ(bottom->q(c, d), net.value(c, d));

    try {
        is_balanced(net, part(net, "13/2"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotTypeRefining);
    }
}

TEST(Synchrony, TypedTriangleQuotient)
{
    const Network net = fixture("typed_triangle");
    const Network q = quotient_network(net, *is_balanced(net, part(net, "12/3")));
    ASSERT_EQ(q.size(), 2u);
    EXPECT_EQ(q.ids(), (std::vector<std::string>{"12", "3"}));
    EXPECT_EQ(q.types(), (std::vector<CellType>{1, 2}));
    // gray (12) gets one gray and one white input; white gets two gray and one white
    EXPECT_EQ(q.value(0, 0), 1);
    EXPECT_EQ(q.value(0, 1), 1);
    EXPECT_EQ(q.value(1, 0), 2);
    EXPECT_EQ(q.value(1, 1), 1);

    EXPECT_TRUE(same_structure(quotient_network(net, *is_balanced(net, Partition::trivial(3))), net));
}

TEST(Synchrony, CancellationQuotientLosesEdge)
{
    const Network net = fixture("cancellation");
    const auto cert = is_balanced(net, part(net, "12/3/4"));
    ASSERT_TRUE(cert);
    const Network q = quotient_network(net, *cert);
    EXPECT_FALSE(q.has_edge(1, 0)); // 12 -> 3 cancels
    EXPECT_TRUE(net.has_edge(2, 0));
    EXPECT_TRUE(net.has_edge(2, 1));
}

TEST(Synchrony, Cir)
{
    const Network net = fixture("typed_triangle");
    EXPECT_EQ(cir_balanced(net, type_partition(net)), part(net, "12/3"));
    EXPECT_EQ(cir_balanced(net, type_partition(net)).assignment(), oracle::cir(net, oracle::types(net)));
    EXPECT_EQ(cir_balanced(net, Partition::trivial(3)), Partition::trivial(3));

    const Network chain = fixture("chain");
    const Partition one = Partition::single(4);
    ASSERT_FALSE(is_balanced(chain, one));
    const Partition c = cir_balanced(chain, one);
    EXPECT_TRUE(refines(c, one));
    EXPECT_NE(c, one);
}

TEST(Synchrony, EnumerationOnFixtures)
{
    const Network loops = fixture("twin_loops");
    const BalancedLattice lat = enumerate_balanced(loops);
    std::set<std::string> got;
    for (const auto& e : lat.elements)
        got.insert(show(loops, e));
    EXPECT_EQ(got, (std::set<std::string>{"1234", "123/4", "124/3", "12/34", "12/3/4", "13/24", "13/2/4",
                                          "1/24/3", "1/2/3/4"}));
    EXPECT_EQ(lat.elements[lat.bottom], Partition::trivial(4));
    EXPECT_EQ(lat.elements[lat.top], Partition::single(4));

    const Network signed_pairs = fixture("signed_pairs");
    const BalancedLattice lat9 = enumerate_balanced(signed_pairs);
    for (const char* p : {"12/45", "12/345", "25/34", "125/34", "12345", "12/34"})
        EXPECT_TRUE(lat9.contains(part(signed_pairs, p))) << p;

    const Network distinct = parse_network(R"({"cells":[{"id":"a","type":1},{"id":"b","type":2},{"id":"c","type":3}],
        "edges":[{"from":"a","to":"b"},{"from":"b","to":"c"},{"from":"c","to":"a"}]})");
    EXPECT_EQ(enumerate_balanced(distinct).size(), 1u);
}

TEST(Synchrony, EnumerationCap)
{
    const Network chain = fixture("chain");
    try {
        enumerate_balanced(chain, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooLarge);
    }
}

TEST(Synchrony, HasseDiagram)
{
    const Network loops = fixture("twin_loops");
    const BalancedLattice lat = enumerate_balanced(loops);
    // Every cover is a strict refinement with nothing enumerated in between.
    for (auto [lo, hi] : lat.cover_edges) {
        const auto& a = lat.elements[lo];
        const auto& b = lat.elements[hi];
        EXPECT_TRUE(refines(a, b));
        EXPECT_NE(a, b);
        for (const auto& m : lat.elements)
            EXPECT_FALSE(m != a && m != b && refines(a, m) && refines(m, b));
    }
    // The order is the transitive closure of the covers.
    const std::size_t m = lat.size();
    std::vector<std::vector<bool>> reach(m, std::vector<bool>(m));
    for (std::size_t i = 0; i < m; ++i)
        reach[i][i] = true;
    for (auto [lo, hi] : lat.cover_edges)
        reach[lo][hi] = true;
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (reach[i][k] && reach[k][j])
                    reach[i][j] = true;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            EXPECT_EQ(reach[i][j], refines(lat.elements[i], lat.elements[j]));
    EXPECT_NE(lattice_to_dot(lat, loops.ids()).find("13/24"), std::string::npos);
}

TEST(Synchrony, LatticeQuotient)
{
    const Network net = fixture("lattice_quotient");
    const BalancedLattice lat = enumerate_balanced(net);
    std::set<std::string> got;
    for (const auto& e : lat.elements)
        got.insert(show(net, e));
    EXPECT_EQ(got, (std::set<std::string>{"1/2/3/4", "1/24/3", "13/24", "1/234", "1/23/4", "1234"}));

    const BalancedLattice q = lattice_quotient(lat, part(net, "1/24/3"));
    std::set<std::vector<int>> elems;
    for (const auto& e : q.elements)
        elems.insert(e.assignment());
    EXPECT_EQ(elems, (std::set<std::vector<int>>{{0, 1, 2}, {0, 1, 0}, {0, 1, 1}, {0, 0, 0}}));
    EXPECT_EQ(q.elements[q.bottom], Partition::trivial(3));

    const BalancedLattice by_bottom = lattice_quotient(lat, Partition::trivial(4));
    EXPECT_EQ(by_bottom.elements, lat.elements);
    EXPECT_EQ(by_bottom.cover_edges, lat.cover_edges);
    EXPECT_EQ(lattice_quotient(lat, lat.elements[lat.top]).size(), 1u);
    EXPECT_THROW(lattice_quotient(lat, part(net, "12/3/4")), Error);
}

TEST(Synchrony, LatticeMeetBasics)
{
    const Network net = fixture("twin_loops");
    const Partition b = part(net, "13/24");
    EXPECT_EQ(lattice_meet(net, b, b), b);
    EXPECT_EQ(lattice_meet(net, Partition::trivial(4), b), Partition::trivial(4));
    EXPECT_THROW(lattice_meet(net, part(net, "14/23"), b), Error);
}

TEST(Synchrony, Exo)
{
    const Network pair = fixture("edge_pair");
    EXPECT_TRUE(is_exo_balanced(pair, Partition::single(2)));
    EXPECT_FALSE(is_balanced(pair, Partition::single(2)));
    const Network tri = fixture("typed_triangle");
    EXPECT_TRUE(is_exo_balanced(tri, part(tri, "12/3")));
    EXPECT_THROW(is_exo_balanced(tri, part(tri, "13/2")), Error);
}

TEST(SynchronyProperty, AgreesWithOracles)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const Network net = oracle::random_network(rng, n, 1 + static_cast<int>(rng() % 2), {-1, 1, 2}, 0.35);
        const BalancedLattice lat = enumerate_balanced(net);

        std::set<std::vector<int>> ours, theirs;
        for (const auto& e : lat.elements)
            ours.insert(e.assignment());
        for (const auto& p : oracle::balanced_partitions(net))
            theirs.insert(p);
        EXPECT_EQ(ours, theirs);

        for (const auto& p : oracle::all_partitions(n)) {
            const Partition a = Partition::from_labels(p);
            if (!is_type_refining(net, a))
                continue;
            EXPECT_EQ(is_balanced(net, a).has_value(), oracle::balanced(net, p));
            EXPECT_EQ(is_exo_balanced(net, a), oracle::exo_balanced(net, p));
            if (is_balanced(net, a))
                EXPECT_TRUE(is_exo_balanced(net, a));
        }

        for (std::size_t i = 0; i < lat.size(); ++i)
            for (std::size_t j = 0; j < lat.size(); ++j) {
                const auto& a = lat.elements[i];
                const auto& b = lat.elements[j];
                EXPECT_TRUE(lat.contains(join(a, b)));
                // greatest lattice element below both
                const Partition m = lattice_meet(net, a, b);
                EXPECT_TRUE(refines(m, a) && refines(m, b));
                for (const auto& e : lat.elements)
                    if (refines(e, a) && refines(e, b))
                        EXPECT_TRUE(refines(e, m));
            }
    }
}

TEST(SynchronyProperty, CirLaws)
{
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 6);
        const Network net = oracle::random_network(rng, n, 1 + static_cast<int>(rng() % 2), {-1, 0, 1, 2}, 0.4);
        const Partition a = random_type_refining(rng, net);
        const Partition b = join(a, random_type_refining(rng, net));
        const Partition ca = cir_balanced(net, a), cb = cir_balanced(net, b);
        EXPECT_EQ(ca.assignment(), oracle::cir(net, a.assignment()));
        EXPECT_EQ(cir_balanced(net, ca), ca);
        EXPECT_TRUE(refines(ca, cb));
        EXPECT_TRUE(is_balanced(net, ca));

        // cir commutes with quotients over a balanced partition below b
        const Partition bow = cir_balanced(net, meet(a, b));
        const auto cert = *is_balanced(net, bow);
        const Network q = quotient_network(net, cert);
        EXPECT_EQ(cir_balanced(q, quotient_partition(b, bow)), quotient_partition(cb, bow));
    }
}

TEST(SynchronyProperty, QuotientLatticesAndQuotientChains)
{
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const Network net = oracle::random_network(rng, n, 1 + static_cast<int>(rng() % 2), {-1, 1, 2}, 0.4);
        const BalancedLattice lat = enumerate_balanced(net);
        for (const auto& bow : lat.elements) {
            const auto cert = *is_balanced(net, bow);
            const Network q = quotient_network(net, cert);
            EXPECT_TRUE(same_structure(q, oracle::quotient(net, bow.assignment())));
            EXPECT_EQ(enumerate_balanced(q).elements, lattice_quotient(lat, bow).elements);

            for (const auto& top : lat.elements) {
                if (!refines(bow, top))
                    continue;
                const Network direct = quotient_network(net, *is_balanced(net, top));
                const Partition rel = quotient_partition(top, bow);
                const auto rel_cert = is_balanced(q, rel);
                ASSERT_TRUE(rel_cert);
                EXPECT_TRUE(same_structure(direct, quotient_network(q, *rel_cert)));
            }
        }
    }
}

} // namespace
