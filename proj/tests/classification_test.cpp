#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace synckit;
using namespace testing_support;

namespace {

const auto N = NeighborhoodKind::n();
const auto V = NeighborhoodKind::v();
const auto Rk = NeighborhoodKind::r();

BalancedCertificate cert(const Network& net, const std::string& p)
{
    auto c = is_balanced(net, part(net, p));
    if (!c)
        throw std::runtime_error(p + " is not balanced");
    return *c;
}

TEST(Classification, ColorsOnFourSccs)
{
    const Network net = fixture("four_sccs");
    EXPECT_EQ(classify_color(net, {net.index_of("4")}), ColorClass::Strong);
    EXPECT_EQ(classify_color(net, {net.index_of("4"), net.index_of("6")}), ColorClass::Rooted);
    EXPECT_EQ(classify_color(net, {net.index_of("1"), net.index_of("5")}), ColorClass::Weak);
    EXPECT_EQ(classify_color(net, {net.index_of("1"), net.index_of("2")}), ColorClass::Strong);
    EXPECT_THROW(classify_color(net, {}), Error);

    const Partition a = part(net, "5/67/1234");
    EXPECT_EQ(classify_colors(net, a),
              (std::vector<ColorClass>{ColorClass::Rooted, ColorClass::Strong, ColorClass::Strong}));
    EXPECT_EQ(classify_partition(net, a), ColorClass::Rooted);
}

TEST(Classification, Partitions)
{
    const Network net = fixture("four_sccs");
    EXPECT_EQ(classify_partition(net, Partition::trivial(7)), ColorClass::Strong);
    EXPECT_EQ(classify_partition(net, scc_decomposition(net)), ColorClass::Strong);
    EXPECT_EQ(classify_partition(net, part(net, "12/3/4/5/67")), ColorClass::Strong);

    const Network sp = fixture("signed_pairs");
    EXPECT_EQ(classify_partition(sp, part(sp, "12345")), ColorClass::Weak);
    for (const char* p : {"12/45", "12/345", "25/34", "125/34"})
        EXPECT_EQ(classify_partition(sp, part(sp, p)), ColorClass::Rooted) << p;
    EXPECT_EQ(classify_partition(sp, part(sp, "12/34")), ColorClass::Strong);
}

TEST(Classification, KindNames)
{
    EXPECT_EQ(parse_neighborhood_kind("vk:3").k, 3);
    EXPECT_EQ(parse_neighborhood_kind("r").kind, NeighborhoodKind::Rin);
    EXPECT_THROW(parse_neighborhood_kind("vk:0"), Error);
    EXPECT_THROW(parse_neighborhood_kind("x"), Error);
}

TEST(Classification, MatchedCounterexamples)
{
    const Network pair = fixture("edge_pair");
    EXPECT_FALSE(is_matched(pair, Partition::single(2), N));
    EXPECT_TRUE(is_matched(pair, Partition::single(2), V));

    const Network scc = fixture("single_scc");
    EXPECT_EQ(cumulative_in(scc, scc.index_of("1")), cells(scc, {"1", "4"}));
    EXPECT_EQ(cumulative_in(scc, scc.index_of("4")), cells(scc, {"2", "3", "4"}));
    EXPECT_FALSE(is_matched(scc, part(scc, "14/23"), V));
    EXPECT_TRUE(is_matched(scc, part(scc, "14/23"), Rk));
    for (const auto& p : oracle::all_partitions(4))
        EXPECT_TRUE(is_matched(scc, Partition::from_labels(p), Rk));
}

TEST(Classification, InvariantCounterexamples)
{
    const Network cancel = fixture("cancellation");
    const auto c1 = cert(cancel, "12/3/4");
    EXPECT_TRUE(is_matched(cancel, c1.partition, N));
    EXPECT_FALSE(is_invariant(cancel, c1, N));

    const Network mixed = fixture("signed_mixed");
    const auto c2 = cert(mixed, "14/23");
    EXPECT_FALSE(is_matched(mixed, c2.partition, N));
    EXPECT_FALSE(is_invariant(mixed, c2, N));

    const Network cyc = fixture("signed_cycle");
    const auto c3 = cert(cyc, "123");
    EXPECT_TRUE(in_neighborhood(quotient_network(cyc, c3), 0).empty());
    EXPECT_FALSE(is_invariant(cyc, c3, N));
    EXPECT_TRUE(is_invariant(cyc, c3, V));

    const Network star = fixture("signed_star");
    const auto c4 = cert(star, "1/23/4");
    EXPECT_FALSE(is_invariant(star, c4, V));
    EXPECT_TRUE(is_invariant(star, c4, Rk));

    for (const char* name : {"cancellation", "signed_cycle", "four_sccs"}) {
        const Network net = fixture(name);
        const auto bottom = *is_balanced(net, Partition::trivial(net.size()));
        for (auto kind : {N, V, NeighborhoodKind::vk(2), Rk})
            EXPECT_TRUE(is_invariant(net, bottom, kind)) << name;
    }
}

TEST(Classification, TopPartitions)
{
    const Network loops = fixture("twin_loops");
    EXPECT_EQ(top_strong(loops), Partition::trivial(4));
    const TopNonweak nw = top_nonweak(loops);
    EXPECT_EQ(nw.partition, part(loops, "13/24"));
    EXPECT_TRUE(nw.valid);

    const Network scc = fixture("single_scc");
    const TopNonweak s = top_nonweak(scc);
    EXPECT_EQ(s.partition, top_strong(scc));
    EXPECT_EQ(top_strong(scc), cir_balanced(scc, type_partition(scc)));
    EXPECT_TRUE(s.valid);

    EXPECT_EQ(top_strong(fixture("chain")), Partition::trivial(4));

    // Without the matched hypothesis the candidate need not dominate every
    // non-weak element; report either failure mode.
    const Network sp = fixture("signed_pairs");
    const BalancedLattice lat = enumerate_balanced(sp);
    const TopNonweak t = top_nonweak(sp, lat);
    bool dominates = true;
    for (const auto& e : lat.elements)
        if (classify_partition(sp, e) != ColorClass::Weak && !refines(e, t.partition))
            dominates = false;
    EXPECT_TRUE(!t.valid || !dominates);
}

TEST(Classification, JoinTables)
{
    const Network loops = fixture("twin_loops");
    const auto r = join_table_report(loops, enumerate_balanced(loops));
    EXPECT_TRUE(r.rooted_matched);
    EXPECT_TRUE(r.ok());

    const Network sp = fixture("signed_pairs");
    const auto r9 = join_table_report(sp, enumerate_balanced(sp));
    EXPECT_TRUE(r9.general_violations.empty());
    EXPECT_FALSE(r9.rooted_matched);
    EXPECT_GT(r9.counts[1][1][2], 0); // R v R = W
    EXPECT_TRUE(std::any_of(r9.entries.begin(), r9.entries.end(), [&](const JoinEntry& e) {
        return e.left_class == ColorClass::Rooted && e.right_class == ColorClass::Rooted &&
               part(sp, "12345") == enumerate_balanced(sp).elements[e.join];
    }));

    const Network distinct = parse_network(R"({"cells":[{"id":"a","type":1},{"id":"b","type":2}]})");
    const auto r0 = join_table_report(distinct, enumerate_balanced(distinct));
    EXPECT_TRUE(r0.ok());
    EXPECT_EQ(r0.entries.size(), 1u);
}

TEST(Classification, QuotientTable)
{
    const Network net = fixture("quotient_classes");
    const BalancedLattice lat = enumerate_balanced(net);
    auto lookup = [&](const QuotientClassReport& r, const std::string& p) {
        const int idx = *lat.index_of(part(net, p));
        for (const auto& e : r.entries)
            if (e.element == idx)
                return std::make_pair(e.in_g, e.in_q);
        throw std::runtime_error("missing " + p);
    };

    const auto r1 = quotient_class_report(net, cert(net, "12/3/4"), lat);
    EXPECT_TRUE(r1.precondition_met);
    EXPECT_TRUE(r1.ok());
    EXPECT_EQ(lookup(r1, "12/3/4"), std::make_pair(ColorClass::Weak, ColorClass::Strong));
    EXPECT_EQ(lookup(r1, "12/34"), std::make_pair(ColorClass::Weak, ColorClass::Rooted));

    const auto r2 = quotient_class_report(net, cert(net, "1/2/34"), lat);
    EXPECT_TRUE(r2.precondition_met);
    EXPECT_EQ(lookup(r2, "12/34"), std::make_pair(ColorClass::Weak, ColorClass::Weak));
    EXPECT_EQ(lookup(r2, "1/2/34"), std::make_pair(ColorClass::Rooted, ColorClass::Strong));

    const auto r0 = quotient_class_report(net, cert(net, "1/2/3/4"), lat);
    EXPECT_EQ(r0.entries.size(), lat.size());
    for (const auto& e : r0.entries) {
        EXPECT_EQ(e.image, lat.elements[e.element]);
        EXPECT_EQ(e.in_g, e.in_q);
    }

    const Network cancel = fixture("cancellation");
    const auto rc = quotient_class_report(cancel, cert(cancel, "12/3/4"), enumerate_balanced(cancel));
    EXPECT_FALSE(rc.precondition_met);
    EXPECT_TRUE(rc.violations.empty());
}

TEST(ClassificationProperty, AgreesWithOraclesAndHierarchies)
{
    std::mt19937_64 rng(41);
    const std::vector<NeighborhoodKind> chain{N, V, NeighborhoodKind::vk(2), NeighborhoodKind::vk(3), Rk};
    const int oracle_kind[] = {'n', 'v', 2, 3, 'r'};
    for (int trial = 0; trial < 80; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const Network net = oracle::random_network(rng, n, 1 + static_cast<int>(rng() % 2), {-1, 1, 2}, 0.35);
        const BalancedLattice lat = enumerate_balanced(net);
        const Partition rdc = rdc_decomposition(net);
        for (const auto& e : lat.elements) {
            const ColorClass cls = classify_partition(net, e);
            EXPECT_EQ(static_cast<int>(cls), static_cast<int>(oracle::partition_class(net, e.assignment())));
            const auto c = *is_balanced(net, e);
            bool prev_m = false, prev_i = false;
            for (std::size_t k = 0; k < chain.size(); ++k) {
                const bool m = is_matched(net, e, chain[k]);
                const bool i = is_invariant(net, c, chain[k]);
                EXPECT_EQ(m, oracle::matched(net, e.assignment(), oracle_kind[k]));
                EXPECT_EQ(i, oracle::invariant(net, e.assignment(), oracle_kind[k]));
                if (prev_m)
                    EXPECT_TRUE(m);
                if (prev_i)
                    EXPECT_TRUE(i);
                if (i)
                    EXPECT_TRUE(m);
                prev_m = m;
                prev_i = i;
            }
            const bool rm = is_matched(net, e, Rk);
            if (cls == ColorClass::Strong)
                EXPECT_TRUE(rm);
            if (cls != ColorClass::Weak && rm)
                EXPECT_TRUE(refines(e, rdc));
        }
        for (const auto& a : lat.elements)
            for (const auto& b : lat.elements) {
                const ColorClass ca = classify_partition(net, a), cb = classify_partition(net, b);
                if (refines(a, b))
                    EXPECT_LE(static_cast<int>(ca), static_cast<int>(cb));
                if (ca != ColorClass::Weak && cb != ColorClass::Weak && is_matched(net, a, Rk) &&
                    is_matched(net, b, Rk))
                    EXPECT_NE(classify_partition(net, join(a, b)), ColorClass::Weak);
            }
        EXPECT_TRUE(join_table_report(net, lat).ok());
    }
}

TEST(ClassificationProperty, PositiveWeightsNeverCancel)
{
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 80; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const Network net = oracle::random_network(rng, n, 1 + static_cast<int>(rng() % 2), {1, 2, 3}, 0.35);
        for (const auto& e : enumerate_balanced(net).elements)
            EXPECT_TRUE(is_invariant(net, *is_balanced(net, e), N));
    }
}

} // namespace
