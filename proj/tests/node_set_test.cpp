#include <random>

#include <gtest/gtest.h>

#include "labellens/node_set.hpp"

using labellens::NodeSet;

TEST(NodeSet, BasicMembership) {
    NodeSet s(70);
    s.insert(0);
    s.insert(65);
    EXPECT_TRUE(s.contains(65));
    EXPECT_FALSE(s.contains(64));
    EXPECT_EQ(s.count(), 2u);
    s.erase(0);
    EXPECT_EQ(s.members(), std::vector<int>{65});
}

TEST(NodeSet, HexLayout) {
    NodeSet s(10);
    s.insert(0);
    s.insert(5);
    s.insert(9);
    EXPECT_EQ(s.to_hex(), "221");
    EXPECT_THROW(NodeSet::from_hex("zz", 8), std::invalid_argument);
    EXPECT_THROW(NodeSet::from_hex("f00", 8), std::invalid_argument);
}

TEST(NodeSet, HexRoundTripAndSetAlgebra) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng() % 150;
        NodeSet a(n), b(n);
        for (std::size_t v = 0; v < n; ++v) {
            if (rng() % 3 == 0) a.insert(static_cast<int>(v));
            if (rng() % 3 == 0) b.insert(static_cast<int>(v));
        }
        EXPECT_EQ(NodeSet::from_hex(a.to_hex(), n), a);
        bool subset = true, meets = false;
        for (std::size_t v = 0; v < n; ++v) {
            if (a.contains(static_cast<int>(v)) && !b.contains(static_cast<int>(v))) subset = false;
            if (a.contains(static_cast<int>(v)) && b.contains(static_cast<int>(v))) meets = true;
        }
        EXPECT_EQ(a.is_subset_of(b), subset);
        EXPECT_EQ(a.intersects(b), meets);
        EXPECT_TRUE((a & b).is_subset_of(a));
        EXPECT_TRUE(a.is_subset_of(a | b));
    }
}
