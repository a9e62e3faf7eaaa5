#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "labellens/generator.hpp"
#include "labellens/instance.hpp"
#include "labellens/labeling.hpp"

using namespace labellens;

namespace {

const char* kTwoNode = R"(NAME : tiny
NODES : 2
SOURCE : 1
DEST : 2
CAPACITY : 5
EXPLICIT_COST_SECTION
1 2 3
EXPLICIT_RESOURCE_SECTION
1 2 1
EOF
)";

std::string parse_message(const std::string& text) {
    try {
        parse_instance(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(ParseInstance, SmallestLegalDocument) {
    const Instance in = parse_instance(kTwoNode);
    EXPECT_EQ(in.n, 2);
    EXPECT_EQ(in.source, 0);
    EXPECT_EQ(in.destination, 1);
    EXPECT_EQ(in.cost(0, 1), 3.0);
    EXPECT_EQ(in.resource(0, 1), 1.0);
    EXPECT_EQ(in.capacity, 5.0);
}

TEST(ParseInstance, MissingCapacity) {
    std::string doc = kTwoNode;
    doc.erase(doc.find("CAPACITY : 5\n"), 13);
    EXPECT_NE(parse_message(doc).find("missing CAPACITY"), std::string::npos);
}

TEST(ParseInstance, EuclideanCostWithPrize) {
    // internal node 1 sits at (1, 0) and node 2 at (4, 4): distance 5, prize 2 at node 2.
    const Instance in = parse_instance(R"(NODES : 4
SOURCE : 1
DEST : 4
CAPACITY : 10
NODE_COORD_SECTION
1 0 0
2 1 0
3 4 4
4 0 1
PRIZE_SECTION
3 2
EOF
)");
    EXPECT_EQ(in.cost(1, 2), 5.0 - 2.0);
    EXPECT_EQ(in.cost(2, 1), 5.0);
}

TEST(ParseInstance, ErrorsNameLineAndSection) {
    const std::string bad_number = R"(NODES : 2
SOURCE : 1
DEST : 2
CAPACITY : 5
EXPLICIT_COST_SECTION
1 2 abc
EOF
)";
    const std::string msg = parse_message(bad_number);
    EXPECT_NE(msg.find("line 6"), std::string::npos) << msg;
    EXPECT_NE(msg.find("EXPLICIT_COST_SECTION"), std::string::npos) << msg;

    const std::string dup = R"(NODES : 3
SOURCE : 1
DEST : 3
CAPACITY : 5
NODE_COORD_SECTION
1 0 0
2 1 1
2 1 1
3 2 2
EOF
)";
    EXPECT_NE(parse_message(dup).find("duplicate node id"), std::string::npos);

    const std::string malformed = R"(NODES : 2
SOURCE : 1
DEST : 2
CAPACITY : 5
EXPLICIT_COST_SECTION
1 2
EOF
)";
    EXPECT_NE(parse_message(malformed).find("malformed row"), std::string::npos);

    const std::string missing_arc = R"(NODES : 3
SOURCE : 1
DEST : 3
CAPACITY : 5
EXPLICIT_COST_SECTION
1 2 1
EOF
)";
    EXPECT_NE(parse_message(missing_arc).find("missing arc"), std::string::npos);
}

TEST(DeriveCosts, CollinearNodes) {
    const std::vector<Point> pts{{0, 0}, {3, 0}, {4, 0}};
    Matrix c = derive_costs(pts, {0, 0, 0});
    EXPECT_EQ(c(0, 1), 3.0);
    EXPECT_EQ(c(1, 2), 1.0);
    c = derive_costs(pts, {0, 5, 0});
    EXPECT_EQ(c(0, 1), -2.0);
}

TEST(DeriveCosts, UnitSquareMatchesRecomputation) {
    const std::vector<Point> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const Matrix c = derive_costs(pts, {1, 1, 1, 1});
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
            const double expected = i == j ? 0.0 : std::floor(std::sqrt(dx * dx + dy * dy) + 0.5) - 1.0;
            EXPECT_EQ(c(i, j), expected) << i << "," << j;
        }
    }
    EXPECT_EQ(c(0, 2), 0.0);
}

TEST(DeriveCosts, AsymmetryEqualsPrizeDifference) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        GeneratorOptions g;
        g.seed = seed;
        g.n = 9;
        g.prize_scale = 1.5;
        const Instance in = generate_instance(g);
        for (int i = 0; i < in.n; ++i)
            for (int j = 0; j < in.n; ++j)
                if (i != j) EXPECT_DOUBLE_EQ(in.cost(i, j) - in.cost(j, i), in.prize[i] - in.prize[j]);
    }
}

TEST(Reachability, SingleArcBudget) {
    Instance in = parse_instance(kTwoNode);
    in.resource(0, 1) = 6;
    EXPECT_TRUE(Reachability(in).unreachable_from_source().contains(1));

    GeneratorOptions g;
    g.n = 6;
    Instance wide = generate_instance(g);
    wide.capacity = 10;
    for (int i = 0; i < wide.n; ++i)
        for (int j = 0; j < wide.n; ++j)
            if (i != j) wide.resource(i, j) = 1 + (i + j) % 2;
    EXPECT_TRUE(Reachability(wide).unreachable_from_source().empty());
}

TEST(Reachability, LabelFlagsMatchExhaustiveCheck) {
    std::mt19937 rng(11);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GeneratorOptions g;
        g.seed = seed;
        g.n = 8;
        g.route_length = 2.5;
        const Instance in = generate_instance(g);
        const RelaxationState elem = RelaxationState::elementary(8);
        for (const Direction d : {Direction::Forward, Direction::Backward}) {
            std::vector<Label> frontier{make_root(in, d, 0)};
            for (int depth = 0; depth < 4 && !frontier.empty(); ++depth) {
                std::vector<Label> next;
                for (const Label& l : frontier) {
                    int unaltered = 0;
                    for (int k = 0; k < in.n; ++k) {
                        const double r = d == Direction::Forward ? in.resource(l.node, k) : in.resource(k, l.node);
                        const bool blocked = l.consumption + r > in.capacity;
                        EXPECT_EQ(l.unreachable.contains(k), blocked || l.visited.contains(k));
                        if (blocked || l.visited_unaltered.contains(k)) ++unaltered;
                    }
                    EXPECT_EQ(l.unreachable_unaltered, unaltered);
                    for (int pick = 0; pick < 2; ++pick) {
                        const int j = static_cast<int>(rng() % 8);
                        if (j == l.node) continue;
                        if (auto c = extend(l, j, in, elem, 1)) next.push_back(*c);
                    }
                }
                frontier = std::move(next);
            }
        }
    }
}

TEST(Instance, RoundTripPreservesEverything) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        GeneratorOptions g;
        g.seed = seed;
        g.n = 3 + static_cast<int>(seed % 9);
        g.geometry = static_cast<Geometry>(seed % 3);
        g.resource_mode = seed % 2 ? ResourceMode::ArcDistance : ResourceMode::NodeDemand;
        Instance in = generate_instance(g);
        EXPECT_EQ(parse_instance(serialize_instance(in)), in);
        in.coords.reset();
        EXPECT_EQ(parse_instance(serialize_instance(in)), in);
    }
}

TEST(Instance, FuzzedDocumentsFailCleanlyOrValidate) {
    GeneratorOptions g;
    g.n = 5;
    const std::string base = serialize_instance(generate_instance(g));
    std::vector<std::string> lines;
    for (std::size_t pos = 0; pos < base.size();) {
        const auto nl = base.find('\n', pos);
        lines.push_back(base.substr(pos, nl - pos));
        pos = nl + 1;
    }
    std::mt19937 rng(5);
    const std::vector<std::string> junk{"x", "-1", "1e999", "", "NODES : 0", "CAPACITY : -3", "9 9 9", "1 1 0"};
    int parsed = 0, rejected = 0;
    for (int trial = 0; trial < 400; ++trial) {
        auto mutated = lines;
        const int edits = 1 + static_cast<int>(rng() % 3);
        for (int e = 0; e < edits; ++e) {
            const std::size_t at = rng() % mutated.size();
            switch (rng() % 3) {
                case 0: mutated.erase(mutated.begin() + static_cast<long>(at)); break;
                case 1: mutated[at] = junk[rng() % junk.size()]; break;
                default: mutated.insert(mutated.begin() + static_cast<long>(at), mutated[rng() % mutated.size()]);
            }
        }
        std::string doc;
        for (const auto& l : mutated) doc += l + "\n";
        try {
            const Instance in = parse_instance(doc);
            EXPECT_NO_THROW(validate(in));
            ++parsed;
        } catch (const ParseError&) {
            ++rejected;
        }
    }
    EXPECT_GT(rejected, 0);
    EXPECT_EQ(parsed + rejected, 400);
}

TEST(ConvertCvrp, DepotCopiedAsDestination) {
    const Instance in = convert_cvrp(R"(NAME : toy
TYPE : CVRP
DIMENSION : 3
CAPACITY : 10
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 4
3 6 8
DEMAND_SECTION
1 0
2 4
3 5
DEPOT_SECTION
1
-1
EOF
)");
    EXPECT_EQ(in.n, 4);
    EXPECT_EQ(in.source, 0);
    EXPECT_EQ(in.destination, 3);
    EXPECT_EQ(in.prize[1], 5.0);
    EXPECT_EQ(in.prize[2], 10.0);
    EXPECT_EQ(in.cost(0, 1), 0.0);
    EXPECT_EQ(in.cost(1, 3), 5.0);
    EXPECT_EQ(in.resource(0, 2), 5.0);
    EXPECT_EQ(parse_instance(serialize_instance(in)), in);
}
