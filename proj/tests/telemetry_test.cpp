#include <sstream>

#include <gtest/gtest.h>

#include "labellens/generator.hpp"
#include "labellens/telemetry.hpp"
#include "oracles.hpp"

using namespace labellens;
using Kind = TelemetryEvent::Kind;

namespace {

Instance small(std::uint64_t seed, int n = 8) {
    GeneratorOptions g;
    g.seed = seed;
    g.n = n;
    g.prize_scale = 1.5;
    return generate_instance(g);
}

LabelRecord record(LabelId id) {
    LabelRecord r;
    r.label_id = id;
    return r;
}

Dataset collect(const Instance& in, bool bitsets = true, bool parallel = false) {
    DatasetCollector collector(in.name, static_cast<std::size_t>(in.n), make_execution_id(1, in.name), bitsets);
    SolveConfig cfg;
    cfg.parallel = parallel;
    cfg.observer = &collector;
    solve(in, cfg);
    return collector.dataset();
}

}  // namespace

TEST(Telemetry, FirstForwardRecordCounters) {
    const Instance in = small(1);
    TelemetrySink sink("x", 1, true);
    run_direction(in, RelaxationState::initial(8), Direction::Forward, in.capacity / 2, ExtensionPolicy::Node, &sink);
    const LabelRecord& first = sink.records().front();
    EXPECT_EQ(first.nlabels_network, 1);
    EXPECT_EQ(first.nlabels_open_network, 1);
    EXPECT_EQ(first.nlabels_closed_network, 0);
    EXPECT_EQ(first.nlabels_dominated_network, 0);
    EXPECT_EQ(first.node, in.source);
    EXPECT_EQ(first.predecessor, kNoNode);
}

TEST(FinalizeIteration, ClassRules) {
    const std::vector<TelemetryEvent> events{
        {Kind::Generated, 0}, {Kind::Inserted, 0},    {Kind::Generated, 1}, {Kind::Rejected, 1},
        {Kind::Generated, 2}, {Kind::Inserted, 2},    {Kind::Closed, 2},    {Kind::Generated, 3},
        {Kind::Inserted, 3},  {Kind::Displaced, 2, 3}};
    const auto out = finalize_iteration({record(0), record(1), record(2), record(3)}, events);
    EXPECT_EQ(out[0].label_class, LabelClass::P);
    EXPECT_EQ(out[0].dominated, 0);
    EXPECT_EQ(out[1].label_class, LabelClass::GD);
    EXPECT_EQ(out[1].dominated, 1);
    EXPECT_EQ(out[2].label_class, LabelClass::GI);
    EXPECT_EQ(out[2].dominated, 1);
    EXPECT_EQ(out[3].label_class, LabelClass::P);
}

TEST(FinalizeIteration, InconsistentStreamsAreRejected) {
    const std::vector<TelemetryEvent> orphan{{Kind::Generated, 0}};
    EXPECT_THROW(finalize_iteration({record(0)}, orphan), CorruptionError);
    const std::vector<TelemetryEvent> ghost{{Kind::Generated, 0}, {Kind::Rejected, 0}, {Kind::Displaced, 0, 1}};
    EXPECT_THROW(finalize_iteration({record(0)}, ghost), CorruptionError);
}

TEST(Telemetry, RecordsMatchEventReplay) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const Instance in = small(seed);
        RelaxationState relax = RelaxationState::initial(8);
        for (const Direction d : {Direction::Forward, Direction::Backward}) {
            for (const auto policy : {ExtensionPolicy::Node, ExtensionPolicy::Greedy}) {
                TelemetrySink sink("x", 1, true);
                const auto result = run_direction(in, relax, d, in.capacity / 2, policy, &sink);
                const auto rows = finalize_iteration(sink.records(), sink.events());
                std::map<LabelId, NodeId> node_of;
                for (const auto& r : rows) node_of[r.label_id] = r.node;
                const auto counters = oracle::replay_counters(sink.events(), node_of);
                const auto classes = oracle::replay_classes(sink.events());
                ASSERT_EQ(rows.size(), result.labels.size());
                for (const auto& r : rows) {
                    const auto& c = counters.at(r.label_id);
                    EXPECT_EQ(r.nlabels_network, c.network);
                    EXPECT_EQ(r.nlabels_open_network, c.open);
                    EXPECT_EQ(r.nlabels_closed_network, c.closed);
                    EXPECT_EQ(r.nlabels_dominated_network, c.dominated);
                    EXPECT_EQ(r.nlabels_node, c.node);
                    EXPECT_EQ(r.nlabels_open_node, c.node_open);
                    EXPECT_EQ(r.nlabels_closed_node, c.node_closed);
                    EXPECT_EQ(r.nlabels_network,
                              r.nlabels_open_network + r.nlabels_closed_network + r.nlabels_dominated_network);
                    EXPECT_EQ(r.label_class, classes.at(r.label_id));
                }
                for (std::size_t k = 1; k < rows.size(); ++k)
                    EXPECT_LE(rows[k - 1].nlabels_network, rows[k].nlabels_network);
                // Records equal a fresh snapshot of the stored label's own features.
                for (const auto& r : rows) {
                    const Label& l = result.labels[static_cast<std::size_t>(r.label_id)];
                    EXPECT_EQ(r.objective, l.cost);
                    EXPECT_EQ(r.consumption_critical, l.consumption);
                    EXPECT_EQ(*r.visited, l.visited);
                    EXPECT_EQ(r.nvisited, static_cast<std::int64_t>(l.visited.count()));
                }
                // P labels are not dominated by anything generated at their node.
                for (const auto& r : rows) {
                    if (r.label_class != LabelClass::P) continue;
                    const Label& p = result.labels[static_cast<std::size_t>(r.label_id)];
                    for (const Label& other : result.labels)
                        if (other.node == p.node) EXPECT_FALSE(oracle::literal_dominates(other, p));
                }
            }
        }
    }
}

TEST(Dataset, InsertedSubsetIsTheFilterOfG) {
    const Dataset g = collect(small(2, 10));
    const Dataset i = inserted_subset(g);
    std::vector<LabelRecord> expected;
    for (const auto& r : g.rows)
        if (r.label_class != LabelClass::GD) expected.push_back(r);
    EXPECT_EQ(i.rows, expected);
    EXPECT_EQ(i.variant, Variant::I);
    EXPECT_LT(i.rows.size(), g.rows.size());
    EXPECT_FALSE(g.iterations().empty());
}

TEST(Dataset, ParallelCaptureEqualsSequential) {
    const Instance in = small(4, 10);
    EXPECT_EQ(collect(in, true, true).rows, collect(in, true, false).rows);
}

TEST(Csv, HeaderOnlyAndLineCount) {
    Dataset empty;
    std::ostringstream out;
    EXPECT_EQ(export_csv(empty, out), 0u);
    const std::string header_only = out.str();
    EXPECT_EQ(std::count(header_only.begin(), header_only.end(), '\n'), 1);

    Dataset g = collect(small(3));
    g.rows.resize(3);
    std::ostringstream three;
    EXPECT_EQ(export_csv(g, three), 3u);
    const std::string text = three.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(Csv, RoundTripWithAndWithoutBitsets) {
    const Instance in = small(5);
    for (const bool bitsets : {true, false}) {
        Dataset g = collect(in, bitsets);
        g.rows[0].objective = -1234.5625;
        std::stringstream buf;
        export_csv(g, buf, bitsets);
        const std::string header = buf.str().substr(0, buf.str().find('\n'));
        EXPECT_EQ(header.find(",visited,") != std::string::npos, bitsets);
        const Dataset back = import_csv(buf, Variant::G, g.nodes, g.instance);
        EXPECT_EQ(back.rows, g.rows);
    }
}

TEST(Csv, ContractChecks) {
    Dataset g = collect(small(6), false);
    std::ostringstream out;
    EXPECT_THROW(export_csv(g, out, true), ContractViolation);
    g.rows[0].label_class = LabelClass::Unknown;
    EXPECT_THROW(export_csv(g, out, false), ContractViolation);
    std::istringstream bad("executionID,iteration\n");
    EXPECT_THROW(import_csv(bad, Variant::G, 8), std::runtime_error);
}

TEST(Summary, Arithmetic) {
    RunDigest a{"A-n1", "A", 100, 10, 2, 0, 0};
    auto rows = summarize({a});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_DOUBLE_EQ(rows.back().pareto_pct, 10.0);
    EXPECT_DOUBLE_EQ(rows.back().labels_per_iteration, 50.0);

    RunDigest b{"B-n2", "B", 300, 90, 3, 40, 10};
    rows = summarize({a, b});
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].group, "A");
    EXPECT_EQ(rows[1].group, "B");
    const auto& overall = rows.back();
    EXPECT_EQ(overall.group, "Overall");
    EXPECT_EQ(overall.instances, 2);
    EXPECT_EQ(overall.labels, 400u);
    EXPECT_DOUBLE_EQ(overall.pareto_pct, 25.0);
    EXPECT_DOUBLE_EQ(overall.avg_iterations, 2.5);
    EXPECT_DOUBLE_EQ(overall.labels_per_iteration, 75.0);
    EXPECT_DOUBLE_EQ(overall.success_pct, 25.0);
    EXPECT_EQ(instance_group("A-n32-k5"), "A");
}

TEST(ExecutionId, Deterministic) {
    EXPECT_EQ(make_execution_id(3, "x"), make_execution_id(3, "x"));
    EXPECT_NE(make_execution_id(3, "x"), make_execution_id(4, "x"));
    EXPECT_EQ(make_execution_id(3, "x").size(), 36u);
}
