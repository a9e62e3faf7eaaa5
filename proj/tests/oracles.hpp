#ifndef LABELLENS_TESTS_ORACLES_HPP
#define LABELLENS_TESTS_ORACLES_HPP

// Test-only reference implementations. None of these call into the solver's search,
// dominance or pool code; they recompute from first principles.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "labellens/instance.hpp"
#include "labellens/labeling.hpp"
#include "labellens/telemetry.hpp"

namespace oracle {

using labellens::Instance;
using labellens::NodeId;

struct PathValue {
    double cost;
    double consumption;
    std::vector<NodeId> path;
};

// Every elementary source-destination path within the budget.
inline void for_each_elementary_path(const Instance& in, const std::function<void(const PathValue&)>& visit) {
    std::vector<NodeId> path{in.source};
    std::vector<bool> used(static_cast<std::size_t>(in.n), false);
    used[static_cast<std::size_t>(in.source)] = true;
    std::function<void(NodeId, double, double)> dfs = [&](NodeId at, double cost, double q) {
        for (NodeId j = 0; j < in.n; ++j) {
            if (used[static_cast<std::size_t>(j)] || j == at) continue;
            const double q2 = q + in.resource(at, j);
            if (q2 > in.capacity) continue;
            const double c2 = cost + in.cost(at, j);
            path.push_back(j);
            if (j == in.destination) {
                visit({c2, q2, path});
            } else {
                used[static_cast<std::size_t>(j)] = true;
                dfs(j, c2, q2);
                used[static_cast<std::size_t>(j)] = false;
            }
            path.pop_back();
        }
    };
    dfs(in.source, 0.0, 0.0);
}

inline std::optional<PathValue> best_elementary_path(const Instance& in) {
    std::optional<PathValue> best;
    for_each_elementary_path(in, [&](const PathValue& p) {
        if (!best || p.cost < best->cost) best = p;
    });
    return best;
}

// Minimal (cost, consumption) points.
inline std::set<std::pair<double, double>> pareto_points(std::vector<std::pair<double, double>> pts) {
    std::set<std::pair<double, double>> out;
    for (const auto& p : pts) {
        bool dominated = false;
        for (const auto& o : pts)
            if (o.first <= p.first && o.second <= p.second && o != p) dominated = true;
        if (!dominated) out.insert(p);
    }
    return out;
}

inline std::set<std::pair<double, double>> elementary_frontier(const Instance& in) {
    std::vector<std::pair<double, double>> pts;
    for_each_elementary_path(in, [&](const PathValue& p) { pts.push_back({p.cost, p.consumption}); });
    return pareto_points(pts);
}

// The three conditions written out over explicit member lists.
inline bool literal_dominates(double c1, const std::vector<NodeId>& s1, double r1, double c2,
                              const std::vector<NodeId>& s2, double r2) {
    const std::set<NodeId> a(s1.begin(), s1.end());
    const std::set<NodeId> b(s2.begin(), s2.end());
    const bool subset = std::includes(b.begin(), b.end(), a.begin(), a.end());
    const bool all = c1 <= c2 && subset && r1 <= r2;
    const bool strict = c1 < c2 || (subset && a.size() < b.size()) || r1 < r2;
    return all && strict;
}

inline bool literal_dominates(const labellens::Label& x, const labellens::Label& y) {
    return literal_dominates(x.cost, x.visited.members(), x.consumption, y.cost, y.visited.members(), y.consumption);
}

// Classes rebuilt from the raw event stream.
inline std::map<labellens::LabelId, labellens::LabelClass> replay_classes(
    const std::vector<labellens::TelemetryEvent>& events) {
    using K = labellens::TelemetryEvent::Kind;
    std::map<labellens::LabelId, labellens::LabelClass> cls;
    for (const auto& e : events) {
        if (e.kind == K::Rejected) cls[e.label] = labellens::LabelClass::GD;
        if (e.kind == K::Inserted) cls[e.label] = labellens::LabelClass::P;
        if (e.kind == K::Displaced) cls[e.label] = labellens::LabelClass::GI;
    }
    return cls;
}

struct ReplayedCounters {
    std::int64_t network, open, closed, dominated, node, node_open, node_closed;
};

// Counter values seen by each generated label, recomputed by replaying the event log.
// Node-pool counts exclude the label itself (snapshot precedes its insertion).
inline std::map<labellens::LabelId, ReplayedCounters> replay_counters(
    const std::vector<labellens::TelemetryEvent>& events, const std::map<labellens::LabelId, NodeId>& node_of) {
    using K = labellens::TelemetryEvent::Kind;
    std::int64_t network = 0, open = 0, closed = 0, dominated = 0;
    std::map<NodeId, std::set<labellens::LabelId>> pool_open, pool_closed;
    std::map<labellens::LabelId, ReplayedCounters> out;
    for (const auto& e : events) {
        switch (e.kind) {
            case K::Generated: {
                ++network;
                ++open;
                const NodeId v = node_of.at(e.label);
                const auto po = static_cast<std::int64_t>(pool_open[v].size());
                const auto pc = static_cast<std::int64_t>(pool_closed[v].size());
                out[e.label] = {network, open, closed, dominated, po + pc, po, pc};
                break;
            }
            case K::Rejected:
                --open;
                ++dominated;
                break;
            case K::Inserted: pool_open[node_of.at(e.label)].insert(e.label); break;
            case K::Displaced: {
                const NodeId v = node_of.at(e.label);
                if (pool_open[v].erase(e.label)) --open;
                else if (pool_closed[v].erase(e.label)) --closed;
                ++dominated;
                break;
            }
            case K::Closed: {
                const NodeId v = node_of.at(e.label);
                pool_open[v].erase(e.label);
                pool_closed[v].insert(e.label);
                --open;
                ++closed;
                break;
            }
        }
    }
    return out;
}

}  // namespace oracle

#endif  // LABELLENS_TESTS_ORACLES_HPP
