#ifndef LABELLENS_DSSR_HPP
#define LABELLENS_DSSR_HPP

#include <cstdint>
#include <vector>

#include "labellens/instance.hpp"
#include "labellens/labeling.hpp"
#include "labellens/relaxation.hpp"

namespace labellens {

// Nodes occurring at least twice in `path`, ascending.
std::vector<NodeId> detect_cycles(const std::vector<NodeId>& path);

// For every repeated node v and every pair of consecutive occurrences of v, adds v to
// the elementarity set of each node strictly between them.
RelaxationState augment_sets(const RelaxationState& state, const std::vector<NodeId>& path,
                             const std::vector<NodeId>& repeated);

struct IterationSummary {
    int iteration = 0;
    bool feasible = false;
    double cost = 0.0;
    std::vector<NodeId> path;
    bool elementary = false;
    std::int64_t labels_forward = 0;
    std::int64_t labels_backward = 0;
    std::uint64_t attempts = 0;
    std::uint64_t insertions = 0;
};

// Hooks for per-iteration data capture.
class IterationObserver {
public:
    virtual ~IterationObserver() = default;
    // Observer for one direction of iteration k; nullptr disables capture.
    virtual SearchObserver* direction_observer(int iteration, Direction direction) = 0;
    virtual void iteration_finished(const IterationSummary& summary) = 0;
};

struct SolveConfig {
    SearchOptions search;
    bool parallel = true;
    IterationObserver* observer = nullptr;
};

enum class SolveStatus { Optimal, Infeasible };

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<NodeId> path;
    double cost = 0.0;
    bool elementary = false;
    int iterations_used = 0;
    std::vector<IterationSummary> iterations;
    // Relaxation used by each iteration, in order.
    std::vector<RelaxationState> relaxations;
};

// Restricted DSSR: solve the relaxation bidirectionally, stop on an elementary optimum,
// otherwise grow the elementarity sets along the detected cycles and repeat.
Solution solve(const Instance& instance, const SolveConfig& config = {});

}  // namespace labellens

#endif  // LABELLENS_DSSR_HPP
