#include "labellens/dssr.hpp"

#include <map>
#include <stdexcept>

namespace labellens {

std::vector<NodeId> detect_cycles(const std::vector<NodeId>& path) {
    std::map<NodeId, int> count;
    for (const NodeId v : path) ++count[v];
    std::vector<NodeId> out;
    for (const auto& [v, c] : count)
        if (c >= 2) out.push_back(v);
    return out;
}

RelaxationState augment_sets(const RelaxationState& state, const std::vector<NodeId>& path,
                             const std::vector<NodeId>& repeated) {
    RelaxationState next = state;
    for (const NodeId v : repeated) {
        std::size_t last = path.size();
        for (std::size_t k = 0; k < path.size(); ++k) {
            if (path[k] != v) continue;
            if (last != path.size())
                for (std::size_t u = last + 1; u < k; ++u) next.set(path[u]).insert(v);
            last = k;
        }
    }
    return next;
}

Solution solve(const Instance& instance, const SolveConfig& config) {
    Solution solution;
    RelaxationState state = RelaxationState::initial(static_cast<std::size_t>(instance.n));
    const long long guard = static_cast<long long>(instance.n) * instance.n;

    for (int iteration = 1;; ++iteration) {
        if (iteration > guard) throw std::logic_error("relaxation loop exceeded n^2 iterations");
        state.set_iteration(iteration);
        solution.relaxations.push_back(state);

        SearchObserver* fwd = config.observer ? config.observer->direction_observer(iteration, Direction::Forward) : nullptr;
        SearchObserver* bwd = config.observer ? config.observer->direction_observer(iteration, Direction::Backward) : nullptr;
        const BidirectionalResult run = bidirectional_search(instance, state, config.search, fwd, bwd, config.parallel);

        IterationSummary summary;
        summary.iteration = iteration;
        summary.labels_forward = run.forward.counters.network;
        summary.labels_backward = run.backward.counters.network;
        summary.attempts = run.forward.attempts + run.backward.attempts;
        summary.insertions = run.forward.insertions + run.backward.insertions;
        if (run.best) {
            summary.feasible = true;
            summary.cost = run.best->cost;
            summary.path = run.best->path;
            summary.elementary = run.best->elementary;
        }
        solution.iterations.push_back(summary);
        solution.iterations_used = iteration;
        if (config.observer) config.observer->iteration_finished(summary);

        if (!run.best) {
            solution.status = SolveStatus::Infeasible;
            return solution;
        }
        const auto repeated = detect_cycles(run.best->path);
        if (repeated.empty()) {
            solution.status = SolveStatus::Optimal;
            solution.path = run.best->path;
            solution.cost = run.best->cost;
            solution.elementary = true;
            return solution;
        }
        RelaxationState next = augment_sets(state, run.best->path, repeated);
        if (next == state) throw std::logic_error("cycle detected but no elementarity set grew");
        state = std::move(next);
    }
}

}  // namespace labellens
