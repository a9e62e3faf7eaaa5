#ifndef LABELLENS_RELAXATION_HPP
#define LABELLENS_RELAXATION_HPP

#include <cstddef>
#include <vector>

#include "labellens/node_set.hpp"

namespace labellens {

// Per-node elementarity sets of restricted decremental state space relaxation.
// A label entering node j only remembers the visited nodes that belong to sets_[j].
class RelaxationState {
public:
    RelaxationState() = default;

    // Every set starts as {i}.
    static RelaxationState initial(std::size_t n) {
        RelaxationState s;
        s.sets_.assign(n, NodeSet(n));
        for (std::size_t i = 0; i < n; ++i) s.sets_[i].insert(static_cast<NodeId>(i));
        return s;
    }

    // Full elementarity: every set is the whole node set.
    static RelaxationState elementary(std::size_t n) {
        RelaxationState s = initial(n);
        for (auto& set : s.sets_)
            for (std::size_t v = 0; v < n; ++v) set.insert(static_cast<NodeId>(v));
        return s;
    }

    int iteration() const { return iteration_; }
    void set_iteration(int k) { iteration_ = k; }

    std::size_t size() const { return sets_.size(); }
    const NodeSet& set(NodeId i) const { return sets_[static_cast<std::size_t>(i)]; }
    NodeSet& set(NodeId i) { return sets_[static_cast<std::size_t>(i)]; }

    // True when every set of *this is contained in the matching set of `later`.
    bool is_contained_in(const RelaxationState& later) const {
        if (later.sets_.size() != sets_.size()) return false;
        for (std::size_t i = 0; i < sets_.size(); ++i)
            if (!sets_[i].is_subset_of(later.sets_[i])) return false;
        return true;
    }

    bool operator==(const RelaxationState&) const = default;

private:
    int iteration_ = 1;
    std::vector<NodeSet> sets_;
};

}  // namespace labellens

#endif  // LABELLENS_RELAXATION_HPP
