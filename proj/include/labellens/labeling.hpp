#ifndef LABELLENS_LABELING_HPP
#define LABELLENS_LABELING_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "labellens/instance.hpp"
#include "labellens/node_set.hpp"
#include "labellens/relaxation.hpp"

namespace labellens {

using LabelId = std::int64_t;
inline constexpr LabelId kNoLabel = -1;
inline constexpr NodeId kNoNode = -1;

enum class Direction { Forward = 0, Backward = 1 };
enum class LabelStatus { Open, Closed, Dominated };
enum class ExtensionPolicy { Node, Greedy };

std::string_view to_string(Direction d);
std::string_view to_string(ExtensionPolicy p);
Direction parse_direction(std::string_view text);
ExtensionPolicy parse_policy(std::string_view text);

// A dynamic-programming state: a partial path from the direction's root to `node`.
struct Label {
    LabelId id = kNoLabel;
    Direction direction = Direction::Forward;
    NodeId node = kNoNode;
    LabelId predecessor = kNoLabel;
    NodeId predecessor_node = kNoNode;
    double cost = 0.0;
    double consumption = 0.0;
    NodeSet visited;            // visited nodes remembered under the active relaxation
    NodeSet visited_unaltered;  // every node of the true partial path
    NodeSet unreachable;        // visited, or blocked by the single-arc budget lookahead
    int unreachable_unaltered = 0;
    int tour_length = 0;
    int repeated_visits = 0;
    LabelStatus status = LabelStatus::Open;
};

// Stable storage: labels are never removed while a search is running.
using LabelStore = std::deque<Label>;

class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// a dominates b iff cost, visited set and consumption are all no worse and at least
// one of them is strictly better.
bool dominates(const Label& a, const Label& b);

Label make_root(const Instance& instance, Direction direction, LabelId id);

// Returns std::nullopt for infeasible extensions. Backward labels travel arc (j, l.node).
// The extended visited set is (l.visited & relaxation.set(j)) | {j, l.node}; keeping the
// predecessor implements two-cycle elimination inside the set compared by dominance.
std::optional<Label> extend(const Label& l, NodeId j, const Instance& instance, const RelaxationState& relaxation,
                            LabelId new_id);

struct InsertOutcome {
    enum class Kind { RejectedDominated, Inserted };
    Kind kind = Kind::Inserted;
    std::vector<LabelId> displaced;

    bool inserted() const { return kind == Kind::Inserted; }
};

enum class PriorityKey { Cost, Consumption };

double priority_of(const Label& l, PriorityKey key);

// Non-dominated labels of one (node, direction), split into open and closed.
class LabelPool {
public:
    using Entry = std::pair<double, LabelId>;  // (priority, id); ties go to the lower id

    LabelPool(NodeId node, Direction direction, PriorityKey key = PriorityKey::Cost)
        : node_(node), direction_(direction), key_(key) {}

    NodeId node() const { return node_; }
    Direction direction() const { return direction_; }

    // Rejects `label` if a resident dominates it; otherwise inserts it open and flags
    // every resident it dominates.
    InsertOutcome try_insert(const Label& label, LabelStore& store);

    bool has_open() const { return !open_.empty(); }
    const Entry& best_open() const { return *open_.begin(); }
    const std::set<Entry>& open() const { return open_; }
    const std::vector<LabelId>& closed() const { return closed_; }

    // Moves an open label to the closed list.
    void close(const Label& label);

    std::vector<LabelId> residents() const;

    std::size_t open_count() const { return open_.size(); }
    std::size_t closed_count() const { return closed_.size(); }
    std::size_t size() const { return open_.size() + closed_.size(); }
    std::uint64_t total_inserted() const { return total_inserted_; }

private:
    NodeId node_;
    Direction direction_;
    PriorityKey key_;
    std::set<Entry> open_;
    std::vector<LabelId> closed_;
    std::uint64_t total_inserted_ = 0;
};

// Per-direction totals. network counts every generated label; a label is open from
// generation until it is extended (closed) or dominated.
struct NetworkCounters {
    std::int64_t network = 0;
    std::int64_t open = 0;
    std::int64_t closed = 0;
    std::int64_t dominated = 0;

    bool coherent() const { return network == open + closed + dominated; }
};

// Receives the event stream of one search direction.
class SearchObserver {
public:
    virtual ~SearchObserver() = default;
    // Called once per generated label, before its insertion attempt.
    virtual void on_generated(const Label& label, const NetworkCounters& counters, const LabelPool& pool) = 0;
    virtual void on_insert(const Label& label, const InsertOutcome& outcome) = 0;
    virtual void on_closed(const Label& label) = 0;
};

// Pools of one direction plus the ordering state used by select_next.
class LabelNetwork {
public:
    LabelNetwork(std::size_t n, Direction direction, NodeId start_node, PriorityKey key = PriorityKey::Cost);

    Direction direction() const { return direction_; }
    LabelPool& pool(NodeId i) { return pools_[static_cast<std::size_t>(i)]; }
    const LabelPool& pool(NodeId i) const { return pools_[static_cast<std::size_t>(i)]; }
    const std::vector<LabelPool>& pools() const { return pools_; }
    const NetworkCounters& counters() const { return counters_; }

    // Registers a freshly generated label (network and open counters).
    void note_generated();
    InsertOutcome insert(const Label& label, LabelStore& store);
    // Node policy drains the current node's pool before advancing round-robin;
    // greedy returns the best open label of the whole direction.
    std::optional<LabelId> select_next(ExtensionPolicy policy);
    void close(Label& label);

private:
    Direction direction_;
    PriorityKey key_;
    std::vector<LabelPool> pools_;
    std::set<LabelPool::Entry> global_open_;
    NodeId cursor_;
    NetworkCounters counters_;
};

struct SearchOptions {
    ExtensionPolicy policy = ExtensionPolicy::Node;
    // Share of the budget given to the forward direction; backward gets the rest.
    double split = 0.5;
    PriorityKey key = PriorityKey::Cost;
};

struct DirectionResult {
    Direction direction = Direction::Forward;
    LabelStore labels;
    std::vector<LabelPool> pools;
    NetworkCounters counters;
    std::uint64_t attempts = 0;    // extend() calls, infeasible ones included
    std::uint64_t insertions = 0;  // labels accepted by their pool
};

// Label-setting loop of one direction. Labels whose consumption exceeds `threshold`
// are closed without extension.
DirectionResult run_direction(const Instance& instance, const RelaxationState& relaxation, Direction direction,
                              double threshold, ExtensionPolicy policy, SearchObserver* observer = nullptr,
                              PriorityKey key = PriorityKey::Cost);

// Root-to-node sequence. Throws std::runtime_error on a broken predecessor chain.
std::vector<NodeId> reconstruct_path(const Label& label, const LabelStore& store);

struct JoinedPath {
    double cost = 0.0;
    std::vector<NodeId> path;
    bool elementary = false;
    LabelId forward = kNoLabel;   // kNoLabel for a backward-only path
    LabelId backward = kNoLabel;  // kNoLabel for a forward-only path
};

// Minimum-cost complete path from the two directions. Pairs (f at i, b at j) over arc
// (i, j) are compatible when the budget holds and the relaxed visited sets are disjoint.
// Equal-cost candidates prefer elementary paths.
std::optional<JoinedPath> join(const DirectionResult& forward, const DirectionResult& backward,
                               const Instance& instance);

struct BidirectionalResult {
    DirectionResult forward;
    DirectionResult backward;
    std::optional<JoinedPath> best;
};

// Runs both directions (concurrently unless `parallel` is false) and joins them.
BidirectionalResult bidirectional_search(const Instance& instance, const RelaxationState& relaxation,
                                         const SearchOptions& options, SearchObserver* forward_observer,
                                         SearchObserver* backward_observer, bool parallel);

}  // namespace labellens

#endif  // LABELLENS_LABELING_HPP
