#include "labellens/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace labellens {

std::string_view to_string(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

std::string_view to_string(ExtensionPolicy p) { return p == ExtensionPolicy::Node ? "node" : "greedy"; }

Direction parse_direction(std::string_view text) {
    if (text == "forward") return Direction::Forward;
    if (text == "backward") return Direction::Backward;
    throw std::invalid_argument("unknown direction '" + std::string(text) + "'");
}

ExtensionPolicy parse_policy(std::string_view text) {
    if (text == "node") return ExtensionPolicy::Node;
    if (text == "greedy") return ExtensionPolicy::Greedy;
    throw std::invalid_argument("unknown policy '" + std::string(text) + "'");
}

bool dominates(const Label& a, const Label& b) {
    if (a.node != b.node || a.direction != b.direction)
        throw ContractViolation("dominance compares labels of different nodes or directions");
    if (a.cost > b.cost || a.consumption > b.consumption || !a.visited.is_subset_of(b.visited)) return false;
    return a.cost < b.cost || a.consumption < b.consumption || a.visited != b.visited;
}

namespace {

NodeId root_node(const Instance& instance, Direction d) {
    return d == Direction::Forward ? instance.source : instance.destination;
}

NodeId terminal_node(const Instance& instance, Direction d) {
    return d == Direction::Forward ? instance.destination : instance.source;
}

// Arc traversed when a label of direction d at `from` is extended to `to`.
double arc_cost(const Instance& in, Direction d, NodeId from, NodeId to) {
    return d == Direction::Forward ? in.cost(from, to) : in.cost(to, from);
}
double arc_resource(const Instance& in, Direction d, NodeId from, NodeId to) {
    return d == Direction::Forward ? in.resource(from, to) : in.resource(to, from);
}

void fill_unreachable(Label& l, const Instance& in) {
    const auto n = static_cast<std::size_t>(in.n);
    l.unreachable = NodeSet(n);
    int unaltered = 0;
    for (NodeId k = 0; k < in.n; ++k) {
        const bool blocked = l.consumption + arc_resource(in, l.direction, l.node, k) > in.capacity;
        if (blocked || l.visited.contains(k)) l.unreachable.insert(k);
        if (blocked || l.visited_unaltered.contains(k)) ++unaltered;
    }
    l.unreachable_unaltered = unaltered;
}

}  // namespace

Label make_root(const Instance& instance, Direction direction, LabelId id) {
    const auto n = static_cast<std::size_t>(instance.n);
    Label l;
    l.id = id;
    l.direction = direction;
    l.node = root_node(instance, direction);
    l.visited = NodeSet(n);
    l.visited.insert(l.node);
    l.visited_unaltered = l.visited;
    fill_unreachable(l, instance);
    return l;
}

std::optional<Label> extend(const Label& l, NodeId j, const Instance& instance, const RelaxationState& relaxation,
                            LabelId new_id) {
    if (j == l.node) throw ContractViolation("extension onto the label's own node");
    if (j == l.predecessor_node) return std::nullopt;
    if (l.visited.contains(j)) return std::nullopt;
    const double dq = arc_resource(instance, l.direction, l.node, j);
    if (l.consumption + dq > instance.capacity) return std::nullopt;

    Label next;
    next.id = new_id;
    next.direction = l.direction;
    next.node = j;
    next.predecessor = l.id;
    next.predecessor_node = l.node;
    next.cost = l.cost + arc_cost(instance, l.direction, l.node, j);
    next.consumption = l.consumption + dq;
    next.visited = l.visited & relaxation.set(j);
    next.visited.insert(j);
    next.visited.insert(l.node);
    next.visited_unaltered = l.visited_unaltered;
    next.repeated_visits = l.repeated_visits + (l.visited_unaltered.contains(j) ? 1 : 0);
    next.visited_unaltered.insert(j);
    next.tour_length = l.tour_length + 1;
    fill_unreachable(next, instance);
    return next;
}

double priority_of(const Label& l, PriorityKey key) { return key == PriorityKey::Cost ? l.cost : l.consumption; }

InsertOutcome LabelPool::try_insert(const Label& label, LabelStore& store) {
    if (label.node != node_ || label.direction != direction_)
        throw ContractViolation("label inserted into the pool of another node or direction");
    InsertOutcome outcome;
    // A pool without internal dominance cannot hold both a dominator and a victim of
    // the same label, so one scan decides both.
    for (const auto& [key, id] : open_) {
        const Label& r = store[static_cast<std::size_t>(id)];
        if (dominates(r, label)) return {InsertOutcome::Kind::RejectedDominated, {}};
        if (dominates(label, r)) outcome.displaced.push_back(id);
    }
    for (const LabelId id : closed_) {
        const Label& r = store[static_cast<std::size_t>(id)];
        if (dominates(r, label)) return {InsertOutcome::Kind::RejectedDominated, {}};
        if (dominates(label, r)) outcome.displaced.push_back(id);
    }
    std::sort(outcome.displaced.begin(), outcome.displaced.end());
    for (const LabelId id : outcome.displaced) {
        Label& r = store[static_cast<std::size_t>(id)];
        if (r.status == LabelStatus::Open) {
            open_.erase({priority_of(r, key_), id});
        } else {
            closed_.erase(std::find(closed_.begin(), closed_.end(), id));
        }
        r.status = LabelStatus::Dominated;
    }
    open_.insert({priority_of(label, key_), label.id});
    ++total_inserted_;
    return outcome;
}

void LabelPool::close(const Label& label) {
    if (open_.erase({priority_of(label, key_), label.id}) == 0)
        throw ContractViolation("closing a label that is not open in its pool");
    closed_.push_back(label.id);
}

std::vector<LabelId> LabelPool::residents() const {
    std::vector<LabelId> out;
    out.reserve(size());
    for (const auto& e : open_) out.push_back(e.second);
    out.insert(out.end(), closed_.begin(), closed_.end());
    return out;
}

LabelNetwork::LabelNetwork(std::size_t n, Direction direction, NodeId start_node, PriorityKey key)
    : direction_(direction), key_(key), cursor_(start_node) {
    pools_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pools_.emplace_back(static_cast<NodeId>(i), direction, key);
}

void LabelNetwork::note_generated() {
    ++counters_.network;
    ++counters_.open;
}

InsertOutcome LabelNetwork::insert(const Label& label, LabelStore& store) {
    LabelPool& p = pool(label.node);
    const auto open_before = static_cast<std::int64_t>(p.open_count());
    const auto closed_before = static_cast<std::int64_t>(p.closed_count());
    InsertOutcome outcome = p.try_insert(label, store);
    if (!outcome.inserted()) {
        store[static_cast<std::size_t>(label.id)].status = LabelStatus::Dominated;
        --counters_.open;
        ++counters_.dominated;
        return outcome;
    }
    const std::int64_t displaced_open = open_before + 1 - static_cast<std::int64_t>(p.open_count());
    const std::int64_t displaced_closed = closed_before - static_cast<std::int64_t>(p.closed_count());
    counters_.open -= displaced_open;
    counters_.closed -= displaced_closed;
    counters_.dominated += displaced_open + displaced_closed;
    for (const LabelId id : outcome.displaced)
        global_open_.erase({priority_of(store[static_cast<std::size_t>(id)], key_), id});
    global_open_.insert({priority_of(label, key_), label.id});
    return outcome;
}

std::optional<LabelId> LabelNetwork::select_next(ExtensionPolicy policy) {
    if (policy == ExtensionPolicy::Greedy) {
        if (global_open_.empty()) return std::nullopt;
        return global_open_.begin()->second;
    }
    const auto n = static_cast<NodeId>(pools_.size());
    for (NodeId step = 0; step < n; ++step) {
        if (pool(cursor_).has_open()) return pool(cursor_).best_open().second;
        cursor_ = (cursor_ + 1) % n;
    }
    return std::nullopt;
}

void LabelNetwork::close(Label& label) {
    pool(label.node).close(label);
    global_open_.erase({priority_of(label, key_), label.id});
    label.status = LabelStatus::Closed;
    --counters_.open;
    ++counters_.closed;
}

DirectionResult run_direction(const Instance& instance, const RelaxationState& relaxation, Direction direction,
                              double threshold, ExtensionPolicy policy, SearchObserver* observer, PriorityKey key) {
    if (!(threshold >= 0.0) || threshold > instance.capacity)
        throw ContractViolation("threshold outside [0, capacity]");
    const NodeId root = root_node(instance, direction);
    const NodeId terminal = terminal_node(instance, direction);
    // Forward labels stop once they exceed the threshold; backward labels stop once they
    // reach it. Every feasible path then has an arc where the two halves meet.
    const auto stops = [&](double q) { return direction == Direction::Forward ? q > threshold : q >= threshold; };

    DirectionResult result;
    result.direction = direction;
    LabelStore& store = result.labels;
    LabelNetwork network(static_cast<std::size_t>(instance.n), direction, root, key);

    const auto admit = [&](Label&& l) {
        store.push_back(std::move(l));
        Label& stored = store.back();
        network.note_generated();
        if (observer) observer->on_generated(stored, network.counters(), network.pool(stored.node));
        const InsertOutcome outcome = network.insert(stored, store);
        if (outcome.inserted()) ++result.insertions;
        if (observer) observer->on_insert(stored, outcome);
    };

    admit(make_root(instance, direction, 0));

    while (const auto next = network.select_next(policy)) {
        Label& current = store[static_cast<std::size_t>(*next)];
        network.close(current);
        if (observer) observer->on_closed(current);
        if (current.node == terminal || stops(current.consumption)) continue;
        for (NodeId j = 0; j < instance.n; ++j) {
            if (j == current.node || j == root) continue;
            ++result.attempts;
            // `current` stays valid: std::deque::push_back keeps references intact.
            auto child = extend(current, j, instance, relaxation, static_cast<LabelId>(store.size()));
            if (child) admit(std::move(*child));
        }
    }

    result.counters = network.counters();
    result.pools = network.pools();
    return result;
}

std::vector<NodeId> reconstruct_path(const Label& label, const LabelStore& store) {
    std::vector<NodeId> path;
    const Label* cur = &label;
    for (;;) {
        path.push_back(cur->node);
        if (cur->predecessor == kNoLabel) break;
        if (cur->predecessor < 0 || static_cast<std::size_t>(cur->predecessor) >= store.size() ||
            path.size() > store.size())
            throw std::runtime_error("corrupt predecessor chain at label " + std::to_string(cur->id));
        const Label& prev = store[static_cast<std::size_t>(cur->predecessor)];
        if (prev.id != cur->predecessor || prev.direction != cur->direction)
            throw std::runtime_error("corrupt predecessor chain at label " + std::to_string(cur->id));
        cur = &prev;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {

constexpr double kTieTolerance = 1e-9;

bool cost_ties(double a, double b) { return std::abs(a - b) <= kTieTolerance * std::max(1.0, std::abs(b)); }

struct Candidate {
    double cost;
    bool elementary;
    LabelId forward;
    LabelId backward;
};

// Strictly better, or tied and elementary where the incumbent is not.
bool improves(const std::optional<Candidate>& best, double cost, bool elementary) {
    if (!best) return true;
    if (cost_ties(cost, best->cost)) return elementary && !best->elementary;
    return cost < best->cost;
}

}  // namespace

std::optional<JoinedPath> join(const DirectionResult& forward, const DirectionResult& backward,
                               const Instance& instance) {
    const auto& F = forward.labels;
    const auto& B = backward.labels;
    std::optional<Candidate> best;

    for (const LabelId id : forward.pools[static_cast<std::size_t>(instance.destination)].residents()) {
        const Label& f = F[static_cast<std::size_t>(id)];
        const bool elem = f.repeated_visits == 0;
        if (improves(best, f.cost, elem)) best = Candidate{f.cost, elem, id, kNoLabel};
    }
    for (const LabelId id : backward.pools[static_cast<std::size_t>(instance.source)].residents()) {
        const Label& b = B[static_cast<std::size_t>(id)];
        const bool elem = b.repeated_visits == 0;
        if (improves(best, b.cost, elem)) best = Candidate{b.cost, elem, kNoLabel, id};
    }

    // Backward residents per node, cheapest first, so the pair scan can stop early.
    std::vector<std::vector<const Label*>> bwd(static_cast<std::size_t>(instance.n));
    for (NodeId j = 0; j < instance.n; ++j) {
        auto& v = bwd[static_cast<std::size_t>(j)];
        for (const LabelId id : backward.pools[static_cast<std::size_t>(j)].residents())
            v.push_back(&B[static_cast<std::size_t>(id)]);
        std::sort(v.begin(), v.end(), [](const Label* a, const Label* b) {
            return a->cost != b->cost ? a->cost < b->cost : a->id < b->id;
        });
    }

    for (NodeId i = 0; i < instance.n; ++i) {
        if (i == instance.destination) continue;
        for (const LabelId fid : forward.pools[static_cast<std::size_t>(i)].residents()) {
            const Label& f = F[static_cast<std::size_t>(fid)];
            for (NodeId j = 0; j < instance.n; ++j) {
                if (!instance.is_arc(i, j)) continue;
                const double base = f.cost + instance.cost(i, j);
                const double q = f.consumption + instance.resource(i, j);
                if (q > instance.capacity) continue;
                for (const Label* b : bwd[static_cast<std::size_t>(j)]) {
                    const double total = base + b->cost;
                    if (best && total > best->cost && !cost_ties(total, best->cost)) break;
                    if (q + b->consumption > instance.capacity) continue;
                    if (f.visited.intersects(b->visited)) continue;
                    const bool elem = f.repeated_visits == 0 && b->repeated_visits == 0 &&
                                      !f.visited_unaltered.intersects(b->visited_unaltered);
                    if (improves(best, total, elem)) best = Candidate{total, elem, fid, b->id};
                }
            }
        }
    }

    if (!best) return std::nullopt;
    JoinedPath out;
    out.cost = best->cost;
    out.elementary = best->elementary;
    out.forward = best->forward;
    out.backward = best->backward;
    if (best->forward != kNoLabel) out.path = reconstruct_path(F[static_cast<std::size_t>(best->forward)], F);
    if (best->backward != kNoLabel) {
        auto tail = reconstruct_path(B[static_cast<std::size_t>(best->backward)], B);
        out.path.insert(out.path.end(), tail.rbegin(), tail.rend());
    }
    return out;
}

BidirectionalResult bidirectional_search(const Instance& instance, const RelaxationState& relaxation,
                                         const SearchOptions& options, SearchObserver* forward_observer,
                                         SearchObserver* backward_observer, bool parallel) {
    if (!(options.split > 0.0) || options.split > 1.0) throw std::invalid_argument("split must lie in (0, 1]");
    const double forward_threshold = options.split * instance.capacity;
    const double backward_threshold = instance.capacity - forward_threshold;

    BidirectionalResult result;
    const auto run_backward = [&] {
        result.backward = run_direction(instance, relaxation, Direction::Backward, backward_threshold, options.policy,
                                        backward_observer, options.key);
    };
    const auto run_forward = [&] {
        result.forward = run_direction(instance, relaxation, Direction::Forward, forward_threshold, options.policy,
                                       forward_observer, options.key);
    };
    if (parallel) {
        std::exception_ptr backward_error;
        std::thread worker([&] {
            try {
                run_backward();
            } catch (...) {
                backward_error = std::current_exception();
            }
        });
        try {
            run_forward();
        } catch (...) {
            worker.join();
            throw;
        }
        worker.join();
        if (backward_error) std::rethrow_exception(backward_error);
    } else {
        run_forward();
        run_backward();
    }
    result.best = join(result.forward, result.backward, instance);
    return result;
}

}  // namespace labellens
