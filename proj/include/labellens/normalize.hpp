#ifndef LABELLENS_NORMALIZE_HPP
#define LABELLENS_NORMALIZE_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "labellens/instance.hpp"
#include "labellens/telemetry.hpp"

namespace labellens {

// Reference values taken from one finalized iteration.
struct IterationStats {
    int iteration = 0;
    double min_objective = 0.0;
    double max_objective = 0.0;
    std::int64_t max_tour_length = 0;
    // Indexed by Direction.
    std::array<double, 2> min_objective_dir{0.0, 0.0};
    std::array<double, 2> max_objective_dir{0.0, 0.0};
    std::array<std::int64_t, 2> nlabels_total{0, 0};  // labels generated by the direction
    std::array<std::int64_t, 2> max_nlabels_node{0, 0};
    std::array<bool, 2> has_direction{false, false};
};

// Throws std::invalid_argument on an empty record set.
IterationStats iteration_stats(std::span<const LabelRecord> records);

// Flags attached to a normalized record.
enum NormFlag : unsigned {
    kDegenerateObjective = 1u << 0,  // reference min == max, objective set to 0.5
    kZeroTourReference = 1u << 1,
    kZeroNodePool = 1u << 2,  // nlabels_node == 0 at snapshot, node fractions set to 0
    kZeroNetworkReference = 1u << 3,
    kZeroNodeReference = 1u << 4,
};

struct ScaledValue {
    double value = 0.0;
    bool degenerate = false;
};

// (obj - min) / (max - min), not clamped; 0.5 and degenerate when max == min.
ScaledValue normalize_objective(double objective, double min, double max);

// Min-max of each record's objective against the records' own extrema.
std::vector<double> oracle_normalize(std::span<const LabelRecord> records);

// 1 - obj_norm * cons_norm
double efficiency(double obj_norm, double cons_norm);

struct NormalizeOptions {
    // Objective extrema from the record's own direction instead of both directions pooled.
    bool per_direction_objective = false;
};

struct NormalizedRecord {
    std::string execution_id;
    int iteration = 0;
    Direction direction = Direction::Forward;
    LabelId label_id = kNoLabel;
    NodeId node = kNoNode;
    NodeId predecessor = kNoNode;
    double objective = 0.0;
    double consumption_critical = 0.0;
    double efficiency = 0.0;
    double tour_length = 0.0;
    double nvisited = 0.0;
    double nvisited_unaltered = 0.0;
    double nunreachable = 0.0;
    double nunreachable_unaltered = 0.0;
    double repeated_visits = 0.0;
    std::optional<NodeSet> visited;
    std::optional<NodeSet> visited_unaltered;
    std::optional<NodeSet> unreachable;
    double nlabels_network = 0.0;
    double nlabels_dominated_network = 0.0;
    double nlabels_closed_network = 0.0;
    double nlabels_open_network = 0.0;
    double nlabels_node = 0.0;
    double nlabels_closed_node = 0.0;
    double nlabels_open_node = 0.0;
    int dominated = 0;
    LabelClass label_class = LabelClass::Unknown;
    unsigned flags = 0;
};

// Instance scalings (budget, node count), pool fractions, and previous-iteration
// references for objective, tour length and label counts.
NormalizedRecord normalize_record(const LabelRecord& record, const Instance& instance, const IterationStats& prev,
                                  const NormalizeOptions& options = {});

// Normalizes every iteration k >= 2 against iteration k - 1 of the same dataset.
std::vector<NormalizedRecord> normalize_dataset(const Dataset& dataset, const Instance& instance,
                                                const NormalizeOptions& options = {});

std::size_t export_normalized_csv(const std::vector<NormalizedRecord>& rows, std::ostream& out, bool with_bitsets);
std::size_t export_normalized_csv(const std::vector<NormalizedRecord>& rows, const std::string& path,
                                  bool with_bitsets);

}  // namespace labellens

#endif  // LABELLENS_NORMALIZE_HPP
