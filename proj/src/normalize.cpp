#include "labellens/normalize.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace labellens {

IterationStats iteration_stats(std::span<const LabelRecord> records) {
    if (records.empty()) throw std::invalid_argument("iteration_stats: no records to normalize against");
    IterationStats s;
    s.iteration = records.front().iteration;
    s.min_objective = s.max_objective = records.front().objective;
    for (const auto& r : records) {
        const auto d = static_cast<std::size_t>(r.direction);
        s.min_objective = std::min(s.min_objective, r.objective);
        s.max_objective = std::max(s.max_objective, r.objective);
        s.max_tour_length = std::max(s.max_tour_length, r.tour_length);
        if (!s.has_direction[d]) {
            s.has_direction[d] = true;
            s.min_objective_dir[d] = s.max_objective_dir[d] = r.objective;
        }
        s.min_objective_dir[d] = std::min(s.min_objective_dir[d], r.objective);
        s.max_objective_dir[d] = std::max(s.max_objective_dir[d], r.objective);
        s.nlabels_total[d] = std::max(s.nlabels_total[d], r.nlabels_network);
        s.max_nlabels_node[d] = std::max(s.max_nlabels_node[d], r.nlabels_node);
    }
    return s;
}

ScaledValue normalize_objective(double objective, double min, double max) {
    if (!(max > min)) return {0.5, true};
    return {(objective - min) / (max - min), false};
}

std::vector<double> oracle_normalize(std::span<const LabelRecord> records) {
    const IterationStats s = iteration_stats(records);
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(normalize_objective(r.objective, s.min_objective, s.max_objective).value);
    return out;
}

double efficiency(double obj_norm, double cons_norm) { return 1.0 - obj_norm * cons_norm; }

namespace {

double ratio(double num, double den, unsigned flag, unsigned& flags) {
    if (den == 0.0) {
        flags |= flag;
        return 0.0;
    }
    return num / den;
}

}  // namespace

NormalizedRecord normalize_record(const LabelRecord& r, const Instance& instance, const IterationStats& prev,
                                  const NormalizeOptions& options) {
    if (r.iteration < 2) throw std::invalid_argument("normalize_record: first relaxation has no previous iteration");
    NormalizedRecord out;
    out.execution_id = r.execution_id;
    out.iteration = r.iteration;
    out.direction = r.direction;
    out.label_id = r.label_id;
    out.node = r.node;
    out.predecessor = r.predecessor;
    out.visited = r.visited;
    out.visited_unaltered = r.visited_unaltered;
    out.unreachable = r.unreachable;
    out.dominated = r.dominated;
    out.label_class = r.label_class;

    const auto d = static_cast<std::size_t>(r.direction);
    const double n = static_cast<double>(instance.n);

    out.consumption_critical = r.consumption_critical / instance.capacity;
    out.nvisited = static_cast<double>(r.nvisited) / n;
    out.nvisited_unaltered = static_cast<double>(r.nvisited_unaltered) / n;
    out.nunreachable = static_cast<double>(r.nunreachable) / n;
    out.nunreachable_unaltered = static_cast<double>(r.nunreachable_unaltered) / n;
    out.repeated_visits =
        r.tour_length == 0 ? 0.0 : static_cast<double>(r.repeated_visits) / static_cast<double>(r.tour_length);

    const auto network = static_cast<double>(r.nlabels_network);
    out.nlabels_open_network = ratio(static_cast<double>(r.nlabels_open_network), network, kZeroNetworkReference, out.flags);
    out.nlabels_closed_network =
        ratio(static_cast<double>(r.nlabels_closed_network), network, kZeroNetworkReference, out.flags);
    out.nlabels_dominated_network =
        ratio(static_cast<double>(r.nlabels_dominated_network), network, kZeroNetworkReference, out.flags);
    const auto pool = static_cast<double>(r.nlabels_node);
    out.nlabels_open_node = ratio(static_cast<double>(r.nlabels_open_node), pool, kZeroNodePool, out.flags);
    out.nlabels_closed_node = ratio(static_cast<double>(r.nlabels_closed_node), pool, kZeroNodePool, out.flags);

    const double lo = options.per_direction_objective ? prev.min_objective_dir[d] : prev.min_objective;
    const double hi = options.per_direction_objective ? prev.max_objective_dir[d] : prev.max_objective;
    const ScaledValue obj = normalize_objective(r.objective, lo, hi);
    out.objective = obj.value;
    if (obj.degenerate) out.flags |= kDegenerateObjective;

    out.tour_length = ratio(static_cast<double>(r.tour_length), static_cast<double>(prev.max_tour_length),
                            kZeroTourReference, out.flags);
    out.nlabels_network = ratio(network, static_cast<double>(prev.nlabels_total[d]), kZeroNetworkReference, out.flags);
    out.nlabels_node = ratio(pool, static_cast<double>(prev.max_nlabels_node[d]), kZeroNodeReference, out.flags);

    out.efficiency = efficiency(out.objective, out.consumption_critical);
    return out;
}

std::vector<NormalizedRecord> normalize_dataset(const Dataset& dataset, const Instance& instance,
                                                const NormalizeOptions& options) {
    std::map<int, std::vector<LabelRecord>> by_iteration;
    for (const auto& r : dataset.rows) by_iteration[r.iteration].push_back(r);
    std::vector<NormalizedRecord> out;
    const std::vector<LabelRecord>* prev = nullptr;
    int prev_it = 0;
    for (const auto& [it, rows] : by_iteration) {
        if (prev && prev_it == it - 1) {
            const IterationStats stats = iteration_stats(*prev);
            for (const auto& r : rows) out.push_back(normalize_record(r, instance, stats, options));
        }
        prev = &rows;
        prev_it = it;
    }
    return out;
}

std::size_t export_normalized_csv(const std::vector<NormalizedRecord>& rows, std::ostream& out, bool with_bitsets) {
    std::vector<std::string> cols;
    for (const auto& c : csv_columns(with_bitsets)) {
        cols.push_back(c);
        if (c == "consumption_critical") cols.push_back("efficiency");
    }
    cols.push_back("_flag");
    for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
    out << '\n';
    for (const auto& r : rows) {
        if (with_bitsets && (!r.visited || !r.visited_unaltered || !r.unreachable))
            throw ContractViolation("bitset columns requested but not captured");
        out << r.execution_id << ',' << r.iteration << ',' << to_string(r.direction) << ',' << r.label_id << ','
            << r.node << ',' << r.predecessor << ',' << format_real(r.objective) << ','
            << format_real(r.consumption_critical) << ',' << format_real(r.efficiency) << ','
            << format_real(r.tour_length) << ',' << format_real(r.nvisited) << ',' << format_real(r.nvisited_unaltered)
            << ',' << format_real(r.nunreachable) << ',' << format_real(r.nunreachable_unaltered) << ','
            << format_real(r.repeated_visits) << ',';
        if (with_bitsets)
            out << r.visited->to_hex() << ',' << r.visited_unaltered->to_hex() << ',' << r.unreachable->to_hex() << ',';
        out << format_real(r.nlabels_network) << ',' << format_real(r.nlabels_dominated_network) << ','
            << format_real(r.nlabels_closed_network) << ',' << format_real(r.nlabels_open_network) << ','
            << format_real(r.nlabels_node) << ',' << format_real(r.nlabels_closed_node) << ','
            << format_real(r.nlabels_open_node) << ',' << r.dominated << ',' << to_string(r.label_class) << ','
            << r.flags << '\n';
    }
    if (!out) throw std::runtime_error("csv write failed");
    return rows.size();
}

std::size_t export_normalized_csv(const std::vector<NormalizedRecord>& rows, const std::string& path,
                                  bool with_bitsets) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    return export_normalized_csv(rows, f, with_bitsets);
}

}  // namespace labellens
