#ifndef LABELLENS_TELEMETRY_HPP
#define LABELLENS_TELEMETRY_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "labellens/dssr.hpp"
#include "labellens/labeling.hpp"

namespace labellens {

enum class LabelClass { Unknown, P, GD, GI };
enum class Variant { G, I };

std::string_view to_string(LabelClass c);
LabelClass parse_label_class(std::string_view text);
std::string_view to_string(Variant v);

// One generated label with the features captured at generation time.
struct LabelRecord {
    std::string execution_id;
    int iteration = 0;
    Direction direction = Direction::Forward;
    LabelId label_id = kNoLabel;  // generation index within (iteration, direction)
    NodeId node = kNoNode;
    NodeId predecessor = kNoNode;
    double objective = 0.0;
    double consumption_critical = 0.0;
    std::int64_t tour_length = 0;
    std::int64_t nvisited = 0;
    std::int64_t nvisited_unaltered = 0;
    std::int64_t nunreachable = 0;
    std::int64_t nunreachable_unaltered = 0;
    std::int64_t repeated_visits = 0;
    std::optional<NodeSet> visited;
    std::optional<NodeSet> visited_unaltered;
    std::optional<NodeSet> unreachable;
    std::int64_t nlabels_network = 0;
    std::int64_t nlabels_dominated_network = 0;
    std::int64_t nlabels_closed_network = 0;
    std::int64_t nlabels_open_network = 0;
    std::int64_t nlabels_node = 0;
    std::int64_t nlabels_closed_node = 0;
    std::int64_t nlabels_open_node = 0;
    int dominated = 0;
    LabelClass label_class = LabelClass::Unknown;

    bool operator==(const LabelRecord&) const = default;
};

// Copies the label's features and the direction/pool counters. The pool is the one the
// label is about to be offered to, so its counts exclude the label itself.
LabelRecord snapshot(const Label& label, const NetworkCounters& counters, const LabelPool& pool,
                     bool capture_bitsets = true);

struct TelemetryEvent {
    enum class Kind { Generated, Rejected, Inserted, Displaced, Closed };
    Kind kind;
    LabelId label;
    LabelId by = kNoLabel;  // dominating label for Displaced
};

// Records one direction of one iteration. Exclusively owned by that direction's search.
class TelemetrySink : public SearchObserver {
public:
    TelemetrySink(std::string execution_id, int iteration, bool capture_bitsets)
        : execution_id_(std::move(execution_id)), iteration_(iteration), capture_bitsets_(capture_bitsets) {}

    void on_generated(const Label& label, const NetworkCounters& counters, const LabelPool& pool) override;
    void on_insert(const Label& label, const InsertOutcome& outcome) override;
    void on_closed(const Label& label) override;

    const std::vector<LabelRecord>& records() const { return records_; }
    const std::vector<TelemetryEvent>& events() const { return events_; }
    std::vector<LabelRecord> take_records() { return std::move(records_); }

private:
    std::string execution_id_;
    int iteration_;
    bool capture_bitsets_;
    std::vector<LabelRecord> records_;
    std::vector<TelemetryEvent> events_;
};

// Rejected at insertion -> GD; inserted then displaced -> GI; inserted and never displaced -> P.
// Records must belong to one (iteration, direction) stream whose events are `events`.
std::vector<LabelRecord> finalize_iteration(std::vector<LabelRecord> records, std::span<const TelemetryEvent> events);

class CorruptionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Dataset {
    Variant variant = Variant::G;
    std::string instance;
    std::size_t nodes = 0;
    std::vector<LabelRecord> rows;

    std::vector<int> iterations() const;
    std::vector<LabelRecord> iteration_rows(int iteration) const;
};

// Rows of class P or GI.
Dataset inserted_subset(const Dataset& g);

// Captures every iteration of a solve and merges the direction streams as
// (iteration, forward rows, backward rows), each in event order.
class DatasetCollector : public IterationObserver {
public:
    DatasetCollector(std::string instance, std::size_t nodes, std::string execution_id, bool capture_bitsets);

    SearchObserver* direction_observer(int iteration, Direction direction) override;
    void iteration_finished(const IterationSummary& summary) override;

    const Dataset& dataset() const { return dataset_; }
    const std::vector<IterationSummary>& summaries() const { return summaries_; }

private:
    std::string execution_id_;
    bool capture_bitsets_;
    std::map<Direction, TelemetrySink> sinks_;
    Dataset dataset_;
    std::vector<IterationSummary> summaries_;
};

// Deterministic UUID-formatted token for a run.
std::string make_execution_id(std::uint64_t seed, const std::string& instance);

// CSV columns of the raw telemetry file, in order.
const std::vector<std::string>& csv_columns(bool with_bitsets);

// Writes a header plus one row per record; returns the row count. Throws ContractViolation
// on unclassified rows.
std::size_t export_csv(const Dataset& dataset, std::ostream& out, bool with_bitsets = true);
std::size_t export_csv(const Dataset& dataset, const std::string& path, bool with_bitsets = true);
Dataset import_csv(std::istream& in, Variant variant, std::size_t nodes, const std::string& instance = {});
Dataset import_csv(const std::string& path, Variant variant, std::size_t nodes, const std::string& instance = {});

std::string format_real(double v);  // 9 significant digits

// Per-instance digest feeding the summary table.
struct RunDigest {
    std::string instance;
    std::string group;
    std::uint64_t labels = 0;
    std::uint64_t pareto = 0;
    int iterations = 0;
    std::uint64_t attempts = 0;
    std::uint64_t insertions = 0;
};

// Group = instance name up to the first '-' (A-n32-k5 -> A).
std::string instance_group(const std::string& instance);
RunDigest digest(const Dataset& dataset, int iterations, std::uint64_t attempts = 0, std::uint64_t insertions = 0);

struct SummaryRow {
    std::string group;
    int instances = 0;
    std::uint64_t labels = 0;
    double pareto_pct = 0.0;
    double avg_iterations = 0.0;
    double labels_per_iteration = 0.0;  // mean over instances of labels / iterations
    std::uint64_t attempts = 0;
    double success_pct = 0.0;  // insertions / attempts
};

// One row per group (sorted) followed by "Overall".
std::vector<SummaryRow> summarize(const std::vector<RunDigest>& runs);
void print_summary(const std::vector<SummaryRow>& rows, std::ostream& out);

}  // namespace labellens

#endif  // LABELLENS_TELEMETRY_HPP
