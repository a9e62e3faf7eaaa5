#include "labellens/telemetry.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

namespace labellens {

std::string_view to_string(LabelClass c) {
    switch (c) {
        case LabelClass::P: return "P";
        case LabelClass::GD: return "GD";
        case LabelClass::GI: return "GI";
        case LabelClass::Unknown: break;
    }
    return "?";
}

LabelClass parse_label_class(std::string_view text) {
    if (text == "P") return LabelClass::P;
    if (text == "GD") return LabelClass::GD;
    if (text == "GI") return LabelClass::GI;
    throw std::invalid_argument("unknown label class '" + std::string(text) + "'");
}

std::string_view to_string(Variant v) { return v == Variant::G ? "G" : "I"; }

LabelRecord snapshot(const Label& label, const NetworkCounters& counters, const LabelPool& pool, bool capture_bitsets) {
    LabelRecord r;
    r.direction = label.direction;
    r.label_id = label.id;
    r.node = label.node;
    r.predecessor = label.predecessor_node;
    r.objective = label.cost;
    r.consumption_critical = label.consumption;
    r.tour_length = label.tour_length;
    r.nvisited = static_cast<std::int64_t>(label.visited.count());
    r.nvisited_unaltered = static_cast<std::int64_t>(label.visited_unaltered.count());
    r.nunreachable = static_cast<std::int64_t>(label.unreachable.count());
    r.nunreachable_unaltered = label.unreachable_unaltered;
    r.repeated_visits = label.repeated_visits;
    if (capture_bitsets) {
        r.visited = label.visited;
        r.visited_unaltered = label.visited_unaltered;
        r.unreachable = label.unreachable;
    }
    r.nlabels_network = counters.network;
    r.nlabels_dominated_network = counters.dominated;
    r.nlabels_closed_network = counters.closed;
    r.nlabels_open_network = counters.open;
    r.nlabels_node = static_cast<std::int64_t>(pool.size());
    r.nlabels_closed_node = static_cast<std::int64_t>(pool.closed_count());
    r.nlabels_open_node = static_cast<std::int64_t>(pool.open_count());
    return r;
}

void TelemetrySink::on_generated(const Label& label, const NetworkCounters& counters, const LabelPool& pool) {
    LabelRecord r = snapshot(label, counters, pool, capture_bitsets_);
    r.execution_id = execution_id_;
    r.iteration = iteration_;
    records_.push_back(std::move(r));
    events_.push_back({TelemetryEvent::Kind::Generated, label.id});
}

void TelemetrySink::on_insert(const Label& label, const InsertOutcome& outcome) {
    if (!outcome.inserted()) {
        events_.push_back({TelemetryEvent::Kind::Rejected, label.id});
        return;
    }
    events_.push_back({TelemetryEvent::Kind::Inserted, label.id});
    for (const LabelId d : outcome.displaced) events_.push_back({TelemetryEvent::Kind::Displaced, d, label.id});
}

void TelemetrySink::on_closed(const Label& label) { events_.push_back({TelemetryEvent::Kind::Closed, label.id}); }

std::vector<LabelRecord> finalize_iteration(std::vector<LabelRecord> records, std::span<const TelemetryEvent> events) {
    std::unordered_map<LabelId, LabelClass> cls;
    for (const auto& e : events) {
        switch (e.kind) {
            case TelemetryEvent::Kind::Rejected: cls[e.label] = LabelClass::GD; break;
            case TelemetryEvent::Kind::Inserted: cls[e.label] = LabelClass::P; break;
            case TelemetryEvent::Kind::Displaced: {
                const auto it = cls.find(e.label);
                if (it == cls.end() || it->second != LabelClass::P)
                    throw CorruptionError("label " + std::to_string(e.label) + " displaced without being inserted");
                it->second = LabelClass::GI;
                break;
            }
            default: break;
        }
    }
    for (auto& r : records) {
        const auto it = cls.find(r.label_id);
        if (it == cls.end())
            throw CorruptionError("record for label " + std::to_string(r.label_id) + " has no insertion event");
        r.label_class = it->second;
        r.dominated = it->second == LabelClass::P ? 0 : 1;
    }
    return records;
}

std::vector<int> Dataset::iterations() const {
    std::set<int> its;
    for (const auto& r : rows) its.insert(r.iteration);
    return {its.begin(), its.end()};
}

std::vector<LabelRecord> Dataset::iteration_rows(int iteration) const {
    std::vector<LabelRecord> out;
    for (const auto& r : rows)
        if (r.iteration == iteration) out.push_back(r);
    return out;
}

Dataset inserted_subset(const Dataset& g) {
    Dataset out;
    out.variant = Variant::I;
    out.instance = g.instance;
    out.nodes = g.nodes;
    for (const auto& r : g.rows)
        if (r.label_class == LabelClass::P || r.label_class == LabelClass::GI) out.rows.push_back(r);
    return out;
}

DatasetCollector::DatasetCollector(std::string instance, std::size_t nodes, std::string execution_id,
                                   bool capture_bitsets)
    : execution_id_(std::move(execution_id)), capture_bitsets_(capture_bitsets) {
    dataset_.variant = Variant::G;
    dataset_.instance = std::move(instance);
    dataset_.nodes = nodes;
}

SearchObserver* DatasetCollector::direction_observer(int iteration, Direction direction) {
    sinks_.erase(direction);
    auto [it, _] = sinks_.emplace(direction, TelemetrySink(execution_id_, iteration, capture_bitsets_));
    return &it->second;
}

void DatasetCollector::iteration_finished(const IterationSummary& summary) {
    for (const Direction d : {Direction::Forward, Direction::Backward}) {
        auto it = sinks_.find(d);
        if (it == sinks_.end()) continue;
        auto events = it->second.events();
        auto rows = finalize_iteration(it->second.take_records(), events);
        dataset_.rows.insert(dataset_.rows.end(), std::make_move_iterator(rows.begin()),
                             std::make_move_iterator(rows.end()));
    }
    sinks_.clear();
    summaries_.push_back(summary);
}

std::string make_execution_id(std::uint64_t seed, const std::string& instance) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (const unsigned char c : instance) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::mt19937_64 rng(seed ^ h);
    const std::uint64_t a = rng();
    const std::uint64_t b = rng();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%08x-%04x-4%03x-%04x-%012llx", static_cast<unsigned>(a >> 32),
                  static_cast<unsigned>((a >> 16) & 0xffff), static_cast<unsigned>(a & 0xfff),
                  static_cast<unsigned>(0x8000 | ((b >> 48) & 0x3fff)),
                  static_cast<unsigned long long>(b & 0xffffffffffffull));
    return buf;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

const std::vector<std::string> kAllColumns = {
    "executionID",       "iteration",
    "direction",         "label_id",
    "node",              "predecessor",
    "objective",         "consumption_critical",
    "tour_length",       "nvisited",
    "nvisited_unaltered", "nunreachable",
    "nunreachable_unaltered", "repeated_visits",
    "visited",           "visited_unaltered",
    "unreachable",       "nlabels_network",
    "nlabels_dominated_network", "nlabels_closed_network",
    "nlabels_open_network", "nlabels_node",
    "nlabels_closed_node", "nlabels_open_node",
    "dominated",         "class"};

bool is_bitset_column(const std::string& c) {
    return c == "visited" || c == "visited_unaltered" || c == "unreachable";
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line, const std::string& column) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("csv line " + std::to_string(line) + ": bad value '" + s + "' in column " + column);
    return v;
}

}  // namespace

const std::vector<std::string>& csv_columns(bool with_bitsets) {
    static const std::vector<std::string> without = [] {
        std::vector<std::string> v;
        for (const auto& c : kAllColumns)
            if (!is_bitset_column(c)) v.push_back(c);
        return v;
    }();
    return with_bitsets ? kAllColumns : without;
}

std::size_t export_csv(const Dataset& dataset, std::ostream& out, bool with_bitsets) {
    const auto& cols = csv_columns(with_bitsets);
    for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
    out << '\n';
    for (const auto& r : dataset.rows) {
        if (r.label_class == LabelClass::Unknown)
            throw ContractViolation("exporting an unclassified record (label " + std::to_string(r.label_id) + ")");
        if (with_bitsets && (!r.visited || !r.visited_unaltered || !r.unreachable))
            throw ContractViolation("bitset columns requested but not captured");
        out << r.execution_id << ',' << r.iteration << ',' << to_string(r.direction) << ',' << r.label_id << ','
            << r.node << ',' << r.predecessor << ',' << format_real(r.objective) << ','
            << format_real(r.consumption_critical) << ',' << r.tour_length << ',' << r.nvisited << ','
            << r.nvisited_unaltered << ',' << r.nunreachable << ',' << r.nunreachable_unaltered << ','
            << r.repeated_visits << ',';
        if (with_bitsets)
            out << r.visited->to_hex() << ',' << r.visited_unaltered->to_hex() << ',' << r.unreachable->to_hex() << ',';
        out << r.nlabels_network << ',' << r.nlabels_dominated_network << ',' << r.nlabels_closed_network << ','
            << r.nlabels_open_network << ',' << r.nlabels_node << ',' << r.nlabels_closed_node << ','
            << r.nlabels_open_node << ',' << r.dominated << ',' << to_string(r.label_class) << '\n';
    }
    if (!out) throw std::runtime_error("csv write failed");
    return dataset.rows.size();
}

std::size_t export_csv(const Dataset& dataset, const std::string& path, bool with_bitsets) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    const auto n = export_csv(dataset, f, with_bitsets);
    f.flush();
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
    return n;
}

Dataset import_csv(std::istream& in, Variant variant, std::size_t nodes, const std::string& instance) {
    Dataset ds;
    ds.variant = variant;
    ds.nodes = nodes;
    ds.instance = instance;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
    const auto header = split_csv(line);
    bool with_bitsets;
    if (header == csv_columns(true)) with_bitsets = true;
    else if (header == csv_columns(false)) with_bitsets = false;
    else throw std::runtime_error("csv: unexpected header");

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv(line);
        if (f.size() != header.size())
            throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(header.size()) + " fields");
        std::size_t k = 0;
        const auto next = [&]() -> const std::string& { return f[k++]; };
        const auto i64 = [&]() { const auto& s = next(); return parse_number<std::int64_t>(s, lineno, header[k - 1]); };
        const auto real = [&]() { const auto& s = next(); return parse_number<double>(s, lineno, header[k - 1]); };
        LabelRecord r;
        r.execution_id = next();
        r.iteration = static_cast<int>(i64());
        r.direction = parse_direction(next());
        r.label_id = i64();
        r.node = static_cast<NodeId>(i64());
        r.predecessor = static_cast<NodeId>(i64());
        r.objective = real();
        r.consumption_critical = real();
        r.tour_length = i64();
        r.nvisited = i64();
        r.nvisited_unaltered = i64();
        r.nunreachable = i64();
        r.nunreachable_unaltered = i64();
        r.repeated_visits = i64();
        if (with_bitsets) {
            r.visited = NodeSet::from_hex(next(), nodes);
            r.visited_unaltered = NodeSet::from_hex(next(), nodes);
            r.unreachable = NodeSet::from_hex(next(), nodes);
        }
        r.nlabels_network = i64();
        r.nlabels_dominated_network = i64();
        r.nlabels_closed_network = i64();
        r.nlabels_open_network = i64();
        r.nlabels_node = i64();
        r.nlabels_closed_node = i64();
        r.nlabels_open_node = i64();
        r.dominated = static_cast<int>(i64());
        r.label_class = parse_label_class(next());
        ds.rows.push_back(std::move(r));
    }
    return ds;
}

Dataset import_csv(const std::string& path, Variant variant, std::size_t nodes, const std::string& instance) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    return import_csv(f, variant, nodes, instance);
}

std::string instance_group(const std::string& instance) {
    const auto dash = instance.find('-');
    return dash == std::string::npos ? instance : instance.substr(0, dash);
}

RunDigest digest(const Dataset& dataset, int iterations, std::uint64_t attempts, std::uint64_t insertions) {
    RunDigest d;
    d.instance = dataset.instance;
    d.group = instance_group(dataset.instance);
    d.labels = dataset.rows.size();
    for (const auto& r : dataset.rows)
        if (r.label_class == LabelClass::P) ++d.pareto;
    d.iterations = iterations;
    d.attempts = attempts;
    d.insertions = insertions;
    return d;
}

std::vector<SummaryRow> summarize(const std::vector<RunDigest>& runs) {
    std::map<std::string, std::vector<const RunDigest*>> groups;
    for (const auto& r : runs) groups[r.group].push_back(&r);

    const auto fold = [](const std::string& name, const std::vector<const RunDigest*>& members) {
        SummaryRow row;
        row.group = name;
        row.instances = static_cast<int>(members.size());
        std::uint64_t pareto = 0;
        std::uint64_t insertions = 0;
        double iters = 0.0;
        double per_it = 0.0;
        for (const auto* m : members) {
            row.labels += m->labels;
            pareto += m->pareto;
            row.attempts += m->attempts;
            insertions += m->insertions;
            iters += m->iterations;
            per_it += m->iterations > 0 ? static_cast<double>(m->labels) / m->iterations : 0.0;
        }
        if (!members.empty()) {
            row.avg_iterations = iters / static_cast<double>(members.size());
            row.labels_per_iteration = per_it / static_cast<double>(members.size());
        }
        row.pareto_pct = row.labels ? 100.0 * static_cast<double>(pareto) / static_cast<double>(row.labels) : 0.0;
        row.success_pct =
            row.attempts ? 100.0 * static_cast<double>(insertions) / static_cast<double>(row.attempts) : 0.0;
        return row;
    };

    std::vector<SummaryRow> out;
    std::vector<const RunDigest*> all;
    for (const auto& [name, members] : groups) {
        out.push_back(fold(name, members));
        all.insert(all.end(), members.begin(), members.end());
    }
    out.push_back(fold("Overall", all));
    return out;
}

void print_summary(const std::vector<SummaryRow>& rows, std::ostream& out) {
    out << std::left << std::setw(10) << "Class" << std::right << std::setw(8) << "Inst." << std::setw(14) << "Labels"
        << std::setw(10) << "Pareto" << std::setw(12) << "DSSR-R It." << std::setw(16) << "Labels per It."
        << std::setw(14) << "Attempts" << std::setw(10) << "Success" << '\n';
    for (const auto& r : rows) {
        char pareto[32], success[32], its[32], per[32];
        std::snprintf(pareto, sizeof pareto, "%.2f%%", r.pareto_pct);
        std::snprintf(success, sizeof success, "%.2f%%", r.success_pct);
        std::snprintf(its, sizeof its, "%.2f", r.avg_iterations);
        std::snprintf(per, sizeof per, "%.2f", r.labels_per_iteration);
        out << std::left << std::setw(10) << r.group << std::right << std::setw(8) << r.instances << std::setw(14)
            << r.labels << std::setw(10) << pareto << std::setw(12) << its << std::setw(16) << per << std::setw(14)
            << r.attempts << std::setw(10) << success << '\n';
    }
}

}  // namespace labellens
