#include "labellens/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace labellens {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// A document split into header keys and named sections of whitespace-separated rows.
struct Document {
    struct Row {
        int line;
        std::vector<std::string> fields;
    };
    struct Header {
        int line;
        std::string value;
    };
    std::map<std::string, Header> header;
    std::map<std::string, std::vector<Row>> sections;
};

Document tokenize(std::string_view text, const std::set<std::string>& section_names) {
    Document doc;
    std::string current;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line == "EOF") break;
        if (section_names.count(line)) {
            current = line;
            if (doc.sections.count(current)) throw ParseError(lineno, current, "duplicate section");
            doc.sections[current];
            continue;
        }
        const auto colon = line.find(':');
        if (colon != std::string::npos) {
            const std::string key = trim(std::string_view(line).substr(0, colon));
            const std::string value = trim(std::string_view(line).substr(colon + 1));
            if (doc.header.count(key)) throw ParseError(lineno, "HEADER", "duplicate key " + key);
            doc.header[key] = {lineno, value};
            current.clear();
            continue;
        }
        if (current.empty()) throw ParseError(lineno, "HEADER", "unexpected line '" + line + "'");
        doc.sections[current].push_back({lineno, split_ws(line)});
    }
    return doc;
}

double to_double(const std::string& s, int line, const std::string& section) {
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
        throw ParseError(line, section, "non-numeric field '" + s + "'");
    return v;
}

long long to_int(const std::string& s, int line, const std::string& section) {
    long long v = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw ParseError(line, section, "non-integer field '" + s + "'");
    return v;
}

// Converts a 1-based document id into a 0-based node id.
NodeId node_id(const std::string& s, int n, int line, const std::string& section) {
    const auto v = to_int(s, line, section);
    if (v < 1 || v > n) throw ParseError(line, section, "node id " + s + " out of range 1.." + std::to_string(n));
    return static_cast<NodeId>(v - 1);
}

const Document::Header& header_entry(const Document& doc, const std::string& key) {
    const auto it = doc.header.find(key);
    if (it == doc.header.end()) throw ParseError(0, "HEADER", "missing " + key);
    return it->second;
}

// Reads a per-node section of `id value...` rows; each node appears at most once.
std::vector<std::vector<double>> node_rows(const Document& doc, const std::string& section, int n,
                                           std::size_t width, bool required_complete) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(n));
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    const auto it = doc.sections.find(section);
    if (it == doc.sections.end()) return {};
    for (const auto& row : it->second) {
        if (row.fields.size() != width + 1)
            throw ParseError(row.line, section, "malformed row, expected " + std::to_string(width + 1) + " fields");
        const NodeId v = node_id(row.fields[0], n, row.line, section);
        if (seen[static_cast<std::size_t>(v)]) throw ParseError(row.line, section, "duplicate node id " + row.fields[0]);
        seen[static_cast<std::size_t>(v)] = true;
        for (std::size_t k = 1; k <= width; ++k) out[static_cast<std::size_t>(v)].push_back(to_double(row.fields[k], row.line, section));
    }
    if (required_complete) {
        for (int v = 0; v < n; ++v)
            if (!seen[static_cast<std::size_t>(v)])
                throw ParseError(0, section, "missing node " + std::to_string(v + 1));
    } else {
        for (auto& r : out)
            if (r.empty()) r.assign(width, 0.0);
    }
    return out;
}

// Applies `i j value` rows on top of `m`; returns the set of arcs that were given.
std::set<std::pair<NodeId, NodeId>> apply_arc_rows(const Document& doc, const std::string& section, int n, Matrix& m) {
    std::set<std::pair<NodeId, NodeId>> given;
    const auto it = doc.sections.find(section);
    if (it == doc.sections.end()) return given;
    for (const auto& row : it->second) {
        if (row.fields.size() != 3) throw ParseError(row.line, section, "malformed row, expected 3 fields");
        const NodeId i = node_id(row.fields[0], n, row.line, section);
        const NodeId j = node_id(row.fields[1], n, row.line, section);
        if (i == j) throw ParseError(row.line, section, "diagonal entry");
        if (!given.insert({i, j}).second) throw ParseError(row.line, section, "duplicate arc");
        m(i, j) = to_double(row.fields[2], row.line, section);
    }
    return given;
}

}  // namespace

ParseError::ParseError(int line, std::string section, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + " [" + section + "]: " + message
                                  : "[" + section + "]: " + message),
      line_(line),
      section_(std::move(section)) {}

std::string_view to_string(ResourceMode mode) {
    return mode == ResourceMode::ArcDistance ? "ARC_DISTANCE" : "NODE_DEMAND";
}

ResourceMode parse_resource_mode(std::string_view text) {
    if (text == "ARC_DISTANCE") return ResourceMode::ArcDistance;
    if (text == "NODE_DEMAND") return ResourceMode::NodeDemand;
    throw std::invalid_argument("unknown resource mode '" + std::string(text) + "'");
}

double nint(double x) { return std::floor(x + 0.5); }

double euclidean(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Matrix derive_arc_distances(const std::vector<Point>& coords) {
    const auto n = coords.size();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) m(static_cast<NodeId>(i), static_cast<NodeId>(j)) = nint(euclidean(coords[i], coords[j]));
    return m;
}

Matrix derive_costs(const std::vector<Point>& coords, const std::vector<double>& prize) {
    Matrix m = derive_arc_distances(coords);
    const auto n = static_cast<NodeId>(coords.size());
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j)
            if (i != j) m(i, j) -= prize[static_cast<std::size_t>(j)];
    return m;
}

Matrix demand_resources(const std::vector<double>& demand) {
    const auto n = static_cast<NodeId>(demand.size());
    Matrix m(demand.size());
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j)
            if (i != j) m(i, j) = demand[static_cast<std::size_t>(j)];
    return m;
}

void validate(const Instance& in) {
    const auto fail = [&](const std::string& what) { throw std::invalid_argument("instance '" + in.name + "': " + what); };
    if (in.n < 2) fail("needs at least 2 nodes");
    const auto n = static_cast<std::size_t>(in.n);
    if (in.source < 0 || in.source >= in.n || in.destination < 0 || in.destination >= in.n) fail("source/destination out of range");
    if (in.source == in.destination) fail("source equals destination");
    if (!(in.capacity > 0.0) || !std::isfinite(in.capacity)) fail("capacity must be positive");
    if (in.prize.size() != n || in.demand.size() != n) fail("prize/demand size mismatch");
    if (in.coords && in.coords->size() != n) fail("coordinate count mismatch");
    if (in.cost.size() != n || in.resource.size() != n) fail("matrix size mismatch");
    for (std::size_t v = 0; v < n; ++v) {
        if (!(in.prize[v] >= 0.0) || !std::isfinite(in.prize[v])) fail("negative prize");
        if (!(in.demand[v] >= 0.0) || !std::isfinite(in.demand[v])) fail("negative demand");
    }
    for (NodeId i = 0; i < in.n; ++i) {
        for (NodeId j = 0; j < in.n; ++j) {
            if (!std::isfinite(in.cost(i, j))) fail("non-finite cost");
            if (!(in.resource(i, j) >= 0.0) || !std::isfinite(in.resource(i, j))) fail("negative resource");
            if (i == j && (in.cost(i, j) != 0.0 || in.resource(i, j) != 0.0)) fail("non-zero diagonal");
        }
    }
}

Instance parse_instance(std::string_view text) {
    static const std::set<std::string> sections = {"NODE_COORD_SECTION", "DEMAND_SECTION", "PRIZE_SECTION",
                                                   "EXPLICIT_COST_SECTION", "EXPLICIT_RESOURCE_SECTION"};
    const Document doc = tokenize(text, sections);

    Instance in;
    in.name = doc.header.count("NAME") ? doc.header.at("NAME").value : std::string("unnamed");

    const auto int_header = [&](const std::string& key) {
        const auto& h = header_entry(doc, key);
        return to_int(h.value, h.line, "HEADER");
    };
    const long long nodes = int_header("NODES");
    if (nodes < 2) throw ParseError(doc.header.at("NODES").line, "HEADER", "NODES must be at least 2");
    in.n = static_cast<int>(nodes);
    const auto& src = header_entry(doc, "SOURCE");
    const auto& dst = header_entry(doc, "DEST");
    in.source = node_id(src.value, in.n, src.line, "HEADER");
    in.destination = node_id(dst.value, in.n, dst.line, "HEADER");
    if (in.source == in.destination) throw ParseError(dst.line, "HEADER", "DEST equals SOURCE");
    const auto& cap = header_entry(doc, "CAPACITY");
    in.capacity = to_double(cap.value, cap.line, "HEADER");
    if (!(in.capacity > 0.0)) throw ParseError(cap.line, "HEADER", "CAPACITY must be positive");
    if (doc.header.count("RESOURCE_MODE")) {
        try {
            in.resource_mode = parse_resource_mode(doc.header.at("RESOURCE_MODE").value);
        } catch (const std::invalid_argument& e) {
            throw ParseError(doc.header.at("RESOURCE_MODE").line, "HEADER", e.what());
        }
    }

    const auto n = static_cast<std::size_t>(in.n);
    if (doc.sections.count("NODE_COORD_SECTION")) {
        const auto rows = node_rows(doc, "NODE_COORD_SECTION", in.n, 2, true);
        std::vector<Point> pts(n);
        for (std::size_t v = 0; v < n; ++v) pts[v] = {rows[v][0], rows[v][1]};
        in.coords = std::move(pts);
    }
    in.demand.assign(n, 0.0);
    in.prize.assign(n, 0.0);
    if (doc.sections.count("DEMAND_SECTION")) {
        const auto rows = node_rows(doc, "DEMAND_SECTION", in.n, 1, false);
        for (std::size_t v = 0; v < n; ++v) in.demand[v] = rows[v][0];
    }
    if (doc.sections.count("PRIZE_SECTION")) {
        const auto rows = node_rows(doc, "PRIZE_SECTION", in.n, 1, false);
        for (std::size_t v = 0; v < n; ++v) in.prize[v] = rows[v][0];
    }

    const auto require_all_arcs = [&](const std::set<std::pair<NodeId, NodeId>>& given, const std::string& section) {
        for (NodeId i = 0; i < in.n; ++i)
            for (NodeId j = 0; j < in.n; ++j)
                if (in.is_arc(i, j) && !given.count({i, j}))
                    throw ParseError(0, section, "missing arc " + std::to_string(i + 1) + " " + std::to_string(j + 1) +
                                                     " (no coordinates to derive it from)");
    };

    in.cost = in.coords ? derive_costs(*in.coords, in.prize) : Matrix(n);
    const auto cost_given = apply_arc_rows(doc, "EXPLICIT_COST_SECTION", in.n, in.cost);
    if (!in.coords) require_all_arcs(cost_given, "EXPLICIT_COST_SECTION");

    if (in.resource_mode == ResourceMode::NodeDemand) {
        in.resource = demand_resources(in.demand);
        apply_arc_rows(doc, "EXPLICIT_RESOURCE_SECTION", in.n, in.resource);
    } else {
        in.resource = in.coords ? derive_arc_distances(*in.coords) : Matrix(n);
        const auto given = apply_arc_rows(doc, "EXPLICIT_RESOURCE_SECTION", in.n, in.resource);
        if (!in.coords) require_all_arcs(given, "EXPLICIT_RESOURCE_SECTION");
    }

    try {
        validate(in);
    } catch (const std::invalid_argument& e) {
        throw ParseError(0, "INSTANCE", e.what());
    }
    return in;
}

Instance load_instance(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open instance file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_instance(ss.str());
}

std::string serialize_instance(const Instance& in) {
    std::ostringstream out;
    out << "NAME : " << in.name << '\n'
        << "NODES : " << in.n << '\n'
        << "SOURCE : " << in.source + 1 << '\n'
        << "DEST : " << in.destination + 1 << '\n'
        << "CAPACITY : " << format_double(in.capacity) << '\n'
        << "RESOURCE_MODE : " << to_string(in.resource_mode) << '\n';
    const auto n = static_cast<std::size_t>(in.n);
    if (in.coords) {
        out << "NODE_COORD_SECTION\n";
        for (std::size_t v = 0; v < n; ++v)
            out << v + 1 << ' ' << format_double((*in.coords)[v].x) << ' ' << format_double((*in.coords)[v].y) << '\n';
    }
    out << "DEMAND_SECTION\n";
    for (std::size_t v = 0; v < n; ++v) out << v + 1 << ' ' << format_double(in.demand[v]) << '\n';
    out << "PRIZE_SECTION\n";
    for (std::size_t v = 0; v < n; ++v) out << v + 1 << ' ' << format_double(in.prize[v]) << '\n';
    // Arc matrices are written in full so that the document reproduces them exactly.
    out << "EXPLICIT_COST_SECTION\n";
    for (NodeId i = 0; i < in.n; ++i)
        for (NodeId j = 0; j < in.n; ++j)
            if (i != j) out << i + 1 << ' ' << j + 1 << ' ' << format_double(in.cost(i, j)) << '\n';
    out << "EXPLICIT_RESOURCE_SECTION\n";
    for (NodeId i = 0; i < in.n; ++i)
        for (NodeId j = 0; j < in.n; ++j)
            if (i != j) out << i + 1 << ' ' << j + 1 << ' ' << format_double(in.resource(i, j)) << '\n';
    out << "EOF\n";
    return out.str();
}

void save_instance(const Instance& instance, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write instance file '" + path + "'");
    f << serialize_instance(instance);
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

Instance convert_cvrp(std::string_view text, const CvrpConvertOptions& options) {
    static const std::set<std::string> sections = {"NODE_COORD_SECTION", "DEMAND_SECTION", "DEPOT_SECTION"};
    // DEPOT_SECTION is terminated by -1 which the generic tokenizer keeps as a row.
    const Document doc = tokenize(text, sections);
    const auto& dimension = header_entry(doc, "DIMENSION");
    const long long dim = to_int(dimension.value, dimension.line, "HEADER");
    if (dim < 2) throw ParseError(dimension.line, "HEADER", "DIMENSION must be at least 2");
    const int m = static_cast<int>(dim);
    const auto& cap = header_entry(doc, "CAPACITY");
    const double capacity = to_double(cap.value, cap.line, "HEADER");
    if (!doc.sections.count("NODE_COORD_SECTION")) throw ParseError(0, "NODE_COORD_SECTION", "missing section");

    const auto coords = node_rows(doc, "NODE_COORD_SECTION", m, 2, true);
    const auto demands = node_rows(doc, "DEMAND_SECTION", m, 1, false);

    NodeId depot = 0;
    if (const auto it = doc.sections.find("DEPOT_SECTION"); it != doc.sections.end()) {
        for (const auto& row : it->second) {
            if (row.fields.empty() || row.fields[0] == "-1") break;
            depot = node_id(row.fields[0], m, row.line, "DEPOT_SECTION");
            break;
        }
    }

    Instance in;
    in.name = doc.header.count("NAME") ? doc.header.at("NAME").value : std::string("cvrp");
    in.n = m + 1;
    in.source = depot;
    in.destination = m;
    in.capacity = capacity;
    in.resource_mode = options.resource_mode;
    const auto n = static_cast<std::size_t>(in.n);
    std::vector<Point> pts(n);
    for (std::size_t v = 0; v < static_cast<std::size_t>(m); ++v) pts[v] = {coords[v][0], coords[v][1]};
    pts[static_cast<std::size_t>(m)] = pts[static_cast<std::size_t>(depot)];
    in.demand.assign(n, 0.0);
    for (std::size_t v = 0; v < static_cast<std::size_t>(m) && !demands.empty(); ++v) in.demand[v] = demands[v][0];
    in.demand[static_cast<std::size_t>(depot)] = 0.0;
    in.prize.assign(n, 0.0);
    for (std::size_t v = 0; v < static_cast<std::size_t>(m); ++v)
        if (static_cast<NodeId>(v) != depot)
            in.prize[v] = nint(options.prize_factor * euclidean(pts[static_cast<std::size_t>(depot)], pts[v]));
    in.coords = pts;
    in.cost = derive_costs(pts, in.prize);
    in.resource = in.resource_mode == ResourceMode::NodeDemand ? demand_resources(in.demand) : derive_arc_distances(pts);
    validate(in);
    return in;
}

Reachability::Reachability(const Instance& instance)
    : resource_(instance.resource), capacity_(instance.capacity), from_source_(static_cast<std::size_t>(instance.n)) {
    for (NodeId j = 0; j < instance.n; ++j)
        if (j != instance.source && blocked_forward(instance.source, j, 0.0)) from_source_.insert(j);
}

}  // namespace labellens
