#ifndef LABELLENS_INSTANCE_HPP
#define LABELLENS_INSTANCE_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "labellens/node_set.hpp"

namespace labellens {

// Dense row-major n x n matrix.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    std::size_t size() const { return n_; }
    double& operator()(NodeId i, NodeId j) { return data_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)]; }
    double operator()(NodeId i, NodeId j) const { return data_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)]; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

enum class ResourceMode { ArcDistance, NodeDemand };

std::string_view to_string(ResourceMode mode);
ResourceMode parse_resource_mode(std::string_view text);

// An ESPPRC instance on a complete directed graph with a single critical resource.
// Arc (i, j) costs cost(i, j) and consumes resource(i, j) units of the budget.
struct Instance {
    std::string name;
    int n = 0;
    NodeId source = 0;
    NodeId destination = 1;
    std::optional<std::vector<Point>> coords;
    std::vector<double> prize;
    std::vector<double> demand;
    double capacity = 0.0;
    ResourceMode resource_mode = ResourceMode::NodeDemand;
    Matrix cost;
    Matrix resource;

    // Arcs into the source and out of the destination never appear on an s-d path.
    bool is_arc(NodeId i, NodeId j) const { return i != j && i != destination && j != source; }

    bool operator==(const Instance&) const = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, std::string section, const std::string& message);
    int line() const { return line_; }
    const std::string& section() const { return section_; }

private:
    int line_;
    std::string section_;
};

// Throws std::invalid_argument when an invariant of Instance does not hold.
void validate(const Instance& instance);

// TSPLIB nearest-integer rounding.
double nint(double x);

double euclidean(const Point& a, const Point& b);

// cost(i, j) = nint(dist(i, j)) - prize[j], zero diagonal.
Matrix derive_costs(const std::vector<Point>& coords, const std::vector<double>& prize);
Matrix derive_arc_distances(const std::vector<Point>& coords);
// resource(i, j) = demand[j], zero diagonal.
Matrix demand_resources(const std::vector<double>& demand);

Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);
std::string serialize_instance(const Instance& instance);
void save_instance(const Instance& instance, const std::string& path);

struct CvrpConvertOptions {
    // prize[j] = nint(prize_factor * dist(depot, j)) for every customer.
    double prize_factor = 1.0;
    ResourceMode resource_mode = ResourceMode::NodeDemand;
};

// Reads a TSPLIB-style CVRP file. The depot becomes the source and a copy of the
// depot is appended as the destination.
Instance convert_cvrp(std::string_view text, const CvrpConvertOptions& options = {});

// Single-arc resource lookahead. A node is unreachable from a partial path when it
// is already in the path's visited set or the arc into it would exceed the budget.
class Reachability {
public:
    explicit Reachability(const Instance& instance);

    // Forward labels leave `from` along arc (from, to); backward labels along (to, from).
    bool blocked_forward(NodeId from, NodeId to, double consumption) const {
        return consumption + resource_(from, to) > capacity_;
    }
    bool blocked_backward(NodeId from, NodeId to, double consumption) const {
        return consumption + resource_(to, from) > capacity_;
    }

    // Nodes that cannot be entered directly from the source with an empty budget use.
    const NodeSet& unreachable_from_source() const { return from_source_; }

private:
    Matrix resource_;
    double capacity_;
    NodeSet from_source_;
};

}  // namespace labellens

#endif  // LABELLENS_INSTANCE_HPP
