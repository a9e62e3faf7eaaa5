#ifndef LABELLENS_GENERATOR_HPP
#define LABELLENS_GENERATOR_HPP

#include <cstdint>
#include <string_view>

#include "labellens/instance.hpp"

namespace labellens {

// Node placement: uniform, around a few cluster centres, or half of each.
enum class Geometry { Random, Clustered, Mixed };

std::string_view to_string(Geometry g);
Geometry parse_geometry(std::string_view text);

struct GeneratorOptions {
    std::uint64_t seed = 1;
    int n = 10;
    Geometry geometry = Geometry::Random;
    // Prizes are drawn around prize_scale times the mean arc length.
    double prize_scale = 1.0;
    // Average number of customers a budget-feasible path can hold.
    double route_length = 4.0;
    ResourceMode resource_mode = ResourceMode::NodeDemand;
};

// Euclidean instance on a 100x100 square. Node 0 is the source and node n-1 the
// destination, both at the depot with zero demand, so the direct arc is always feasible.
Instance generate_instance(const GeneratorOptions& options);

}  // namespace labellens

#endif  // LABELLENS_GENERATOR_HPP
