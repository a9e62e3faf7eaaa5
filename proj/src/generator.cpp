#include "labellens/generator.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace labellens {

std::string_view to_string(Geometry g) {
    switch (g) {
        case Geometry::Random: return "R";
        case Geometry::Clustered: return "C";
        case Geometry::Mixed: return "RC";
    }
    return "R";
}

Geometry parse_geometry(std::string_view text) {
    if (text == "R" || text == "random") return Geometry::Random;
    if (text == "C" || text == "clustered") return Geometry::Clustered;
    if (text == "RC" || text == "mixed") return Geometry::Mixed;
    throw std::invalid_argument("unknown geometry '" + std::string(text) + "'");
}

Instance generate_instance(const GeneratorOptions& options) {
    if (options.n < 2) throw std::invalid_argument("generate_instance: n must be at least 2");
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> coord(0.0, 100.0);
    const auto n = static_cast<std::size_t>(options.n);

    std::vector<Point> pts(n);
    const Point depot{coord(rng), coord(rng)};
    const std::size_t ncentres = std::max<std::size_t>(1, n / 5);
    std::vector<Point> centres(ncentres);
    for (auto& c : centres) c = {coord(rng), coord(rng)};
    std::normal_distribution<double> spread(0.0, 8.0);
    std::uniform_int_distribution<std::size_t> pick(0, ncentres - 1);
    for (std::size_t v = 1; v + 1 < n; ++v) {
        const bool clustered = options.geometry == Geometry::Clustered ||
                               (options.geometry == Geometry::Mixed && v % 2 == 0);
        if (clustered) {
            const Point& c = centres[pick(rng)];
            pts[v] = {std::clamp(c.x + spread(rng), 0.0, 100.0), std::clamp(c.y + spread(rng), 0.0, 100.0)};
        } else {
            pts[v] = {coord(rng), coord(rng)};
        }
    }
    pts[0] = depot;
    pts[n - 1] = depot;

    Instance in;
    in.name = std::string(to_string(options.geometry)) + "-n" + std::to_string(options.n) + "-s" +
              std::to_string(options.seed);
    in.n = options.n;
    in.source = 0;
    in.destination = options.n - 1;
    in.resource_mode = options.resource_mode;
    in.demand.assign(n, 0.0);
    std::uniform_int_distribution<int> demand(1, 10);
    for (std::size_t v = 1; v + 1 < n; ++v) in.demand[v] = demand(rng);

    const Matrix dist = derive_arc_distances(pts);
    double mean_dist = 0.0;
    for (NodeId i = 0; i < in.n; ++i)
        for (NodeId j = 0; j < in.n; ++j) mean_dist += dist(i, j);
    mean_dist = n > 1 ? mean_dist / static_cast<double>(n * (n - 1)) : 0.0;

    in.prize.assign(n, 0.0);
    std::uniform_real_distribution<double> jitter(0.5, 1.5);
    for (std::size_t v = 1; v + 1 < n; ++v) in.prize[v] = nint(options.prize_scale * mean_dist * jitter(rng));

    const double length = std::max(1.0, options.route_length);
    if (options.resource_mode == ResourceMode::NodeDemand) {
        in.capacity = std::max(10.0, nint(5.5 * length));
        in.resource = demand_resources(in.demand);
    } else {
        in.capacity = std::max(1.0, nint(mean_dist * (length + 1.0)));
        in.resource = dist;
    }
    in.coords = pts;
    in.cost = derive_costs(pts, in.prize);
    validate(in);
    return in;
}

}  // namespace labellens
