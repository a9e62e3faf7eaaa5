#ifndef LABELLENS_CLI_HPP
#define LABELLENS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "labellens/dssr.hpp"
#include "labellens/generator.hpp"
#include "labellens/instance.hpp"

namespace labellens {

enum class DatasetChoice { G, I, Both };

DatasetChoice parse_dataset_choice(std::string_view text);

struct RunConfig {
    std::vector<std::string> instances;
    DatasetChoice dataset = DatasetChoice::Both;
    ExtensionPolicy policy = ExtensionPolicy::Node;
    double split = 0.5;
    std::string out_dir = "labellens-out";
    std::uint64_t seed = 1;
    bool bitsets = true;
    std::optional<ResourceMode> resource_mode;
    bool single_thread = false;
    bool per_direction_objective = false;
};

// Throws std::invalid_argument when the split is outside (0, 1].
void check(const RunConfig& config);

// Rebuilds the resource matrix for `mode`. Arc-distance mode needs coordinates.
void apply_resource_mode(Instance& instance, ResourceMode mode);

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);

// Writes <out>/<instance>/iter_<k>.<G|I>.csv, instance.txt and run.json.
int cmd_collect(const RunConfig& config, std::ostream& out, std::ostream& err);

// Writes iter_<k>.<G|I>.norm.csv for k >= 2 in every collected run directory.
int cmd_normalize(const std::vector<std::string>& run_dirs, const RunConfig& config, std::ostream& out,
                  std::ostream& err);

// Prints the per-class dataset table and writes summary.csv to config.out_dir.
int cmd_summarize(const std::vector<std::string>& run_dirs, const RunConfig& config, std::ostream& out,
                  std::ostream& err);

struct PolicyTotals {
    ExtensionPolicy policy = ExtensionPolicy::Node;
    double seconds = 0.0;
    int fastest = 0;
    std::uint64_t attempts = 0;
    std::uint64_t insertions = 0;
    double success_pct() const { return attempts ? 100.0 * static_cast<double>(insertions) / attempts : 0.0; }
};

struct PolicyBench {
    std::vector<PolicyTotals> totals;  // node, greedy
    int instances = 0;
    int cost_mismatches = 0;
};

PolicyBench bench_policies(const std::vector<Instance>& instances, const RunConfig& config);
void print_bench(const PolicyBench& bench, std::ostream& out);
int cmd_bench_policies(const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_gen(const GeneratorOptions& options, const std::string& path, std::ostream& out, std::ostream& err);
int cmd_convert(const std::string& cvrp_path, const std::string& path, const CvrpConvertOptions& options,
                std::ostream& out, std::ostream& err);

}  // namespace labellens

#endif  // LABELLENS_CLI_HPP
