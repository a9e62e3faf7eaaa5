#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "labellens/cli.hpp"

using namespace labellens;

namespace {

struct Flags {
    std::vector<std::string> instances;
    std::string dataset = "both";
    std::string policy = "node";
    double split = 0.5;
    std::string out = "labellens-out";
    std::uint64_t seed = 1;
    std::string bitsets = "on";
    std::string resource_mode;
    bool single_thread = false;
    bool per_direction = false;
};

RunConfig to_config(const Flags& f) {
    RunConfig c;
    c.instances = f.instances;
    c.dataset = parse_dataset_choice(f.dataset);
    c.policy = parse_policy(f.policy);
    c.split = f.split;
    c.out_dir = f.out;
    c.seed = f.seed;
    c.bitsets = f.bitsets == "on";
    if (!f.resource_mode.empty()) c.resource_mode = parse_resource_mode(f.resource_mode);
    c.single_thread = f.single_thread;
    c.per_direction_objective = f.per_direction;
    return c;
}

void add_run_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--instance", f.instances, "Instance document(s)");
    cmd->add_option("--dataset", f.dataset, "Dataset variant to export")->check(CLI::IsMember({"G", "I", "both"}));
    cmd->add_option("--policy", f.policy, "Extension policy")->check(CLI::IsMember({"node", "greedy"}));
    cmd->add_option("--split", f.split, "Forward share of the critical resource budget")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--out", f.out, "Output directory")->envname("LABELLENS_OUT");
    cmd->add_option("--seed", f.seed, "Seed for every random choice of the run");
    cmd->add_option("--bitsets", f.bitsets, "Export visited/unreachable bitsets")->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--resource-mode", f.resource_mode, "Override the instance resource mode")
        ->check(CLI::IsMember({"ARC_DISTANCE", "NODE_DEMAND"}));
    cmd->add_flag("--single-thread", f.single_thread, "Run both search directions sequentially");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"labellens: ESPPRC solver with DSSR-R and per-label telemetry"};
    app.set_config("--config", "", "Config file (TOML/INI); [solve], [collect], ... sections hold per-command keys");
    app.require_subcommand(1);
    app.fallthrough();

    Flags flags;
    std::vector<std::string> run_dirs;
    GeneratorOptions gen;
    std::string geometry = "R";
    std::string gen_mode = "NODE_DEMAND";
    std::string output;
    std::string cvrp;
    CvrpConvertOptions convert;
    std::string convert_mode = "NODE_DEMAND";

    auto* solve = app.add_subcommand("solve", "Solve instances and print the optimal path");
    add_run_flags(solve, flags);
    auto* collect = app.add_subcommand("collect", "Solve instances and export per-iteration label datasets");
    add_run_flags(collect, flags);
    auto* normalize = app.add_subcommand("normalize", "Normalize collected datasets against the previous iteration");
    add_run_flags(normalize, flags);
    normalize->add_option("runs", run_dirs, "Run directories written by collect")->required();
    normalize->add_flag("--per-direction", flags.per_direction, "Objective extrema per search direction");
    auto* summarize = app.add_subcommand("summarize", "Summarize collected datasets per instance class");
    add_run_flags(summarize, flags);
    summarize->add_option("runs", run_dirs, "Run directories written by collect")->required();
    auto* bench = app.add_subcommand("bench-policies", "Compare node and greedy extension policies");
    add_run_flags(bench, flags);

    auto* gencmd = app.add_subcommand("gen", "Generate a synthetic Euclidean instance");
    gencmd->add_option("--seed", gen.seed, "Random seed");
    gencmd->add_option("-n,--nodes", gen.n, "Node count including source and destination")->check(CLI::Range(2, 1 << 20));
    gencmd->add_option("--geometry", geometry, "Node placement")->check(CLI::IsMember({"R", "C", "RC"}));
    gencmd->add_option("--prize-scale", gen.prize_scale, "Prize level relative to the mean arc length");
    gencmd->add_option("--route-length", gen.route_length, "Customers a budget-feasible path holds on average");
    gencmd->add_option("--resource-mode", gen_mode, "Resource model")->check(CLI::IsMember({"ARC_DISTANCE", "NODE_DEMAND"}));
    gencmd->add_option("-o,--output", output, "Output file ('-' for stdout)");

    auto* convcmd = app.add_subcommand("convert", "Convert a TSPLIB CVRP file into an instance document");
    convcmd->add_option("cvrp", cvrp, "CVRP input file")->required();
    convcmd->add_option("-o,--output", output, "Output file ('-' for stdout)");
    convcmd->add_option("--prize-factor", convert.prize_factor, "Prize as a multiple of the depot distance");
    convcmd->add_option("--resource-mode", convert_mode, "Resource model")
        ->check(CLI::IsMember({"ARC_DISTANCE", "NODE_DEMAND"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gencmd) {
            gen.geometry = parse_geometry(geometry);
            gen.resource_mode = parse_resource_mode(gen_mode);
            return cmd_gen(gen, output, std::cout, std::cerr);
        }
        if (*convcmd) {
            convert.resource_mode = parse_resource_mode(convert_mode);
            return cmd_convert(cvrp, output, convert, std::cout, std::cerr);
        }
        const RunConfig config = to_config(flags);
        if (*solve) return cmd_solve(config, std::cout, std::cerr);
        if (*collect) return cmd_collect(config, std::cout, std::cerr);
        if (*normalize) return cmd_normalize(run_dirs, config, std::cout, std::cerr);
        if (*summarize) return cmd_summarize(run_dirs, config, std::cout, std::cerr);
        if (*bench) return cmd_bench_policies(config, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
