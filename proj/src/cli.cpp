#include "labellens/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "labellens/normalize.hpp"
#include "labellens/telemetry.hpp"

namespace fs = std::filesystem;

namespace labellens {

DatasetChoice parse_dataset_choice(std::string_view text) {
    if (text == "G") return DatasetChoice::G;
    if (text == "I") return DatasetChoice::I;
    if (text == "both") return DatasetChoice::Both;
    throw std::invalid_argument("unknown dataset '" + std::string(text) + "' (expected G, I or both)");
}

void check(const RunConfig& config) {
    if (!(config.split > 0.0) || config.split > 1.0) throw std::invalid_argument("--split must lie in (0, 1]");
}

void apply_resource_mode(Instance& instance, ResourceMode mode) {
    if (mode == ResourceMode::NodeDemand) {
        instance.resource = demand_resources(instance.demand);
    } else {
        if (!instance.coords) throw std::invalid_argument("ARC_DISTANCE needs node coordinates");
        instance.resource = derive_arc_distances(*instance.coords);
    }
    instance.resource_mode = mode;
}

namespace {

Instance load_for_run(const std::string& path, const RunConfig& config) {
    Instance in = load_instance(path);
    if (config.resource_mode && *config.resource_mode != in.resource_mode) apply_resource_mode(in, *config.resource_mode);
    return in;
}

SolveConfig solve_config(const RunConfig& config, IterationObserver* observer = nullptr) {
    SolveConfig sc;
    sc.search.policy = config.policy;
    sc.search.split = config.split;
    sc.parallel = !config.single_thread;
    sc.observer = observer;
    return sc;
}

std::string path_string(const std::vector<NodeId>& path) {
    std::ostringstream s;
    for (std::size_t k = 0; k < path.size(); ++k) s << (k ? " " : "") << path[k] + 1;
    return s.str();
}

std::string run_dir_name(const std::string& instance) {
    std::string out;
    for (const char c : instance) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.' ? c : '_');
    return out.empty() ? "instance" : out;
}

std::string iteration_file(int k, Variant v, bool normalized = false) {
    return "iter_" + std::to_string(k) + "." + std::string(to_string(v)) + (normalized ? ".norm.csv" : ".csv");
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream f(p);
    if (!f) throw std::runtime_error("cannot open '" + p.string() + "'");
    return nlohmann::json::parse(f);
}

void print_solution(const Instance& in, const Solution& s, std::ostream& out) {
    out << "instance: " << in.name << '\n';
    if (s.status == SolveStatus::Infeasible) {
        out << "INFEASIBLE\n";
    } else {
        out << "cost: " << format_real(s.cost) << '\n' << "path: " << path_string(s.path) << '\n';
    }
    out << "iterations: " << s.iterations_used << '\n';
    for (const auto& it : s.iterations) {
        out << "  iteration " << it.iteration << ": ";
        if (it.feasible) out << "cost " << format_real(it.cost) << (it.elementary ? " elementary" : " cyclic");
        else out << "infeasible";
        out << ", labels forward " << it.labels_forward << ", backward " << it.labels_backward << '\n';
    }
}

}  // namespace

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        check(config);
        if (config.instances.empty()) throw std::invalid_argument("no --instance given");
        int code = kExitOk;
        for (const auto& path : config.instances) {
            const Instance in = load_for_run(path, config);
            const Solution s = solve(in, solve_config(config));
            print_solution(in, s, out);
            if (s.status == SolveStatus::Infeasible) code = kExitInfeasible;
        }
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int cmd_collect(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        check(config);
        if (config.instances.empty()) throw std::invalid_argument("no --instance given");
        int code = kExitOk;
        for (const auto& path : config.instances) {
            const Instance in = load_for_run(path, config);
            const std::string exec_id = make_execution_id(config.seed, in.name);
            DatasetCollector collector(in.name, static_cast<std::size_t>(in.n), exec_id, config.bitsets);
            const Solution s = solve(in, solve_config(config, &collector));
            if (s.status == SolveStatus::Infeasible) code = kExitInfeasible;

            const fs::path dir = fs::path(config.out_dir) / run_dir_name(in.name);
            fs::create_directories(dir);
            save_instance(in, (dir / "instance.txt").string());

            const Dataset& g = collector.dataset();
            const Dataset i = inserted_subset(g);
            std::size_t rows_g = 0, rows_i = 0;
            for (const auto& summary : s.iterations) {
                const int k = summary.iteration;
                if (config.dataset != DatasetChoice::I) {
                    Dataset part{Variant::G, g.instance, g.nodes, g.iteration_rows(k)};
                    rows_g += export_csv(part, (dir / iteration_file(k, Variant::G)).string(), config.bitsets);
                }
                if (config.dataset != DatasetChoice::G) {
                    Dataset part{Variant::I, i.instance, i.nodes, i.iteration_rows(k)};
                    rows_i += export_csv(part, (dir / iteration_file(k, Variant::I)).string(), config.bitsets);
                }
            }

            nlohmann::json run;
            run["instance"] = in.name;
            run["executionID"] = exec_id;
            run["seed"] = config.seed;
            run["policy"] = std::string(to_string(config.policy));
            run["split"] = config.split;
            run["bitsets"] = config.bitsets;
            run["dataset"] = config.dataset == DatasetChoice::G ? "G" : config.dataset == DatasetChoice::I ? "I" : "both";
            run["status"] = s.status == SolveStatus::Optimal ? "optimal" : "infeasible";
            run["cost"] = s.cost;
            run["path"] = s.path;
            run["iterations"] = s.iterations_used;
            std::uint64_t attempts = 0, insertions = 0;
            nlohmann::json its = nlohmann::json::array();
            for (const auto& it : s.iterations) {
                attempts += it.attempts;
                insertions += it.insertions;
                its.push_back({{"iteration", it.iteration},
                               {"feasible", it.feasible},
                               {"cost", it.cost},
                               {"elementary", it.elementary},
                               {"labels_forward", it.labels_forward},
                               {"labels_backward", it.labels_backward},
                               {"attempts", it.attempts},
                               {"insertions", it.insertions}});
            }
            run["attempts"] = attempts;
            run["insertions"] = insertions;
            run["per_iteration"] = its;
            std::ofstream(dir / "run.json") << run.dump(2) << '\n';

            out << in.name << ": " << s.iterations_used << " iterations";
            if (config.dataset != DatasetChoice::I) out << ", " << rows_g << " G rows";
            if (config.dataset != DatasetChoice::G) out << ", " << rows_i << " I rows";
            out << " -> " << dir.string() << '\n';
        }
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int cmd_normalize(const std::vector<std::string>& run_dirs, const RunConfig& config, std::ostream& out,
                  std::ostream& err) {
    try {
        if (run_dirs.empty()) throw std::invalid_argument("no run directory given");
        NormalizeOptions options;
        options.per_direction_objective = config.per_direction_objective;
        for (const auto& d : run_dirs) {
            const fs::path dir(d);
            const Instance in = load_instance((dir / "instance.txt").string());
            const int iterations = read_json(dir / "run.json").at("iterations").get<int>();
            for (const Variant v : {Variant::G, Variant::I}) {
                std::size_t written = 0;
                std::optional<Dataset> prev;
                for (int k = 1; k <= iterations; ++k) {
                    const fs::path file = dir / iteration_file(k, v);
                    if (!fs::exists(file)) {
                        prev.reset();
                        continue;
                    }
                    Dataset cur = import_csv(file.string(), v, static_cast<std::size_t>(in.n), in.name);
                    if (prev && !prev->rows.empty()) {
                        const IterationStats stats = iteration_stats(prev->rows);
                        std::vector<NormalizedRecord> rows;
                        rows.reserve(cur.rows.size());
                        bool bitsets = true;
                        for (const auto& r : cur.rows) {
                            rows.push_back(normalize_record(r, in, stats, options));
                            bitsets = bitsets && r.visited.has_value();
                        }
                        written += export_normalized_csv(rows, (dir / iteration_file(k, v, true)).string(), bitsets);
                    }
                    prev = std::move(cur);
                }
                if (written) out << dir.string() << ": " << written << " normalized " << to_string(v) << " rows\n";
            }
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int cmd_summarize(const std::vector<std::string>& run_dirs, const RunConfig& config, std::ostream& out,
                  std::ostream& err) {
    try {
        if (run_dirs.empty()) throw std::invalid_argument("no run directory given");
        std::ostringstream csv;
        csv << "dataset,class,instances,labels,pareto_pct,avg_iterations,labels_per_iteration,attempts,success_pct\n";
        for (const Variant v : {Variant::G, Variant::I}) {
            std::vector<RunDigest> runs;
            for (const auto& d : run_dirs) {
                const fs::path dir(d);
                const auto run = read_json(dir / "run.json");
                const Instance in = load_instance((dir / "instance.txt").string());
                const int iterations = run.at("iterations").get<int>();
                Dataset all{v, in.name, static_cast<std::size_t>(in.n), {}};
                bool any = false;
                for (int k = 1; k <= iterations; ++k) {
                    const fs::path file = dir / iteration_file(k, v);
                    if (!fs::exists(file)) continue;
                    any = true;
                    auto part = import_csv(file.string(), v, all.nodes, in.name);
                    all.rows.insert(all.rows.end(), part.rows.begin(), part.rows.end());
                }
                if (any)
                    runs.push_back(digest(all, iterations, run.value("attempts", std::uint64_t{0}),
                                          run.value("insertions", std::uint64_t{0})));
            }
            if (runs.empty()) continue;
            const auto rows = summarize(runs);
            out << "Dataset " << to_string(v) << '\n';
            print_summary(rows, out);
            for (const auto& r : rows)
                csv << to_string(v) << ',' << r.group << ',' << r.instances << ',' << r.labels << ','
                    << format_real(r.pareto_pct) << ',' << format_real(r.avg_iterations) << ','
                    << format_real(r.labels_per_iteration) << ',' << r.attempts << ',' << format_real(r.success_pct)
                    << '\n';
        }
        fs::create_directories(config.out_dir);
        std::ofstream(fs::path(config.out_dir) / "summary.csv") << csv.str();
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

PolicyBench bench_policies(const std::vector<Instance>& instances, const RunConfig& config) {
    PolicyBench bench;
    bench.totals = {PolicyTotals{ExtensionPolicy::Node}, PolicyTotals{ExtensionPolicy::Greedy}};
    for (const auto& in : instances) {
        double seconds[2] = {0.0, 0.0};
        double cost[2] = {0.0, 0.0};
        bool feasible[2] = {false, false};
        for (std::size_t p = 0; p < 2; ++p) {
            RunConfig c = config;
            c.policy = bench.totals[p].policy;
            const auto t0 = std::chrono::steady_clock::now();
            const Solution s = solve(in, solve_config(c));
            seconds[p] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            cost[p] = s.cost;
            feasible[p] = s.status == SolveStatus::Optimal;
            bench.totals[p].seconds += seconds[p];
            for (const auto& it : s.iterations) {
                bench.totals[p].attempts += it.attempts;
                bench.totals[p].insertions += it.insertions;
            }
        }
        if (feasible[0] != feasible[1] || (feasible[0] && std::abs(cost[0] - cost[1]) > 1e-9)) ++bench.cost_mismatches;
        if (seconds[0] < seconds[1]) ++bench.totals[0].fastest;
        else if (seconds[1] < seconds[0]) ++bench.totals[1].fastest;
        ++bench.instances;
    }
    return bench;
}

void print_bench(const PolicyBench& bench, std::ostream& out) {
    out << std::left << std::setw(16) << "Policy" << std::right << std::setw(12) << "Time [s]" << std::setw(10)
        << "Fastest" << std::setw(16) << "Attempts" << std::setw(10) << "Success" << '\n';
    for (const auto& t : bench.totals) {
        char time[32], success[32];
        std::snprintf(time, sizeof time, "%.3f", t.seconds);
        std::snprintf(success, sizeof success, "%.2f%%", t.success_pct());
        out << std::left << std::setw(16) << (std::string(to_string(t.policy)) + " policy") << std::right
            << std::setw(12) << time << std::setw(10) << t.fastest << std::setw(16) << t.attempts << std::setw(10)
            << success << '\n';
    }
    out << "instances: " << bench.instances << ", optimum mismatches: " << bench.cost_mismatches << '\n';
}

int cmd_bench_policies(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        check(config);
        if (config.instances.empty()) throw std::invalid_argument("no --instance given");
        std::vector<Instance> instances;
        for (const auto& p : config.instances) instances.push_back(load_for_run(p, config));
        const PolicyBench bench = bench_policies(instances, config);
        print_bench(bench, out);
        return bench.cost_mismatches == 0 ? kExitOk : kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int cmd_gen(const GeneratorOptions& options, const std::string& path, std::ostream& out, std::ostream& err) {
    try {
        const Instance in = generate_instance(options);
        if (path.empty() || path == "-") {
            out << serialize_instance(in);
        } else {
            if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
            save_instance(in, path);
            out << in.name << " -> " << path << '\n';
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int cmd_convert(const std::string& cvrp_path, const std::string& path, const CvrpConvertOptions& options,
                std::ostream& out, std::ostream& err) {
    try {
        std::ifstream f(cvrp_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open '" + cvrp_path + "'");
        std::ostringstream text;
        text << f.rdbuf();
        const Instance in = convert_cvrp(text.str(), options);
        if (path.empty() || path == "-") {
            out << serialize_instance(in);
        } else {
            save_instance(in, path);
            out << in.name << " -> " << path << '\n';
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

}  // namespace labellens
