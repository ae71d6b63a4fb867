// mqubo: command-line front end.
//
// Exit codes: 0 success, 1 usage or invalid plan, 2 unparsable input,
// 3 invariant violation, 4 every experiment cell failed.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mqubo/io.hpp"
#include "mqubo/moments.hpp"
#include "mqubo/pareto.hpp"
#include "mqubo/pipeline.hpp"
#include "mqubo/problems.hpp"
#include "mqubo/roofdual.hpp"
#include "mqubo/solve.hpp"

namespace fs = std::filesystem;
using namespace mqubo;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kInvariant = 3, kAllFailed = 4 };

class UsageError : public Error {
public:
    using Error::Error;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
    if (seed) return *seed;
    std::random_device rd;
    const std::uint64_t s = (std::uint64_t{rd()} << 32) ^ rd();
    std::cerr << "seed: " << s << "\n";
    return s;
}

void emit(const json& j, const std::string& out) {
    const std::string text = j.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_text_file(out, text);
    }
}

void make_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw UsageError("cannot create output directory '" + dir + "'");
}

bool is_multi(const json& j) { return j.is_object() && j.contains("objectives"); }

std::vector<QuboInstance> load_objectives(const std::string& path) {
    const json j = read_json_file(path);
    if (is_multi(j)) {
        const auto set = multi_from_json(j, path);
        return {set.begin(), set.end()};
    }
    return {instance_from_json(j, path)};
}

// ---- gen ----

struct GenArgs {
    std::string config;
    std::string out = ".";
    std::optional<std::size_t> n;
    std::optional<std::size_t> attach_m;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> families;
};

int run_gen(const GenArgs& a) {
    GeneratorConfig cfg;
    std::optional<std::uint64_t> seed = a.seed;
    if (!a.config.empty()) {
        const json j = read_json_file(a.config);
        if (!j.is_object()) throw ParseError(a.config + ": generator config must be a JSON object");
        const ExperimentPlan p = plan_from_json(json{{"generator", j}});
        cfg = p.generator;
        if (!seed && p.generator_seed) seed = p.generator_seed;
    }
    if (a.n) cfg.n = *a.n;
    if (a.attach_m) cfg.attach_m = *a.attach_m;
    if (!a.families.empty()) {
        cfg.families.clear();
        for (const auto& s : a.families) {
            const auto f = parse_family(s);
            if (!f) throw UsageError("unknown family '" + s + "'");
            cfg.families.push_back(*f);
        }
    }
    cfg.seed = resolve_seed(seed);
    cfg.validate();

    ExperimentPlan plan;
    plan.generator = cfg;
    plan.generator_seed = cfg.seed;
    const auto instances = generate_instances(plan);
    make_dir(a.out);
    for (const auto& q : instances) {
        const std::string path = (fs::path(a.out) / (q.label() + ".json")).string();
        write_text_file(path, instance_to_json(q).dump() + "\n");
        std::cout << path << "\n";
    }
    if (instances.size() >= 2) {
        const std::string path = (fs::path(a.out) / "multi.json").string();
        write_text_file(path, multi_to_json(MultiObjectiveSet(instances)).dump() + "\n");
        std::cout << path << "\n";
    }
    return kOk;
}

// ---- moments / bounds / scale ----

int run_moments(const std::string& path, bool verify, bool compensated) {
    const auto objs = load_objectives(path);
    const Summation mode = compensated ? Summation::compensated : Summation::plain;
    json out = json::array();
    for (const auto& q : objs) {
        const MomentSummary s = moments(q, mode);
        json j = to_json(s);
        if (verify) {
            const double m2 = second_moment_uniform(q);
            const double slow = m2 - s.mean * s.mean;
            const double tol = 1e-9 * std::max({std::abs(m2), s.variance, 1e-300});
            j["verify"] = json{{"second_moment_path_variance", slow}, {"abs_diff", std::abs(slow - s.variance)}};
            if (std::abs(slow - s.variance) > tol) {
                emit(j, "");
                throw InvariantError("variance paths disagree for '" + q.label() + "'");
            }
        }
        out.push_back(std::move(j));
    }
    emit(objs.size() == 1 ? out[0] : out, "");
    return kOk;
}

int run_bounds(const std::string& path) {
    const auto objs = load_objectives(path);
    json out = json::array();
    for (const auto& q : objs) out.push_back(to_json(roof_dual_range(q)));
    emit(objs.size() == 1 ? out[0] : out, "");
    return kOk;
}

int run_scale(const std::string& path, const std::string& method_name, const std::string& out) {
    const auto method = parse_scaling_method(method_name);
    if (!method) throw UsageError("unknown method '" + method_name + "'");
    const MultiObjectiveSet set = load_multi(path);
    MultiObjectiveSet result = set;
    std::vector<ScalingReport> reports;
    switch (*method) {
        case ScalingMethod::original:
            for (std::size_t k = 0; k < set.size(); ++k) {
                ScalingReport r;
                r.index = k;
                reports.push_back(r);
            }
            break;
        case ScalingMethod::roof_dual: std::tie(result, reports) = normalize_by_range(set); break;
        case ScalingMethod::standardize: std::tie(result, reports) = standardize(set); break;
    }
    json j = multi_to_json(result);
    json rs = json::array();
    for (const auto& r : reports) {
        json x = to_json(r);
        x["scale"] = r.scale;
        rs.push_back(std::move(x));
    }
    j["reports"] = std::move(rs);
    emit(j, out);
    return kOk;
}

// ---- solve ----

struct SolveArgs {
    std::string input;
    std::string out;
    bool brute_force = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> time_limit_ms;
    int runs = 20;
    int temperatures = 200;
    int sweeps_per_temp = 10;
    std::size_t jobs = 1;
};

int run_solve(const SolveArgs& a) {
    const auto objs = load_objectives(a.input);
    const QuboInstance q = objs.size() == 1 ? objs[0] : scalarize_equal(MultiObjectiveSet(objs));
    if (a.brute_force) {
        const ExactSolution s = brute_force(q);
        emit(json{{"best", json{{"bits", to_bit_string(s.bits)}, {"value", s.value}}}, {"solver", "brute_force"}},
             a.out);
        return kOk;
    }
    SolveConfig cfg;
    cfg.seed = resolve_seed(a.seed);
    cfg.runs = a.runs;
    cfg.temperatures = a.temperatures;
    cfg.sweeps_per_temp = a.sweeps_per_temp;
    if (a.time_limit_ms) {
        cfg.time_limit_ms = *a.time_limit_ms;
        cfg.use_time_limit = true;
    }
    cfg.validate();
    emit(to_json(anneal(q, cfg, a.jobs), cfg), a.out);
    return kOk;
}

// ---- pareto / hv ----

std::vector<SolutionRecord> load_records(const std::string& path, const std::string& multi_path) {
    const json j = read_json_file(path);
    if (multi_path.empty()) return records_from_json(j, path);
    // Bits only: a solve outcome or bit-string records, evaluated on the
    // objectives of the multi-objective file.
    const MultiObjectiveSet set = load_multi(multi_path);
    std::vector<std::string> bits;
    const char* key = j.is_object() && j.contains("runs") ? "runs" : "records";
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
        throw ParseError(path + ": expected a 'runs' or 'records' array");
    }
    for (const auto& r : j.at(key)) {
        if (!r.is_object() || !r.contains("bits") || !r.at("bits").is_string()) {
            throw ParseError(path + ": every entry needs a 'bits' string");
        }
        bits.push_back(r.at("bits").get<std::string>());
    }
    std::vector<SolutionRecord> out;
    for (const auto& b : bits) {
        BinaryVector x;
        try {
            x = from_bit_string(b);
        } catch (const InvariantError& e) {
            throw ParseError(path + ": " + e.what());
        }
        auto f = evaluate_all(set, x);
        out.push_back({std::move(x), std::move(f)});
    }
    return out;
}

int run_pareto(const std::string& path, const std::string& multi, const std::string& out) {
    const auto recs = load_records(path, multi);
    emit(to_json(non_dominated_filter(recs)), out);
    return kOk;
}

struct HvArgs {
    std::string input;
    std::vector<double> ref;
    std::vector<double> z_ref;
    std::vector<double> z_desire;
    std::size_t ref_points = 10000;
    std::optional<std::uint64_t> seed;
};

int run_hv(const HvArgs& a) {
    const auto recs = records_from_json(read_json_file(a.input), a.input);
    const FrontSet front = non_dominated_filter(recs);
    if (!a.ref.empty()) {
        const auto pts = front.points();
        const std::size_t outside = points_outside(pts, a.ref);
        if (outside > 0) std::cerr << "warning: " << outside << " point(s) not below the reference point\n";
        emit(json{{"hypervolume", hypervolume_exact(pts, a.ref)}, {"ref", a.ref}, {"points_outside", outside}}, "");
        return kOk;
    }
    if (front.empty()) throw InvariantError("front is empty");
    HvProtocol proto;
    const std::vector<FrontSet> fronts{front};
    if (a.z_ref.empty() != a.z_desire.empty()) throw UsageError("--z-ref and --z-desire go together");
    if (a.z_ref.empty()) {
        proto = build_protocol(fronts, a.ref_points, 0);
    } else {
        proto.z_ref = a.z_ref;
        proto.z_desire = a.z_desire;
    }
    proto.ref_point_count = a.ref_points;
    proto.seed = resolve_seed(a.seed);
    emit(to_json(averaged_hypervolume(front, proto)), "");
    return kOk;
}

// ---- experiment ----

struct ExperimentArgs {
    std::string plan;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
    std::optional<int> reps;
    std::optional<int> runs;
    std::optional<std::size_t> ref_points;
    std::optional<std::int64_t> time_limit_ms;
};

int run_experiment_cmd(const ExperimentArgs& a) {
    if (!a.seed) throw UsageError("experiment requires --seed");
    ExperimentPlan plan = plan_from_json(read_json_file(a.plan));
    plan.master_seed = *a.seed;
    if (a.reps) plan.repetitions = *a.reps;
    if (a.runs) plan.solve.runs = *a.runs;
    if (a.ref_points) plan.ref_points = *a.ref_points;
    if (a.time_limit_ms) {
        plan.solve.time_limit_ms = *a.time_limit_ms;
        plan.solve.use_time_limit = true;
    }
    plan.validate();
    make_dir(a.out);

    const ExperimentReport report =
        run_experiment(plan, a.jobs, [](const std::string& line) { std::cerr << line << "\n"; });
    const fs::path dir(a.out);
    write_text_file((dir / "report.csv").string(), report_csv(report));
    write_text_file((dir / "report.json").string(), report_to_json(report).dump(2) + "\n");
    write_text_file((dir / "scaling.csv").string(), scaling_csv(scaling_summary(report)));
    std::cout << summary_table(report);
    if (report.failed_cells() > 0) {
        std::cout << report.failed_cells() << " of " << report.total_cells() << " cells failed\n";
    }
    return report.failed_cells() == report.total_cells() ? kAllFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-objective QUBO scaling toolkit"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate benchmark instances on a Barabasi-Albert graph");
    gen_cmd->add_option("config", gen.config, "Generator config JSON {n, attach_m, seed, families}")
        ->check(CLI::ExistingFile);
    gen_cmd->add_option("--out", gen.out, "Output directory")->capture_default_str();
    gen_cmd->add_option("--n", gen.n, "Node count (overrides config)");
    gen_cmd->add_option("--attach-m", gen.attach_m, "Attachment count (overrides config)");
    gen_cmd->add_option("--seed", gen.seed, "Generator seed (default: entropy, echoed to stderr)");
    gen_cmd->add_option("--families", gen.families, "Families: MC01 MCB MCZ SUBSUM")->delimiter(',');

    std::string moments_in;
    bool verify = false;
    bool compensated = false;
    auto* moments_cmd = app.add_subcommand("moments", "Mean, second moment and variance under uniform x");
    moments_cmd->add_option("file", moments_in, "Instance or multi-objective JSON")
        ->required()
        ->check(CLI::ExistingFile);
    moments_cmd->add_flag("--verify", verify, "Cross-check the variance against the second-moment path");
    moments_cmd->add_flag("--compensated", compensated, "Use compensated summation");

    std::string bounds_in;
    auto* bounds_cmd = app.add_subcommand("bounds", "Roof-dual lower and upper bounds");
    bounds_cmd->add_option("file", bounds_in, "Instance or multi-objective JSON")
        ->required()
        ->check(CLI::ExistingFile);

    std::string scale_in;
    std::string scale_method = "standardize";
    std::string scale_out;
    auto* scale_cmd = app.add_subcommand("scale", "Scale every objective of a multi-objective file");
    scale_cmd->add_option("file", scale_in, "Multi-objective JSON")->required()->check(CLI::ExistingFile);
    scale_cmd->add_option("--method", scale_method, "original, roof_dual or standardize")->capture_default_str();
    scale_cmd->add_option("--out", scale_out, "Output file (default: stdout)");

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Minimize an instance (multi-objective: equal-weight sum)");
    solve_cmd->add_option("file", solve.input, "Instance or multi-objective JSON")
        ->required()
        ->check(CLI::ExistingFile);
    solve_cmd->add_flag("--brute-force", solve.brute_force, "Exhaustive search (n <= 26)");
    solve_cmd->add_option("--seed", solve.seed, "Solver seed (default: entropy, echoed to stderr)");
    solve_cmd->add_option("--runs", solve.runs, "Annealing restarts")->capture_default_str();
    solve_cmd->add_option("--temperatures", solve.temperatures, "Temperature levels")->capture_default_str();
    solve_cmd->add_option("--sweeps-per-temp", solve.sweeps_per_temp, "Sweeps per level")->capture_default_str();
    solve_cmd->add_option("--time-limit-ms", solve.time_limit_ms, "Wall-clock limit per run (not reproducible)");
    solve_cmd->add_option("--jobs", solve.jobs, "Worker threads")->capture_default_str();
    solve_cmd->add_option("--out", solve.out, "Output file (default: stdout)");

    std::string pareto_in;
    std::string pareto_multi;
    std::string pareto_out;
    auto* pareto_cmd = app.add_subcommand("pareto", "Keep the non-dominated records");
    pareto_cmd->add_option("file", pareto_in, "Records JSON, or a solve outcome together with --multi")
        ->required()
        ->check(CLI::ExistingFile);
    pareto_cmd->add_option("--multi", pareto_multi, "Multi-objective file used to evaluate bit strings")
        ->check(CLI::ExistingFile);
    pareto_cmd->add_option("--out", pareto_out, "Output file (default: stdout)");

    HvArgs hv;
    auto* hv_cmd = app.add_subcommand("hv", "Exact or reference-point-averaged hypervolume");
    hv_cmd->add_option("file", hv.input, "Records JSON")->required()->check(CLI::ExistingFile);
    auto* ref_opt = hv_cmd->add_option("--ref", hv.ref, "Reference point for the exact volume")->delimiter(',');
    hv_cmd->add_option("--z-ref", hv.z_ref, "Lower corner of the sampling box")->delimiter(',')->excludes(ref_opt);
    hv_cmd->add_option("--z-desire", hv.z_desire, "Ideal point; the box upper corner is 2 z_ref - z_desire")
        ->delimiter(',')
        ->excludes(ref_opt);
    hv_cmd->add_option("--ref-points", hv.ref_points, "Number of sampled reference points")->capture_default_str();
    hv_cmd->add_option("--seed", hv.seed, "Sampling seed (default: entropy, echoed to stderr)");

    ExperimentArgs exp;
    exp.jobs = default_jobs();
    auto* exp_cmd = app.add_subcommand("experiment", "Run the scaling comparison described by a plan file");
    exp_cmd->add_option("plan", exp.plan, "Plan JSON")->required()->check(CLI::ExistingFile);
    exp_cmd->add_option("--out", exp.out, "Output directory")->required();
    exp_cmd->add_option("--seed", exp.seed, "Master seed (required)");
    exp_cmd->add_option("--jobs", exp.jobs, "Worker threads")->capture_default_str();
    exp_cmd->add_option("--reps", exp.reps, "Repetitions (overrides plan)");
    exp_cmd->add_option("--runs", exp.runs, "Annealing runs per repetition (overrides plan)");
    exp_cmd->add_option("--ref-points", exp.ref_points, "Hypervolume reference points (overrides plan)");
    exp_cmd->add_option("--time-limit-ms", exp.time_limit_ms, "Wall-clock limit per run (not reproducible)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen_cmd) return run_gen(gen);
        if (*moments_cmd) return run_moments(moments_in, verify, compensated);
        if (*bounds_cmd) return run_bounds(bounds_in);
        if (*scale_cmd) return run_scale(scale_in, scale_method, scale_out);
        if (*solve_cmd) return run_solve(solve);
        if (*pareto_cmd) return run_pareto(pareto_in, pareto_multi, pareto_out);
        if (*hv_cmd) return run_hv(hv);
        if (*exp_cmd) return run_experiment_cmd(exp);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const PlanError& e) {
        std::cerr << "plan error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what();
        if (e.line() > 0) std::cerr << " (line " << e.line() << ", column " << e.column() << ")";
        std::cerr << "\n";
        return kParse;
    } catch (const InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kInvariant;
    } catch (const DimensionError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kInvariant;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
