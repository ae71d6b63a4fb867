#pragma once

// Experiment orchestration: generate one instance per problem family, scale
// each combination of families three ways, solve the equal-weight
// scalarizations, and compare the resulting fronts by averaged hypervolume.
//
// Seeds all derive from one master seed:
//   generator       plan seed if given, else derive_seed(master, "generator")
//   family f        derive_seed(generator seed, family id)
//   solver          derive_seed(master, "solver", {combination mask, rep})
//   reference pts   derive_seed(master, "hv", {combination mask})
// The solver seed does not depend on the method, so the three scalarizations
// of a combination start from the same random states.

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "mqubo/error.hpp"
#include "mqubo/io.hpp"
#include "mqubo/moments.hpp"
#include "mqubo/parallel.hpp"
#include "mqubo/pareto.hpp"
#include "mqubo/problems.hpp"
#include "mqubo/qubo.hpp"
#include "mqubo/roofdual.hpp"
#include "mqubo/scaling_report.hpp"
#include "mqubo/solve.hpp"

namespace mqubo {

// Semantically invalid experiment plan.
class PlanError : public Error {
public:
    using Error::Error;
};

enum class SolverKind { anneal, brute_force };

inline std::string_view to_string(SolverKind k) { return k == SolverKind::anneal ? "anneal" : "brute_force"; }

inline constexpr std::array<ScalingMethod, 3> kAllMethods{ScalingMethod::original, ScalingMethod::roof_dual,
                                                          ScalingMethod::standardize};

using Combination = std::vector<Family>;

inline std::size_t family_index(Family f) { return static_cast<std::size_t>(f); }

inline std::uint64_t combination_mask(const Combination& c) {
    std::uint64_t mask = 0;
    for (const Family f : c) mask |= std::uint64_t{1} << family_index(f);
    return mask;
}

inline std::string combination_label(const Combination& c) {
    std::string s;
    for (const Family f : c) {
        if (!s.empty()) s += '+';
        s += family_id(f);
    }
    return s;
}

// Every subset of size >= 2, by size and then lexicographically in the given
// family order.
inline std::vector<Combination> all_combinations(const std::vector<Family>& families) {
    std::vector<Combination> out;
    const std::size_t k = families.size();
    for (std::size_t size = 2; size <= k; ++size) {
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        for (;;) {
            Combination c;
            for (const std::size_t i : idx) c.push_back(families[i]);
            out.push_back(std::move(c));
            std::size_t pos = size;
            while (pos > 0 && idx[pos - 1] == k - size + pos - 1) --pos;
            if (pos == 0) break;
            ++idx[pos - 1];
            for (std::size_t i = pos; i < size; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    return out;
}

struct ExperimentPlan {
    GeneratorConfig generator;
    // Unset: derived from the master seed.
    std::optional<std::uint64_t> generator_seed;
    // Empty: all_combinations(generator.families).
    std::vector<Combination> combinations;
    std::vector<ScalingMethod> methods{kAllMethods.begin(), kAllMethods.end()};
    SolverKind solver = SolverKind::anneal;
    SolveConfig solve;
    int repetitions = 20;
    std::size_t ref_points = 10000;
    std::uint64_t master_seed = 0;

    std::uint64_t resolved_generator_seed() const {
        return generator_seed.value_or(derive_seed(master_seed, "generator"));
    }

    std::vector<Combination> resolved_combinations() const {
        return combinations.empty() ? all_combinations(generator.families) : combinations;
    }

    void validate() const {
        if (generator.attach_m < 1 || generator.attach_m >= generator.n) {
            throw PlanError("generator requires 1 <= attach_m < n");
        }
        if (generator.families.empty()) throw PlanError("generator lists no families");
        for (std::size_t i = 0; i < generator.families.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (generator.families[i] == generator.families[j]) {
                    throw PlanError("family " + std::string(family_id(generator.families[i])) + " listed twice");
                }
            }
        }
        if (methods.empty()) throw PlanError("methods list is empty");
        for (std::size_t i = 0; i < methods.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (methods[i] == methods[j]) throw PlanError("method listed twice");
            }
        }
        const auto combos = resolved_combinations();
        if (combos.empty()) throw PlanError("plan has no family combination with at least 2 families");
        for (const auto& c : combos) {
            if (c.size() < 2) throw PlanError("combination '" + combination_label(c) + "' has fewer than 2 families");
            for (const Family f : c) {
                if (std::find(generator.families.begin(), generator.families.end(), f) == generator.families.end()) {
                    throw PlanError("combination uses family " + std::string(family_id(f)) +
                                    " that the generator does not produce");
                }
            }
            if (static_cast<std::size_t>(std::popcount(combination_mask(c))) != c.size()) {
                throw PlanError("combination '" + combination_label(c) + "' repeats a family");
            }
        }
        if (solver == SolverKind::brute_force && generator.n > kBruteForceMaxVariables) {
            throw PlanError("brute_force solver is limited to n <= " + std::to_string(kBruteForceMaxVariables));
        }
        if (repetitions < 1) throw PlanError("repetitions must be at least 1");
        if (ref_points < 1) throw PlanError("ref_points must be at least 1");
        try {
            solve.validate();
        } catch (const InvariantError& e) {
            throw PlanError(std::string("solver: ") + e.what());
        }
    }
};

// Scale and moment data for one generated family instance.
struct FamilyData {
    Family family = Family::mc01;
    std::uint64_t seed = 0;
    QuboInstance instance;
    MomentSummary moments;
    RangeEstimate range;
    // Per method: the scaled objective or the reason it could not be scaled.
    std::map<ScalingMethod, QuboInstance> scaled;
    std::map<ScalingMethod, ScalingReport> reports;
    std::map<ScalingMethod, std::string> failures;
};

struct CellResult {
    ScalingMethod method = ScalingMethod::original;
    bool ok = false;
    std::string error;
    // Per repetition.
    std::vector<FrontSet> fronts;
    std::vector<HypervolumeResult> hv;
    double hv_mean = 0.0;
    double hv_std = 0.0;      // population std across repetitions
    double ref_std_mean = 0.0;  // mean over repetitions of the std across reference points
};

struct CombinationResult {
    Combination families;
    std::optional<HvProtocol> protocol;
    std::vector<CellResult> cells;  // in plan.methods order
};

struct ExperimentReport {
    ExperimentPlan plan;
    std::uint64_t generator_seed = 0;
    std::vector<FamilyData> families;  // in generator.families order
    std::vector<CombinationResult> combinations;
    std::map<std::string, double> timing_seconds;

    std::size_t failed_cells() const {
        std::size_t n = 0;
        for (const auto& c : combinations) {
            for (const auto& cell : c.cells) n += cell.ok ? 0 : 1;
        }
        return n;
    }
    std::size_t total_cells() const {
        std::size_t n = 0;
        for (const auto& c : combinations) n += c.cells.size();
        return n;
    }
};

inline std::uint64_t solver_seed(std::uint64_t master, const Combination& c, int rep) {
    return derive_seed(master, "solver", {combination_mask(c), static_cast<std::uint64_t>(rep)});
}

inline std::uint64_t hv_seed(std::uint64_t master, const Combination& c) {
    return derive_seed(master, "hv", {combination_mask(c)});
}

namespace detail {

inline FamilyData prepare_family(Family f, std::uint64_t seed, QuboInstance instance,
                                 const std::vector<ScalingMethod>& methods) {
    FamilyData d;
    d.family = f;
    d.seed = seed;
    d.instance = std::move(instance);
    d.moments = moments(d.instance);
    d.range = roof_dual_range(d.instance);
    for (const ScalingMethod m : methods) {
        try {
            switch (m) {
                case ScalingMethod::original: {
                    ScalingReport r;
                    r.method = m;
                    d.scaled.emplace(m, d.instance);
                    d.reports.emplace(m, r);
                    break;
                }
                case ScalingMethod::roof_dual: {
                    auto [q, r] = normalize_objective(d.instance, family_index(f));
                    d.scaled.emplace(m, std::move(q));
                    d.reports.emplace(m, r);
                    break;
                }
                case ScalingMethod::standardize: {
                    auto [q, r] = standardize_objective(d.instance, family_index(f));
                    d.scaled.emplace(m, std::move(q));
                    d.reports.emplace(m, r);
                    break;
                }
            }
        } catch (const DegenerateObjectiveError& e) {
            d.failures.emplace(m, std::string(family_id(f)) + ": " + e.what());
        }
    }
    return d;
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline double population_std(const std::vector<double>& v) {
    const double m = mean_of(v);
    double ss = 0.0;
    for (const double x : v) ss += (x - m) * (x - m);
    return v.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace detail

using ProgressLog = std::function<void(const std::string&)>;

inline std::uint64_t family_seed(std::uint64_t generator_seed, Family f) { return derive_seed(generator_seed, family_id(f)); }

// One instance per generator family, in plan.generator.families order.
inline std::vector<QuboInstance> generate_instances(const ExperimentPlan& plan) {
    const std::uint64_t gen_seed = plan.resolved_generator_seed();
    const Graph graph = barabasi_albert(plan.generator.n, plan.generator.attach_m, gen_seed);
    std::vector<QuboInstance> out;
    for (const Family f : plan.generator.families) out.push_back(generate(f, graph, family_seed(gen_seed, f)));
    return out;
}

// Runs the full sweep on the given instances (one per generator family).
// Degenerate scalings fail individual cells; every other error propagates.
// `jobs` bounds the worker threads; the report does not depend on it.
inline ExperimentReport run_experiment(const ExperimentPlan& plan, std::vector<QuboInstance> instances,
                                       std::size_t jobs = 1, const ProgressLog& log = {}) {
    using Clock = std::chrono::steady_clock;
    auto seconds_since = [](Clock::time_point t0) {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    };
    plan.validate();
    if (instances.size() != plan.generator.families.size()) {
        throw DimensionError("instance count", plan.generator.families.size(), instances.size());
    }
    const auto t_start = Clock::now();

    ExperimentReport report;
    report.plan = plan;
    report.plan.combinations = plan.resolved_combinations();
    report.generator_seed = plan.resolved_generator_seed();

    // Instances are fixed per master seed and shared by every repetition.
    report.families.resize(plan.generator.families.size());
    parallel_for(report.families.size(), jobs, [&](std::size_t k) {
        const Family f = plan.generator.families[k];
        report.families[k] = detail::prepare_family(f, family_seed(report.generator_seed, f),
                                                    std::move(instances[k]), plan.methods);
    });
    report.timing_seconds["prepare"] = seconds_since(t_start);

    auto family_data = [&](Family f) -> const FamilyData& {
        for (const auto& d : report.families) {
            if (d.family == f) return d;
        }
        throw InvariantError("family not generated");
    };

    const auto& combos = report.plan.combinations;
    report.combinations.resize(combos.size());
    for (std::size_t c = 0; c < combos.size(); ++c) {
        auto& cr = report.combinations[c];
        cr.families = combos[c];
        for (const ScalingMethod m : plan.methods) {
            CellResult cell;
            cell.method = m;
            cell.ok = true;
            for (const Family f : combos[c]) {
                const auto& d = family_data(f);
                if (auto it = d.failures.find(m); it != d.failures.end()) {
                    cell.ok = false;
                    cell.error = it->second;
                    break;
                }
            }
            if (cell.ok) cell.fronts.resize(static_cast<std::size_t>(plan.repetitions));
            cr.cells.push_back(std::move(cell));
        }
    }

    // One job per (combination, method, repetition).
    struct Job {
        std::size_t combo;
        std::size_t cell;
        int rep;
    };
    std::vector<Job> work;
    for (std::size_t c = 0; c < combos.size(); ++c) {
        for (std::size_t k = 0; k < plan.methods.size(); ++k) {
            if (!report.combinations[c].cells[k].ok) continue;
            for (int r = 0; r < plan.repetitions; ++r) work.push_back({c, k, r});
        }
    }

    const auto t_solve = Clock::now();
    parallel_for(work.size(), jobs, [&](std::size_t w) {
        const Job& job = work[w];
        const Combination& combo = combos[job.combo];
        const ScalingMethod method = plan.methods[job.cell];

        std::vector<QuboInstance> original;
        std::vector<QuboInstance> search;
        for (const Family f : combo) {
            const auto& d = family_data(f);
            original.push_back(d.instance);
            search.push_back(d.scaled.at(method));
        }
        const MultiObjectiveSet original_set(std::move(original));
        const QuboInstance scalarized = scalarize_equal(MultiObjectiveSet(std::move(search)));

        std::vector<BinaryVector> solutions;
        if (plan.solver == SolverKind::brute_force) {
            solutions.push_back(brute_force(scalarized).bits);
        } else {
            SolveConfig cfg = plan.solve;
            cfg.seed = solver_seed(plan.master_seed, combo, job.rep);
            solutions = anneal(scalarized, cfg).all_solutions();
        }
        // Fronts live in the unscaled objective space.
        std::vector<SolutionRecord> records;
        records.reserve(solutions.size());
        for (auto& x : solutions) {
            auto f = evaluate_all(original_set, x);
            records.push_back({std::move(x), std::move(f)});
        }
        report.combinations[job.combo].cells[job.cell].fronts[static_cast<std::size_t>(job.rep)] =
            non_dominated_filter(records);
    });
    report.timing_seconds["solve"] = seconds_since(t_solve);

    const auto t_hv = Clock::now();
    for (std::size_t c = 0; c < combos.size(); ++c) {
        auto& cr = report.combinations[c];
        std::vector<FrontSet> all;
        for (const auto& cell : cr.cells) {
            if (cell.ok) all.insert(all.end(), cell.fronts.begin(), cell.fronts.end());
        }
        if (all.empty()) continue;
        cr.protocol = build_protocol(all, plan.ref_points, hv_seed(plan.master_seed, combos[c]));
        std::vector<std::pair<std::size_t, int>> hv_work;
        for (std::size_t k = 0; k < cr.cells.size(); ++k) {
            if (!cr.cells[k].ok) continue;
            cr.cells[k].hv.resize(static_cast<std::size_t>(plan.repetitions));
            for (int r = 0; r < plan.repetitions; ++r) hv_work.emplace_back(k, r);
        }
        parallel_for(hv_work.size(), jobs, [&](std::size_t w) {
            const auto [k, r] = hv_work[w];
            auto& cell = cr.cells[k];
            cell.hv[static_cast<std::size_t>(r)] = averaged_hypervolume(cell.fronts[static_cast<std::size_t>(r)],
                                                                        *cr.protocol);
        });
        for (auto& cell : cr.cells) {
            if (!cell.ok) continue;
            std::vector<double> means;
            std::vector<double> stds;
            for (const auto& h : cell.hv) {
                means.push_back(h.mean);
                stds.push_back(h.std);
            }
            cell.hv_mean = detail::mean_of(means);
            cell.hv_std = detail::population_std(means);
            cell.ref_std_mean = detail::mean_of(stds);
        }
        if (log) {
            std::ostringstream line;
            line << combination_label(cr.families);
            for (const auto& cell : cr.cells) {
                line << ' ' << to_string(cell.method) << '=';
                line << (cell.ok ? format_sig6(cell.hv_mean) : std::string("FAILED"));
            }
            log(line.str());
        }
    }
    report.timing_seconds["hypervolume"] = seconds_since(t_hv);
    report.timing_seconds["total"] = seconds_since(t_start);
    return report;
}

inline ExperimentReport run_experiment(const ExperimentPlan& plan, std::size_t jobs = 1,
                                       const ProgressLog& log = {}) {
    plan.validate();
    return run_experiment(plan, generate_instances(plan), jobs, log);
}

// report.csv: one row per combination with 0/1 family flags and, for every
// planned method, the mean and std across repetitions.
inline std::string report_csv(const ExperimentReport& r) {
    std::string out;
    for (const Family f : kAllFamilies) {
        out += family_id(f);
        out += ',';
    }
    std::vector<ScalingMethod> cols;
    for (const ScalingMethod m : kAllMethods) {
        if (std::find(r.plan.methods.begin(), r.plan.methods.end(), m) != r.plan.methods.end()) cols.push_back(m);
    }
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const std::string name(to_string(cols[k]));
        out += name + "_mean," + name + "_std";
        out += (k + 1 < cols.size()) ? "," : "\n";
    }
    for (const auto& c : r.combinations) {
        const std::uint64_t mask = combination_mask(c.families);
        for (const Family f : kAllFamilies) out += (mask >> family_index(f) & 1U) ? "1," : "0,";
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const CellResult* cell = nullptr;
            for (const auto& x : c.cells) {
                if (x.method == cols[k]) cell = &x;
            }
            if (cell->ok) {
                out += format_sig6(cell->hv_mean) + "," + format_sig6(cell->hv_std);
            } else {
                out += "FAILED,FAILED";
            }
            out += (k + 1 < cols.size()) ? "," : "\n";
        }
    }
    return out;
}

struct ScalingRow {
    std::string label;
    double width = 0.0;
    double sigma = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

inline ScalingRow scaling_row(const QuboInstance& q, const MomentSummary& s, const RangeEstimate& range) {
    return {q.label(), range.width(), s.std_dev, s.mean, s.variance, range.lower, range.upper};
}

// Roof-dual width and standard deviation of every objective.
inline std::vector<ScalingRow> scaling_summary(const MultiObjectiveSet& set) {
    std::vector<ScalingRow> rows;
    for (const auto& q : set) rows.push_back(scaling_row(q, moments(q), roof_dual_range(q)));
    return rows;
}

inline std::string scaling_csv(const std::vector<ScalingRow>& rows) {
    std::string out = "qubo,roof_dual_range,std_dev,mean,variance,roof_dual_lower,roof_dual_upper\n";
    for (const auto& r : rows) {
        out += r.label + "," + format_sig6(r.width) + "," + format_sig6(r.sigma) + "," + format_sig6(r.mean) + "," +
               format_sig6(r.variance) + "," + format_sig6(r.lower) + "," + format_sig6(r.upper) + "\n";
    }
    return out;
}

inline std::vector<ScalingRow> scaling_summary(const ExperimentReport& r) {
    std::vector<ScalingRow> rows;
    for (const auto& d : r.families) rows.push_back(scaling_row(d.instance, d.moments, d.range));
    return rows;
}

// ---- plan files ----

inline json plan_to_json(const ExperimentPlan& p) {
    json fams = json::array();
    for (const Family f : p.generator.families) fams.push_back(std::string(family_id(f)));
    json gen{{"n", p.generator.n}, {"attach_m", p.generator.attach_m}, {"families", fams}};
    if (p.generator_seed) gen["seed"] = *p.generator_seed;
    json combos = json::array();
    for (const auto& c : p.resolved_combinations()) {
        json row = json::array();
        for (const Family f : c) row.push_back(std::string(family_id(f)));
        combos.push_back(row);
    }
    json methods = json::array();
    for (const ScalingMethod m : p.methods) methods.push_back(std::string(to_string(m)));
    json solver = to_json(p.solve);
    solver.erase("seed");
    solver["kind"] = std::string(to_string(p.solver));
    return json{{"generator", gen},   {"combinations", combos},   {"methods", methods},
                {"solver", solver},   {"repetitions", p.repetitions}, {"hv", json{{"ref_points", p.ref_points}}},
                {"seed", p.master_seed}};
}

namespace detail {

inline void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) throw PlanError(where + ": unknown field '" + key + "'");
    }
}

inline const json& require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + " must be a JSON object");
    return j;
}

template <typename T>
T get_number(const json& j, const char* key, const std::string& where) {
    const json& v = j.at(key);
    if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ParseError(where + ": field '" + key + "' must be a number");
    } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ParseError(where + ": field '" + key + "' must be true or false");
    } else {
        if (!v.is_number_integer()) throw ParseError(where + ": field '" + key + "' must be an integer");
        if constexpr (std::is_unsigned_v<T>) {
            if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0) {
                throw PlanError(where + ": field '" + key + "' must be non-negative");
            }
        }
    }
    return v.get<T>();
}

inline Family family_from_json(const json& v, const std::string& where) {
    if (!v.is_string()) throw ParseError(where + ": family names must be strings");
    const auto f = parse_family(v.get<std::string>());
    if (!f) throw PlanError(where + ": unknown family '" + v.get<std::string>() + "'");
    return *f;
}

}  // namespace detail

inline ExperimentPlan plan_from_json(const json& j) {
    using detail::get_number;
    detail::require_object(j, "plan");
    detail::reject_unknown_keys(j, {"generator", "combinations", "methods", "solver", "repetitions", "hv", "seed"},
                                "plan");
    ExperimentPlan p;
    if (j.contains("generator")) {
        const json& g = detail::require_object(j.at("generator"), "plan.generator");
        detail::reject_unknown_keys(g, {"n", "attach_m", "seed", "families"}, "plan.generator");
        if (g.contains("n")) p.generator.n = get_number<std::size_t>(g, "n", "plan.generator");
        if (g.contains("attach_m")) p.generator.attach_m = get_number<std::size_t>(g, "attach_m", "plan.generator");
        if (g.contains("seed")) p.generator_seed = get_number<std::uint64_t>(g, "seed", "plan.generator");
        if (g.contains("families")) {
            if (!g.at("families").is_array()) throw ParseError("plan.generator: families must be an array");
            p.generator.families.clear();
            for (const auto& v : g.at("families")) {
                p.generator.families.push_back(detail::family_from_json(v, "plan.generator"));
            }
        }
    }
    if (j.contains("combinations")) {
        if (!j.at("combinations").is_array()) throw ParseError("plan: combinations must be an array");
        for (const auto& row : j.at("combinations")) {
            if (!row.is_array()) throw ParseError("plan: every combination must be an array of family names");
            Combination c;
            for (const auto& v : row) c.push_back(detail::family_from_json(v, "plan.combinations"));
            std::sort(c.begin(), c.end());
            p.combinations.push_back(std::move(c));
        }
        if (p.combinations.empty()) throw PlanError("plan: combinations list is empty");
    }
    if (j.contains("methods")) {
        if (!j.at("methods").is_array()) throw ParseError("plan: methods must be an array");
        p.methods.clear();
        for (const auto& v : j.at("methods")) {
            if (!v.is_string()) throw ParseError("plan: method names must be strings");
            const auto m = parse_scaling_method(v.get<std::string>());
            if (!m) throw PlanError("plan: unknown method '" + v.get<std::string>() + "'");
            p.methods.push_back(*m);
        }
    }
    if (j.contains("solver")) {
        const json& s = detail::require_object(j.at("solver"), "plan.solver");
        detail::reject_unknown_keys(s,
                                    {"kind", "runs", "time_limit_ms", "use_time_limit", "sweeps_per_temp",
                                     "temperatures", "t_start", "t_end"},
                                    "plan.solver");
        if (s.contains("kind")) {
            if (!s.at("kind").is_string()) throw ParseError("plan.solver: kind must be a string");
            const auto k = s.at("kind").get<std::string>();
            if (k == "anneal") {
                p.solver = SolverKind::anneal;
            } else if (k == "brute_force") {
                p.solver = SolverKind::brute_force;
            } else {
                throw PlanError("plan.solver: unknown kind '" + k + "'");
            }
        }
        if (s.contains("runs")) p.solve.runs = get_number<int>(s, "runs", "plan.solver");
        if (s.contains("time_limit_ms")) {
            p.solve.time_limit_ms = get_number<std::int64_t>(s, "time_limit_ms", "plan.solver");
        }
        if (s.contains("use_time_limit")) {
            p.solve.use_time_limit = get_number<bool>(s, "use_time_limit", "plan.solver");
        }
        if (s.contains("sweeps_per_temp")) {
            p.solve.sweeps_per_temp = get_number<int>(s, "sweeps_per_temp", "plan.solver");
        }
        if (s.contains("temperatures")) p.solve.temperatures = get_number<int>(s, "temperatures", "plan.solver");
        if (s.contains("t_start")) p.solve.t_start = get_number<double>(s, "t_start", "plan.solver");
        if (s.contains("t_end")) p.solve.t_end = get_number<double>(s, "t_end", "plan.solver");
    }
    if (j.contains("repetitions")) p.repetitions = get_number<int>(j, "repetitions", "plan");
    if (j.contains("hv")) {
        const json& h = detail::require_object(j.at("hv"), "plan.hv");
        detail::reject_unknown_keys(h, {"ref_points"}, "plan.hv");
        if (h.contains("ref_points")) p.ref_points = get_number<std::size_t>(h, "ref_points", "plan.hv");
    }
    if (j.contains("seed")) p.master_seed = get_number<std::uint64_t>(j, "seed", "plan");
    return p;
}

// ---- report serialization ----

inline json report_to_json(const ExperimentReport& r, bool include_timing = true) {
    json fams = json::array();
    for (const auto& d : r.families) {
        json scalings = json::array();
        for (const ScalingMethod m : r.plan.methods) {
            if (auto it = d.reports.find(m); it != d.reports.end()) {
                json s = to_json(it->second);
                s["scale"] = it->second.scale;
                scalings.push_back(std::move(s));
            } else {
                scalings.push_back(json{{"method", std::string(to_string(m))}, {"error", d.failures.at(m)}});
            }
        }
        fams.push_back(json{{"family", std::string(family_id(d.family))},
                            {"seed", d.seed},
                            {"moments", to_json(d.moments)},
                            {"range", to_json(d.range)},
                            {"scalings", std::move(scalings)}});
    }
    json combos = json::array();
    for (const auto& c : r.combinations) {
        json families = json::array();
        for (const Family f : c.families) families.push_back(std::string(family_id(f)));
        json cells = json::array();
        for (const auto& cell : c.cells) {
            json jc{{"method", std::string(to_string(cell.method))}, {"status", cell.ok ? "ok" : "failed"}};
            if (!cell.ok) {
                jc["error"] = cell.error;
            } else {
                jc["hv_mean"] = cell.hv_mean;
                jc["hv_std_across_repetitions"] = cell.hv_std;
                jc["hv_std_across_reference_points"] = cell.ref_std_mean;
                json reps = json::array();
                for (std::size_t k = 0; k < cell.fronts.size(); ++k) {
                    reps.push_back(json{{"rep", k},
                                        {"solver_seed", solver_seed(r.plan.master_seed, c.families, static_cast<int>(k))},
                                        {"hv_mean", cell.hv[k].mean},
                                        {"hv_std", cell.hv[k].std},
                                        {"front", to_json(cell.fronts[k])["records"]}});
                }
                jc["repetitions"] = std::move(reps);
            }
            cells.push_back(std::move(jc));
        }
        json jc{{"families", std::move(families)}, {"cells", std::move(cells)}};
        if (c.protocol) {
            jc["hv_protocol"] = json{{"z_ref", c.protocol->z_ref},
                                     {"z_desire", c.protocol->z_desire},
                                     {"z_anti", c.protocol->z_anti()},
                                     {"ref_points", c.protocol->ref_point_count},
                                     {"seed", c.protocol->seed}};
        }
        combos.push_back(std::move(jc));
    }
    json out{{"plan", plan_to_json(r.plan)},
             {"seeds", json{{"master", r.plan.master_seed}, {"generator", r.generator_seed}}},
             {"families", std::move(fams)},
             {"combinations", std::move(combos)},
             {"cells_failed", r.failed_cells()},
             {"cells_total", r.total_cells()}};
    if (include_timing) out["timing_seconds"] = r.timing_seconds;
    return out;
}

// Fixed-width table for the terminal.
inline std::string summary_table(const ExperimentReport& r) {
    std::ostringstream out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-24s", "combination");
    out << buf;
    for (const ScalingMethod m : r.plan.methods) {
        std::snprintf(buf, sizeof buf, " %14s %12s", (std::string(to_string(m)) + " mean").c_str(), "std");
        out << buf;
    }
    out << '\n';
    for (const auto& c : r.combinations) {
        std::snprintf(buf, sizeof buf, "%-24s", combination_label(c.families).c_str());
        out << buf;
        for (const auto& cell : c.cells) {
            if (cell.ok) {
                std::snprintf(buf, sizeof buf, " %14s %12s", format_sig6(cell.hv_mean).c_str(),
                              format_sig6(cell.hv_std).c_str());
            } else {
                std::snprintf(buf, sizeof buf, " %14s %12s", "FAILED", "-");
            }
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace mqubo
