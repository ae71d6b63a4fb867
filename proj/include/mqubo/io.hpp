#pragma once

// JSON file formats.
//
// Instance:   {"n": 3, "label": "MC01", "entries": [[i, j, v], ...]}
//   0-based, i <= j. Duplicate (i, j) entries are summed. A diagonal entry
//   sets q(i, i); an off-diagonal entry v is the full x_i x_j coefficient and
//   is split as q(i, j) = q(j, i) = v / 2.
// Multi-objective: {"n": 3, "objectives": [<instance>, ...]}

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mqubo/error.hpp"
#include "mqubo/moments.hpp"
#include "mqubo/pareto.hpp"
#include "mqubo/qubo.hpp"
#include "mqubo/roofdual.hpp"
#include "mqubo/scaling_report.hpp"
#include "mqubo/solve.hpp"

namespace mqubo {

using json = nlohmann::json;

// printf("%.6g"), the float format of every CSV and summary table.
inline std::string format_sig6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("error while writing '" + path + "'");
}

// Parses JSON text; syntax errors become ParseError with line and column.
inline json parse_json(std::string_view text, const std::string& source = "input") {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(source + ": malformed JSON", line, column);
    }
}

inline json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

namespace detail {

inline const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
    return j.at(key);
}

inline std::size_t require_size(const json& j, const char* key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ParseError(where + ": field '" + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

}  // namespace detail

inline QuboInstance instance_from_json(const json& j, const std::string& where = "instance") {
    const std::size_t n = detail::require_size(j, "n", where);
    if (n == 0) throw ParseError(where + ": n must be positive");
    std::string label;
    if (j.contains("label")) {
        if (!j.at("label").is_string()) throw ParseError(where + ": label must be a string");
        label = j.at("label").get<std::string>();
    }
    const json& entries = detail::require(j, "entries", where);
    if (!entries.is_array()) throw ParseError(where + ": entries must be an array");
    Matrix q(n);
    for (std::size_t e = 0; e < entries.size(); ++e) {
        const json& t = entries[e];
        const std::string at = where + ": entry " + std::to_string(e);
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() ||
            !t[2].is_number()) {
            throw ParseError(at + " must be [i, j, value]");
        }
        const long long i = t[0].get<long long>();
        const long long k = t[1].get<long long>();
        const double v = t[2].get<double>();
        if (i < 0 || k < 0 || static_cast<std::size_t>(k) >= n) {
            throw ParseError(at + " has an index outside [0, " + std::to_string(n) + ")");
        }
        if (i > k) throw ParseError(at + " must satisfy i <= j");
        if (!std::isfinite(v)) throw ParseError(at + " has a non-finite value");
        const auto a = static_cast<std::size_t>(i);
        const auto b = static_cast<std::size_t>(k);
        if (a == b) {
            q(a, a) += v;
        } else {
            q(a, b) += v / 2.0;
            q(b, a) += v / 2.0;
        }
    }
    return QuboInstance::from_symmetric(std::move(q), std::move(label));
}

inline json instance_to_json(const QuboInstance& q) {
    json entries = json::array();
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = i; j < q.size(); ++j) {
            const double v = (i == j) ? q(i, i) : q(i, j) + q(j, i);
            if (v != 0.0) entries.push_back(json::array({i, j, v}));
        }
    }
    return json{{"n", q.size()}, {"label", q.label()}, {"entries", std::move(entries)}};
}

inline MultiObjectiveSet multi_from_json(const json& j, const std::string& where = "multi-objective file") {
    const std::size_t n = detail::require_size(j, "n", where);
    const json& objs = detail::require(j, "objectives", where);
    if (!objs.is_array()) throw ParseError(where + ": objectives must be an array");
    std::vector<QuboInstance> out;
    for (std::size_t k = 0; k < objs.size(); ++k) {
        out.push_back(instance_from_json(objs[k], where + ": objective " + std::to_string(k)));
        if (out.back().size() != n) {
            throw DimensionError("objective " + std::to_string(k) + " variable count", n, out.back().size());
        }
    }
    return MultiObjectiveSet(std::move(out));
}

inline json multi_to_json(const MultiObjectiveSet& set) {
    json objs = json::array();
    for (const auto& q : set) objs.push_back(instance_to_json(q));
    return json{{"n", set.variables()}, {"objectives", std::move(objs)}};
}

inline QuboInstance load_instance(const std::string& path) { return instance_from_json(read_json_file(path), path); }
inline MultiObjectiveSet load_multi(const std::string& path) { return multi_from_json(read_json_file(path), path); }

inline json to_json(const ScalingReport& r) {
    json j{{"index", r.index}, {"method", std::string(to_string(r.method))}};
    switch (r.method) {
        case ScalingMethod::standardize:
            j["sigma"] = r.sigma.value_or(0.0);
            j["mean"] = r.mean.value_or(0.0);
            break;
        case ScalingMethod::roof_dual:
            j["lower"] = r.lower.value_or(0.0);
            j["upper"] = r.upper.value_or(0.0);
            break;
        case ScalingMethod::original: break;
    }
    return j;
}

inline json to_json(const RangeEstimate& r) {
    return json{{"method", "roof_dual"}, {"lower", r.lower}, {"upper", r.upper}, {"width", r.width()}};
}

inline json to_json(const MomentSummary& s) {
    return json{{"mean", s.mean},
                {"second_moment", s.second_moment},
                {"variance", s.variance},
                {"std_dev", s.std_dev}};
}

inline json to_json(const SolveConfig& c) {
    json j{{"time_limit_ms", c.time_limit_ms},   {"use_time_limit", c.use_time_limit},
           {"runs", c.runs},                     {"seed", c.seed},
           {"sweeps_per_temp", c.sweeps_per_temp}, {"temperatures", c.temperatures}};
    if (c.t_start) j["t_start"] = *c.t_start;
    if (c.t_end) j["t_end"] = *c.t_end;
    return j;
}

inline json to_json(const SolveOutcome& o, const SolveConfig& c) {
    json runs = json::array();
    for (const auto& r : o.runs) {
        runs.push_back(json{{"seed", r.seed}, {"best_value", r.value}, {"bits", to_bit_string(r.bits)}});
    }
    return json{{"runs", std::move(runs)},
                {"best", json{{"bits", to_bit_string(o.best)}, {"value", o.best_value}}},
                {"evaluations", o.evaluations},
                {"config", to_json(c)}};
}

inline json to_json(const FrontSet& f) {
    json recs = json::array();
    for (const auto& r : f.records) {
        json rec{{"objectives", r.objectives}};
        if (!r.bits.empty()) rec["bits"] = to_bit_string(r.bits);
        recs.push_back(std::move(rec));
    }
    return json{{"records", std::move(recs)}};
}

inline json to_json(const HypervolumeResult& h) {
    return json{{"mean", h.mean}, {"std", h.std}, {"count", h.count}, {"z_ref", h.z_ref}, {"z_anti", h.z_anti}};
}

// Accepts {"records": [{"bits": "01", "objectives": [...]}, ...]} or
// {"points": [[...], ...]}.
inline std::vector<SolutionRecord> records_from_json(const json& j, const std::string& where = "front file") {
    std::vector<SolutionRecord> out;
    auto read_point = [&](const json& p, const std::string& at) {
        if (!p.is_array()) throw ParseError(at + " must be an array of numbers");
        ObjectiveVector v;
        for (const auto& x : p) {
            if (!x.is_number()) throw ParseError(at + " must be an array of numbers");
            v.push_back(x.get<double>());
        }
        return v;
    };
    if (j.is_object() && j.contains("records")) {
        const json& recs = j.at("records");
        if (!recs.is_array()) throw ParseError(where + ": records must be an array");
        for (std::size_t k = 0; k < recs.size(); ++k) {
            const std::string at = where + ": record " + std::to_string(k);
            SolutionRecord r;
            r.objectives = read_point(detail::require(recs[k], "objectives", at), at + " objectives");
            if (recs[k].contains("bits")) {
                if (!recs[k].at("bits").is_string()) throw ParseError(at + ": bits must be a string");
                try {
                    r.bits = from_bit_string(recs[k].at("bits").get<std::string>());
                } catch (const InvariantError& e) {
                    throw ParseError(at + ": " + e.what());
                }
            }
            out.push_back(std::move(r));
        }
    } else if (j.is_object() && j.contains("points")) {
        const json& pts = j.at("points");
        if (!pts.is_array()) throw ParseError(where + ": points must be an array");
        for (std::size_t k = 0; k < pts.size(); ++k) {
            out.push_back({{}, read_point(pts[k], where + ": point " + std::to_string(k))});
        }
    } else {
        throw ParseError(where + ": expected a 'records' or 'points' field");
    }
    if (!out.empty()) {
        for (const auto& r : out) {
            if (r.objectives.size() != out[0].objectives.size()) {
                throw DimensionError("objective vector length", out[0].objectives.size(), r.objectives.size());
            }
        }
    }
    return out;
}

}  // namespace mqubo
