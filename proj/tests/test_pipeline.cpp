#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "mqubo/pipeline.hpp"
#include "test_support.hpp"

namespace mqubo {
namespace {

ExperimentPlan small_plan(std::size_t n = 12) {
    ExperimentPlan p;
    p.generator.n = n;
    p.generator.attach_m = 2;
    p.solve.runs = 4;
    p.solve.temperatures = 30;
    p.repetitions = 3;
    p.ref_points = 200;
    p.master_seed = 17;
    return p;
}

json without_timing(const ExperimentReport& r) { return report_to_json(r, false); }

TEST(Combinations, ElevenInTableOrder) {
    const auto all = all_combinations({kAllFamilies.begin(), kAllFamilies.end()});
    ASSERT_EQ(all.size(), 11U);
    std::vector<std::string> labels;
    for (const auto& c : all) labels.push_back(combination_label(c));
    const std::vector<std::string> want{"MC01+MCB",     "MC01+MCZ",        "MC01+SUBSUM",     "MCB+MCZ",
                                        "MCB+SUBSUM",   "MCZ+SUBSUM",      "MC01+MCB+MCZ",    "MC01+MCB+SUBSUM",
                                        "MC01+MCZ+SUBSUM", "MCB+MCZ+SUBSUM", "MC01+MCB+MCZ+SUBSUM"};
    EXPECT_EQ(labels, want);
    EXPECT_EQ(all_combinations({Family::mcz, Family::subsum}).size(), 1U);
}

TEST(Plan, Validation) {
    auto p = small_plan();
    p.methods.clear();
    EXPECT_THROW(p.validate(), PlanError);
    p = small_plan();
    p.combinations = {{Family::mc01}};
    EXPECT_THROW(p.validate(), PlanError);
    p = small_plan();
    p.generator.families = {Family::mc01, Family::mcb};
    p.combinations = {{Family::mc01, Family::mcz}};
    EXPECT_THROW(p.validate(), PlanError);
    p = small_plan(40);
    p.solver = SolverKind::brute_force;
    EXPECT_THROW(p.validate(), PlanError);
    EXPECT_NO_THROW(small_plan().validate());
}

TEST(Plan, JsonRoundTrip) {
    auto p = small_plan();
    p.generator_seed = 5;
    p.methods = {ScalingMethod::standardize, ScalingMethod::original};
    const auto back = plan_from_json(parse_json(plan_to_json(p).dump()));
    EXPECT_EQ(plan_to_json(back), plan_to_json(p));
}

TEST(Plan, JsonErrors) {
    EXPECT_THROW(plan_from_json(parse_json(R"({"methods": []})")).validate(), PlanError);
    EXPECT_THROW(plan_from_json(parse_json(R"({"methods": ["bogus"]})")), PlanError);
    EXPECT_THROW(plan_from_json(parse_json(R"({"generatr": {}})")), PlanError);
    EXPECT_THROW(plan_from_json(parse_json(R"({"generator": {"n": "ten"}})")), ParseError);
    EXPECT_THROW(plan_from_json(parse_json(R"([1, 2])")), ParseError);
}

TEST(Experiment, BruteForceStandardizeOnlyHasZeroSpread) {
    auto p = small_plan();
    p.generator.families = {Family::mc01, Family::subsum};
    p.methods = {ScalingMethod::standardize};
    p.solver = SolverKind::brute_force;
    const auto r = run_experiment(p);
    ASSERT_EQ(r.combinations.size(), 1U);
    ASSERT_EQ(r.combinations[0].cells.size(), 1U);
    const auto& cell = r.combinations[0].cells[0];
    EXPECT_TRUE(cell.ok);
    EXPECT_EQ(cell.hv_std, 0.0);
}

TEST(Experiment, FrontsLiveInOriginalObjectiveSpace) {
    const auto p = small_plan();
    const auto r = run_experiment(p);
    for (const auto& c : r.combinations) {
        std::vector<QuboInstance> objs;
        for (const Family f : c.families) {
            for (const auto& d : r.families) {
                if (d.family == f) objs.push_back(d.instance);
            }
        }
        const MultiObjectiveSet set(objs);
        for (const auto& cell : c.cells) {
            ASSERT_TRUE(cell.ok);
            for (const auto& front : cell.fronts) {
                ASSERT_FALSE(front.empty());
                for (const auto& rec : front.records) EXPECT_EQ(evaluate_all(set, rec.bits), rec.objectives);
            }
        }
    }
}

TEST(Experiment, CsvLayout) {
    const auto r = run_experiment(small_plan());
    const std::string csv = report_csv(r);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "MC01,MCB,MCZ,SUBSUM,original_mean,original_std,roof_dual_mean,roof_dual_std,standardize_mean,"
              "standardize_std");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
    EXPECT_NE(csv.find("\n1,1,0,0,"), std::string::npos);
}

TEST(Experiment, DeterministicAcrossRunsAndThreadCounts) {
    const auto p = small_plan();
    const auto a = run_experiment(p, 1);
    const auto b = run_experiment(p, 1);
    const auto c = run_experiment(p, 3);
    EXPECT_EQ(report_csv(a), report_csv(b));
    EXPECT_EQ(without_timing(a), without_timing(b));
    EXPECT_EQ(without_timing(a), without_timing(c));
    auto q = p;
    q.master_seed = 18;
    EXPECT_NE(report_csv(run_experiment(q)), report_csv(a));
}

TEST(Experiment, CellsIndependentOfMethodOrder) {
    auto p = small_plan();
    p.methods = {ScalingMethod::original, ScalingMethod::standardize};
    auto q = p;
    q.methods = {ScalingMethod::standardize, ScalingMethod::original};
    const auto a = run_experiment(p);
    const auto b = run_experiment(q);
    for (std::size_t c = 0; c < a.combinations.size(); ++c) {
        EXPECT_EQ(a.combinations[c].cells[0].hv_mean, b.combinations[c].cells[1].hv_mean);
        EXPECT_EQ(a.combinations[c].cells[1].hv_mean, b.combinations[c].cells[0].hv_mean);
    }
    EXPECT_EQ(report_csv(a), report_csv(b));
}

TEST(Experiment, DegenerateFamilyFailsOnlyItsCells) {
    auto p = small_plan();
    p.generator.families = {Family::mc01, Family::mcb, Family::subsum};
    auto instances = generate_instances(p);
    instances[1] = QuboInstance::from_symmetric(Matrix(p.generator.n), "MCB");
    const auto r = run_experiment(p, instances);
    ASSERT_EQ(r.combinations.size(), 4U);
    for (const auto& c : r.combinations) {
        const bool has_zero = combination_mask(c.families) & (1U << family_index(Family::mcb));
        for (const auto& cell : c.cells) {
            const bool expect_ok = !has_zero || cell.method == ScalingMethod::original;
            EXPECT_EQ(cell.ok, expect_ok) << combination_label(c.families) << " " << to_string(cell.method);
        }
    }
    EXPECT_NE(report_csv(r).find("FAILED"), std::string::npos);
    EXPECT_GT(r.failed_cells(), 0U);
    EXPECT_LT(r.failed_cells(), r.total_cells());
}

TEST(Experiment, SharedProtocolBoxContainsAllFronts) {
    const auto r = run_experiment(small_plan());
    for (const auto& c : r.combinations) {
        ASSERT_TRUE(c.protocol.has_value());
        for (const auto& cell : c.cells) {
            for (const auto& f : cell.fronts) {
                for (const auto& rec : f.records) {
                    for (std::size_t i = 0; i < rec.objectives.size(); ++i) {
                        EXPECT_LE(rec.objectives[i], c.protocol->z_ref[i]);
                        EXPECT_GE(rec.objectives[i], c.protocol->z_desire[i]);
                    }
                }
            }
        }
    }
}

TEST(ScalingSummary, SingleDiagonal) {
    const auto q = symmetrize(matrix_from_rows({{1}}), "one");
    const auto rows = scaling_summary(MultiObjectiveSet({q, q}));
    EXPECT_DOUBLE_EQ(rows[0].width, 1.0);
    EXPECT_DOUBLE_EQ(rows[0].sigma, 0.5);
    const std::string csv = scaling_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "qubo,roof_dual_range,std_dev,mean,variance,roof_dual_lower,roof_dual_upper");
    EXPECT_NE(csv.find("one,1,0.5,0.5,0.25,0,1\n"), std::string::npos);
}

TEST(ScalingSummary, WidthExceedsSigmaAtModerateSize) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto p = small_plan(200);
        p.generator_seed = seed;
        const auto rows = scaling_summary(MultiObjectiveSet(generate_instances(p)));
        for (const auto& r : rows) EXPECT_GT(r.width / r.sigma, 1.0) << r.label << " seed " << seed;
    }
}

// Equal-weight scalarization of standardized objectives has the same
// minimizers as the 1/sigma-weighted scalarization of the originals.
TEST(Properties, StandardizedArgminMatchesInverseSigmaWeights) {
    Xoshiro256 rng(91);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.below(11);
        const MultiObjectiveSet set({testing::random_instance(rng, n), testing::random_instance(rng, n, -50, 50)});
        const auto [standardized, reports] = standardize(set);
        std::vector<double> w;
        for (const auto& r : reports) w.push_back(1.0 / *r.sigma);
        EXPECT_EQ(brute_force_minimizers(scalarize_equal(standardized)), brute_force_minimizers(scalarize(set, w)));
    }
}

}  // namespace
}  // namespace mqubo
