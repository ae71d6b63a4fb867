#include <gtest/gtest.h>

#include <string>

#include "mqubo/io.hpp"
#include "test_support.hpp"

namespace mqubo {
namespace {

TEST(InstanceJson, SplitsOffDiagonalEntries) {
    const auto q = instance_from_json(parse_json(R"({"n": 2, "label": "t", "entries": [[0, 0, 1.5], [0, 1, 3]]})"));
    EXPECT_EQ(q.matrix(), matrix_from_rows({{1.5, 1.5}, {1.5, 0}}));
    EXPECT_EQ(q.label(), "t");
    EXPECT_DOUBLE_EQ(evaluate(q, BinaryVector{1, 1}), 4.5);
}

TEST(InstanceJson, DuplicatesAreSummed) {
    const auto q = instance_from_json(parse_json(R"({"n": 2, "entries": [[0, 1, 1], [0, 1, 2], [1, 1, 1], [1, 1, 1]]})"));
    EXPECT_DOUBLE_EQ(q(0, 1), 1.5);
    EXPECT_DOUBLE_EQ(q(1, 1), 2.0);
}

TEST(InstanceJson, RoundTrip) {
    Xoshiro256 rng(81);
    const auto q = testing::random_instance(rng, 7);
    const auto back = instance_from_json(parse_json(instance_to_json(q).dump()));
    for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t j = 0; j < 7; ++j) EXPECT_NEAR(back(i, j), q(i, j), 1e-15 * (1 + std::abs(q(i, j))));
    }
}

TEST(InstanceJson, RejectsBadEntries) {
    EXPECT_THROW(instance_from_json(parse_json(R"({"n": 2, "entries": [[1, 0, 1]]})")), ParseError);
    EXPECT_THROW(instance_from_json(parse_json(R"({"n": 2, "entries": [[0, 2, 1]]})")), ParseError);
    EXPECT_THROW(instance_from_json(parse_json(R"({"n": 2, "entries": [[0, 1]]})")), ParseError);
    EXPECT_THROW(instance_from_json(parse_json(R"({"entries": []})")), ParseError);
    EXPECT_THROW(instance_from_json(parse_json(R"({"n": 0, "entries": []})")), ParseError);
}

TEST(ParseJson, ReportsLineAndColumn) {
    try {
        (void)parse_json("{\n  \"n\": 2,\n  \"entries\": [,]\n}");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3U);
        EXPECT_GT(e.column(), 1U);
    }
}

TEST(MultiJson, RoundTripAndDimensionCheck) {
    Xoshiro256 rng(82);
    const MultiObjectiveSet set({testing::random_instance(rng, 4), testing::random_instance(rng, 4)});
    const auto back = multi_from_json(parse_json(multi_to_json(set).dump()));
    EXPECT_EQ(back.size(), 2U);
    EXPECT_EQ(back.variables(), 4U);
    EXPECT_THROW(multi_from_json(parse_json(
                     R"({"n": 2, "objectives": [{"n": 2, "entries": []}, {"n": 3, "entries": []}]})")),
                 DimensionError);
}

TEST(Serialization, ScalingReportFields) {
    ScalingReport s;
    s.index = 1;
    s.method = ScalingMethod::standardize;
    s.sigma = 0.5;
    s.mean = 0.25;
    const json j = to_json(s);
    EXPECT_EQ(j.at("method"), "standardize");
    EXPECT_EQ(j.at("sigma"), 0.5);
    EXPECT_EQ(j.at("index"), 1);
    ScalingReport r;
    r.method = ScalingMethod::roof_dual;
    r.lower = -1;
    r.upper = 2;
    EXPECT_EQ(to_json(r).at("upper"), 2.0);
}

TEST(Serialization, RecordsAcceptBothShapes) {
    const auto a = records_from_json(parse_json(R"({"records": [{"bits": "01", "objectives": [1, 2]}]})"));
    ASSERT_EQ(a.size(), 1U);
    EXPECT_EQ(a[0].bits, (BinaryVector{0, 1}));
    const auto b = records_from_json(parse_json(R"({"points": [[1, 2], [2, 1]]})"));
    EXPECT_EQ(b.size(), 2U);
    EXPECT_THROW(records_from_json(parse_json(R"({"points": [[1, 2], [2]]})")), DimensionError);
    EXPECT_THROW(records_from_json(parse_json(R"({"other": 1})")), ParseError);
}

TEST(Format, SixSignificantDigits) {
    EXPECT_EQ(format_sig6(3.0), "3");
    EXPECT_EQ(format_sig6(1234567.0), "1.23457e+06");
    EXPECT_EQ(format_sig6(0.000123456789), "0.000123457");
}

}  // namespace
}  // namespace mqubo
