#include <gtest/gtest.h>

#include "shaclup/bench.hpp"
#include "shaclup/shapes_graph.hpp"

using namespace shaclup;
using namespace shaclup::bench;

TEST(Bench, GenerationIsDeterministic) {
  for (std::uint64_t seed : {0u, 1u, 17u}) {
    CaseSpec spec{10, 20, seed};
    EXPECT_EQ(serialize_case(gen_case(spec)), serialize_case(gen_case(spec)));
  }
  EXPECT_NE(serialize_case(gen_case({4, 1, 0})), serialize_case(gen_case({4, 1, 1})));
  EXPECT_EQ(gen_case({4, 1, 3}).id, "n4_a1_s3");
}

TEST(Bench, OneShapePerTargetKind) {
  GeneratedCase c = gen_case({4, 1, 0});
  ASSERT_EQ(c.shapes->kind, GraphKind::Normal);
  ASSERT_EQ(c.shapes->constraints.size(), 4u);
  std::vector<TargetPtr> atoms = c.shapes->targets->args;
  ASSERT_EQ(atoms.size(), 4u);
  EXPECT_EQ(atoms[0]->selector->kind, ShapeKind::Node);
  EXPECT_EQ(atoms[1]->selector->kind, ShapeKind::Class);
  ASSERT_EQ(atoms[2]->selector->kind, ShapeKind::AtLeast);
  EXPECT_EQ(atoms[2]->selector->path->kind, PathKind::Prop);
  ASSERT_EQ(atoms[3]->selector->kind, ShapeKind::AtLeast);
  EXPECT_EQ(atoms[3]->selector->path->kind, PathKind::Inverse);
}

TEST(Bench, GeneratedCasesAreWellFormed) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GeneratedCase c = gen_case({4 + seed % 11, 1 + seed % 20, seed});
    EXPECT_NO_THROW(check_shapes_graph(c.shapes)) << c.id;
    EXPECT_NO_THROW(check_action(c.action)) << c.id;
    EXPECT_TRUE(is_ground(c.action));
    EXPECT_EQ(c.action.steps.size(), 1 + seed % 20);
    for (const auto& step : c.action.steps) {
      const auto& b = std::get<BasicAction>(step);
      EXPECT_FALSE(b.on_class());
    }
    EXPECT_LE(vocabulary_of(c.shapes).nodes.size(), 2 * (4 + seed % 11));
  }
}

TEST(Bench, ConstantPoolDefault) {
  CaseSpec spec{7, 1, 0};
  EXPECT_EQ(spec.constants(), 14u);
  spec.constant_pool_size = 3;
  EXPECT_EQ(spec.constants(), 3u);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    spec.seed = seed;
    for (const auto& n : vocabulary_of(gen_case(spec).shapes).nodes)
      EXPECT_TRUE(n == "c1" || n == "c2" || n == "c3") << n;
  }
}

TEST(Bench, EmptyGridIsHeaderOnly) {
  auto records = run_suite({}, SuiteOptions{});
  EXPECT_TRUE(records.empty());
  EXPECT_EQ(to_csv(records), std::string(kCsvHeader) + "\n");
}

TEST(Bench, FailuresAreRecorded) {
  SuiteOptions o;
  o.backends = {"bounded", "nonsense", "fol"};
  o.fol.prover.path = "/nonexistent/prover";
  auto records = run_suite({{4, 1, 0}}, o);
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0].status, "ok");
  EXPECT_FALSE(records[0].verdict.empty());
  EXPECT_EQ(records[1].status, "UnknownBackend");
  EXPECT_EQ(records[2].status, "ProverUnavailable");
  std::string csv = to_csv(records);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  auto points = summarize(records);
  ASSERT_EQ(points.size(), 3u);
  EXPECT_EQ(points[1].failed, 1u);
  EXPECT_EQ(points[1].runs, 0u);
}

TEST(Bench, RepetitionsUseConsecutiveSeeds) {
  SuiteOptions o;
  o.repetitions = 3;
  auto records = run_suite({{4, 1, 5}}, o);
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0].seed, 5u);
  EXPECT_EQ(records[2].seed, 7u);
  auto points = summarize(records);
  ASSERT_EQ(points.size(), 1u);
  EXPECT_EQ(points[0].runs, 3u);
  EXPECT_FALSE(summary_text(points).empty());
}

TEST(Bench, LeastSquares) {
  LinearFit f = fit_linear({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_THROW(fit_linear({1, 1}, {2, 3}), std::invalid_argument);
  ScalingReport quad = scaling({1, 2, 3, 4, 5, 6}, {1, 4, 9, 16, 25, 36});
  EXPECT_TRUE(quad.superlinear);
  ScalingReport line = scaling({1, 2, 3, 4, 5, 6}, {2, 4, 6, 8, 10, 12});
  EXPECT_FALSE(line.superlinear);
  EXPECT_NEAR(line.linear.slope, 2.0, 1e-12);
}

TEST(Bench, PreservingFractionIsNonDegenerate) {
  std::vector<CaseSpec> grid;
  for (std::uint64_t seed = 0; seed < 100; ++seed) grid.push_back({10, 1, seed});
  auto records = run_suite(grid, SuiteOptions{});
  std::size_t preserving = 0, ok = 0;
  for (const auto& r : records) {
    if (r.status != "ok") continue;
    ++ok;
    if (r.verdict == "no_counterexample") ++preserving;
  }
  EXPECT_EQ(ok, 100u);
  EXPECT_GT(preserving, 0u);
  EXPECT_LT(preserving, ok);
}
