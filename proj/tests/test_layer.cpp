#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "support.hpp"
#include "zotab/fixtures.hpp"
#include "zotab/layer.hpp"
#include "zotab/rng.hpp"

using namespace zotab;

TEST(ReorderColumns, OrderByDecreasingSum) {
  using V = std::vector<std::size_t>;
  EXPECT_EQ(order_by_decreasing(std::vector<int>{2, 3, 1}), (V{1, 0, 2}));
  EXPECT_EQ(order_by_decreasing(std::vector<int>{4, 4, 4, 4}), (V{0, 1, 2, 3}));
  EXPECT_EQ(order_by_decreasing(std::vector<int>{0, 2, 2}), (V{1, 2, 0}));
}

TEST(ReorderColumns, SkipsClosedColumns) {
  // Layer 0 of a 2x2x3 table: column (0,0,.) fully determined by a zero margin.
  const auto m = three_way(2, 2, 3, {1, 1, 0, 1, 1, 1}, {1, 1, 0, 1, 1, 1}, {0, 2, 2, 1});
  ASSERT_FALSE(validate_marginals(m));
  PartialTable st(m);
  ASSERT_TRUE(st.propagate());
  for (std::size_t c : reorder_columns(st, 0)) EXPECT_GT(st.open_count(2, c), 0);
}

TEST(ColumnWeights, AllOnesCubeFirstColumn) {
  PartialTable st(*find_fixture("ex5_1"));
  ASSERT_TRUE(st.propagate());
  const auto draw = column_weights(st, 0);
  ASSERT_EQ(draw.cells.size(), 3u);
  EXPECT_EQ(draw.ones, 1);
  for (std::size_t k = 0; k < 3; ++k) {
    // r_k = c_k = 1 on lines of length 3: p = 1/(1 + 2*2) = 0.2, odds 0.25
    EXPECT_NEAR(draw.weights.weight(k), 0.25, 1e-15);
  }
}

TEST(SampleLayer, FullyForcedLayerHasProbabilityOne) {
  PartialTable st(semimagic_cube(1, 1));
  ASSERT_TRUE(st.propagate());
  zt::PathChooser pc;
  const auto r = sample_layer(st, 0, pc);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.log_q, 0.0);
  EXPECT_TRUE(st.complete());
}

TEST(SampleLayer, AllOnesLayerIsAUniformPermutation) {
  const auto m = *find_fixture("ex5_1");
  zt::PathChooser pc;
  std::set<std::vector<int>> layers;
  double total = 0.0;
  int paths = 0;
  do {
    PartialTable st(m);
    ASSERT_TRUE(st.propagate());
    const auto r = sample_layer(st, 0, pc);
    ASSERT_TRUE(r.ok);
    EXPECT_NEAR(r.log_q, std::log(1.0 / 6.0), 1e-12);
    total += std::exp(r.log_q);
    ++paths;
    std::vector<int> layer;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) layer.push_back(st.cell(static_cast<std::size_t>(j * 3 + k)));
    for (int v : layer) EXPECT_GE(v, 0);
    layers.insert(layer);
  } while (pc.next());
  EXPECT_EQ(paths, 6);
  EXPECT_EQ(layers.size(), 6u);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(SampleLayer, AcceptedLayersMeetTheirSums) {
  for (const char* name : {"ex5_2", "ex5_6", "ex5_9"}) {
    const auto m = *find_fixture(name);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      PartialTable st(m);
      ASSERT_TRUE(st.propagate());
      auto rng = stream_rng(seed, 0);
      DraftChooser<std::mt19937_64> choose{rng};
      const auto r = sample_layer(st, 0, choose);
      if (!r.ok) continue;
      EXPECT_LE(r.log_q, 0.0);
      // Within the layer every row and column is closed with zero residual.
      const Dims& dims = st.dims();
      for (int axis = 1; axis < 3; ++axis)
        for (std::size_t line = 0; line < dims.lines(axis) / static_cast<std::size_t>(dims[0]); ++line) {
          EXPECT_EQ(st.open_count(axis, line), 0) << name;
          EXPECT_EQ(st.residual(axis, line), 0) << name;
        }
    }
  }
}

TEST(SampleLayer, DeterministicGivenSeed) {
  const auto m = *find_fixture("ex5_6");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PartialTable a(m), b(m);
    ASSERT_TRUE(a.propagate());
    ASSERT_TRUE(b.propagate());
    auto ra = stream_rng(seed, 3), rb = stream_rng(seed, 3);
    DraftChooser<std::mt19937_64> ca{ra}, cb{rb};
    const auto la = sample_layer(a, 1, ca);
    const auto lb = sample_layer(b, 1, cb);
    EXPECT_EQ(la.ok, lb.ok);
    EXPECT_EQ(la.log_q, lb.log_q);
    for (std::size_t i = 0; i < m.dims.cells(); ++i) EXPECT_EQ(a.cell(i), b.cell(i));
  }
}
