#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "attk2/errors.hpp"
#include "attk2/k2tree.hpp"

namespace attk2 {
namespace {

// The classic 11x11 example (padded to 16): cells decoded by hand from its
// published levelwise bit strings.
const std::vector<Cell> kFig2Cells = {{1, 2},  {2, 3},  {2, 4},  {2, 5},  {8, 7},   {9, 7},
                                      {9, 10}, {10, 7}, {10, 9}, {10, 11}, {11, 7}, {11, 10}};
const char* kFig2T = "1011 1101 0100 1000 1100 1000 0001 0101 1110";
const char* kFig2L = "0100 0011 0010 0010 1010 1000 0110 0010 0100";

std::string strip(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  return s;
}

// Independent decoder working on the raw bit strings only: walks the levels
// with a naive prefix count and lists leaf cells in levelwise (L) order.
std::vector<Cell> decode_leaf_order(const std::string& t, const std::string& l, unsigned k, std::uint64_t n) {
  const std::string all = t + l;
  std::vector<Cell> out;
  struct Node {
    std::size_t base;
    std::uint64_t r0, c0, size;
  };
  std::vector<Node> frontier = {{0, 0, 0, n}};
  while (!frontier.empty()) {
    std::vector<Node> next;
    for (const Node& node : frontier) {
      const std::uint64_t s = node.size / k;
      for (unsigned i = 0; i < k; ++i) {
        for (unsigned j = 0; j < k; ++j) {
          const std::size_t p = node.base + i * k + j;
          if (all[p] != '1') continue;
          if (s == 1) {
            out.push_back({node.r0 + i + 1, node.c0 + j + 1});
          } else {
            const auto ones = static_cast<std::size_t>(std::count(all.begin(), all.begin() + p + 1, '1'));
            next.push_back({ones * k * k, node.r0 + i * s, node.c0 + j * s, s});
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

using Matrix = std::vector<std::vector<bool>>;

Matrix random_matrix(std::uint64_t n, double density, std::mt19937_64& rng) {
  Matrix m(n, std::vector<bool>(n, false));
  std::bernoulli_distribution coin(density);
  for (auto& row : m) {
    for (std::size_t c = 0; c < n; ++c) row[c] = coin(rng);
  }
  return m;
}

std::vector<Cell> cells_of(const Matrix& m) {
  std::vector<Cell> out;
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m.size(); ++c) {
      if (m[r][c]) out.push_back({r + 1, c + 1});
    }
  }
  return out;
}

template <class Tree>
void expect_matches_matrix(const Tree& tree, const Matrix& m, std::mt19937_64& rng) {
  const std::uint64_t n = m.size();
  for (std::uint64_t r = 1; r <= n; ++r) {
    std::vector<std::uint64_t> row;
    for (std::uint64_t c = 1; c <= n; ++c) {
      ASSERT_EQ(tree.cell(r, c), m[r - 1][c - 1]) << "cell " << r << "," << c;
      if (m[r - 1][c - 1]) row.push_back(c);
    }
    ASSERT_EQ(tree.row_neighbors(r), row) << "row " << r;
  }
  for (std::uint64_t c = 1; c <= n; ++c) {
    std::vector<std::uint64_t> col;
    for (std::uint64_t r = 1; r <= n; ++r) {
      if (m[r - 1][c - 1]) col.push_back(r);
    }
    ASSERT_EQ(tree.col_neighbors(c), col) << "col " << c;
  }
  ASSERT_EQ(tree.range(1, n, 1, n), cells_of(m));
  std::uniform_int_distribution<std::uint64_t> pick(1, n);
  for (int t = 0; t < 20; ++t) {
    auto r1 = pick(rng), r2 = pick(rng), c1 = pick(rng), c2 = pick(rng);
    if (r1 > r2) std::swap(r1, r2);
    if (c1 > c2) std::swap(c1, c2);
    std::vector<Cell> expect;
    for (const Cell& cell : cells_of(m)) {
      if (cell.row >= r1 && cell.row <= r2 && cell.col >= c1 && cell.col <= c2) expect.push_back(cell);
    }
    ASSERT_EQ(tree.range(r1, r2, c1, c2), expect);
  }
}

TEST(K2Tree, Fig2GoldenLayout) {
  const K2Tree tree = K2Tree::build(11, kFig2Cells, 2);
  EXPECT_EQ(tree.side(), 16u);
  EXPECT_EQ(tree.height(), 4u);
  EXPECT_EQ(tree.tree_bits().to_string(), strip(kFig2T));
  EXPECT_EQ(tree.leaf_bits().to_string(), strip(kFig2L));
  EXPECT_EQ((tree.tree_bits().size() + tree.leaf_bits().size()) % 4, 0u);
  // Only the top-right quadrant of the padded 16x16 matrix is empty.
  EXPECT_TRUE(tree.range(1, 8, 9, 11).empty());
  for (std::uint64_t r = 1; r <= 8; ++r) {
    for (std::uint64_t c = 9; c <= 11; ++c) EXPECT_FALSE(tree.cell(r, c));
  }
  EXPECT_EQ(tree.range(1, 11, 1, 11), kFig2Cells);
  EXPECT_EQ(tree.count(), kFig2Cells.size());
}

TEST(K2Tree, SmallBuildExamples) {
  const K2Tree empty = K2Tree::build(4, {}, 2);
  EXPECT_EQ(empty.tree_bits().to_string(), "0000");
  EXPECT_EQ(empty.leaf_bits().to_string(), "");
  EXPECT_FALSE(empty.cell(1, 1));
  EXPECT_TRUE(empty.row_neighbors(3).empty());
  EXPECT_TRUE(empty.range(1, 4, 1, 4).empty());

  const std::vector<Cell> diag = {{1, 1}, {2, 2}};
  const K2Tree identity = K2Tree::build(2, diag, 2);
  EXPECT_EQ(identity.tree_bits().to_string(), "");
  EXPECT_EQ(identity.leaf_bits().to_string(), "1001");
  EXPECT_TRUE(identity.cell(1, 1));
  EXPECT_FALSE(identity.cell(1, 2));
  EXPECT_EQ(identity.row_neighbors(1), (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(identity.col_neighbors(2), (std::vector<std::uint64_t>{2}));

  const std::vector<Cell> full = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  const K2Tree all = K2Tree::build(2, full, 2);
  EXPECT_EQ(all.row_neighbors(2), (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(all.col_neighbors(1), (std::vector<std::uint64_t>{1, 2}));
}

TEST(K2Tree, InputErrors) {
  const std::vector<Cell> bad = {{5, 1}};
  EXPECT_THROW(K2Tree::build(4, bad, 2), InputError);
  EXPECT_THROW(K2Tree::build(4, {}, 1), InputError);
  const K2Tree t = K2Tree::build(4, {}, 2);
  EXPECT_THROW(t.cell(0, 1), OutOfRange);
  EXPECT_THROW(t.cell(1, 5), OutOfRange);
  EXPECT_THROW(t.range(3, 2, 1, 1), InputError);
  EXPECT_THROW(t.range(1, 5, 1, 1), OutOfRange);
  EXPECT_THROW(t.leaf_ordinal(1, 1), NotFound);
}

TEST(K2Tree, LeafOrdinalRelationsExample) {
  // Node pairs of the running example's relations.
  const std::vector<Cell> pairs = {{3, 1}, {5, 1}, {5, 2}, {4, 5}, {3, 2}, {4, 2}};
  const K2Tree tree = K2Tree::build(5, pairs, 2);
  EXPECT_EQ(tree.leaf_bits().to_string(), "110100101100");
  EXPECT_EQ(tree.leaf_bits().rank1(7), 4u);
  EXPECT_EQ(tree.leaf_ordinal(4, 5), 4u);
  EXPECT_EQ(tree.leaf_ordinal(3, 1), 1u);
  const std::vector<Cell> single = {{2, 3}};
  EXPECT_EQ(K2Tree::build(3, single, 2).leaf_ordinal(2, 3), 1u);
}

TEST(K2Tree, LeafOrdinalMatchesLevelwiseEnumeration) {
  std::mt19937_64 rng(5);
  for (unsigned k : {2u, 4u}) {
    const Matrix m = random_matrix(32, 0.08, rng);
    const K2Tree tree = K2Tree::build(32, cells_of(m), k);
    const auto order = decode_leaf_order(tree.tree_bits().to_string(), tree.leaf_bits().to_string(), k,
                                         tree.side());
    ASSERT_EQ(order.size(), tree.count());
    for (std::size_t i = 0; i < order.size(); ++i) {
      ASSERT_EQ(tree.leaf_ordinal(order[i].row, order[i].col), i + 1);
    }
  }
}

TEST(K2Tree, BruteForceAgreementAcrossDensitiesAndArity) {
  std::mt19937_64 rng(99);
  for (unsigned k : {2u, 4u}) {
    for (double density : {0.001, 0.01, 0.1}) {
      for (std::uint64_t n : {1u, 7u, 100u, 128u}) {
        const Matrix m = random_matrix(n, density, rng);
        const K2Tree tree = K2Tree::build(n, cells_of(m), k);
        EXPECT_EQ((tree.tree_bits().size() + tree.leaf_bits().size()) % (k * k), 0u);
        expect_matches_matrix(tree, m, rng);
      }
    }
  }
}

TEST(K2Tree, PaddingInvariance) {
  const K2Tree a = K2Tree::build(11, kFig2Cells, 2);
  const K2Tree b = K2Tree::build(16, kFig2Cells, 2);
  EXPECT_EQ(a.tree_bits(), b.tree_bits());
  EXPECT_EQ(a.leaf_bits(), b.leaf_bits());
  for (std::uint64_t r = 1; r <= 11; ++r) {
    EXPECT_EQ(a.row_neighbors(r), b.row_neighbors(r));
    EXPECT_EQ(a.col_neighbors(r), b.col_neighbors(r));
    for (std::uint64_t c = 1; c <= 11; ++c) EXPECT_EQ(a.cell(r, c), b.cell(r, c));
  }
  EXPECT_EQ(a.range(1, 11, 1, 11), b.range(1, 16, 1, 16));
}

TEST(K2Tree, ClusteredMatrixBeatsRawBitmap) {
  std::mt19937_64 rng(3);
  const std::uint64_t n = 1024;
  const std::size_t target = n * n / 100;
  std::set<Cell> cells;
  std::uniform_int_distribution<std::uint64_t> corner(1, n - 127);
  std::vector<Cell> blocks;
  for (int b = 0; b < 8; ++b) blocks.push_back({corner(rng), corner(rng)});
  std::uniform_int_distribution<std::uint64_t> offset(0, 127);
  while (cells.size() < target) {
    const Cell& b = blocks[rng() % blocks.size()];
    cells.insert({b.row + offset(rng), b.col + offset(rng)});
  }
  const std::vector<Cell> list(cells.begin(), cells.end());
  const K2Tree tree = K2Tree::build(n, list, 2);
  EXPECT_LT(tree.tree_bits().size() + tree.leaf_bits().size(), n * n);
}

TEST(K2Tree, SerializationRoundTripAndCorruption) {
  const K2Tree tree = K2Tree::build(11, kFig2Cells, 2);
  wire::Writer w;
  tree.serialize(w);
  wire::Reader r(w.buffer());
  const K2Tree back = K2Tree::deserialize(r);
  EXPECT_TRUE(r.at_end());
  EXPECT_EQ(back, tree);

  auto bytes = w.buffer();
  bytes.resize(bytes.size() - 3);
  wire::Reader truncated(bytes);
  EXPECT_THROW(K2Tree::deserialize(truncated), CorruptFile);

  auto bad_k = w.buffer();
  bad_k[0] = 3;  // k = 3 no longer matches n = 16
  wire::Reader wrong(bad_k);
  EXPECT_THROW(K2Tree::deserialize(wrong), CorruptFile);
}

TEST(DynK2Tree, SetClearExamples) {
  DynK2Tree t(4, 2);
  EXPECT_TRUE(t.set(3, 2));
  EXPECT_FALSE(t.set(3, 2));
  for (std::uint64_t r = 1; r <= 4; ++r) {
    for (std::uint64_t c = 1; c <= 4; ++c) EXPECT_EQ(t.cell(r, c), r == 3 && c == 2);
  }
  EXPECT_TRUE(t.clear(3, 2));
  EXPECT_FALSE(t.clear(3, 2));
  EXPECT_EQ(t.tree_string(), "0000");
  EXPECT_EQ(t.leaf_string(), "");
  EXPECT_EQ(t.freeze(), K2Tree::build(4, {}, 2));
  EXPECT_THROW(t.set(5, 1), OutOfRange);
}

TEST(DynK2Tree, GrowPreservesCells) {
  DynK2Tree t(2, 2);
  t.set(1, 2);
  t.set(2, 1);
  t.grow();
  EXPECT_EQ(t.side(), 4u);
  EXPECT_EQ(t.range(1, 4, 1, 4), (std::vector<Cell>{{1, 2}, {2, 1}}));
  t.set(4, 4);
  t.ensure_side(20);
  EXPECT_EQ(t.side(), 32u);
  const std::vector<Cell> expect = {{1, 2}, {2, 1}, {4, 4}};
  EXPECT_EQ(t.range(1, 32, 1, 32), expect);
  EXPECT_EQ(t.freeze(), K2Tree::build(32, expect, 2));

  DynK2Tree empty(2, 4);
  empty.grow();
  EXPECT_EQ(empty.side(), 16u);
  EXPECT_EQ(empty.count(), 0u);
}

// Replays random set/clear operations against a plain boolean matrix; after
// every batch the dynamic tree must answer like the matrix and its bit
// layout must equal a static build of the same cell set.
TEST(DynK2Tree, RandomReplayMatchesMatrixOracle) {
  std::mt19937_64 rng(17);
  for (unsigned k : {2u, 4u}) {
    const std::uint64_t n = 64;
    DynK2Tree tree(n, k);
    Matrix m(n, std::vector<bool>(n, false));
    std::uniform_int_distribution<std::uint64_t> pick(1, n);
    for (int op = 1; op <= 500; ++op) {
      const auto r = pick(rng), c = pick(rng);
      if (rng() % 3 == 0) {
        ASSERT_EQ(tree.clear(r, c), static_cast<bool>(m[r - 1][c - 1]));
        m[r - 1][c - 1] = false;
      } else {
        ASSERT_EQ(tree.set(r, c), !m[r - 1][c - 1]);
        m[r - 1][c - 1] = true;
      }
      if (op % 100 == 0) {
        expect_matches_matrix(tree, m, rng);
        const K2Tree frozen = K2Tree::build(n, cells_of(m), k);
        ASSERT_EQ(tree.tree_string(), frozen.tree_bits().to_string());
        ASSERT_EQ(tree.leaf_string(), frozen.leaf_bits().to_string());
        for (const Cell& cell : cells_of(m)) {
          ASSERT_EQ(tree.leaf_ordinal(cell.row, cell.col), frozen.leaf_ordinal(cell.row, cell.col));
        }
      }
    }
  }
}

}  // namespace
}  // namespace attk2
