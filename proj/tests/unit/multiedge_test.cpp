#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "attk2/errors.hpp"
#include "attk2/multiedge.hpp"

namespace attk2 {
namespace {

// Relations of the running example: (edge, origin, target).
const std::vector<EdgeTriple> kRelations = {{1, 3, 1}, {2, 5, 1}, {3, 5, 2}, {4, 4, 5},
                                            {5, 4, 5}, {6, 3, 2}, {7, 4, 2}};

using Ids = std::vector<EdgeId>;

// Linear scan over a triple list.
Ids scan_between(const std::vector<EdgeTriple>& ts, NodeId u, NodeId v) {
  Ids out;
  for (const auto& t : ts) {
    if (t.origin == u && t.target == v) out.push_back(t.edge);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NeighborEdges> scan_row(const std::vector<EdgeTriple>& ts, NodeId u, NodeId c1, NodeId c2) {
  std::map<NodeId, Ids> m;
  for (const auto& t : ts) {
    if (t.origin == u && t.target >= c1 && t.target <= c2) m[t.target].push_back(t.edge);
  }
  std::vector<NeighborEdges> out;
  for (auto& [v, ids] : m) {
    std::sort(ids.begin(), ids.end());
    out.push_back({v, ids});
  }
  return out;
}

std::vector<NeighborEdges> scan_col(const std::vector<EdgeTriple>& ts, NodeId v, NodeId r1, NodeId r2) {
  std::map<NodeId, Ids> m;
  for (const auto& t : ts) {
    if (t.target == v && t.origin >= r1 && t.origin <= r2) m[t.origin].push_back(t.edge);
  }
  std::vector<NeighborEdges> out;
  for (auto& [u, ids] : m) {
    std::sort(ids.begin(), ids.end());
    out.push_back({u, ids});
  }
  return out;
}

std::vector<EdgeTriple> canonical(std::vector<EdgeTriple> ts) {
  std::sort(ts.begin(), ts.end(), [](const EdgeTriple& a, const EdgeTriple& b) {
    return std::tie(a.origin, a.target, a.edge) < std::tie(b.origin, b.target, b.edge);
  });
  return ts;
}

std::vector<EdgeTriple> random_multigraph(std::mt19937_64& rng, NodeId n, std::size_t edges) {
  std::vector<EdgeTriple> ts;
  std::uniform_int_distribution<NodeId> node(1, n);
  EdgeId next = 1;
  while (ts.size() < edges) {
    const NodeId u = node(rng), v = node(rng);
    const std::size_t copies = 1 + rng() % 5;
    for (std::size_t c = 0; c < copies && ts.size() < edges; ++c) ts.push_back({next++, u, v});
  }
  std::shuffle(ts.begin(), ts.end(), rng);
  // Scatter the ids so cells don't hold consecutive runs.
  std::vector<EdgeId> ids(ts.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i + 1;
  std::shuffle(ids.begin(), ids.end(), rng);
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i].edge = ids[i];
  return ts;
}

TEST(MultiEdge, RunningExampleLayout) {
  const auto m = MultiEdgeK2Tree::build(5, kRelations);
  EXPECT_EQ(m.base().count(), 6u);
  EXPECT_EQ(m.multi().to_string(), "000100");
  EXPECT_EQ(m.more(), (Ids{4, 5}));
  EXPECT_EQ(m.last(), (Ids{1, 6, 7, 2, 2, 3}));
  EXPECT_EQ(m.edge_count(), 7u);
}

TEST(MultiEdge, RunningExampleQueries) {
  const auto m = MultiEdgeK2Tree::build(5, kRelations);
  EXPECT_EQ(m.edges_between(4, 5), (Ids{4, 5}));
  EXPECT_EQ(m.edges_between(3, 1), (Ids{1}));
  EXPECT_TRUE(m.edges_between(1, 3).empty());
  EXPECT_EQ(m.neighbors_with_edges(4, 3, 5), (std::vector<NeighborEdges>{{5, {4, 5}}}));
  EXPECT_EQ(m.neighbors_with_edges(3, 1, 5), (std::vector<NeighborEdges>{{1, {1}}, {2, {6}}}));
  EXPECT_EQ(m.reverse_with_edges(1, 1, 5), (std::vector<NeighborEdges>{{3, {1}}, {5, {2}}}));
  EXPECT_THROW(m.edges_between(6, 1), OutOfRange);
}

TEST(MultiEdge, SmallCases) {
  const auto empty = MultiEdgeK2Tree::build(4, {});
  EXPECT_EQ(empty.edge_count(), 0u);
  EXPECT_TRUE(empty.multi().empty());
  EXPECT_TRUE(empty.neighbors_with_edges(2, 1, 4).empty());
  EXPECT_TRUE(empty.reverse_with_edges(3, 1, 4).empty());

  const std::vector<EdgeTriple> parallel = {{11, 2, 1}, {12, 2, 1}, {13, 2, 1}};
  const auto p = MultiEdgeK2Tree::build(2, parallel);
  EXPECT_EQ(p.multi().to_string(), "1");
  EXPECT_EQ(p.last(), (Ids{3}));
  EXPECT_EQ(p.more(), (Ids{11, 12, 13}));
  EXPECT_EQ(p.edges_between(2, 1), (Ids{11, 12, 13}));

  const std::vector<EdgeTriple> dup = {{1, 1, 2}, {1, 2, 1}};
  EXPECT_THROW(MultiEdgeK2Tree::build(2, dup), InputError);
  const std::vector<EdgeTriple> outside = {{1, 1, 3}};
  EXPECT_THROW(MultiEdgeK2Tree::build(2, outside), InputError);
}

TEST(MultiEdge, RandomMultigraphsRoundTripAndQueries) {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 6; ++round) {
    const NodeId n = 1 + rng() % 200;
    const auto ts = random_multigraph(rng, n, 1 + rng() % 2000);
    for (unsigned k : {2u, 4u}) {
      const auto m = MultiEdgeK2Tree::build(n, ts, k);
      ASSERT_EQ(m.triples(), canonical(ts));
      // Leaf i of the decoration is exactly the k2 leaf ordinal.
      const std::set<std::pair<NodeId, NodeId>> cells = [&] {
        std::set<std::pair<NodeId, NodeId>> s;
        for (const auto& t : ts) s.insert({t.origin, t.target});
        return s;
      }();
      const auto multi = m.multi();
      for (const auto& [u, v] : cells) {
        const auto ordinal = m.base().leaf_ordinal(u, v);
        ASSERT_EQ(multi.access(ordinal), scan_between(ts, u, v).size() > 1);
      }
      std::uniform_int_distribution<NodeId> node(1, n);
      for (int probe = 0; probe < 100; ++probe) {
        const NodeId u = node(rng), v = node(rng);
        ASSERT_EQ(m.edges_between(u, v), scan_between(ts, u, v));
        NodeId a = node(rng), b = node(rng);
        if (a > b) std::swap(a, b);
        ASSERT_EQ(m.neighbors_with_edges(u, a, b), scan_row(ts, u, a, b));
        ASSERT_EQ(m.reverse_with_edges(v, a, b), scan_col(ts, v, a, b));
      }
    }
  }
}

TEST(MultiEdge, SerializationRoundTripAndCorruption) {
  const auto m = MultiEdgeK2Tree::build(5, kRelations);
  wire::Writer w;
  m.serialize(w);
  wire::Reader r(w.buffer());
  const auto back = MultiEdgeK2Tree::deserialize(r);
  EXPECT_TRUE(r.at_end());
  EXPECT_EQ(back.triples(), m.triples());
  wire::Writer again;
  back.serialize(again);
  EXPECT_EQ(again.buffer(), w.buffer());

  // Drop the last More entry: the multi-edge end position now overruns More.
  auto bytes = w.buffer();
  bytes.resize(bytes.size() - 8);
  bytes[bytes.size() - 16] = 1;  // More length prefix 2 -> 1
  wire::Reader bad(bytes);
  EXPECT_THROW(MultiEdgeK2Tree::deserialize(bad), CorruptFile);
}

TEST(DynMultiEdge, Examples) {
  DynMultiEdge d(4);
  d.add_edge(1, 2, 3);
  d.remove_edge(1, 2, 3);
  EXPECT_EQ(d.edge_count(), 0u);
  EXPECT_EQ(d.base().count(), 0u);
  EXPECT_TRUE(d.triples().empty());

  d.add_edge(2, 2, 3);
  d.add_edge(1, 2, 3);
  EXPECT_EQ(d.edges_between(2, 3), (Ids{1, 2}));
  EXPECT_THROW(d.add_edge(1, 2, 3), AlreadyExists);
  EXPECT_THROW(d.remove_edge(9, 2, 3), NotFound);
  EXPECT_THROW(d.remove_edge(1, 3, 2), NotFound);

  d.add_edge(3, 40, 1);
  EXPECT_GE(d.side(), 40u);
  EXPECT_EQ(d.reverse_with_edges(1, 1, 100), (std::vector<NeighborEdges>{{40, {3}}}));
  EXPECT_TRUE(d.edges_between(500, 1).empty());
}

// Random add/remove replay against a plain triple multiset; the frozen
// equivalent must agree on every pair.
TEST(DynMultiEdge, RandomReplayMatchesTripleOracle) {
  std::mt19937_64 rng(8);
  DynMultiEdge d(1);
  std::vector<EdgeTriple> live;
  EdgeId next = 1;
  const NodeId n = 60;
  std::uniform_int_distribution<NodeId> node(1, n);
  for (int step = 0; step < 1000; ++step) {
    if (live.empty() || rng() % 3 != 0) {
      // Bias towards existing pairs to create parallel edges.
      NodeId u = node(rng), v = node(rng);
      if (!live.empty() && rng() % 2 == 0) {
        const auto& t = live[rng() % live.size()];
        u = t.origin;
        v = t.target;
      }
      d.add_edge(next, u, v);
      live.push_back({next++, u, v});
    } else {
      const std::size_t i = rng() % live.size();
      d.remove_edge(live[i].edge, live[i].origin, live[i].target);
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
    }
    ASSERT_EQ(d.edge_count(), live.size());
    const NodeId u = node(rng), v = node(rng);
    ASSERT_EQ(d.edges_between(u, v), scan_between(live, u, v));
  }
  ASSERT_EQ(d.triples(), canonical(live));
  const auto frozen = MultiEdgeK2Tree::build(n, live);
  for (NodeId u = 1; u <= n; ++u) {
    ASSERT_EQ(d.neighbors_with_edges(u, 1, n), frozen.neighbors_with_edges(u, 1, n));
    ASSERT_EQ(d.reverse_with_edges(u, 1, n), frozen.reverse_with_edges(u, 1, n));
  }
}

TEST(DynMultiEdge, RandomOrderInsertionAgreesWithStaticBuild) {
  std::mt19937_64 rng(19);
  const auto ts = random_multigraph(rng, 150, 1500);
  const auto m = MultiEdgeK2Tree::build(150, ts);
  for (int order = 0; order < 3; ++order) {
    auto shuffled = ts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    DynMultiEdge d;
    for (const auto& t : shuffled) d.add_edge(t.edge, t.origin, t.target);
    for (NodeId u = 1; u <= 150; ++u) {
      for (NodeId v = 1; v <= 150; ++v) ASSERT_EQ(d.edges_between(u, v), m.edges_between(u, v));
    }
  }
}

}  // namespace
}  // namespace attk2
