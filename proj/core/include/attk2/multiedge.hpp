#pragma once

// Relations layer: a k2-tree over (origin, target) node pairs whose leaf
// ones are decorated with the edge identifiers living in that cell.
//
// Static form: Multi has one bit per leaf one (1 = several edges). For a
// single edge, Last holds the edge id; for a multi-edge, Last holds the
// 1-based position in More of the cell's final id, and the cell's ids
// start right after the previous multi-edge's final position.

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "attk2/bits.hpp"
#include "attk2/k2tree.hpp"
#include "attk2/wire.hpp"

namespace attk2 {

using EdgeId = std::uint64_t;
using NodeId = std::uint64_t;

struct EdgeTriple {
  EdgeId edge = 0;
  NodeId origin = 0;
  NodeId target = 0;

  friend auto operator<=>(const EdgeTriple&, const EdgeTriple&) = default;
};

/// A neighbour together with the (ascending) edge ids connecting it.
struct NeighborEdges {
  NodeId node = 0;
  std::vector<EdgeId> edges;

  friend bool operator==(const NeighborEdges&, const NeighborEdges&) = default;
};

class MultiEdgeK2Tree {
 public:
  MultiEdgeK2Tree() = default;

  /// Throws InputError on duplicate edge ids or endpoints outside 1..n_nodes.
  static MultiEdgeK2Tree build(std::uint64_t n_nodes, std::span<const EdgeTriple> triples, unsigned k = 2);

  std::uint64_t node_capacity() const { return base_.logical_side(); }
  std::size_t edge_count() const { return edge_count_; }
  const K2Tree& base() const { return base_; }
  const BitSequence& multi() const { return multi_; }
  std::vector<std::uint64_t> last() const { return last_.to_vector(); }
  std::vector<std::uint64_t> more() const { return more_.to_vector(); }

  std::vector<EdgeId> edges_between(NodeId u, NodeId v) const;
  /// Targets of u within columns [c1, c2], ascending.
  std::vector<NeighborEdges> neighbors_with_edges(NodeId u, NodeId c1, NodeId c2) const;
  /// Origins of v within rows [r1, r2], ascending.
  std::vector<NeighborEdges> reverse_with_edges(NodeId v, NodeId r1, NodeId r2) const;
  /// Every stored triple, sorted by (origin, target, edge).
  std::vector<EdgeTriple> triples() const;

  std::size_t size_in_bytes() const;

  void serialize(wire::Writer& out) const;
  static MultiEdgeK2Tree deserialize(wire::Reader& in);

  friend bool operator==(const MultiEdgeK2Tree&, const MultiEdgeK2Tree&) = default;

 private:
  std::vector<EdgeId> decode(std::uint64_t leaf) const;

  K2Tree base_;
  BitSequence multi_;
  IntVector last_;
  IntVector more_;
  std::size_t edge_count_ = 0;
};

/// Dynamic relations: a DynK2Tree plus an edge list per occupied cell.
class DynMultiEdge {
 public:
  explicit DynMultiEdge(std::uint64_t n_nodes = 1, unsigned k = 2) : base_(n_nodes, k) {}

  std::uint64_t side() const { return base_.side(); }
  std::size_t edge_count() const { return edge_count_; }
  const DynK2Tree& base() const { return base_; }

  /// Grows the matrix as needed. Throws AlreadyExists if the id is already
  /// on that cell.
  void add_edge(EdgeId e, NodeId u, NodeId v);
  /// Throws NotFound if e is not stored at (u, v).
  void remove_edge(EdgeId e, NodeId u, NodeId v);

  std::vector<EdgeId> edges_between(NodeId u, NodeId v) const;
  std::vector<NeighborEdges> neighbors_with_edges(NodeId u, NodeId c1, NodeId c2) const;
  std::vector<NeighborEdges> reverse_with_edges(NodeId v, NodeId r1, NodeId r2) const;
  std::vector<EdgeTriple> triples() const;

  std::size_t size_in_bytes() const;

 private:
  static std::uint64_t key(NodeId u, NodeId v) { return (u << 32) | v; }
  std::vector<EdgeId> sorted_list(NodeId u, NodeId v) const;

  DynK2Tree base_;
  std::unordered_map<std::uint64_t, std::vector<EdgeId>> lists_;
  std::size_t edge_count_ = 0;
};

}  // namespace attk2
