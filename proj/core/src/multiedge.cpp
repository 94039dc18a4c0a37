#include "attk2/multiedge.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <unordered_set>

#include "attk2/errors.hpp"

namespace attk2 {

namespace {

bool by_cell(const EdgeTriple& a, const EdgeTriple& b) {
  return std::tie(a.origin, a.target, a.edge) < std::tie(b.origin, b.target, b.edge);
}

}  // namespace

MultiEdgeK2Tree MultiEdgeK2Tree::build(std::uint64_t n_nodes, std::span<const EdgeTriple> triples, unsigned k) {
  std::vector<EdgeTriple> sorted(triples.begin(), triples.end());
  {
    std::unordered_set<EdgeId> seen;
    seen.reserve(sorted.size());
    for (const EdgeTriple& t : sorted) {
      if (!seen.insert(t.edge).second) throw InputError("duplicate edge id " + std::to_string(t.edge));
      if (t.origin == 0 || t.origin > n_nodes || t.target == 0 || t.target > n_nodes) {
        throw InputError("edge " + std::to_string(t.edge) + " has an endpoint outside 1.." +
                         std::to_string(n_nodes));
      }
    }
  }
  std::sort(sorted.begin(), sorted.end(), by_cell);

  std::vector<Cell> cells;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i].origin != sorted[i - 1].origin || sorted[i].target != sorted[i - 1].target) {
      cells.push_back({sorted[i].origin, sorted[i].target});
    }
  }

  MultiEdgeK2Tree m;
  m.base_ = K2Tree::build(std::max<std::uint64_t>(n_nodes, 1), cells, k);
  m.edge_count_ = sorted.size();

  // Leaf order is levelwise, not row-major, so place each cell's ids by its
  // leaf ordinal first and then lay out Multi/Last/More in that order.
  std::vector<std::pair<std::size_t, std::size_t>> by_leaf(cells.size());  // [first, last) into sorted
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].origin == sorted[i].origin && sorted[j].target == sorted[i].target) ++j;
    by_leaf[m.base_.leaf_ordinal(sorted[i].origin, sorted[i].target) - 1] = {i, j};
    i = j;
  }

  BitBuilder multi;
  std::vector<std::uint64_t> last, more;
  last.reserve(by_leaf.size());
  for (const auto& [first, end] : by_leaf) {
    if (end - first == 1) {
      multi.push_back(false);
      last.push_back(sorted[first].edge);
    } else {
      multi.push_back(true);
      for (std::size_t i = first; i < end; ++i) more.push_back(sorted[i].edge);
      last.push_back(more.size());
    }
  }
  m.multi_ = std::move(multi).build();
  m.last_ = IntVector(last);
  m.more_ = IntVector(more);
  return m;
}

std::vector<EdgeId> MultiEdgeK2Tree::decode(std::uint64_t leaf) const {
  const std::uint64_t e = last_[leaf - 1];
  if (!multi_.test(leaf - 1)) return {e};
  const std::size_t r = multi_.rank1(leaf);
  const std::uint64_t b = r == 1 ? 1 : last_[multi_.select1(r - 1) - 1] + 1;
  std::vector<EdgeId> out;
  out.reserve(e - b + 1);
  for (std::uint64_t p = b; p <= e; ++p) out.push_back(more_[p - 1]);
  return out;
}

std::vector<EdgeId> MultiEdgeK2Tree::edges_between(NodeId u, NodeId v) const {
  std::vector<EdgeId> out;
  base_.for_each(u, u, v, v, [&](std::uint64_t, std::uint64_t, std::uint64_t leaf) { out = decode(leaf); });
  return out;
}

std::vector<NeighborEdges> MultiEdgeK2Tree::neighbors_with_edges(NodeId u, NodeId c1, NodeId c2) const {
  std::vector<NeighborEdges> out;
  base_.for_each(u, u, c1, c2, [&](std::uint64_t, std::uint64_t c, std::uint64_t leaf) {
    out.push_back({c, decode(leaf)});
  });
  return out;
}

std::vector<NeighborEdges> MultiEdgeK2Tree::reverse_with_edges(NodeId v, NodeId r1, NodeId r2) const {
  std::vector<NeighborEdges> out;
  base_.for_each(r1, r2, v, v, [&](std::uint64_t r, std::uint64_t, std::uint64_t leaf) {
    out.push_back({r, decode(leaf)});
  });
  return out;
}

std::vector<EdgeTriple> MultiEdgeK2Tree::triples() const {
  std::vector<EdgeTriple> out;
  out.reserve(edge_count_);
  const std::uint64_t n = base_.logical_side();
  base_.for_each(1, n, 1, n, [&](std::uint64_t r, std::uint64_t c, std::uint64_t leaf) {
    for (EdgeId e : decode(leaf)) out.push_back({e, r, c});
  });
  std::sort(out.begin(), out.end(), by_cell);
  return out;
}

std::size_t MultiEdgeK2Tree::size_in_bytes() const {
  return base_.size_in_bytes() + multi_.size_in_bytes() + last_.size_in_bytes() + more_.size_in_bytes();
}

void MultiEdgeK2Tree::serialize(wire::Writer& out) const {
  base_.serialize(out);
  multi_.serialize(out);
  out.u64_array(last_.to_vector());
  out.u64_array(more_.to_vector());
}

MultiEdgeK2Tree MultiEdgeK2Tree::deserialize(wire::Reader& in) {
  MultiEdgeK2Tree m;
  m.base_ = K2Tree::deserialize(in);
  m.multi_ = BitSequence::deserialize(in);
  const std::vector<std::uint64_t> last = in.u64_array();
  const std::vector<std::uint64_t> more = in.u64_array();
  if (m.multi_.size() != m.base_.count() || last.size() != m.multi_.size()) {
    throw CorruptFile("relations: Multi/Last length does not match the number of cells");
  }
  std::uint64_t prev_end = 0;
  std::size_t singles = 0;
  for (std::size_t i = 0; i < last.size(); ++i) {
    if (!m.multi_.test(i)) {
      ++singles;
      continue;
    }
    if (last[i] < prev_end + 2 || last[i] > more.size()) {
      throw CorruptFile("relations: multi-edge end position out of order");
    }
    prev_end = last[i];
  }
  if (prev_end != more.size()) throw CorruptFile("relations: trailing More entries");
  m.last_ = IntVector(last);
  m.more_ = IntVector(more);
  m.edge_count_ = singles + more.size();
  return m;
}

void DynMultiEdge::add_edge(EdgeId e, NodeId u, NodeId v) {
  if (u == 0 || v == 0) throw OutOfRange("node ids are 1-based");
  base_.ensure_side(std::max(u, v));
  auto& list = lists_[key(u, v)];
  if (std::find(list.begin(), list.end(), e) != list.end()) {
    throw AlreadyExists("edge " + std::to_string(e) + " already stored");
  }
  if (list.empty()) base_.set(u, v);
  list.push_back(e);
  ++edge_count_;
}

void DynMultiEdge::remove_edge(EdgeId e, NodeId u, NodeId v) {
  const auto it = lists_.find(key(u, v));
  if (it == lists_.end()) throw NotFound("edge " + std::to_string(e) + " not stored between those nodes");
  auto& list = it->second;
  const auto pos = std::find(list.begin(), list.end(), e);
  if (pos == list.end()) throw NotFound("edge " + std::to_string(e) + " not stored between those nodes");
  list.erase(pos);
  --edge_count_;
  if (list.empty()) {
    lists_.erase(it);
    base_.clear(u, v);
  }
}

std::vector<EdgeId> DynMultiEdge::sorted_list(NodeId u, NodeId v) const {
  const auto it = lists_.find(key(u, v));
  if (it == lists_.end()) return {};
  std::vector<EdgeId> out = it->second;
  std::sort(out.begin(), out.end());
  return out;
}

// The dynamic matrix is conceptually unbounded: probes beyond the current
// side see empty rows and columns.
std::vector<EdgeId> DynMultiEdge::edges_between(NodeId u, NodeId v) const {
  if (u == 0 || v == 0) throw OutOfRange("node ids are 1-based");
  return sorted_list(u, v);
}

std::vector<NeighborEdges> DynMultiEdge::neighbors_with_edges(NodeId u, NodeId c1, NodeId c2) const {
  if (u == 0 || c1 == 0 || c1 > c2) throw InputError("invalid row or column range");
  std::vector<NeighborEdges> out;
  if (u > side() || c1 > side()) return out;
  base_.for_each(u, u, c1, std::min(c2, side()), [&](std::uint64_t, std::uint64_t c, std::uint64_t) {
    out.push_back({c, sorted_list(u, c)});
  });
  return out;
}

std::vector<NeighborEdges> DynMultiEdge::reverse_with_edges(NodeId v, NodeId r1, NodeId r2) const {
  if (v == 0 || r1 == 0 || r1 > r2) throw InputError("invalid column or row range");
  std::vector<NeighborEdges> out;
  if (v > side() || r1 > side()) return out;
  base_.for_each(r1, std::min(r2, side()), v, v, [&](std::uint64_t r, std::uint64_t, std::uint64_t) {
    out.push_back({r, sorted_list(r, v)});
  });
  return out;
}

std::vector<EdgeTriple> DynMultiEdge::triples() const {
  std::vector<EdgeTriple> out;
  out.reserve(edge_count_);
  for (const auto& [k, list] : lists_) {
    for (EdgeId e : list) out.push_back({e, k >> 32, k & 0xffffffffu});
  }
  std::sort(out.begin(), out.end(), by_cell);
  return out;
}

std::size_t DynMultiEdge::size_in_bytes() const {
  std::size_t bytes = base_.size_in_bytes();
  for (const auto& [k, list] : lists_) bytes += sizeof(k) + list.capacity() * sizeof(EdgeId);
  return bytes;
}

}  // namespace attk2
