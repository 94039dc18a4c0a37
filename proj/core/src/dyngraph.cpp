#include "attk2/dyngraph.hpp"

#include <algorithm>
#include <set>

#include "attk2/errors.hpp"

namespace attk2 {

DynAttK2Graph::DynAttK2Graph(unsigned k) : relations_(1, k) {}

DynAttK2Graph DynAttK2Graph::from_input(const GraphInput& input, unsigned k) {
  DynAttK2Graph g(k);
  for (const TypeDecl& d : input.types) {
    g.add_type(d.kind, d.label);
    for (const AttributeDecl& a : d.attributes) g.add_attribute(d.kind, d.label, a);
  }
  for (const NodeInput& n : input.nodes) g.add_node(n.label, n.attributes, n.ext);
  for (const EdgeInput& e : input.edges) {
    const auto s = g.find(Kind::node, e.source);
    const auto t = g.find(Kind::node, e.target);
    if (!s || !t) throw ValidationError("edge '" + e.ext + "': unknown endpoint");
    g.add_edge(e.label, *s, *t, e.attributes, e.ext);
  }
  return g;
}

void DynAttK2Graph::add_type(Kind kind, std::string_view label) { schema_of(kind).add_type(label); }

void DynAttK2Graph::add_attribute(Kind kind, std::string_view label, const AttributeDecl& decl) {
  const auto it = dense_by_name_.find(decl.name);
  if (it != dense_by_name_.end() && it->second != decl.dense) {
    throw InputError("attribute '" + decl.name + "' is declared both dense and sparse");
  }
  schema_of(kind).add_attribute(label, decl.name, decl.dense);
  dense_by_name_.emplace(decl.name, decl.dense);
}

void DynAttK2Graph::check_values(Kind kind, std::string_view label,
                                 const std::vector<AttributeValue>& attributes) const {
  const DynTypeTable& tt = schema(kind);
  const std::size_t t = tt.label_index(label);
  std::set<std::string_view> seen;
  for (const AttributeValue& av : attributes) {
    if (!tt.attribute_info(t, av.name)) {
      throw ValidationError("attribute '" + av.name + "' is not declared for type '" + std::string(label) + "'");
    }
    if (!seen.insert(av.name).second) throw ValidationError("attribute '" + av.name + "' given twice");
  }
}

std::uint64_t DynAttK2Graph::register_element(Kind kind, std::string_view label, std::string ext) {
  Side& s = side(kind);
  const std::uint64_t id = schema_of(kind).register_element(label);
  if (ext.empty()) ext = std::to_string(id);
  s.by_ext.emplace(ext, id);
  s.ext.push_back(std::move(ext));
  s.alive.push_back(true);
  return id;
}

NodeId DynAttK2Graph::add_node(std::string_view label, const std::vector<AttributeValue>& attributes,
                               std::string ext) {
  check_values(Kind::node, label, attributes);
  const std::string key = ext.empty() ? std::to_string(nodes_.max_id() + 1) : ext;
  if (node_side_.by_ext.count(key)) throw AlreadyExists("node '" + key + "' already exists");
  const NodeId id = register_element(Kind::node, label, key);
  for (const AttributeValue& av : attributes) node_attrs_.set(nodes_, id, av.name, av.value);
  ++live_nodes_;
  return id;
}

EdgeId DynAttK2Graph::add_edge(std::string_view label, NodeId source, NodeId target,
                               const std::vector<AttributeValue>& attributes, std::string ext) {
  check_values(Kind::edge, label, attributes);
  require_alive(Kind::node, source);
  require_alive(Kind::node, target);
  const std::string key = ext.empty() ? std::to_string(edges_.max_id() + 1) : ext;
  if (edge_side_.by_ext.count(key)) throw AlreadyExists("edge '" + key + "' already exists");
  const EdgeId id = register_element(Kind::edge, label, key);
  relations_.add_edge(id, source, target);
  endpoints_.emplace_back(source, target);
  for (const AttributeValue& av : attributes) edge_attrs_.set(edges_, id, av.name, av.value);
  ++live_edges_;
  return id;
}

void DynAttK2Graph::set_attribute(Kind kind, std::uint64_t id, std::string_view name, std::string_view value) {
  require_alive(kind, id);
  if (!store(kind).set(schema(kind), id, name, value)) {
    throw ValidationError("attribute '" + std::string(name) + "' is not declared for type '" +
                          schema(kind).type_of(id) + "'");
  }
}

void DynAttK2Graph::erase_attribute(Kind kind, std::uint64_t id, std::string_view name) {
  require_alive(kind, id);
  if (!store(kind).erase(schema(kind), id, name)) {
    throw ValidationError("attribute '" + std::string(name) + "' is not declared for type '" +
                          schema(kind).type_of(id) + "'");
  }
}

void DynAttK2Graph::remove_edge(EdgeId id) {
  require_alive(Kind::edge, id);
  const auto [u, v] = endpoints_[id - 1];
  relations_.remove_edge(id, u, v);
  edge_attrs_.clear_element(edges_, id);
  edge_side_.alive[id - 1] = false;
  edge_side_.by_ext.erase(edge_side_.ext[id - 1]);
  --live_edges_;
}

void DynAttK2Graph::remove_node(NodeId id) {
  require_alive(Kind::node, id);
  if (id <= relations_.side()) {
    const std::uint64_t n = relations_.side();
    if (!relations_.neighbors_with_edges(id, 1, n).empty() || !relations_.reverse_with_edges(id, 1, n).empty()) {
      throw InputError("node '" + node_side_.ext[id - 1] + "' still has incident edges");
    }
  }
  node_attrs_.clear_element(nodes_, id);
  node_side_.alive[id - 1] = false;
  node_side_.by_ext.erase(node_side_.ext[id - 1]);
  --live_nodes_;
}

bool DynAttK2Graph::alive(Kind kind, std::uint64_t id) const {
  const Side& s = side(kind);
  return id >= 1 && id <= s.alive.size() && s.alive[id - 1];
}

void DynAttK2Graph::require_alive(Kind kind, std::uint64_t id) const {
  if (!alive(kind, id)) throw NotFound(std::string(kind_name(kind)) + " " + std::to_string(id) + " does not exist");
}

std::optional<std::uint64_t> DynAttK2Graph::find(Kind kind, std::string_view ext) const {
  const Side& s = side(kind);
  const auto it = s.by_ext.find(std::string(ext));
  if (it == s.by_ext.end()) return std::nullopt;
  return it->second;
}

const std::string& DynAttK2Graph::external(Kind kind, std::uint64_t id) const {
  require_alive(kind, id);
  return side(kind).ext[id - 1];
}

std::vector<std::uint64_t> DynAttK2Graph::scan(Kind kind, std::string_view label) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t id : schema(kind).ids_of(label)) {
    if (alive(kind, id)) out.push_back(id);
  }
  return out;
}

const std::string& DynAttK2Graph::get_type(Kind kind, std::uint64_t id) const {
  require_alive(kind, id);
  return schema(kind).type_of(id);
}

AttributeLookup DynAttK2Graph::get_attribute(Kind kind, std::uint64_t id, std::string_view name) const {
  require_alive(kind, id);
  return store(kind).get(schema(kind), id, name);
}

std::optional<std::vector<std::uint64_t>> DynAttK2Graph::select(Kind kind, std::string_view label,
                                                                std::string_view name, std::string_view value) const {
  const DynTypeTable& tt = schema(kind);
  auto ids = store(kind).select(tt, tt.label_index(label), name, value);
  if (ids) std::erase_if(*ids, [&](std::uint64_t id) { return !alive(kind, id); });
  return ids;
}

std::vector<NodeId> DynAttK2Graph::neighbors(std::string_view node_label, NodeId id) const {
  const std::size_t t = nodes_.label_index(node_label);
  require_alive(Kind::node, id);
  std::vector<NodeId> out;
  if (id > relations_.side()) return out;
  for (const NeighborEdges& ne : relations_.neighbors_with_edges(id, 1, relations_.side())) {
    if (nodes_.type_index_of(ne.node) == t) out.push_back(ne.node);
  }
  return out;
}

std::vector<NodeId> DynAttK2Graph::related(std::string_view edge_label, NodeId id) const {
  const std::size_t t = edges_.label_index(edge_label);
  require_alive(Kind::node, id);
  std::vector<NodeId> out;
  if (id > relations_.side()) return out;
  for (const NeighborEdges& ne : relations_.neighbors_with_edges(id, 1, relations_.side())) {
    const bool typed = std::any_of(ne.edges.begin(), ne.edges.end(),
                                   [&](EdgeId e) { return edges_.type_index_of(e) == t; });
    if (typed) out.push_back(ne.node);
  }
  return out;
}

std::vector<EdgeId> DynAttK2Graph::edges_between(NodeId u, NodeId v) const {
  require_alive(Kind::node, u);
  require_alive(Kind::node, v);
  return relations_.edges_between(u, v);
}

std::pair<NodeId, NodeId> DynAttK2Graph::endpoints(EdgeId id) const {
  require_alive(Kind::edge, id);
  return endpoints_[id - 1];
}

GraphInput DynAttK2Graph::freeze() const {
  GraphInput out;
  for (Kind kind : {Kind::node, Kind::edge}) {
    const DynTypeTable& tt = schema(kind);
    for (const std::string& label : tt.labels()) {
      const std::size_t t = tt.label_index(label);
      const auto ids = scan(kind, label);
      if (ids.empty()) continue;
      out.types.push_back({kind, label, tt.attributes(t)});
    }
  }
  auto values_of = [&](Kind kind, std::uint64_t id) {
    std::vector<AttributeValue> values;
    const DynTypeTable& tt = schema(kind);
    for (const AttributeDecl& a : tt.attributes(tt.type_index_of(id))) {
      AttributeLookup v = store(kind).get(tt, id, a.name);
      if (v.is_found()) values.push_back({a.name, std::move(v.value)});
    }
    return values;
  };
  for (std::uint64_t id = 1; id <= nodes_.max_id(); ++id) {
    if (!alive(Kind::node, id)) continue;
    out.nodes.push_back({node_side_.ext[id - 1], nodes_.type_of(id), values_of(Kind::node, id)});
  }
  for (std::uint64_t id = 1; id <= edges_.max_id(); ++id) {
    if (!alive(Kind::edge, id)) continue;
    const auto [u, v] = endpoints_[id - 1];
    out.edges.push_back({edge_side_.ext[id - 1], edges_.type_of(id), node_side_.ext[u - 1], node_side_.ext[v - 1],
                         values_of(Kind::edge, id)});
  }
  return out;
}

std::size_t DynAttK2Graph::size_in_bytes() const {
  return nodes_.size_in_bytes() + edges_.size_in_bytes() + node_attrs_.size_in_bytes() +
         edge_attrs_.size_in_bytes() + relations_.size_in_bytes();
}

}  // namespace attk2
