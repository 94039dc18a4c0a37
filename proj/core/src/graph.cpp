#include "attk2/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "attk2/errors.hpp"

namespace attk2 {

namespace {

struct KindDecls {
  std::map<std::string, const TypeDecl*, std::less<>> by_label;
};

std::string describe(Kind kind, std::string_view ext) {
  return std::string(kind_name(kind)) + " '" + std::string(ext) + "'";
}

// Checks one element's attribute list against its type declaration.
void check_attributes(Kind kind, std::string_view ext, const TypeDecl& decl,
                      const std::vector<AttributeValue>& attributes) {
  std::set<std::string_view> seen;
  for (const AttributeValue& av : attributes) {
    const bool declared = std::any_of(decl.attributes.begin(), decl.attributes.end(),
                                      [&](const AttributeDecl& a) { return a.name == av.name; });
    if (!declared) {
      throw ValidationError(describe(kind, ext) + ": attribute '" + av.name + "' is not declared for type '" +
                            decl.label + "'");
    }
    if (!seen.insert(av.name).second) {
      throw ValidationError(describe(kind, ext) + ": attribute '" + av.name + "' given twice");
    }
  }
}

// Sorts element indices by (label, external id) and returns them with the
// per-label counts, rejecting duplicates, unknown labels and empty types.
template <class Element>
std::vector<std::size_t> assign_ids(Kind kind, const std::vector<Element>& elements, const KindDecls& decls,
                                    std::vector<TypeTable::TypeSpec>& specs) {
  for (const Element& e : elements) {
    if (!decls.by_label.count(e.label)) {
      throw ValidationError(describe(kind, e.ext) + ": unknown type '" + e.label + "'");
    }
  }
  std::vector<std::size_t> order(elements.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Element& x = elements[a];
    const Element& y = elements[b];
    if (x.label != y.label) return x.label < y.label;
    return natural_less(x.ext, y.ext);
  });
  std::map<std::string, std::uint64_t, std::less<>> counts;
  std::set<std::string_view> exts;
  for (const Element& e : elements) {
    if (!exts.insert(e.ext).second) throw ValidationError("duplicate " + describe(kind, e.ext));
    ++counts[e.label];
  }
  for (const auto& [label, decl] : decls.by_label) {
    const auto it = counts.find(label);
    if (it == counts.end()) {
      throw ValidationError(std::string(kind_name(kind)) + " type '" + label + "' has no elements");
    }
    specs.push_back({label, it->second, decl->attributes});
  }
  return order;
}

}  // namespace

AttK2Graph AttK2Graph::build(const GraphInput& input, unsigned k) {
  KindDecls node_decls, edge_decls;
  std::map<std::string, bool, std::less<>> dense_by_name;
  for (const TypeDecl& decl : input.types) {
    KindDecls& decls = decl.kind == Kind::node ? node_decls : edge_decls;
    if (!decls.by_label.emplace(decl.label, &decl).second) {
      throw ValidationError("duplicate " + std::string(kind_name(decl.kind)) + " type '" + decl.label + "'");
    }
    std::set<std::string_view> names;
    for (const AttributeDecl& a : decl.attributes) {
      if (!names.insert(a.name).second) {
        throw ValidationError("type '" + decl.label + "' declares attribute '" + a.name + "' twice");
      }
      const auto [it, fresh] = dense_by_name.emplace(a.name, a.dense);
      if (!fresh && it->second != a.dense) {
        throw ValidationError("attribute '" + a.name + "' is declared both dense and sparse");
      }
    }
  }

  AttK2Graph g;
  std::vector<TypeTable::TypeSpec> node_specs, edge_specs;
  const auto node_order = assign_ids(Kind::node, input.nodes, node_decls, node_specs);
  const auto edge_order = assign_ids(Kind::edge, input.edges, edge_decls, edge_specs);
  g.nodes_ = TypeTable::build(std::move(node_specs));
  g.edges_ = TypeTable::build(std::move(edge_specs));

  std::vector<std::string> node_ext, edge_ext;
  std::vector<std::vector<AttributeValue>> node_rows, edge_rows;
  for (std::size_t i : node_order) {
    const NodeInput& n = input.nodes[i];
    check_attributes(Kind::node, n.ext, *node_decls.by_label.find(n.label)->second, n.attributes);
    node_ext.push_back(n.ext);
    node_rows.push_back(n.attributes);
  }
  g.node_ids_ = IdMap(std::move(node_ext));

  std::vector<EdgeTriple> triples;
  triples.reserve(input.edges.size());
  for (std::size_t i : edge_order) {
    const EdgeInput& e = input.edges[i];
    check_attributes(Kind::edge, e.ext, *edge_decls.by_label.find(e.label)->second, e.attributes);
    const auto source = g.node_ids_.find(e.source);
    const auto target = g.node_ids_.find(e.target);
    if (!source) throw ValidationError(describe(Kind::edge, e.ext) + ": unknown source node '" + e.source + "'");
    if (!target) throw ValidationError(describe(Kind::edge, e.ext) + ": unknown target node '" + e.target + "'");
    triples.push_back({edge_ext.size() + 1, *source, *target});
    edge_ext.push_back(e.ext);
    edge_rows.push_back(e.attributes);
  }
  g.edge_ids_ = IdMap(std::move(edge_ext));

  g.node_attrs_ = AttributeStore::build(g.nodes_, node_rows);
  g.edge_attrs_ = AttributeStore::build(g.edges_, edge_rows);
  g.relations_ = MultiEdgeK2Tree::build(g.nodes_.max_id(), triples, k);
  return g;
}

AttK2Graph AttK2Graph::from_parts(TypeTable node_schema, TypeTable edge_schema, AttributeStore node_attrs,
                                  AttributeStore edge_attrs, MultiEdgeK2Tree relations, IdMap node_ids,
                                  IdMap edge_ids) {
  if (node_ids.size() != node_schema.max_id() || edge_ids.size() != edge_schema.max_id()) {
    throw CorruptFile("id maps do not match the element counts");
  }
  if (relations.node_capacity() != std::max<std::uint64_t>(node_schema.max_id(), 1)) {
    throw CorruptFile("relations matrix does not match the node count");
  }
  if (relations.edge_count() != edge_schema.max_id()) throw CorruptFile("relations edge count mismatch");
  std::vector<bool> seen(edge_schema.max_id() + 1, false);
  for (const EdgeTriple& t : relations.triples()) {
    if (t.edge == 0 || t.edge > edge_schema.max_id() || seen[t.edge]) {
      throw CorruptFile("relations hold an invalid or repeated edge id");
    }
    seen[t.edge] = true;
  }
  AttK2Graph g;
  g.nodes_ = std::move(node_schema);
  g.edges_ = std::move(edge_schema);
  g.node_attrs_ = std::move(node_attrs);
  g.edge_attrs_ = std::move(edge_attrs);
  g.relations_ = std::move(relations);
  g.node_ids_ = std::move(node_ids);
  g.edge_ids_ = std::move(edge_ids);
  return g;
}

AttributeLookup AttK2Graph::get_attribute(Kind kind, std::uint64_t id, std::string_view name) const {
  return attributes(kind).get(schema(kind), id, name);
}

std::optional<std::vector<std::uint64_t>> AttK2Graph::select(Kind kind, std::string_view label,
                                                             std::string_view name, std::string_view value) const {
  const TypeTable& tt = schema(kind);
  return attributes(kind).select(tt, tt.label_index(label), name, value);
}

void AttK2Graph::check_node(NodeId id) const {
  if (id == 0 || id > nodes_.max_id()) {
    throw OutOfRange("node id " + std::to_string(id) + " outside 1.." + std::to_string(nodes_.max_id()));
  }
}

std::vector<NodeId> AttK2Graph::neighbors(std::string_view node_label, NodeId id) const {
  const IdRange range = nodes_.ids_of(node_label);
  check_node(id);
  std::vector<NodeId> out;
  for (const NeighborEdges& ne : relations_.neighbors_with_edges(id, range.first, range.last)) out.push_back(ne.node);
  return out;
}

std::vector<NodeId> AttK2Graph::related(std::string_view edge_label, NodeId id) const {
  const IdRange range = edges_.ids_of(edge_label);
  check_node(id);
  std::vector<NodeId> out;
  for (const NeighborEdges& ne : relations_.neighbors_with_edges(id, 1, nodes_.max_id())) {
    const bool typed = std::any_of(ne.edges.begin(), ne.edges.end(),
                                   [&](EdgeId e) { return e >= range.first && e <= range.last; });
    if (typed) out.push_back(ne.node);
  }
  return out;
}

GraphInput AttK2Graph::export_input() const {
  GraphInput out;
  for (Kind kind : {Kind::node, Kind::edge}) {
    const TypeTable& tt = schema(kind);
    for (std::size_t t = 0; t < tt.label_count(); ++t) {
      TypeDecl decl{kind, tt.label(t), {}};
      for (std::size_t a = 0; a < tt.attributes(t).size(); ++a) {
        decl.attributes.push_back({tt.attributes(t)[a], tt.dense_flags(t).test(a)});
      }
      out.types.push_back(std::move(decl));
    }
  }
  auto values_of = [&](Kind kind, std::uint64_t id) {
    std::vector<AttributeValue> values;
    const TypeTable& tt = schema(kind);
    for (const auto& name : tt.attributes(tt.type_index_of(id))) {
      AttributeLookup v = get_attribute(kind, id, name);
      if (v.is_found()) values.push_back({name, std::move(v.value)});
    }
    return values;
  };
  for (std::uint64_t id = 1; id <= node_count(); ++id) {
    out.nodes.push_back({node_ids_.external(id), get_type(Kind::node, id), values_of(Kind::node, id)});
  }
  std::vector<EdgeTriple> triples = relations_.triples();
  std::sort(triples.begin(), triples.end(), [](const EdgeTriple& a, const EdgeTriple& b) { return a.edge < b.edge; });
  for (const EdgeTriple& t : triples) {
    out.edges.push_back({edge_ids_.external(t.edge), get_type(Kind::edge, t.edge), node_ids_.external(t.origin),
                         node_ids_.external(t.target), values_of(Kind::edge, t.edge)});
  }
  return out;
}

SizeReport AttK2Graph::size_report() const {
  return {nodes_.size_in_bytes() + edges_.size_in_bytes(), node_attrs_.size_in_bytes() + edge_attrs_.size_in_bytes(),
          relations_.size_in_bytes(), node_ids_.size_in_bytes() + edge_ids_.size_in_bytes()};
}

}  // namespace attk2
