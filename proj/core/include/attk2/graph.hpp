#pragma once

// Static attributed graph: schema, data and relations layers for nodes and
// edges, queried through internal ids.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "attk2/attrstore.hpp"
#include "attk2/model.hpp"
#include "attk2/multiedge.hpp"
#include "attk2/schema.hpp"

namespace attk2 {

struct SizeReport {
  std::size_t schema = 0;
  std::size_t data = 0;
  std::size_t relations = 0;
  std::size_t id_maps = 0;

  std::size_t total() const { return schema + data + relations + id_maps; }
};

class AttK2Graph {
 public:
  AttK2Graph() = default;

  /// Internal ids follow (label, external id) order within each kind.
  /// Throws ValidationError naming the offending element or declaration.
  static AttK2Graph build(const GraphInput& input, unsigned k = 2);

  /// Reassembles a graph from its layers; throws CorruptFile if they do not fit.
  static AttK2Graph from_parts(TypeTable node_schema, TypeTable edge_schema, AttributeStore node_attrs,
                               AttributeStore edge_attrs, MultiEdgeK2Tree relations, IdMap node_ids, IdMap edge_ids);

  std::uint64_t node_count() const { return nodes_.max_id(); }
  std::uint64_t edge_count() const { return edges_.max_id(); }

  std::vector<std::string> get_types(Kind kind) const { return schema(kind).labels(); }
  /// Throws NotFound for an unknown label.
  IdRange scan(Kind kind, std::string_view label) const { return schema(kind).ids_of(label); }
  /// Throws OutOfRange.
  const std::string& get_type(Kind kind, std::uint64_t id) const { return schema(kind).type_of(id); }
  /// Throws OutOfRange; undefined when the element's type lacks the attribute.
  AttributeLookup get_attribute(Kind kind, std::uint64_t id, std::string_view name) const;
  /// Throws NotFound for an unknown label; nullopt when the label lacks the attribute.
  std::optional<std::vector<std::uint64_t>> select(Kind kind, std::string_view label, std::string_view name,
                                                   std::string_view value) const;
  /// Targets of `id` whose type is `node_label`, ascending.
  std::vector<NodeId> neighbors(std::string_view node_label, NodeId id) const;
  /// Targets of `id` reached through at least one edge of type `edge_label`, ascending.
  std::vector<NodeId> related(std::string_view edge_label, NodeId id) const;
  std::vector<EdgeId> edges_between(NodeId u, NodeId v) const { return relations_.edges_between(u, v); }

  const TypeTable& schema(Kind kind) const { return kind == Kind::node ? nodes_ : edges_; }
  const AttributeStore& attributes(Kind kind) const { return kind == Kind::node ? node_attrs_ : edge_attrs_; }
  const MultiEdgeK2Tree& relations() const { return relations_; }
  const IdMap& ids(Kind kind) const { return kind == Kind::node ? node_ids_ : edge_ids_; }

  /// Description that rebuilds an equal graph.
  GraphInput export_input() const;
  SizeReport size_report() const;

  friend bool operator==(const AttK2Graph&, const AttK2Graph&) = default;

 private:
  void check_node(NodeId id) const;

  TypeTable nodes_;
  TypeTable edges_;
  AttributeStore node_attrs_;
  AttributeStore edge_attrs_;
  MultiEdgeK2Tree relations_;
  IdMap node_ids_;
  IdMap edge_ids_;
};

}  // namespace attk2
