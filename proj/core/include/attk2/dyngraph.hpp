#pragma once

// Dynamic attributed graph: mutable schema, data and relations layers.
// Ids are handed out sequentially per kind and never reused; removed
// elements leave tombstones.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "attk2/attrstore.hpp"
#include "attk2/model.hpp"
#include "attk2/multiedge.hpp"
#include "attk2/schema.hpp"

namespace attk2 {

class DynAttK2Graph {
 public:
  explicit DynAttK2Graph(unsigned k = 2);

  /// Replays declarations, then nodes, then edges, in the given order.
  static DynAttK2Graph from_input(const GraphInput& input, unsigned k = 2);

  /// Throws AlreadyExists.
  void add_type(Kind kind, std::string_view label);
  /// Throws NotFound, AlreadyExists, or InputError when the dense flag
  /// disagrees with an earlier declaration of the same name (either kind).
  void add_attribute(Kind kind, std::string_view label, const AttributeDecl& decl);

  /// An empty ext becomes the decimal id. Throws NotFound for an unknown
  /// label, ValidationError for undeclared attributes, AlreadyExists for a
  /// taken external id. Nothing changes on error.
  NodeId add_node(std::string_view label, const std::vector<AttributeValue>& attributes = {}, std::string ext = {});
  /// As add_node; additionally throws NotFound for a missing endpoint.
  EdgeId add_edge(std::string_view label, NodeId source, NodeId target,
                  const std::vector<AttributeValue>& attributes = {}, std::string ext = {});

  /// Throws NotFound for a dead id, ValidationError for an undeclared name.
  void set_attribute(Kind kind, std::uint64_t id, std::string_view name, std::string_view value);
  void erase_attribute(Kind kind, std::uint64_t id, std::string_view name);

  /// Throws NotFound.
  void remove_edge(EdgeId id);
  /// Throws NotFound, or InputError while edges still touch the node.
  void remove_node(NodeId id);

  bool alive(Kind kind, std::uint64_t id) const;
  std::size_t live_count(Kind kind) const { return kind == Kind::node ? live_nodes_ : live_edges_; }
  std::optional<std::uint64_t> find(Kind kind, std::string_view ext) const;
  /// Throws NotFound for a dead id.
  const std::string& external(Kind kind, std::uint64_t id) const;

  std::vector<std::string> get_types(Kind kind) const { return schema(kind).labels(); }
  /// Live ids of the label, ascending. Throws NotFound.
  std::vector<std::uint64_t> scan(Kind kind, std::string_view label) const;
  const std::string& get_type(Kind kind, std::uint64_t id) const;
  AttributeLookup get_attribute(Kind kind, std::uint64_t id, std::string_view name) const;
  std::optional<std::vector<std::uint64_t>> select(Kind kind, std::string_view label, std::string_view name,
                                                   std::string_view value) const;
  std::vector<NodeId> neighbors(std::string_view node_label, NodeId id) const;
  std::vector<NodeId> related(std::string_view edge_label, NodeId id) const;
  std::vector<EdgeId> edges_between(NodeId u, NodeId v) const;
  std::pair<NodeId, NodeId> endpoints(EdgeId id) const;

  const DynTypeTable& schema(Kind kind) const { return kind == Kind::node ? nodes_ : edges_; }
  const DynMultiEdge& relations() const { return relations_; }

  /// Live content as a static-build description; types with no live
  /// element are dropped.
  GraphInput freeze() const;
  std::size_t size_in_bytes() const;

 private:
  DynTypeTable& schema_of(Kind kind) { return kind == Kind::node ? nodes_ : edges_; }
  DynAttributeStore& store(Kind kind) { return kind == Kind::node ? node_attrs_ : edge_attrs_; }
  const DynAttributeStore& store(Kind kind) const { return kind == Kind::node ? node_attrs_ : edge_attrs_; }
  void require_alive(Kind kind, std::uint64_t id) const;
  void check_values(Kind kind, std::string_view label, const std::vector<AttributeValue>& attributes) const;
  std::uint64_t register_element(Kind kind, std::string_view label, std::string ext);

  struct Side {
    std::vector<std::string> ext;  // index id-1
    std::vector<bool> alive;
    std::unordered_map<std::string, std::uint64_t> by_ext;
  };
  Side& side(Kind kind) { return kind == Kind::node ? node_side_ : edge_side_; }
  const Side& side(Kind kind) const { return kind == Kind::node ? node_side_ : edge_side_; }

  DynTypeTable nodes_;
  DynTypeTable edges_;
  DynAttributeStore node_attrs_;
  DynAttributeStore edge_attrs_;
  DynMultiEdge relations_;
  std::map<std::string, bool, std::less<>> dense_by_name_;
  std::vector<std::pair<NodeId, NodeId>> endpoints_;
  Side node_side_;
  Side edge_side_;
  std::size_t live_nodes_ = 0;
  std::size_t live_edges_ = 0;
};

}  // namespace attk2
