#pragma once

// Plain description of an attributed multigraph, as read from input files
// or exported from a dynamic store, plus the external-id bookkeeping.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "attk2/attrstore.hpp"
#include "attk2/schema.hpp"
#include "attk2/wire.hpp"

namespace attk2 {

enum class Kind { node, edge };

std::string_view kind_name(Kind kind);

struct TypeDecl {
  Kind kind = Kind::node;
  std::string label;
  std::vector<AttributeDecl> attributes;

  friend bool operator==(const TypeDecl&, const TypeDecl&) = default;
};

struct NodeInput {
  std::string ext;
  std::string label;
  std::vector<AttributeValue> attributes;

  friend bool operator==(const NodeInput&, const NodeInput&) = default;
};

struct EdgeInput {
  std::string ext;
  std::string label;
  std::string source;
  std::string target;
  std::vector<AttributeValue> attributes;

  friend bool operator==(const EdgeInput&, const EdgeInput&) = default;
};

struct GraphInput {
  std::vector<TypeDecl> types;
  std::vector<NodeInput> nodes;
  std::vector<EdgeInput> edges;

  friend bool operator==(const GraphInput&, const GraphInput&) = default;
};

/// Orders external ids numerically when both are plain digit strings, and
/// bytewise otherwise (digit strings first). Ties between numerically equal
/// ids fall back to bytewise order.
bool natural_less(std::string_view a, std::string_view b);

/// Bijection between external ids and internal ids 1..size().
class IdMap {
 public:
  IdMap() = default;
  /// ext_of[i] is the external id of internal id i+1. Throws InputError on duplicates.
  explicit IdMap(std::vector<std::string> ext_of);

  std::size_t size() const { return ext_.size(); }
  /// Throws OutOfRange.
  const std::string& external(std::uint64_t id) const;
  std::optional<std::uint64_t> find(std::string_view ext) const;
  /// Throws NotFound.
  std::uint64_t internal(std::string_view ext) const;

  std::size_t size_in_bytes() const;
  void serialize(wire::Writer& out) const;
  static IdMap deserialize(wire::Reader& in);

  friend bool operator==(const IdMap& a, const IdMap& b) { return a.ext_ == b.ext_; }

 private:
  std::vector<std::string> ext_;
  std::unordered_map<std::string, std::uint64_t> index_;
};

}  // namespace attk2
