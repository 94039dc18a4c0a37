#pragma once

// Query scripts: one `OP<TAB>arg…` line per query, external ids throughout.
// Execution resolves ids once and answers in internal ids; formatting
// translates back and sorts by natural external-id order.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "attk2/attrstore.hpp"
#include "attk2/model.hpp"

namespace attk2 {

class AttK2Graph;
class DynAttK2Graph;

enum class Op {
  get_node_types,
  get_edge_types,
  scan_nodes,
  scan_edges,
  get_node_type,
  get_edge_type,
  get_node_attribute,
  get_edge_attribute,
  select_nodes,
  select_edges,
  neighbors,
  related,
};

std::string_view op_name(Op op);
std::optional<Op> parse_op(std::string_view name);
std::size_t op_arity(Op op);

struct Query {
  Op op = Op::get_node_types;
  std::vector<std::string> args;  // unescaped
};

/// Throws InputError for an unknown operation, wrong arity or bad escape.
Query parse_query(std::string_view line);
/// Skips blank lines; errors are prefixed with the 1-based line number.
std::vector<Query> parse_script(std::istream& in);
std::string format_query(const Query& q);

/// What execution needs from a store, in internal ids.
class QueryTarget {
 public:
  virtual ~QueryTarget() = default;

  virtual std::optional<std::uint64_t> resolve(Kind kind, std::string_view ext) const = 0;
  virtual const std::string& external(Kind kind, std::uint64_t id) const = 0;
  virtual bool has_label(Kind kind, std::string_view label) const = 0;

  virtual std::vector<std::string> get_types(Kind kind) const = 0;
  virtual std::vector<std::uint64_t> scan(Kind kind, std::string_view label) const = 0;
  virtual std::string_view get_type(Kind kind, std::uint64_t id) const = 0;
  virtual AttributeLookup get_attribute(Kind kind, std::uint64_t id, std::string_view name) const = 0;
  virtual std::optional<std::vector<std::uint64_t>> select(Kind kind, std::string_view label, std::string_view name,
                                                           std::string_view value) const = 0;
  virtual std::vector<std::uint64_t> neighbors(std::string_view node_label, std::uint64_t id) const = 0;
  virtual std::vector<std::uint64_t> related(std::string_view edge_label, std::uint64_t id) const = 0;
};

class StaticTarget final : public QueryTarget {
 public:
  explicit StaticTarget(const AttK2Graph& g) : g_(g) {}

  std::optional<std::uint64_t> resolve(Kind kind, std::string_view ext) const override;
  const std::string& external(Kind kind, std::uint64_t id) const override;
  bool has_label(Kind kind, std::string_view label) const override;
  std::vector<std::string> get_types(Kind kind) const override;
  std::vector<std::uint64_t> scan(Kind kind, std::string_view label) const override;
  std::string_view get_type(Kind kind, std::uint64_t id) const override;
  AttributeLookup get_attribute(Kind kind, std::uint64_t id, std::string_view name) const override;
  std::optional<std::vector<std::uint64_t>> select(Kind kind, std::string_view label, std::string_view name,
                                                   std::string_view value) const override;
  std::vector<std::uint64_t> neighbors(std::string_view node_label, std::uint64_t id) const override;
  std::vector<std::uint64_t> related(std::string_view edge_label, std::uint64_t id) const override;

 private:
  const AttK2Graph& g_;
};

class DynamicTarget final : public QueryTarget {
 public:
  explicit DynamicTarget(const DynAttK2Graph& g) : g_(g) {}

  std::optional<std::uint64_t> resolve(Kind kind, std::string_view ext) const override;
  const std::string& external(Kind kind, std::uint64_t id) const override;
  bool has_label(Kind kind, std::string_view label) const override;
  std::vector<std::string> get_types(Kind kind) const override;
  std::vector<std::uint64_t> scan(Kind kind, std::string_view label) const override;
  std::string_view get_type(Kind kind, std::uint64_t id) const override;
  AttributeLookup get_attribute(Kind kind, std::uint64_t id, std::string_view name) const override;
  std::optional<std::vector<std::uint64_t>> select(Kind kind, std::string_view label, std::string_view name,
                                                   std::string_view value) const override;
  std::vector<std::uint64_t> neighbors(std::string_view node_label, std::uint64_t id) const override;
  std::vector<std::uint64_t> related(std::string_view edge_label, std::uint64_t id) const override;

 private:
  const DynAttK2Graph& g_;
};

/// Raw answer: either strings (labels, a value) or ids of one kind.
struct QueryResult {
  Kind id_kind = Kind::node;
  bool has_ids = false;
  std::vector<std::uint64_t> ids;
  std::vector<std::string> strings;

  std::size_t size() const { return has_ids ? ids.size() : strings.size(); }
};

/// Unknown ids or labels and undefined or absent values give an empty result.
QueryResult execute(const QueryTarget& target, const Query& q);

/// Tab-joined answer line, `-` when empty. Ids are printed as external ids
/// in natural order; strings are escaped, and a literal "-" becomes "\-".
std::string format_result(const QueryTarget& target, const QueryResult& r);

/// parse + execute + format for a whole script.
std::vector<std::string> run_script(const QueryTarget& target, const std::vector<Query>& script);

}  // namespace attk2
