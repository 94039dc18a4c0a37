#include "attk2/query.hpp"

#include <algorithm>
#include <array>
#include <istream>

#include "attk2/dyngraph.hpp"
#include "attk2/errors.hpp"
#include "attk2/graph.hpp"
#include "attk2/text.hpp"

namespace attk2 {

namespace {

struct OpInfo {
  Op op;
  std::string_view name;
  std::size_t arity;
};

constexpr std::array<OpInfo, 12> kOps{{
    {Op::get_node_types, "GetNodeTypes", 0},
    {Op::get_edge_types, "GetEdgeTypes", 0},
    {Op::scan_nodes, "ScanNodes", 1},
    {Op::scan_edges, "ScanEdges", 1},
    {Op::get_node_type, "GetNodeType", 1},
    {Op::get_edge_type, "GetEdgeType", 1},
    {Op::get_node_attribute, "GetNodeAttribute", 2},
    {Op::get_edge_attribute, "GetEdgeAttribute", 2},
    {Op::select_nodes, "SelectNodes", 3},
    {Op::select_edges, "SelectEdges", 3},
    {Op::neighbors, "Neighbors", 2},
    {Op::related, "Related", 2},
}};

const OpInfo& info(Op op) { return kOps[static_cast<std::size_t>(op)]; }

QueryResult strings(std::vector<std::string> s) {
  QueryResult r;
  r.strings = std::move(s);
  return r;
}

QueryResult ids(Kind kind, std::vector<std::uint64_t> v) {
  QueryResult r;
  r.id_kind = kind;
  r.has_ids = true;
  r.ids = std::move(v);
  return r;
}

}  // namespace

std::string_view op_name(Op op) { return info(op).name; }
std::size_t op_arity(Op op) { return info(op).arity; }

std::optional<Op> parse_op(std::string_view name) {
  for (const OpInfo& i : kOps) {
    if (i.name == name) return i.op;
  }
  return std::nullopt;
}

Query parse_query(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto fields = text::split_tabs(line);
  const auto op = parse_op(fields[0]);
  if (!op) throw InputError("unknown operation '" + std::string(fields[0]) + "'");
  if (fields.size() - 1 != op_arity(*op)) {
    throw InputError(std::string(op_name(*op)) + " takes " + std::to_string(op_arity(*op)) + " argument(s), got " +
                     std::to_string(fields.size() - 1));
  }
  Query q{*op, {}};
  for (std::size_t i = 1; i < fields.size(); ++i) q.args.push_back(text::unescape(fields[i]));
  return q;
}

std::vector<Query> parse_script(std::istream& in) {
  std::vector<Query> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty() || line == "\r") continue;
    try {
      out.push_back(parse_query(line));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::string format_query(const Query& q) {
  std::string out(op_name(q.op));
  for (const std::string& a : q.args) {
    out += '\t';
    out += text::escape(a);
  }
  return out;
}

QueryResult execute(const QueryTarget& t, const Query& q) {
  const auto& a = q.args;
  auto element = [&](Kind kind, const std::string& ext) { return t.resolve(kind, ext); };
  switch (q.op) {
    case Op::get_node_types:
      return strings(t.get_types(Kind::node));
    case Op::get_edge_types:
      return strings(t.get_types(Kind::edge));
    case Op::scan_nodes:
    case Op::scan_edges: {
      const Kind kind = q.op == Op::scan_nodes ? Kind::node : Kind::edge;
      if (!t.has_label(kind, a[0])) return ids(kind, {});
      return ids(kind, t.scan(kind, a[0]));
    }
    case Op::get_node_type:
    case Op::get_edge_type: {
      const Kind kind = q.op == Op::get_node_type ? Kind::node : Kind::edge;
      const auto id = element(kind, a[0]);
      if (!id) return strings({});
      return strings({std::string(t.get_type(kind, *id))});
    }
    case Op::get_node_attribute:
    case Op::get_edge_attribute: {
      const Kind kind = q.op == Op::get_node_attribute ? Kind::node : Kind::edge;
      const auto id = element(kind, a[0]);
      if (!id) return strings({});
      AttributeLookup v = t.get_attribute(kind, *id, a[1]);
      if (!v.is_found()) return strings({});
      return strings({std::move(v.value)});
    }
    case Op::select_nodes:
    case Op::select_edges: {
      const Kind kind = q.op == Op::select_nodes ? Kind::node : Kind::edge;
      if (!t.has_label(kind, a[0])) return ids(kind, {});
      auto found = t.select(kind, a[0], a[1], a[2]);
      return ids(kind, found ? std::move(*found) : std::vector<std::uint64_t>{});
    }
    case Op::neighbors:
    case Op::related: {
      const Kind label_kind = q.op == Op::neighbors ? Kind::node : Kind::edge;
      const auto id = element(Kind::node, a[1]);
      if (!id || !t.has_label(label_kind, a[0])) return ids(Kind::node, {});
      return ids(Kind::node, q.op == Op::neighbors ? t.neighbors(a[0], *id) : t.related(a[0], *id));
    }
  }
  throw InputError("unhandled operation");
}

std::string format_result(const QueryTarget& t, const QueryResult& r) {
  std::vector<std::string> fields;
  if (r.has_ids) {
    std::vector<const std::string*> exts;
    exts.reserve(r.ids.size());
    for (std::uint64_t id : r.ids) exts.push_back(&t.external(r.id_kind, id));
    std::sort(exts.begin(), exts.end(), [](const std::string* x, const std::string* y) { return natural_less(*x, *y); });
    for (const std::string* e : exts) fields.push_back(text::escape(*e));
  } else {
    for (const std::string& s : r.strings) fields.push_back(s == "-" ? "\\-" : text::escape(s));
  }
  if (fields.empty()) return "-";
  return text::join_tabs(fields);
}

std::vector<std::string> run_script(const QueryTarget& target, const std::vector<Query>& script) {
  std::vector<std::string> out;
  out.reserve(script.size());
  for (const Query& q : script) out.push_back(format_result(target, execute(target, q)));
  return out;
}

// Static store.

std::optional<std::uint64_t> StaticTarget::resolve(Kind kind, std::string_view ext) const {
  return g_.ids(kind).find(ext);
}
const std::string& StaticTarget::external(Kind kind, std::uint64_t id) const { return g_.ids(kind).external(id); }
bool StaticTarget::has_label(Kind kind, std::string_view label) const {
  return g_.schema(kind).find_label(label).has_value();
}
std::vector<std::string> StaticTarget::get_types(Kind kind) const { return g_.get_types(kind); }
std::vector<std::uint64_t> StaticTarget::scan(Kind kind, std::string_view label) const {
  const IdRange r = g_.scan(kind, label);
  std::vector<std::uint64_t> out;
  out.reserve(r.size());
  for (std::uint64_t id = r.first; id <= r.last; ++id) out.push_back(id);
  return out;
}
std::string_view StaticTarget::get_type(Kind kind, std::uint64_t id) const { return g_.get_type(kind, id); }
AttributeLookup StaticTarget::get_attribute(Kind kind, std::uint64_t id, std::string_view name) const {
  return g_.get_attribute(kind, id, name);
}
std::optional<std::vector<std::uint64_t>> StaticTarget::select(Kind kind, std::string_view label,
                                                               std::string_view name, std::string_view value) const {
  return g_.select(kind, label, name, value);
}
std::vector<std::uint64_t> StaticTarget::neighbors(std::string_view node_label, std::uint64_t id) const {
  return g_.neighbors(node_label, id);
}
std::vector<std::uint64_t> StaticTarget::related(std::string_view edge_label, std::uint64_t id) const {
  return g_.related(edge_label, id);
}

// Dynamic store.

std::optional<std::uint64_t> DynamicTarget::resolve(Kind kind, std::string_view ext) const {
  return g_.find(kind, ext);
}
const std::string& DynamicTarget::external(Kind kind, std::uint64_t id) const { return g_.external(kind, id); }
bool DynamicTarget::has_label(Kind kind, std::string_view label) const {
  return g_.schema(kind).find_label(label).has_value();
}
std::vector<std::string> DynamicTarget::get_types(Kind kind) const { return g_.get_types(kind); }
std::vector<std::uint64_t> DynamicTarget::scan(Kind kind, std::string_view label) const {
  return g_.scan(kind, label);
}
std::string_view DynamicTarget::get_type(Kind kind, std::uint64_t id) const { return g_.get_type(kind, id); }
AttributeLookup DynamicTarget::get_attribute(Kind kind, std::uint64_t id, std::string_view name) const {
  return g_.get_attribute(kind, id, name);
}
std::optional<std::vector<std::uint64_t>> DynamicTarget::select(Kind kind, std::string_view label,
                                                                std::string_view name, std::string_view value) const {
  return g_.select(kind, label, name, value);
}
std::vector<std::uint64_t> DynamicTarget::neighbors(std::string_view node_label, std::uint64_t id) const {
  return g_.neighbors(node_label, id);
}
std::vector<std::uint64_t> DynamicTarget::related(std::string_view edge_label, std::uint64_t id) const {
  return g_.related(edge_label, id);
}

}  // namespace attk2
