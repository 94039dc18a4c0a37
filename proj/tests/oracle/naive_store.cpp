#include "oracle/naive_store.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace attk2::oracle {

namespace {

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

NaiveStore NaiveStore::from_input(const GraphInput& input) {
  NaiveStore s;
  for (const TypeDecl& d : input.types) {
    s.add_type(d.kind, d.label);
    for (const AttributeDecl& a : d.attributes) s.add_attribute(d.kind, d.label, a.name, a.dense);
  }
  for (const NodeInput& n : input.nodes) s.add_node(n.ext, n.label, n.attributes);
  for (const EdgeInput& e : input.edges) s.add_edge(e.ext, e.label, e.source, e.target, e.attributes);
  return s;
}

const NaiveStore::Type* NaiveStore::find_type(Kind kind, const std::string& label) const {
  for (const Type& t : types_) {
    if (t.kind == kind && t.label == label) return &t;
  }
  return nullptr;
}

bool NaiveStore::declares(Kind kind, const std::string& label, const std::string& name) const {
  const Type* t = find_type(kind, label);
  if (!t) return false;
  for (const auto& [n, dense] : t->attributes) {
    if (n == name) return true;
  }
  return false;
}

const NaiveStore::Element& NaiveStore::element(Kind kind, const std::string& ext) const {
  for (const Element& e : kind == Kind::node ? nodes_ : edges_) {
    if (e.ext == ext && e.alive) return e;
  }
  throw std::out_of_range("oracle: no live element " + ext);
}

NaiveStore::Element& NaiveStore::element(Kind kind, const std::string& ext) {
  return const_cast<Element&>(static_cast<const NaiveStore&>(*this).element(kind, ext));
}

void NaiveStore::add_type(Kind kind, const std::string& label) {
  if (find_type(kind, label)) throw std::invalid_argument("oracle: type exists");
  types_.push_back({kind, label, {}});
}

void NaiveStore::add_attribute(Kind kind, const std::string& label, const std::string& name, bool dense) {
  for (Type& t : types_) {
    if (t.kind == kind && t.label == label) {
      t.attributes.emplace_back(name, dense);
      return;
    }
  }
  throw std::invalid_argument("oracle: unknown type " + label);
}

void NaiveStore::add_node(const std::string& ext, const std::string& label,
                          const std::vector<AttributeValue>& attrs) {
  if (!find_type(Kind::node, label)) throw std::invalid_argument("oracle: unknown node type " + label);
  Element e{ext, label, {}, {}, {}, true};
  for (const auto& av : attrs) {
    if (!declares(Kind::node, label, av.name)) throw std::invalid_argument("oracle: undeclared attribute");
    e.values[av.name] = av.value;
  }
  nodes_.push_back(std::move(e));
}

void NaiveStore::add_edge(const std::string& ext, const std::string& label, const std::string& source,
                          const std::string& target, const std::vector<AttributeValue>& attrs) {
  if (!find_type(Kind::edge, label)) throw std::invalid_argument("oracle: unknown edge type " + label);
  element(Kind::node, source);
  element(Kind::node, target);
  Element e{ext, label, source, target, {}, true};
  for (const auto& av : attrs) {
    if (!declares(Kind::edge, label, av.name)) throw std::invalid_argument("oracle: undeclared attribute");
    e.values[av.name] = av.value;
  }
  edges_.push_back(std::move(e));
}

void NaiveStore::set_attribute(Kind kind, const std::string& ext, const std::string& name,
                               const std::string& value) {
  Element& e = element(kind, ext);
  if (!declares(kind, e.label, name)) throw std::invalid_argument("oracle: undeclared attribute");
  e.values[name] = value;
}

void NaiveStore::erase_attribute(Kind kind, const std::string& ext, const std::string& name) {
  Element& e = element(kind, ext);
  if (!declares(kind, e.label, name)) throw std::invalid_argument("oracle: undeclared attribute");
  e.values.erase(name);
}

void NaiveStore::remove_edge(const std::string& ext) { element(Kind::edge, ext).alive = false; }

void NaiveStore::remove_node(const std::string& ext) {
  for (const Element& e : edges_) {
    if (e.alive && (e.source == ext || e.target == ext)) throw std::invalid_argument("oracle: node has edges");
  }
  element(Kind::node, ext).alive = false;
}

bool NaiveStore::has(Kind kind, const std::string& ext) const {
  for (const Element& e : kind == Kind::node ? nodes_ : edges_) {
    if (e.ext == ext && e.alive) return true;
  }
  return false;
}

std::vector<std::string> NaiveStore::live(Kind kind) const {
  std::vector<std::string> out;
  for (const Element& e : kind == Kind::node ? nodes_ : edges_) {
    if (e.alive) out.push_back(e.ext);
  }
  return sorted(out);
}

std::vector<std::string> NaiveStore::get_types(Kind kind) const {
  std::vector<std::string> out;
  for (const Type& t : types_) {
    if (t.kind == kind) out.push_back(t.label);
  }
  return sorted(out);
}

std::vector<std::string> NaiveStore::scan(Kind kind, const std::string& label) const {
  std::vector<std::string> out;
  for (const Element& e : kind == Kind::node ? nodes_ : edges_) {
    if (e.alive && e.label == label) out.push_back(e.ext);
  }
  return sorted(out);
}

std::string NaiveStore::get_type(Kind kind, const std::string& ext) const { return element(kind, ext).label; }

AttributeLookup NaiveStore::get_attribute(Kind kind, const std::string& ext, const std::string& name) const {
  const Element& e = element(kind, ext);
  if (!declares(kind, e.label, name)) return AttributeLookup::undefined();
  const auto it = e.values.find(name);
  return it == e.values.end() ? AttributeLookup::absent() : AttributeLookup::found(it->second);
}

std::optional<std::vector<std::string>> NaiveStore::select(Kind kind, const std::string& label,
                                                           const std::string& name, const std::string& value) const {
  if (!declares(kind, label, name)) return std::nullopt;
  std::vector<std::string> out;
  for (const Element& e : kind == Kind::node ? nodes_ : edges_) {
    if (!e.alive || e.label != label) continue;
    const auto it = e.values.find(name);
    if (it != e.values.end() && it->second == value) out.push_back(e.ext);
  }
  return sorted(out);
}

std::vector<std::string> NaiveStore::neighbors(const std::string& node_label, const std::string& ext) const {
  element(Kind::node, ext);
  std::set<std::string> out;
  for (const Element& e : edges_) {
    if (e.alive && e.source == ext && element(Kind::node, e.target).label == node_label) out.insert(e.target);
  }
  return {out.begin(), out.end()};
}

std::vector<std::string> NaiveStore::related(const std::string& edge_label, const std::string& ext) const {
  element(Kind::node, ext);
  std::set<std::string> out;
  for (const Element& e : edges_) {
    if (e.alive && e.source == ext && e.label == edge_label) out.insert(e.target);
  }
  return {out.begin(), out.end()};
}

std::vector<std::string> NaiveStore::edges_between(const std::string& source, const std::string& target) const {
  std::vector<std::string> out;
  for (const Element& e : edges_) {
    if (e.alive && e.source == source && e.target == target) out.push_back(e.ext);
  }
  return sorted(out);
}

std::vector<std::string> NaiveStore::attributes_of(Kind kind, const std::string& label) const {
  std::vector<std::string> out;
  if (const Type* t = find_type(kind, label)) {
    for (const auto& [name, dense] : t->attributes) out.push_back(name);
  }
  return out;
}

}  // namespace attk2::oracle
