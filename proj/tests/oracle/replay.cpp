#include "oracle/replay.hpp"

#include <algorithm>
#include <map>

#include "attk2/generator.hpp"

namespace attk2::oracle {

namespace {

template <class T>
void shuffle(std::vector<T>& v, Xorshift64Star& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

template <class T>
const T& pick(Xorshift64Star& rng, const std::vector<T>& v) {
  return v[rng.below(v.size())];
}

void erase_value(std::vector<std::string>& v, const std::string& x) {
  const auto it = std::find(v.begin(), v.end(), x);
  *it = v.back();
  v.pop_back();
}

}  // namespace

void replay_insertions(const GraphInput& input, std::uint64_t seed, DynAttK2Graph& dyn, NaiveStore& naive) {
  Xorshift64Star rng(seed);
  for (const TypeDecl& d : input.types) {
    dyn.add_type(d.kind, d.label);
    naive.add_type(d.kind, d.label);
    for (const AttributeDecl& a : d.attributes) {
      dyn.add_attribute(d.kind, d.label, a);
      naive.add_attribute(d.kind, d.label, a.name, a.dense);
    }
  }
  std::vector<std::size_t> node_order(input.nodes.size()), edge_order(input.edges.size());
  for (std::size_t i = 0; i < node_order.size(); ++i) node_order[i] = i;
  for (std::size_t i = 0; i < edge_order.size(); ++i) edge_order[i] = i;
  shuffle(node_order, rng);
  shuffle(edge_order, rng);

  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < node_order.size(); ++i) position[input.nodes[node_order[i]].ext] = i;
  std::vector<std::vector<std::size_t>> ready(node_order.size());
  for (std::size_t e : edge_order) {
    const EdgeInput& edge = input.edges[e];
    ready[std::max(position.at(edge.source), position.at(edge.target))].push_back(e);
  }
  for (std::size_t i = 0; i < node_order.size(); ++i) {
    const NodeInput& n = input.nodes[node_order[i]];
    dyn.add_node(n.label, n.attributes, n.ext);
    naive.add_node(n.ext, n.label, n.attributes);
    for (std::size_t e : ready[i]) {
      const EdgeInput& edge = input.edges[e];
      dyn.add_edge(edge.label, *dyn.find(Kind::node, edge.source), *dyn.find(Kind::node, edge.target),
                   edge.attributes, edge.ext);
      naive.add_edge(edge.ext, edge.label, edge.source, edge.target, edge.attributes);
    }
  }
}

ReplayStats replay_updates(const GraphInput& input, std::uint64_t seed, std::size_t count, DynAttK2Graph& dyn,
                           NaiveStore& naive) {
  Xorshift64Star rng(seed);
  ReplayStats stats;
  std::map<std::pair<Kind, std::string>, std::vector<std::string>> declared;
  std::vector<std::string> node_labels, edge_labels;
  for (const TypeDecl& d : input.types) {
    (d.kind == Kind::node ? node_labels : edge_labels).push_back(d.label);
    auto& names = declared[{d.kind, d.label}];
    for (const AttributeDecl& a : d.attributes) names.push_back(a.name);
  }
  std::vector<std::string> nodes = naive.live(Kind::node), edges = naive.live(Kind::edge);
  std::size_t fresh = 0;
  const std::string prefix = "x" + std::to_string(seed) + ".";

  auto random_value = [&] { return "u" + std::to_string(rng.below(12)); };
  auto remove_edge = [&](const std::string& ext) {
    dyn.remove_edge(*dyn.find(Kind::edge, ext));
    naive.remove_edge(ext);
    erase_value(edges, ext);
    ++stats.edge_removals;
  };

  for (std::size_t step = 0; step < count; ++step) {
    const std::uint64_t roll = rng.below(100);
    if (roll < 40) {
      const Kind kind = (edges.empty() || rng.chance(1, 2)) ? Kind::node : Kind::edge;
      if (kind == Kind::node && nodes.empty()) continue;
      const std::string& ext = pick(rng, kind == Kind::node ? nodes : edges);
      const auto& names = declared[{kind, naive.get_type(kind, ext)}];
      if (names.empty()) continue;
      const std::string& name = pick(rng, names);
      const std::uint64_t id = *dyn.find(kind, ext);
      if (roll < 30) {
        const std::string value = random_value();
        dyn.set_attribute(kind, id, name, value);
        naive.set_attribute(kind, ext, name, value);
        ++stats.attribute_sets;
      } else {
        dyn.erase_attribute(kind, id, name);
        naive.erase_attribute(kind, ext, name);
        ++stats.attribute_erases;
      }
    } else if (roll < 65) {
      if (!edges.empty()) remove_edge(pick(rng, edges));
    } else if (roll < 85) {
      if (nodes.empty() || edge_labels.empty()) continue;
      const std::string& label = pick(rng, edge_labels);
      const std::string source = pick(rng, nodes), target = pick(rng, nodes);
      std::vector<AttributeValue> values;
      for (const auto& name : declared[{Kind::edge, label}]) {
        if (rng.chance(1, 2)) values.push_back({name, random_value()});
      }
      const std::string ext = prefix + std::to_string(++fresh);
      dyn.add_edge(label, *dyn.find(Kind::node, source), *dyn.find(Kind::node, target), values, ext);
      naive.add_edge(ext, label, source, target, values);
      edges.push_back(ext);
      ++stats.edge_adds;
    } else if (roll < 95) {
      if (node_labels.empty()) continue;
      const std::string& label = pick(rng, node_labels);
      std::vector<AttributeValue> values;
      for (const auto& name : declared[{Kind::node, label}]) {
        if (rng.chance(1, 2)) values.push_back({name, random_value()});
      }
      const std::string ext = prefix + std::to_string(++fresh);
      dyn.add_node(label, values, ext);
      naive.add_node(ext, label, values);
      nodes.push_back(ext);
      ++stats.node_adds;
    } else {
      if (nodes.empty()) continue;
      const std::string victim = pick(rng, nodes);
      std::vector<std::string> incident;
      for (const std::string& e : edges) {
        const auto [u, v] = dyn.endpoints(*dyn.find(Kind::edge, e));
        if (dyn.external(Kind::node, u) == victim || dyn.external(Kind::node, v) == victim) incident.push_back(e);
      }
      for (const std::string& e : incident) remove_edge(e);
      dyn.remove_node(*dyn.find(Kind::node, victim));
      naive.remove_node(victim);
      erase_value(nodes, victim);
      ++stats.node_removals;
    }
  }
  return stats;
}

}  // namespace attk2::oracle
