#include "attk2/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "attk2/errors.hpp"
#include "attk2/text.hpp"

namespace attk2 {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

template <class T>
const T& pick(Xorshift64Star& rng, const std::vector<T>& v) {
  return v[rng.below(v.size())];
}

std::string line(std::initializer_list<std::string_view> fields) {
  std::string out;
  bool first = true;
  for (std::string_view f : fields) {
    if (!first) out += '\t';
    out += f;
    first = false;
  }
  return out;
}

std::string esc(std::string_view s) { return text::escape(s); }

}  // namespace

Xorshift64Star::Xorshift64Star(std::uint64_t seed) : state_(splitmix64(seed)) {
  if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t Xorshift64Star::next() {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1DULL;
}

std::uint64_t Xorshift64Star::below(std::uint64_t n) {
  if (n == 0) throw InputError("empty range");
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do x = next();
  while (x >= limit);
  return x % n;
}

Generated generate(const GenParams& p) {
  if (p.node_types == 0 && p.nodes > 0) throw InputError("nodes need at least one node type");
  if (p.node_types > p.nodes) throw InputError("more node types than nodes");
  if (p.edge_types > p.edges) throw InputError("more edge types than edges");
  if (p.edges > 0 && (p.edge_types == 0 || p.nodes == 0)) throw InputError("edges need nodes and edge types");

  Xorshift64Star rng(p.seed);
  Generated out;
  GraphInput& g = out.graph;

  std::vector<std::string> node_labels, edge_labels;
  for (unsigned t = 0; t < p.node_types; ++t) node_labels.push_back("N" + std::to_string(t));
  for (unsigned t = 0; t < p.edge_types; ++t) edge_labels.push_back("E" + std::to_string(t));

  // Contiguous label blocks over node ids 1..nodes.
  std::set<std::uint64_t> cuts;
  while (cuts.size() + 1 < p.node_types) cuts.insert(rng.between(1, p.nodes - 1));
  std::vector<std::uint64_t> block_end(cuts.begin(), cuts.end());
  block_end.push_back(p.nodes);

  std::vector<std::size_t> node_label_of(p.nodes + 1, 0);
  std::vector<std::uint64_t> label_size(p.node_types, 0);
  for (std::uint64_t v = 1, b = 0; v <= p.nodes; ++v) {
    while (v > block_end[b]) ++b;
    node_label_of[v] = b;
    ++label_size[b];
  }

  std::vector<std::pair<std::uint64_t, std::uint64_t>> ends(p.edges);
  std::vector<std::size_t> edge_label_of(p.edges);
  std::vector<std::uint64_t> edge_label_size(p.edge_types, 0);
  constexpr std::uint64_t window = 8;
  for (std::uint64_t i = 0; i < p.edges; ++i) {
    edge_label_of[i] = i < p.edge_types ? i : rng.below(p.edge_types);
    ++edge_label_size[edge_label_of[i]];
    if (i > 0 && (i == 1 || rng.chance(1, 10))) {
      ends[i] = ends[i - 1];
      continue;
    }
    const std::uint64_t u = rng.between(1, p.nodes);
    std::uint64_t v;
    if (rng.chance(1, 10)) {
      v = rng.between(1, p.nodes);
    } else {
      const std::uint64_t lo = u > window ? u - window : 1;
      const std::uint64_t hi = std::min(p.nodes, u + window);
      v = rng.between(lo, hi);
    }
    ends[i] = {u, v};
  }

  // Attributes alternate between node and edge kinds; each is declared by a
  // random non-empty subset of that kind's labels.
  struct Attr {
    std::string name;
    Kind kind;
    std::vector<bool> declared;
    std::uint64_t domain;
  };
  std::vector<Attr> attrs;
  for (unsigned a = 0; a < p.attrs; ++a) {
    const Kind kind = (a % 2 == 0 || p.edge_types == 0) ? Kind::node : Kind::edge;
    const std::size_t n_labels = kind == Kind::node ? p.node_types : p.edge_types;
    if (n_labels == 0) continue;
    Attr at{"a" + std::to_string(a), kind, std::vector<bool>(n_labels, false), 0};
    for (std::size_t t = 0; t < n_labels; ++t) at.declared[t] = rng.chance(1, 2);
    at.declared[rng.below(n_labels)] = true;
    at.domain = rng.chance(1, 2) ? rng.between(2, 6) : std::max<std::uint64_t>(p.nodes, p.edges);
    attrs.push_back(std::move(at));
  }

  auto make_value = [&](const Attr& at) {
    std::string v = "v" + std::to_string(rng.below(at.domain));
    if (at.domain > 6 && rng.chance(1, 50)) v += " x=\ty";
    return v;
  };

  std::vector<std::vector<AttributeValue>> node_values(p.nodes + 1), edge_values(p.edges);
  for (const Attr& at : attrs) {
    std::set<std::string> distinct;
    std::uint64_t carriers = 0;
    if (at.kind == Kind::node) {
      for (std::uint64_t v = 1; v <= p.nodes; ++v) {
        if (!at.declared[node_label_of[v]]) continue;
        ++carriers;
        if (rng.chance(9, 10)) {
          node_values[v].push_back({at.name, make_value(at)});
          distinct.insert(node_values[v].back().value);
        }
      }
    } else {
      for (std::uint64_t i = 0; i < p.edges; ++i) {
        if (!at.declared[edge_label_of[i]]) continue;
        ++carriers;
        if (rng.chance(9, 10)) {
          edge_values[i].push_back({at.name, make_value(at)});
          distinct.insert(edge_values[i].back().value);
        }
      }
    }
    const bool dense = static_cast<double>(distinct.size()) <= std::sqrt(static_cast<double>(carriers));
    const auto& labels = at.kind == Kind::node ? node_labels : edge_labels;
    for (std::size_t t = 0; t < labels.size(); ++t) {
      if (!at.declared[t]) continue;
      auto it = std::find_if(g.types.begin(), g.types.end(),
                             [&](const TypeDecl& d) { return d.kind == at.kind && d.label == labels[t]; });
      if (it == g.types.end()) {
        g.types.push_back({at.kind, labels[t], {}});
        it = g.types.end() - 1;
      }
      it->attributes.push_back({at.name, dense});
    }
  }
  for (Kind kind : {Kind::node, Kind::edge}) {
    for (const std::string& label : kind == Kind::node ? node_labels : edge_labels) {
      const bool known = std::any_of(g.types.begin(), g.types.end(),
                                     [&](const TypeDecl& d) { return d.kind == kind && d.label == label; });
      if (!known) g.types.push_back({kind, label, {}});
    }
  }

  for (std::uint64_t v = 1; v <= p.nodes; ++v) {
    g.nodes.push_back({std::to_string(v), node_labels[node_label_of[v]], std::move(node_values[v])});
  }
  for (std::uint64_t i = 0; i < p.edges; ++i) {
    g.edges.push_back({std::to_string(i + 1), edge_labels[edge_label_of[i]], std::to_string(ends[i].first),
                       std::to_string(ends[i].second), std::move(edge_values[i])});
  }

  out.scripts = generate_queries(g, p.queries_per_set, rng.next());
  return out;
}

std::vector<QueryScript> generate_queries(const GraphInput& g, std::size_t per_set, std::uint64_t seed) {
  Xorshift64Star rng(seed);
  std::map<std::pair<Kind, std::string>, std::vector<std::string>> declared;
  std::vector<std::string> node_labels, edge_labels, all_names;
  for (const TypeDecl& d : g.types) {
    (d.kind == Kind::node ? node_labels : edge_labels).push_back(d.label);
    auto& names = declared[{d.kind, d.label}];
    for (const AttributeDecl& a : d.attributes) {
      names.push_back(a.name);
      all_names.push_back(a.name);
    }
  }
  if (all_names.empty()) all_names.push_back("none");

  std::vector<QueryScript> out(8);
  const char* names[] = {"q1_node_type", "q2_edge_type", "q3_node_attribute", "q4_edge_attribute",
                         "q5_select_nodes", "q6_select_edges", "q7_neighbors", "q8_related"};
  for (std::size_t s = 0; s < 8; ++s) out[s].name = names[s];

  auto attribute_query = [&](Kind kind, const std::string& ext, const std::string& label) {
    const auto& own = declared[{kind, label}];
    const std::string& name = (!own.empty() && rng.chance(3, 4)) ? pick(rng, own) : pick(rng, all_names);
    return line({kind == Kind::node ? "GetNodeAttribute" : "GetEdgeAttribute", esc(ext), esc(name)});
  };
  auto select_query = [&](Kind kind, const std::string& label, const std::vector<AttributeValue>& values) {
    const char* op = kind == Kind::node ? "SelectNodes" : "SelectEdges";
    if (!values.empty() && rng.chance(9, 10)) {
      const AttributeValue& av = pick(rng, values);
      return line({op, esc(label), esc(av.name), esc(av.value)});
    }
    const auto& own = declared[{kind, label}];
    const std::string& name = own.empty() ? pick(rng, all_names) : pick(rng, own);
    return line({op, esc(label), esc(name), "v" + std::to_string(rng.below(8))});
  };

  for (std::size_t q = 0; q < per_set; ++q) {
    if (!g.nodes.empty()) {
      const NodeInput& n = pick(rng, g.nodes);
      out[0].lines.push_back(line({"GetNodeType", esc(n.ext)}));
      const NodeInput& n2 = pick(rng, g.nodes);
      out[2].lines.push_back(attribute_query(Kind::node, n2.ext, n2.label));
      const NodeInput& n3 = pick(rng, g.nodes);
      out[4].lines.push_back(select_query(Kind::node, n3.label, n3.attributes));
      const NodeInput& n4 = pick(rng, g.nodes);
      out[6].lines.push_back(line({"Neighbors", esc(pick(rng, node_labels)), esc(n4.ext)}));
    }
    if (!g.edges.empty()) {
      const EdgeInput& e = pick(rng, g.edges);
      out[1].lines.push_back(line({"GetEdgeType", esc(e.ext)}));
      const EdgeInput& e2 = pick(rng, g.edges);
      out[3].lines.push_back(attribute_query(Kind::edge, e2.ext, e2.label));
      const EdgeInput& e3 = pick(rng, g.edges);
      out[5].lines.push_back(select_query(Kind::edge, e3.label, e3.attributes));
      const EdgeInput& e4 = pick(rng, g.edges);
      const std::string& source = rng.chance(3, 4) ? e4.source : pick(rng, g.nodes).ext;
      out[7].lines.push_back(line({"Related", esc(pick(rng, edge_labels)), esc(source)}));
    }
  }
  return out;
}

}  // namespace attk2
