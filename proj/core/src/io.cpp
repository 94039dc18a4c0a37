#include "attk2/io.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "attk2/errors.hpp"
#include "attk2/text.hpp"
#include "attk2/wire.hpp"

namespace attk2::io {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'A', 'T', 'T', 'K', '2', 'T', 'R', 'E'};
constexpr std::size_t kSectionCount = 6;
constexpr std::size_t kHeaderSize = 8 + 4 + 4 + kSectionCount * (4 + 8 + 8);

// Per-file line reader that prefixes errors with "file:line: ".
class LineSource {
 public:
  LineSource(std::istream& in, std::string file) : in_(in), file_(std::move(file)) {}

  bool next(std::vector<std::string_view>& fields) {
    while (std::getline(in_, line_)) {
      ++number_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      if (line_.empty()) continue;
      fields = text::split_tabs(line_);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw InputError(file_ + ":" + std::to_string(number_) + ": " + message);
  }

  std::string field(std::string_view raw) const {
    try {
      return text::unescape(raw);
    } catch (const InputError& e) {
      fail(e.what());
    }
  }

 private:
  std::istream& in_;
  std::string file_;
  std::string line_;
  std::size_t number_ = 0;
};

struct Declared {
  std::map<std::string, std::set<std::string>, std::less<>> node, edge;
  std::map<std::string, std::set<std::string>, std::less<>>& of(Kind k) { return k == Kind::node ? node : edge; }
};

std::vector<AttributeValue> parse_values(const LineSource& src, std::span<const std::string_view> fields,
                                         const std::set<std::string>& declared, const std::string& label) {
  std::vector<AttributeValue> out;
  std::set<std::string> seen;
  for (std::string_view f : fields) {
    std::optional<std::pair<std::string, std::string>> kv;
    try {
      kv = text::split_assignment(f);
    } catch (const InputError& e) {
      src.fail(e.what());
    }
    if (!kv) src.fail("expected name=value, got '" + std::string(f) + "'");
    if (!declared.count(kv->first)) {
      src.fail("attribute '" + kv->first + "' is not declared for type '" + label + "'");
    }
    if (!seen.insert(kv->first).second) src.fail("attribute '" + kv->first + "' given twice");
    out.push_back({std::move(kv->first), std::move(kv->second)});
  }
  return out;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

}  // namespace

GraphInput parse_input(std::istream& schema, std::istream& nodes, std::istream& edges) {
  GraphInput out;
  Declared declared;
  std::map<std::string, bool, std::less<>> dense_by_name;
  std::vector<std::string_view> f;

  LineSource s(schema, "schema.tsv");
  while (s.next(f)) {
    Kind kind;
    if (f[0] == "NODE") {
      kind = Kind::node;
    } else if (f[0] == "EDGE") {
      kind = Kind::edge;
    } else {
      s.fail("expected NODE or EDGE, got '" + std::string(f[0]) + "'");
    }
    if (f.size() < 2 || f[1].empty()) s.fail("missing type label");
    TypeDecl decl{kind, s.field(f[1]), {}};
    if (declared.of(kind).count(decl.label)) s.fail("type '" + decl.label + "' declared twice");
    auto& names = declared.of(kind)[decl.label];
    for (std::size_t i = 2; i < f.size(); ++i) {
      const std::size_t colon = f[i].rfind(':');
      if (colon == std::string_view::npos || colon == 0) s.fail("expected name:s or name:d, got '" + std::string(f[i]) + "'");
      const std::string_view flag = f[i].substr(colon + 1);
      if (flag != "s" && flag != "d") s.fail("attribute kind must be s or d, got '" + std::string(flag) + "'");
      AttributeDecl a{s.field(f[i].substr(0, colon)), flag == "d"};
      if (!names.insert(a.name).second) s.fail("attribute '" + a.name + "' declared twice");
      const auto [it, fresh] = dense_by_name.emplace(a.name, a.dense);
      if (!fresh && it->second != a.dense) s.fail("attribute '" + a.name + "' is declared both dense and sparse");
      decl.attributes.push_back(std::move(a));
    }
    out.types.push_back(std::move(decl));
  }

  std::set<std::string> node_ext;
  LineSource n(nodes, "nodes.tsv");
  while (n.next(f)) {
    if (f.size() < 2) n.fail("expected ext<TAB>label");
    NodeInput node{n.field(f[0]), n.field(f[1]), {}};
    if (node.ext.empty()) n.fail("empty node id");
    const auto it = declared.node.find(node.label);
    if (it == declared.node.end()) n.fail("unknown node type '" + node.label + "'");
    if (!node_ext.insert(node.ext).second) n.fail("duplicate node id '" + node.ext + "'");
    node.attributes = parse_values(n, std::span(f).subspan(2), it->second, node.label);
    out.nodes.push_back(std::move(node));
  }

  std::set<std::string> edge_ext;
  LineSource e(edges, "edges.tsv");
  while (e.next(f)) {
    if (f.size() < 4) e.fail("expected ext<TAB>label<TAB>source<TAB>target");
    EdgeInput edge{e.field(f[0]), e.field(f[1]), e.field(f[2]), e.field(f[3]), {}};
    if (edge.ext.empty()) e.fail("empty edge id");
    const auto it = declared.edge.find(edge.label);
    if (it == declared.edge.end()) e.fail("unknown edge type '" + edge.label + "'");
    if (!edge_ext.insert(edge.ext).second) e.fail("duplicate edge id '" + edge.ext + "'");
    if (!node_ext.count(edge.source)) e.fail("unknown source node '" + edge.source + "'");
    if (!node_ext.count(edge.target)) e.fail("unknown target node '" + edge.target + "'");
    edge.attributes = parse_values(e, std::span(f).subspan(4), it->second, edge.label);
    out.edges.push_back(std::move(edge));
  }
  return out;
}

GraphInput load_input(const fs::path& dir) {
  auto schema = open_input(dir / "schema.tsv");
  auto nodes = open_input(dir / "nodes.tsv");
  auto edges = open_input(dir / "edges.tsv");
  return parse_input(schema, nodes, edges);
}

void write_input(const fs::path& dir, const GraphInput& input) {
  fs::create_directories(dir);
  std::ostringstream schema, nodes, edges;
  auto values = [](std::ostringstream& out, const std::vector<AttributeValue>& attrs) {
    for (const AttributeValue& av : attrs) out << '\t' << text::escape(av.name) << '=' << text::escape(av.value);
    out << '\n';
  };
  for (const TypeDecl& d : input.types) {
    schema << (d.kind == Kind::node ? "NODE" : "EDGE") << '\t' << text::escape(d.label);
    for (const AttributeDecl& a : d.attributes) schema << '\t' << text::escape(a.name) << ':' << (a.dense ? 'd' : 's');
    schema << '\n';
  }
  for (const NodeInput& node : input.nodes) {
    nodes << text::escape(node.ext) << '\t' << text::escape(node.label);
    values(nodes, node.attributes);
  }
  for (const EdgeInput& edge : input.edges) {
    edges << text::escape(edge.ext) << '\t' << text::escape(edge.label) << '\t' << text::escape(edge.source) << '\t'
          << text::escape(edge.target);
    values(edges, edge.attributes);
  }
  write_file_atomic(dir / "schema.tsv", schema.str());
  write_file_atomic(dir / "nodes.tsv", nodes.str());
  write_file_atomic(dir / "edges.tsv", edges.str());
}

std::vector<std::uint8_t> encode(const AttK2Graph& g) {
  std::vector<wire::Writer> parts(kSectionCount);
  g.schema(Kind::node).serialize(parts[0]);
  g.schema(Kind::edge).serialize(parts[1]);
  g.attributes(Kind::node).serialize(parts[2]);
  g.attributes(Kind::edge).serialize(parts[3]);
  g.relations().serialize(parts[4]);
  g.ids(Kind::node).serialize(parts[5]);
  g.ids(Kind::edge).serialize(parts[5]);

  wire::Writer out;
  out.bytes(std::span(reinterpret_cast<const std::uint8_t*>(kMagic), sizeof kMagic));
  out.u32(kFormatVersion);
  out.u32(kSectionCount);
  std::uint64_t offset = kHeaderSize;
  for (std::size_t i = 0; i < kSectionCount; ++i) {
    out.u32(static_cast<std::uint32_t>(i + 1));
    out.u64(offset);
    out.u64(parts[i].size());
    offset += parts[i].size();
  }
  for (const wire::Writer& p : parts) out.bytes(p.buffer());
  return out.take();
}

AttK2Graph decode(std::span<const std::uint8_t> bytes) {
  wire::Reader header(bytes);
  const auto magic = header.bytes(sizeof kMagic);
  if (std::memcmp(magic.data(), kMagic, sizeof kMagic) != 0) throw CorruptFile("not an attk2 store (bad magic)");
  const std::uint32_t version = header.u32();
  if (version != kFormatVersion) throw CorruptFile("unsupported format version " + std::to_string(version));
  if (header.u32() != kSectionCount) throw CorruptFile("unexpected section count");

  std::vector<std::span<const std::uint8_t>> sections;
  std::uint64_t expected = kHeaderSize;
  for (std::size_t i = 0; i < kSectionCount; ++i) {
    const std::uint32_t tag = header.u32();
    const std::uint64_t offset = header.u64();
    const std::uint64_t length = header.u64();
    if (tag != i + 1) throw CorruptFile("unexpected section tag " + std::to_string(tag));
    if (offset != expected || length > bytes.size() || offset > bytes.size() - length) {
      throw CorruptFile("section " + std::to_string(tag) + " lies outside the file");
    }
    sections.push_back(bytes.subspan(offset, length));
    expected = offset + length;
  }
  if (expected != bytes.size()) throw CorruptFile("trailing bytes after the last section");

  auto finish = [](wire::Reader& r, const char* what) {
    if (!r.at_end()) throw CorruptFile(std::string(what) + " section has trailing bytes");
  };
  wire::Reader rs0(sections[0]), rs1(sections[1]), rs2(sections[2]), rs3(sections[3]), rs4(sections[4]),
      rs5(sections[5]);
  TypeTable node_schema = TypeTable::deserialize(rs0);
  finish(rs0, "node schema");
  TypeTable edge_schema = TypeTable::deserialize(rs1);
  finish(rs1, "edge schema");
  AttributeStore node_attrs = AttributeStore::deserialize(rs2, node_schema);
  finish(rs2, "node attribute");
  AttributeStore edge_attrs = AttributeStore::deserialize(rs3, edge_schema);
  finish(rs3, "edge attribute");
  MultiEdgeK2Tree relations = MultiEdgeK2Tree::deserialize(rs4);
  finish(rs4, "relations");
  IdMap node_ids = IdMap::deserialize(rs5);
  IdMap edge_ids = IdMap::deserialize(rs5);
  finish(rs5, "id map");
  return AttK2Graph::from_parts(std::move(node_schema), std::move(edge_schema), std::move(node_attrs),
                                std::move(edge_attrs), std::move(relations), std::move(node_ids),
                                std::move(edge_ids));
}

void save_db(const AttK2Graph& g, const fs::path& path) { write_file_atomic(path, encode(g)); }

AttK2Graph load_db(const fs::path& path) {
  const auto bytes = read_file(path);
  return decode(bytes);
}

void write_ids(const AttK2Graph& g, const fs::path& path) {
  std::string out;
  for (Kind kind : {Kind::node, Kind::edge}) {
    const IdMap& ids = g.ids(kind);
    for (std::uint64_t id = 1; id <= ids.size(); ++id) {
      out += kind_name(kind);
      out += '\t';
      out += text::escape(ids.external(id));
      out += '\t';
      out += std::to_string(id);
      out += '\n';
    }
  }
  write_file_atomic(path, out);
}

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot replace " + path.string() + ": " + ec.message());
  }
}

void write_file_atomic(const fs::path& path, const std::string& text) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace attk2::io
