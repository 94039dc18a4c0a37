#include "attk2/attrstore.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "attk2/errors.hpp"

namespace attk2 {

// ---------------------------------------------------------------------------
// SparseAttribute

SparseAttribute::SparseAttribute(std::span<const std::optional<std::string>> values) {
  std::vector<std::uint64_t> offsets{0};
  offsets.reserve(values.size() + 1);
  BitBuilder present;
  for (const auto& v : values) {
    present.push_back(v.has_value());
    if (v) buffer_ += *v;
    offsets.push_back(buffer_.size());
  }
  offsets_ = IntVector(offsets);
  present_ = std::move(present).build();

  std::vector<std::uint64_t> lex(values.size());
  std::iota(lex.begin(), lex.end(), 1);
  std::stable_sort(lex.begin(), lex.end(), [&](std::uint64_t a, std::uint64_t b) {
    const auto& va = values[a - 1];
    const auto& vb = values[b - 1];
    if (!va || !vb) return !va && vb;
    return *va < *vb;
  });
  lex_ = IntVector(lex);
}

std::string_view SparseAttribute::raw(std::uint64_t p) const {
  const std::uint64_t begin = offsets_[p - 1];
  return std::string_view(buffer_).substr(begin, offsets_[p] - begin);
}

std::optional<std::string_view> SparseAttribute::get(std::uint64_t p) const {
  if (p == 0 || p > size()) {
    throw OutOfRange("sparse position " + std::to_string(p) + " outside 1.." + std::to_string(size()));
  }
  if (!present_.test(p - 1)) return std::nullopt;
  return raw(p);
}

std::vector<std::uint64_t> SparseAttribute::select(std::string_view value) const {
  // Absent entries sort first, so compare them as smaller than any value.
  auto less_than = [&](std::uint64_t p) { return !present_.test(p - 1) || raw(p) < value; };
  std::size_t lo = 0, hi = lex_.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (less_than(lex_[mid])) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  std::vector<std::uint64_t> out;
  for (std::size_t i = lo; i < lex_.size() && raw(lex_[i]) == value; ++i) out.push_back(lex_[i]);
  return out;
}

std::size_t SparseAttribute::size_in_bytes() const {
  return buffer_.size() + offsets_.size_in_bytes() + present_.size_in_bytes() + lex_.size_in_bytes();
}

void SparseAttribute::serialize(wire::Writer& out) const {
  present_.serialize(out);
  for (std::uint64_t p = 1; p <= size(); ++p) {
    if (present_.test(p - 1)) out.str(raw(p));
  }
  out.u64_array(lex_.to_vector());
}

SparseAttribute SparseAttribute::deserialize(wire::Reader& in) {
  const BitSequence present = BitSequence::deserialize(in);
  std::vector<std::optional<std::string>> values(present.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (present.test(i)) values[i] = in.str();
  }
  const std::vector<std::uint64_t> lex = in.u64_array();
  SparseAttribute s(values);
  if (lex != s.lex_.to_vector()) throw CorruptFile("sparse attribute index is not the value order");
  return s;
}

// ---------------------------------------------------------------------------
// DenseMatrix

namespace {
// Selects walk one column of a tall matrix; a wide fan-out keeps the walk
// shallow and lets each child block be read as a single word.
constexpr unsigned kDenseArity = 8;
}  // namespace

DenseMatrix DenseMatrix::build(std::uint64_t n_rows, std::vector<Input> attributes) {
  std::sort(attributes.begin(), attributes.end(), [](const Input& a, const Input& b) { return a.name < b.name; });
  DenseMatrix m;
  m.n_rows_ = n_rows;
  std::vector<Cell> cells;
  std::uint64_t limit = 0;
  for (std::size_t a = 0; a < attributes.size(); ++a) {
    Input& in = attributes[a];
    if (a > 0 && in.name == attributes[a - 1].name) throw InputError("dense attribute '" + in.name + "' repeated");
    std::vector<std::string> domain;
    domain.reserve(in.values.size());
    for (const auto& [row, value] : in.values) domain.push_back(value);
    std::sort(domain.begin(), domain.end());
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());

    std::sort(in.values.begin(), in.values.end());
    for (std::size_t i = 0; i < in.values.size(); ++i) {
      const auto& [row, value] = in.values[i];
      if (row == 0 || row > n_rows) {
        throw InputError("dense row " + std::to_string(row) + " outside 1.." + std::to_string(n_rows));
      }
      if (i > 0 && in.values[i - 1].first == row) {
        throw InputError("element " + std::to_string(row) + " has two values for '" + in.name + "'");
      }
      const auto col = static_cast<std::uint64_t>(std::lower_bound(domain.begin(), domain.end(), value) -
                                                  domain.begin());
      cells.push_back({row, limit + col + 1});
    }
    limit += domain.size();
    m.names_.push_back(std::move(in.name));
    m.limits_.push_back(limit);
    m.values_.push_back(std::move(domain));
  }
  m.matrix_ = K2Tree::build(std::max<std::uint64_t>({n_rows, limit, 1}), cells, kDenseArity);
  return m;
}

std::optional<std::size_t> DenseMatrix::find(std::string_view name) const {
  const auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::optional<std::string_view> DenseMatrix::get(std::uint64_t row, std::size_t a) const {
  if (row == 0 || row > n_rows_) {
    throw OutOfRange("dense row " + std::to_string(row) + " outside 1.." + std::to_string(n_rows_));
  }
  const std::uint64_t first = first_column(a), last = limits_.at(a);
  std::optional<std::string_view> out;
  if (first > last) return out;
  matrix_.for_each(row, row, first, last, [&](std::uint64_t, std::uint64_t c, std::uint64_t) {
    out = values_[a][c - first];
  });
  return out;
}

std::vector<std::uint64_t> DenseMatrix::select(std::size_t a, std::string_view value, std::uint64_t lo,
                                               std::uint64_t hi) const {
  const auto& domain = values_.at(a);
  const auto it = std::lower_bound(domain.begin(), domain.end(), value);
  std::vector<std::uint64_t> out;
  if (it == domain.end() || *it != value || lo > hi) return out;
  const std::uint64_t col = first_column(a) + static_cast<std::uint64_t>(it - domain.begin());
  matrix_.for_each(lo, hi, col, col, [&](std::uint64_t r, std::uint64_t, std::uint64_t) { out.push_back(r); });
  return out;
}

std::size_t DenseMatrix::size_in_bytes() const {
  std::size_t bytes = matrix_.size_in_bytes() + limits_.size() * sizeof(std::uint64_t);
  for (std::size_t a = 0; a < names_.size(); ++a) {
    bytes += names_[a].size();
    for (const auto& v : values_[a]) bytes += v.size() + sizeof(std::uint32_t);
  }
  return bytes;
}

void DenseMatrix::serialize(wire::Writer& out) const {
  out.u64(n_rows_);
  out.u64(names_.size());
  for (std::size_t a = 0; a < names_.size(); ++a) {
    out.str(names_[a]);
    out.u64(values_[a].size());
    for (const auto& v : values_[a]) out.str(v);
  }
  out.u64_array(limits_);
  matrix_.serialize(out);
}

DenseMatrix DenseMatrix::deserialize(wire::Reader& in) {
  DenseMatrix m;
  m.n_rows_ = in.u64();
  const std::uint64_t n = in.count(16);
  for (std::uint64_t a = 0; a < n; ++a) {
    m.names_.push_back(in.str());
    if (a > 0 && m.names_[a] <= m.names_[a - 1]) throw CorruptFile("dense attribute names not sorted");
    std::vector<std::string> domain(in.count(8));
    for (std::size_t i = 0; i < domain.size(); ++i) {
      domain[i] = in.str();
      if (i > 0 && domain[i] <= domain[i - 1]) throw CorruptFile("dense column values not sorted");
    }
    m.values_.push_back(std::move(domain));
  }
  m.limits_ = in.u64_array();
  if (m.limits_.size() != n) throw CorruptFile("dense column limits count mismatch");
  std::uint64_t limit = 0;
  for (std::size_t a = 0; a < n; ++a) {
    limit += m.values_[a].size();
    if (m.limits_[a] != limit) throw CorruptFile("dense column limits inconsistent");
  }
  m.matrix_ = K2Tree::deserialize(in);
  if (m.matrix_.logical_side() != std::max<std::uint64_t>({m.n_rows_, limit, 1})) {
    throw CorruptFile("dense matrix side mismatch");
  }
  return m;
}

// ---------------------------------------------------------------------------
// AttributeStore

AttributeStore AttributeStore::build(const TypeTable& types, std::span<const std::vector<AttributeValue>> elements) {
  if (elements.size() != types.max_id()) {
    throw InputError("attribute rows (" + std::to_string(elements.size()) + ") do not match element count (" +
                     std::to_string(types.max_id()) + ")");
  }
  AttributeStore store;
  std::map<std::string, DenseMatrix::Input> dense_inputs;
  store.sparse_.resize(types.label_count());
  for (std::size_t t = 0; t < types.label_count(); ++t) {
    const IdRange range = types.ids_of(t);
    const auto& names = types.attributes(t);
    const BitSequence& flags = types.dense_flags(t);
    std::vector<std::vector<std::optional<std::string>>> columns(names.size());
    for (std::size_t a = 0; a < names.size(); ++a) {
      if (flags.test(a)) {
        dense_inputs[names[a]].name = names[a];
      } else {
        columns[a].resize(range.size());
      }
    }
    for (std::uint64_t id = range.first; id <= range.last; ++id) {
      std::vector<bool> seen(names.size(), false);
      for (const AttributeValue& av : elements[id - 1]) {
        const auto info = types.attribute_info(t, av.name);
        if (!info) {
          throw ValidationError("element " + std::to_string(id) + ": attribute '" + av.name +
                                "' is not declared for type '" + types.label(t) + "'");
        }
        const std::size_t a = info->ordinal - 1;
        if (seen[a]) {
          throw ValidationError("element " + std::to_string(id) + ": attribute '" + av.name + "' given twice");
        }
        seen[a] = true;
        if (info->dense) {
          dense_inputs[av.name].values.emplace_back(id, av.value);
        } else {
          columns[a][id - range.first] = av.value;
        }
      }
    }
    store.sparse_[t].resize(names.size());
    store.dense_kind_.emplace_back(names.size(), false);
    for (std::size_t a = 0; a < names.size(); ++a) {
      store.dense_kind_[t][a] = flags.test(a);
      if (!flags.test(a)) store.sparse_[t][a] = SparseAttribute(columns[a]);
    }
  }
  std::vector<DenseMatrix::Input> inputs;
  for (auto& [name, input] : dense_inputs) inputs.push_back(std::move(input));
  store.dense_ = DenseMatrix::build(types.max_id(), std::move(inputs));
  return store;
}

AttributeLookup AttributeStore::get(const TypeTable& types, std::uint64_t id, std::string_view name) const {
  const std::size_t t = types.type_index_of(id);
  const auto info = types.attribute_info(t, name);
  if (!info) return AttributeLookup::undefined();
  std::optional<std::string_view> v;
  if (info->dense) {
    v = dense_.get(id, *dense_.find(name));
  } else {
    v = sparse_[t][info->ordinal - 1].get(id - types.ids_of(t).first + 1);
  }
  return v ? AttributeLookup::found(std::string(*v)) : AttributeLookup::absent();
}

std::optional<std::vector<std::uint64_t>> AttributeStore::select(const TypeTable& types, std::size_t t,
                                                                 std::string_view name,
                                                                 std::string_view value) const {
  const auto info = types.attribute_info(t, name);
  if (!info) return std::nullopt;
  const IdRange range = types.ids_of(t);
  if (info->dense) return dense_.select(*dense_.find(name), value, range.first, range.last);
  std::vector<std::uint64_t> out = sparse_[t][info->ordinal - 1].select(value);
  for (auto& p : out) p += range.first - 1;
  return out;
}

std::size_t AttributeStore::size_in_bytes() const {
  std::size_t bytes = dense_.size_in_bytes();
  for (const auto& label : sparse_) {
    for (const auto& s : label) bytes += s.size_in_bytes();
  }
  return bytes;
}

void AttributeStore::serialize(wire::Writer& out) const {
  out.u64(sparse_.size());
  for (std::size_t t = 0; t < sparse_.size(); ++t) {
    out.u64(sparse_[t].size());
    for (std::size_t a = 0; a < sparse_[t].size(); ++a) {
      out.u8(dense_kind_[t][a] ? 1 : 0);
      if (!dense_kind_[t][a]) sparse_[t][a].serialize(out);
    }
  }
  dense_.serialize(out);
}

AttributeStore AttributeStore::deserialize(wire::Reader& in, const TypeTable& types) {
  AttributeStore store;
  if (in.u64() != types.label_count()) throw CorruptFile("attribute store label count mismatch");
  store.sparse_.resize(types.label_count());
  std::set<std::string> dense_names;
  for (std::size_t t = 0; t < types.label_count(); ++t) {
    const auto& names = types.attributes(t);
    if (in.u64() != names.size()) throw CorruptFile("attribute store attribute count mismatch");
    store.dense_kind_.emplace_back();
    for (std::size_t a = 0; a < names.size(); ++a) {
      const bool dense = types.dense_flags(t).test(a);
      const std::uint8_t tag = in.u8();
      if (tag > 1 || (tag == 1) != dense) throw CorruptFile("attribute kind tag does not match the schema");
      SparseAttribute s;
      if (dense) {
        dense_names.insert(names[a]);
      } else {
        s = SparseAttribute::deserialize(in);
        if (s.size() != types.ids_of(t).size()) throw CorruptFile("sparse list length does not match its type");
      }
      store.sparse_[t].push_back(std::move(s));
      store.dense_kind_[t].push_back(dense);
    }
  }
  store.dense_ = DenseMatrix::deserialize(in);
  if (std::vector<std::string>(dense_names.begin(), dense_names.end()) != store.dense_.names()) {
    throw CorruptFile("dense attributes do not match the schema");
  }
  // Rows of a type may only carry values of attributes that type declares.
  const K2Tree& matrix = store.dense_.matrix();
  bool stray = false;
  for (std::size_t t = 0; t < types.label_count() && !stray; ++t) {
    const IdRange range = types.ids_of(t);
    for (std::size_t a = 0; a < store.dense_.attribute_count() && !stray; ++a) {
      const auto info = types.attribute_info(t, store.dense_.names()[a]);
      const std::uint64_t first = a == 0 ? 1 : store.dense_.column_limits()[a - 1] + 1;
      const std::uint64_t last = store.dense_.column_limits()[a];
      if (info || first > last) continue;
      matrix.for_each(range.first, range.last, first, last,
                      [&](std::uint64_t, std::uint64_t, std::uint64_t) { stray = true; });
    }
  }
  if (stray) throw CorruptFile("dense value stored for an attribute outside the element's type");
  return store;
}

// ---------------------------------------------------------------------------
// DynAttributeStore

std::optional<std::uint64_t> DynAttributeStore::dense_column(const Dense& d, std::uint64_t id) const {
  std::optional<std::uint64_t> out;
  if (d.columns.empty() || id > d.tree.side()) return out;
  const std::uint64_t last = std::min<std::uint64_t>(d.columns.size(), d.tree.side());
  d.tree.for_each(id, id, 1, last, [&](std::uint64_t, std::uint64_t c, std::uint64_t) { out = c; });
  return out;
}

bool DynAttributeStore::set(const DynTypeTable& types, std::uint64_t id, std::string_view name,
                            std::string_view value) {
  const std::size_t t = types.type_index_of(id);
  const auto info = types.attribute_info(t, name);
  if (!info) return false;
  if (!info->dense) {
    Sparse& s = sparse_[{t, std::string(name)}];
    const std::uint64_t r = types.rank_within(id);
    if (s.values.size() < r) s.values.resize(r);
    auto& slot = s.values[r - 1];
    if (slot) s.index.erase({*slot, r});
    slot = std::string(value);
    s.index.insert({*slot, r});
    return true;
  }
  auto it = dense_.find(name);
  if (it == dense_.end()) it = dense_.emplace(std::string(name), Dense{DynK2Tree(1), {}, {}}).first;
  Dense& d = it->second;
  auto [col_it, fresh] = d.column_of.try_emplace(std::string(value), d.columns.size() + 1);
  if (fresh) d.columns.emplace_back(value);
  const std::uint64_t col = col_it->second;
  const auto old = dense_column(d, id);
  if (old == col) return true;
  if (old) d.tree.clear(id, *old);
  d.tree.ensure_side(std::max(id, col));
  d.tree.set(id, col);
  return true;
}

bool DynAttributeStore::erase(const DynTypeTable& types, std::uint64_t id, std::string_view name) {
  const std::size_t t = types.type_index_of(id);
  const auto info = types.attribute_info(t, name);
  if (!info) return false;
  if (!info->dense) {
    const auto it = sparse_.find({t, std::string(name)});
    if (it == sparse_.end()) return true;
    Sparse& s = it->second;
    const std::uint64_t r = types.rank_within(id);
    if (r <= s.values.size() && s.values[r - 1]) {
      s.index.erase({*s.values[r - 1], r});
      s.values[r - 1].reset();
    }
    return true;
  }
  const auto it = dense_.find(name);
  if (it == dense_.end()) return true;
  if (const auto old = dense_column(it->second, id)) it->second.tree.clear(id, *old);
  return true;
}

void DynAttributeStore::clear_element(const DynTypeTable& types, std::uint64_t id) {
  for (const AttributeDecl& decl : types.attributes(types.type_index_of(id))) erase(types, id, decl.name);
}

AttributeLookup DynAttributeStore::get(const DynTypeTable& types, std::uint64_t id, std::string_view name) const {
  const std::size_t t = types.type_index_of(id);
  const auto info = types.attribute_info(t, name);
  if (!info) return AttributeLookup::undefined();
  if (!info->dense) {
    const auto it = sparse_.find({t, std::string(name)});
    if (it == sparse_.end()) return AttributeLookup::absent();
    const std::uint64_t r = types.rank_within(id);
    const auto& values = it->second.values;
    if (r > values.size() || !values[r - 1]) return AttributeLookup::absent();
    return AttributeLookup::found(*values[r - 1]);
  }
  const auto it = dense_.find(name);
  if (it == dense_.end()) return AttributeLookup::absent();
  const auto col = dense_column(it->second, id);
  return col ? AttributeLookup::found(it->second.columns[*col - 1]) : AttributeLookup::absent();
}

std::optional<std::vector<std::uint64_t>> DynAttributeStore::select(const DynTypeTable& types, std::size_t t,
                                                                    std::string_view name,
                                                                    std::string_view value) const {
  const auto info = types.attribute_info(t, name);
  if (!info) return std::nullopt;
  std::vector<std::uint64_t> out;
  if (!info->dense) {
    const auto it = sparse_.find({t, std::string(name)});
    if (it == sparse_.end()) return out;
    const auto& index = it->second.index;
    for (auto e = index.lower_bound({std::string(value), 0}); e != index.end() && e->first == value; ++e) {
      out.push_back(types.select_within(t, e->second));
    }
    return out;
  }
  const auto it = dense_.find(name);
  if (it == dense_.end()) return out;
  const Dense& d = it->second;
  const auto col = d.column_of.find(std::string(value));
  if (col == d.column_of.end() || col->second > d.tree.side()) return out;
  // One tree serves every label declaring the attribute; keep only label t.
  const std::uint64_t last_row = std::min<std::uint64_t>(d.tree.side(), types.max_id());
  if (last_row == 0) return out;
  d.tree.for_each(1, last_row, col->second, col->second, [&](std::uint64_t r, std::uint64_t, std::uint64_t) {
    if (types.type_index_of(r) == t) out.push_back(r);
  });
  return out;
}

std::vector<std::string> DynAttributeStore::dense_columns(std::string_view name) const {
  const auto it = dense_.find(name);
  return it == dense_.end() ? std::vector<std::string>{} : it->second.columns;
}

std::size_t DynAttributeStore::size_in_bytes() const {
  std::size_t bytes = 0;
  for (const auto& [key, s] : sparse_) {
    bytes += s.values.capacity() * sizeof(std::optional<std::string>);
    for (const auto& [v, r] : s.index) bytes += 2 * v.size() + sizeof(r);
  }
  for (const auto& [name, d] : dense_) {
    bytes += d.tree.size_in_bytes();
    for (const auto& c : d.columns) bytes += 2 * c.size() + sizeof(std::uint64_t);
  }
  return bytes;
}

}  // namespace attk2
