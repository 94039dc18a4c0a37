#include "attk2/schema.hpp"

#include <algorithm>

#include "attk2/errors.hpp"

namespace attk2 {

namespace {

std::optional<AttributeInfo> find_sorted(const std::vector<std::string>& names, const BitSequence& dense,
                                         std::string_view name) {
  const auto it = std::lower_bound(names.begin(), names.end(), name);
  if (it == names.end() || *it != name) return std::nullopt;
  const auto i = static_cast<std::size_t>(it - names.begin());
  return AttributeInfo{i + 1, dense.test(i)};
}

}  // namespace

// ---------------------------------------------------------------------------
// TypeTable

TypeTable TypeTable::build(std::vector<TypeSpec> types) {
  std::sort(types.begin(), types.end(), [](const TypeSpec& a, const TypeSpec& b) { return a.label < b.label; });
  TypeTable tt;
  std::map<std::string, bool, std::less<>> dense_by_name;
  std::uint64_t upper = 0;
  for (std::size_t t = 0; t < types.size(); ++t) {
    TypeSpec& spec = types[t];
    if (!tt.labels_.empty() && spec.label == tt.labels_.back()) {
      throw InputError("duplicate type label '" + spec.label + "'");
    }
    if (spec.count == 0) throw InputError("type '" + spec.label + "' has no elements");
    std::sort(spec.attributes.begin(), spec.attributes.end(),
              [](const AttributeDecl& a, const AttributeDecl& b) { return a.name < b.name; });
    std::vector<std::string> names;
    BitBuilder flags;
    for (std::size_t a = 0; a < spec.attributes.size(); ++a) {
      const AttributeDecl& decl = spec.attributes[a];
      if (a > 0 && decl.name == spec.attributes[a - 1].name) {
        throw InputError("attribute '" + decl.name + "' declared twice for type '" + spec.label + "'");
      }
      const auto [it, fresh] = dense_by_name.emplace(decl.name, decl.dense);
      if (!fresh && it->second != decl.dense) {
        throw InputError("attribute '" + decl.name + "' is dense for one type and sparse for another");
      }
      names.push_back(decl.name);
      flags.push_back(decl.dense);
    }
    upper += spec.count;
    tt.labels_.push_back(std::move(spec.label));
    tt.upper_.push_back(upper);
    tt.attributes_.push_back(std::move(names));
    tt.dense_.push_back(std::move(flags).build());
  }
  return tt;
}

std::optional<std::size_t> TypeTable::find_label(std::string_view label) const {
  const auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t TypeTable::label_index(std::string_view label) const {
  const auto t = find_label(label);
  if (!t) throw NotFound("unknown label '" + std::string(label) + "'");
  return *t;
}

IdRange TypeTable::ids_of(std::size_t t) const {
  if (t >= labels_.size()) throw NotFound("label index " + std::to_string(t) + " does not exist");
  return {t == 0 ? 1 : upper_[t - 1] + 1, upper_[t]};
}

std::size_t TypeTable::type_index_of(std::uint64_t id) const {
  if (id == 0 || id > max_id()) {
    throw OutOfRange("element id " + std::to_string(id) + " outside 1.." + std::to_string(max_id()));
  }
  return static_cast<std::size_t>(std::lower_bound(upper_.begin(), upper_.end(), id) - upper_.begin());
}

std::optional<AttributeInfo> TypeTable::attribute_info(std::size_t t, std::string_view name) const {
  return find_sorted(attributes_.at(t), dense_.at(t), name);
}

std::size_t TypeTable::size_in_bytes() const {
  std::size_t bytes = upper_.size() * sizeof(std::uint64_t);
  for (std::size_t t = 0; t < labels_.size(); ++t) {
    bytes += labels_[t].size() + dense_[t].size_in_bytes();
    for (const auto& a : attributes_[t]) bytes += a.size();
  }
  return bytes;
}

void TypeTable::serialize(wire::Writer& out) const {
  out.u64(labels_.size());
  for (std::size_t t = 0; t < labels_.size(); ++t) {
    out.str(labels_[t]);
    out.u64(upper_[t]);
    out.u64(attributes_[t].size());
    for (const auto& a : attributes_[t]) out.str(a);
    dense_[t].serialize(out);
  }
}

TypeTable TypeTable::deserialize(wire::Reader& in) {
  TypeTable tt;
  const std::uint64_t n = in.count(8 * 4);
  for (std::uint64_t t = 0; t < n; ++t) {
    std::string label = in.str();
    const std::uint64_t upper = in.u64();
    if (!tt.labels_.empty() && label <= tt.labels_.back()) throw CorruptFile("schema labels not sorted");
    if (upper <= tt.max_id()) throw CorruptFile("schema upper limits not increasing");
    const std::uint64_t n_att = in.count(8);
    std::vector<std::string> names;
    for (std::uint64_t a = 0; a < n_att; ++a) {
      names.push_back(in.str());
      if (a > 0 && names[a] <= names[a - 1]) throw CorruptFile("schema attributes not sorted");
    }
    BitSequence flags = BitSequence::deserialize(in);
    if (flags.size() != names.size()) throw CorruptFile("schema dense flags length mismatch");
    tt.labels_.push_back(std::move(label));
    tt.upper_.push_back(upper);
    tt.attributes_.push_back(std::move(names));
    tt.dense_.push_back(std::move(flags));
  }
  return tt;
}

// ---------------------------------------------------------------------------
// DynTypeTable

std::size_t DynTypeTable::add_type(std::string_view label) {
  if (index_.count(label)) throw AlreadyExists("type '" + std::string(label) + "' already exists");
  const std::size_t t = labels_.size();
  labels_.emplace_back(label);
  index_.emplace(std::string(label), t);
  attributes_.emplace_back();
  return t;
}

void DynTypeTable::add_attribute(std::string_view label, std::string_view name, bool dense) {
  const std::size_t t = label_index(label);
  if (attribute_info(t, name)) {
    throw AlreadyExists("attribute '" + std::string(name) + "' already declared for '" + std::string(label) + "'");
  }
  const auto it = dense_by_name_.find(name);
  if (it != dense_by_name_.end() && it->second != dense) {
    throw InputError("attribute '" + std::string(name) + "' is dense for one type and sparse for another");
  }
  dense_by_name_.emplace(std::string(name), dense);
  attributes_[t].push_back({std::string(name), dense});
}

std::uint64_t DynTypeTable::register_element(std::string_view label) {
  types_.push_back(static_cast<DynSequence::Symbol>(label_index(label)));
  return types_.size();
}

std::vector<std::string> DynTypeTable::labels() const {
  std::vector<std::string> out;
  out.reserve(index_.size());
  for (const auto& [label, t] : index_) out.push_back(label);
  return out;
}

std::optional<std::size_t> DynTypeTable::find_label(std::string_view label) const {
  const auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t DynTypeTable::label_index(std::string_view label) const {
  const auto t = find_label(label);
  if (!t) throw NotFound("unknown label '" + std::string(label) + "'");
  return *t;
}

std::vector<std::uint64_t> DynTypeTable::ids_of(std::string_view label) const {
  const std::size_t t = label_index(label);
  const std::size_t n = count(t);
  std::vector<std::uint64_t> out;
  out.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) out.push_back(select_within(t, j));
  return out;
}

std::size_t DynTypeTable::type_index_of(std::uint64_t id) const {
  if (id == 0 || id > max_id()) {
    throw OutOfRange("element id " + std::to_string(id) + " outside 1.." + std::to_string(max_id()));
  }
  return types_.access(id);
}

std::uint64_t DynTypeTable::rank_within(std::uint64_t id) const {
  return types_.rank(static_cast<DynSequence::Symbol>(type_index_of(id)), id);
}

std::uint64_t DynTypeTable::select_within(std::size_t t, std::uint64_t j) const {
  return types_.select(static_cast<DynSequence::Symbol>(t), j);
}

std::optional<AttributeInfo> DynTypeTable::attribute_info(std::size_t t, std::string_view name) const {
  const auto& list = attributes_.at(t);
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i].name == name) return AttributeInfo{i + 1, list[i].dense};
  }
  return std::nullopt;
}

std::size_t DynTypeTable::size_in_bytes() const {
  std::size_t bytes = types_.size_in_bytes();
  for (std::size_t t = 0; t < labels_.size(); ++t) {
    bytes += labels_[t].size();
    for (const auto& a : attributes_[t]) bytes += a.name.size() + 1;
  }
  return bytes;
}

}  // namespace attk2
