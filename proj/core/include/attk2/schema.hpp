#pragma once

// Node and edge type registries.
//
// Static tables assign each label a contiguous block of element ids, in
// label order, and remember only the highest id of every block. Dynamic
// tables keep the label of every element in a DynSequence, so ids can be
// handed out one at a time in any label order.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "attk2/bits.hpp"
#include "attk2/wire.hpp"

namespace attk2 {

/// Position of an attribute inside its label's list (1-based) and whether
/// its values are stored densely.
struct AttributeInfo {
  std::size_t ordinal = 0;
  bool dense = false;

  friend bool operator==(const AttributeInfo&, const AttributeInfo&) = default;
};

struct AttributeDecl {
  std::string name;
  bool dense = false;

  friend bool operator==(const AttributeDecl&, const AttributeDecl&) = default;
};

/// Inclusive id range [first, last].
struct IdRange {
  std::uint64_t first = 1;
  std::uint64_t last = 0;

  std::uint64_t size() const { return last + 1 - first; }
  friend bool operator==(const IdRange&, const IdRange&) = default;
};

class TypeTable {
 public:
  struct TypeSpec {
    std::string label;
    std::uint64_t count = 0;
    std::vector<AttributeDecl> attributes;
  };

  TypeTable() = default;

  /// Labels are sorted bytewise and given consecutive id blocks in that
  /// order; each label's attributes are sorted by name. Throws InputError on
  /// empty types, duplicate labels or attributes, or an attribute declared
  /// dense under one label and sparse under another.
  static TypeTable build(std::vector<TypeSpec> types);

  std::size_t label_count() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t t) const { return labels_.at(t); }
  std::optional<std::size_t> find_label(std::string_view label) const;
  /// Throws NotFound.
  std::size_t label_index(std::string_view label) const;

  std::uint64_t max_id() const { return upper_.empty() ? 0 : upper_.back(); }
  std::uint64_t upper_limit(std::size_t t) const { return upper_.at(t); }
  IdRange ids_of(std::size_t t) const;
  IdRange ids_of(std::string_view label) const { return ids_of(label_index(label)); }
  /// Binary search over the upper limits. Throws OutOfRange.
  std::size_t type_index_of(std::uint64_t id) const;
  const std::string& type_of(std::uint64_t id) const { return labels_[type_index_of(id)]; }

  const std::vector<std::string>& attributes(std::size_t t) const { return attributes_.at(t); }
  const BitSequence& dense_flags(std::size_t t) const { return dense_.at(t); }
  std::optional<AttributeInfo> attribute_info(std::size_t t, std::string_view name) const;
  /// Throws NotFound for an unknown label; nullopt when the label lacks the attribute.
  std::optional<AttributeInfo> attribute_info(std::string_view label, std::string_view name) const {
    return attribute_info(label_index(label), name);
  }

  std::size_t size_in_bytes() const;

  void serialize(wire::Writer& out) const;
  static TypeTable deserialize(wire::Reader& in);

  friend bool operator==(const TypeTable&, const TypeTable&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::uint64_t> upper_;
  std::vector<std::vector<std::string>> attributes_;
  std::vector<BitSequence> dense_;
};

class DynTypeTable {
 public:
  DynTypeTable() = default;

  /// Throws AlreadyExists. Returns the label's internal index, which is
  /// its creation order and never changes.
  std::size_t add_type(std::string_view label);
  /// Throws NotFound for an unknown label, AlreadyExists for a repeated
  /// name, InputError when the name's dense flag conflicts with another label.
  void add_attribute(std::string_view label, std::string_view name, bool dense);
  /// Appends an element of the label and returns its id (sequential, 1-based).
  std::uint64_t register_element(std::string_view label);

  /// Bytewise sorted.
  std::vector<std::string> labels() const;
  std::size_t label_count() const { return labels_.size(); }
  const std::string& label(std::size_t t) const { return labels_.at(t); }
  std::optional<std::size_t> find_label(std::string_view label) const;
  std::size_t label_index(std::string_view label) const;

  std::uint64_t max_id() const { return types_.size(); }
  std::size_t count(std::size_t t) const { return types_.count(static_cast<DynSequence::Symbol>(t)); }
  std::vector<std::uint64_t> ids_of(std::string_view label) const;
  std::size_t type_index_of(std::uint64_t id) const;
  const std::string& type_of(std::uint64_t id) const { return labels_[type_index_of(id)]; }
  /// 1-based position of id among the elements of its own label.
  std::uint64_t rank_within(std::uint64_t id) const;
  /// Id of the j-th element of label t.
  std::uint64_t select_within(std::size_t t, std::uint64_t j) const;

  /// Attributes in declaration order.
  const std::vector<AttributeDecl>& attributes(std::size_t t) const { return attributes_.at(t); }
  std::optional<AttributeInfo> attribute_info(std::size_t t, std::string_view name) const;
  std::optional<AttributeInfo> attribute_info(std::string_view label, std::string_view name) const {
    return attribute_info(label_index(label), name);
  }

  std::size_t size_in_bytes() const;

 private:
  std::vector<std::string> labels_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::vector<AttributeDecl>> attributes_;
  std::map<std::string, bool, std::less<>> dense_by_name_;
  DynSequence types_;
};

}  // namespace attk2
