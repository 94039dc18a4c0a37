#pragma once

// Data layer: attribute values of one element kind (nodes or edges).
//
// Sparse attributes keep a value list per (label, attribute), indexed by
// the element's position inside its label, plus a permutation of those
// positions in value order. Dense attributes are a binary relation between
// element ids (rows) and distinct values (columns): statically one shared
// k2-tree with a column block per attribute, dynamically one tree per
// attribute whose columns are appended as new values show up.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "attk2/bits.hpp"
#include "attk2/k2tree.hpp"
#include "attk2/schema.hpp"
#include "attk2/wire.hpp"

namespace attk2 {

/// Result of reading one attribute of one element.
struct AttributeLookup {
  enum class Status { found, absent, undefined };

  Status status = Status::undefined;
  std::string value;

  static AttributeLookup found(std::string v) { return {Status::found, std::move(v)}; }
  static AttributeLookup absent() { return {Status::absent, {}}; }
  static AttributeLookup undefined() { return {Status::undefined, {}}; }

  bool is_found() const { return status == Status::found; }
  friend bool operator==(const AttributeLookup&, const AttributeLookup&) = default;
};

struct AttributeValue {
  std::string name;
  std::string value;

  friend auto operator<=>(const AttributeValue&, const AttributeValue&) = default;
};

/// Immutable value list for consecutive elements of one label.
class SparseAttribute {
 public:
  SparseAttribute() = default;
  explicit SparseAttribute(std::span<const std::optional<std::string>> values);

  std::size_t size() const { return present_.size(); }
  /// Value at 1-based position p; nullopt when absent. Throws OutOfRange.
  std::optional<std::string_view> get(std::uint64_t p) const;
  /// Ascending positions whose value equals `value`.
  std::vector<std::uint64_t> select(std::string_view value) const;
  /// Positions ordered by value (absent first), ties by position.
  std::vector<std::uint64_t> lex_index() const { return lex_.to_vector(); }

  std::size_t size_in_bytes() const;
  void serialize(wire::Writer& out) const;
  static SparseAttribute deserialize(wire::Reader& in);

  friend bool operator==(const SparseAttribute&, const SparseAttribute&) = default;

 private:
  std::string_view raw(std::uint64_t p) const;

  std::string buffer_;
  IntVector offsets_;  // size()+1 entries
  BitSequence present_;
  IntVector lex_;
};

/// Dense attributes of one kind sharing a single k2-tree.
class DenseMatrix {
 public:
  struct Input {
    std::string name;
    std::vector<std::pair<std::uint64_t, std::string>> values;  // (row id, value)
  };

  DenseMatrix() = default;
  /// Attributes are laid out in name order; each block's columns are the
  /// attribute's distinct values sorted bytewise.
  static DenseMatrix build(std::uint64_t n_rows, std::vector<Input> attributes);

  std::size_t attribute_count() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;
  /// Last column of each attribute's block.
  const std::vector<std::uint64_t>& column_limits() const { return limits_; }
  const std::vector<std::string>& column_values(std::size_t a) const { return values_.at(a); }
  const K2Tree& matrix() const { return matrix_; }

  std::optional<std::string_view> get(std::uint64_t row, std::size_t a) const;
  std::vector<std::uint64_t> select(std::size_t a, std::string_view value, std::uint64_t lo, std::uint64_t hi) const;

  std::size_t size_in_bytes() const;
  void serialize(wire::Writer& out) const;
  static DenseMatrix deserialize(wire::Reader& in);

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::uint64_t first_column(std::size_t a) const { return a == 0 ? 1 : limits_[a - 1] + 1; }

  std::vector<std::string> names_;
  std::vector<std::uint64_t> limits_;
  std::vector<std::vector<std::string>> values_;
  std::uint64_t n_rows_ = 0;
  K2Tree matrix_;
};

/// Static attribute store for one kind, interpreted against its TypeTable.
class AttributeStore {
 public:
  AttributeStore() = default;

  /// elements[id-1] lists the attribute values of element id. Throws
  /// ValidationError for attributes outside the element's label schema or
  /// set twice on one element.
  static AttributeStore build(const TypeTable& types, std::span<const std::vector<AttributeValue>> elements);

  AttributeLookup get(const TypeTable& types, std::uint64_t id, std::string_view name) const;
  /// Ascending ids of label t whose attribute equals value; nullopt when the
  /// label does not declare the attribute.
  std::optional<std::vector<std::uint64_t>> select(const TypeTable& types, std::size_t t, std::string_view name,
                                                   std::string_view value) const;

  const DenseMatrix& dense() const { return dense_; }
  const SparseAttribute& sparse(std::size_t t, std::size_t ordinal) const { return sparse_.at(t).at(ordinal - 1); }

  std::size_t size_in_bytes() const;
  void serialize(wire::Writer& out) const;
  /// Validates against the matching type table.
  static AttributeStore deserialize(wire::Reader& in, const TypeTable& types);

  friend bool operator==(const AttributeStore&, const AttributeStore&) = default;

 private:
  // Per label, one slot per declared attribute; dense slots stay empty.
  std::vector<std::vector<SparseAttribute>> sparse_;
  std::vector<std::vector<bool>> dense_kind_;
  DenseMatrix dense_;
};

/// Mutable attribute store for one kind, interpreted against a DynTypeTable.
class DynAttributeStore {
 public:
  /// Returns false when the attribute is not declared for the element's
  /// label (nothing changes). Throws OutOfRange for an unknown id.
  bool set(const DynTypeTable& types, std::uint64_t id, std::string_view name, std::string_view value);
  /// Makes the value absent; same return convention as set.
  bool erase(const DynTypeTable& types, std::uint64_t id, std::string_view name);
  /// Makes every attribute of the element absent.
  void clear_element(const DynTypeTable& types, std::uint64_t id);

  AttributeLookup get(const DynTypeTable& types, std::uint64_t id, std::string_view name) const;
  std::optional<std::vector<std::uint64_t>> select(const DynTypeTable& types, std::size_t t, std::string_view name,
                                                   std::string_view value) const;

  /// Columns of a dense attribute in append order (empty if never used).
  std::vector<std::string> dense_columns(std::string_view name) const;

  std::size_t size_in_bytes() const;

 private:
  struct Sparse {
    std::vector<std::optional<std::string>> values;  // by rank within label
    std::set<std::pair<std::string, std::uint64_t>> index;
  };
  struct Dense {
    DynK2Tree tree;
    std::vector<std::string> columns;
    std::unordered_map<std::string, std::uint64_t> column_of;
  };

  std::optional<std::uint64_t> dense_column(const Dense& d, std::uint64_t id) const;

  std::map<std::pair<std::size_t, std::string>, Sparse> sparse_;
  std::map<std::string, Dense, std::less<>> dense_;
};

}  // namespace attk2
