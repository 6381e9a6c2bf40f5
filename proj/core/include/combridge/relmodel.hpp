#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "combridge/natural.hpp"

namespace combridge {

// Compressed identifier of a group: its lexicographic rank `h` among all
// k-subsets of the item universe, plus the size `k`.
struct GroupKey {
  Natural h;
  std::uint32_t k = 0;

  friend bool operator==(const GroupKey& a, const GroupKey& b) { return a.k == b.k && a.h == b.h; }
  friend bool operator!=(const GroupKey& a, const GroupKey& b) { return !(a == b); }
  friend bool operator<(const GroupKey& a, const GroupKey& b) {
    if (a.h != b.h) return a.h < b.h;
    return a.k < b.k;
  }
};

enum class ValueKind { integer, text, group_key };

using Value = std::variant<std::int64_t, std::string, GroupKey>;
using Row = std::vector<Value>;

ValueKind kind_of(const Value& value) noexcept;
std::string_view kind_name(ValueKind kind) noexcept;

// Display form; group keys render as "h:k".
std::string to_string(const Value& value);

// Three-way comparison; throws Error{type_mismatch} across kinds.
int compare_values(const Value& a, const Value& b);

struct Attribute {
  std::string name;
  ValueKind kind = ValueKind::integer;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

class Schema {
 public:
  Schema() = default;
  // An empty `key` makes every attribute part of the key.
  Schema(std::vector<Attribute> attributes, std::vector<std::string> key = {});
  Schema(std::initializer_list<Attribute> attributes) : Schema(std::vector<Attribute>(attributes)) {}

  std::size_t size() const noexcept { return attributes_.size(); }
  const std::vector<Attribute>& attributes() const noexcept { return attributes_; }
  const Attribute& operator[](std::size_t pos) const { return attributes_[pos]; }
  std::vector<std::string> names() const;
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;  // throws unknown_attribute
  bool contains(std::string_view name) const { return find(name).has_value(); }
  const std::vector<std::size_t>& key_positions() const noexcept { return key_; }
  std::vector<std::string> key_names() const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<Attribute> attributes_;
  std::vector<std::size_t> key_;
};

// A set of rows under a schema. Rows are kept sorted by their key projection,
// which is also the canonical output order.
class Relation {
  struct KeyLess {
    std::vector<std::size_t> key;
    bool operator()(const Row& a, const Row& b) const;
  };
  using Storage = std::set<Row, KeyLess>;

 public:
  using const_iterator = Storage::const_iterator;

  explicit Relation(Schema schema);

  // Returns false if an identical row is already present. Throws
  // Error{arity_mismatch}, Error{type_mismatch} or Error{key_violation}.
  bool insert(Row row);

  const Schema& schema() const noexcept { return schema_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  const_iterator begin() const noexcept { return rows_.begin(); }
  const_iterator end() const noexcept { return rows_.end(); }
  bool contains(const Row& row) const;

  friend bool operator==(const Relation& a, const Relation& b);

 private:
  Schema schema_;
  Storage rows_;
};

// Same attribute names and same rows once columns are aligned by name.
bool equivalent(const Relation& a, const Relation& b);

Relation natural_join(const Relation& r, const Relation& s);
Relation project(const Relation& r, std::span<const std::string> attributes);
Relation project(const Relation& r, std::initializer_list<std::string> attributes);

// Frozen, ascending dictionary of item keys with dense 1-based indices.
class ItemUniverse {
 public:
  // Sorts `keys`; throws Error{empty_universe}, Error{duplicate_key}, or
  // Error{type_mismatch} for mixed or non-scalar keys.
  static ItemUniverse from_keys(std::vector<Value> keys, std::string key_attribute = "Item_PK");

  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(keys_.size()); }
  const std::string& key_attribute() const noexcept { return key_attribute_; }
  ValueKind key_kind() const noexcept { return kind_; }
  // Content hash of the ordered key list; a stored rank is only meaningful
  // against the universe version it was minted with.
  const std::string& version() const noexcept { return version_; }
  std::span<const Value> keys() const noexcept { return keys_; }

  std::optional<std::uint32_t> find(const Value& key) const;
  std::uint32_t index_of(const Value& key) const;    // throws unknown_item
  const Value& key_at(std::uint32_t index) const;    // 1-based; throws corrupt_group_key

 private:
  ItemUniverse() = default;

  std::string key_attribute_;
  ValueKind kind_ = ValueKind::integer;
  std::vector<Value> keys_;
  std::string version_;
};

ItemUniverse build_universe(const Relation& items, std::string_view key_attribute);

}  // namespace combridge
