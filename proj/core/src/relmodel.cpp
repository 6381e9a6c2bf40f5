#include "combridge/relmodel.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <utility>

#include "combridge/error.hpp"

namespace combridge {

ValueKind kind_of(const Value& value) noexcept { return static_cast<ValueKind>(value.index()); }

std::string_view kind_name(ValueKind kind) noexcept {
  switch (kind) {
    case ValueKind::integer: return "integer";
    case ValueKind::text: return "text";
    case ValueKind::group_key: return "group-key";
  }
  return "unknown";
}

std::string to_string(const Value& value) {
  struct Visitor {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(const GroupKey& v) const {
      return to_decimal(v.h) + ":" + std::to_string(v.k);
    }
  };
  return std::visit(Visitor{}, value);
}

int compare_values(const Value& a, const Value& b) {
  if (a.index() != b.index()) {
    throw Error(Errc::type_mismatch, "cannot compare " + std::string(kind_name(kind_of(a))) +
                                         " with " + std::string(kind_name(kind_of(b))));
  }
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

// --- Schema ----------------------------------------------------------------

Schema::Schema(std::vector<Attribute> attributes, std::vector<std::string> key)
    : attributes_(std::move(attributes)) {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name.empty()) {
      throw Error(Errc::unknown_attribute, "attribute names must be non-empty");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (attributes_[j].name == attributes_[i].name) {
        throw Error(Errc::duplicate_attribute, "attribute '" + attributes_[i].name + "' appears twice");
      }
    }
  }
  if (key.empty()) {
    key_.resize(attributes_.size());
    for (std::size_t i = 0; i < key_.size(); ++i) key_[i] = i;
  } else {
    for (const auto& name : key) {
      const std::size_t pos = index_of(name);
      if (std::find(key_.begin(), key_.end(), pos) != key_.end()) {
        throw Error(Errc::duplicate_attribute, "key attribute '" + name + "' listed twice");
      }
      key_.push_back(pos);
    }
  }
}

std::vector<std::string> Schema::names() const {
  std::vector<std::string> out;
  out.reserve(attributes_.size());
  for (const auto& a : attributes_) out.push_back(a.name);
  return out;
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Schema::index_of(std::string_view name) const {
  if (auto pos = find(name)) return *pos;
  throw Error(Errc::unknown_attribute, "no attribute named '" + std::string(name) + "'");
}

std::vector<std::string> Schema::key_names() const {
  std::vector<std::string> out;
  for (std::size_t pos : key_) out.push_back(attributes_[pos].name);
  return out;
}

// --- Relation --------------------------------------------------------------

bool Relation::KeyLess::operator()(const Row& a, const Row& b) const {
  for (std::size_t pos : key) {
    if (a[pos] < b[pos]) return true;
    if (b[pos] < a[pos]) return false;
  }
  return false;
}

Relation::Relation(Schema schema) : schema_(std::move(schema)), rows_(KeyLess{schema_.key_positions()}) {}

bool Relation::insert(Row row) {
  if (row.size() != schema_.size()) {
    throw Error(Errc::arity_mismatch, "row has " + std::to_string(row.size()) + " values, schema has " +
                                          std::to_string(schema_.size()) + " attributes");
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (kind_of(row[i]) != schema_[i].kind) {
      throw Error(Errc::type_mismatch, "attribute '" + schema_[i].name + "' expects " +
                                           std::string(kind_name(schema_[i].kind)) + ", got " +
                                           std::string(kind_name(kind_of(row[i]))));
    }
  }
  auto it = rows_.find(row);
  if (it != rows_.end()) {
    if (*it == row) return false;
    std::string key;
    for (std::size_t pos : schema_.key_positions()) {
      if (!key.empty()) key += ", ";
      key += schema_[pos].name + "=" + to_string(row[pos]);
    }
    throw Error(Errc::key_violation, "duplicate primary key (" + key + ")");
  }
  rows_.insert(std::move(row));
  return true;
}

bool Relation::contains(const Row& row) const {
  auto it = rows_.find(row);
  return it != rows_.end() && *it == row;
}

bool operator==(const Relation& a, const Relation& b) {
  return a.schema_.attributes() == b.schema_.attributes() && a.size() == b.size() &&
         std::all_of(a.begin(), a.end(), [&b](const Row& row) { return b.contains(row); });
}

bool equivalent(const Relation& a, const Relation& b) {
  if (a.schema().size() != b.schema().size() || a.size() != b.size()) return false;
  for (const auto& attr : a.schema().attributes()) {
    auto pos = b.schema().find(attr.name);
    if (!pos || b.schema()[*pos].kind != attr.kind) return false;
  }
  const auto names = a.schema().names();
  const Relation aligned = project(b, names);
  for (const Row& row : a) {
    if (!aligned.contains(row)) return false;
  }
  return aligned.size() == a.size();
}

Relation natural_join(const Relation& r, const Relation& s) {
  std::vector<std::size_t> r_shared;
  std::vector<std::size_t> s_shared;
  std::vector<std::size_t> s_rest;
  for (std::size_t j = 0; j < s.schema().size(); ++j) {
    const Attribute& attr = s.schema()[j];
    if (auto i = r.schema().find(attr.name)) {
      // Value tags only meet when both sides have rows.
      if (r.schema()[*i].kind != attr.kind && !r.empty() && !s.empty()) {
        throw Error(Errc::type_mismatch,
                    "shared attribute '" + attr.name + "' is " + std::string(kind_name(r.schema()[*i].kind)) +
                        " on the left and " + std::string(kind_name(attr.kind)) + " on the right");
      }
      r_shared.push_back(*i);
      s_shared.push_back(j);
    } else {
      s_rest.push_back(j);
    }
  }

  std::vector<Attribute> attrs = r.schema().attributes();
  for (std::size_t j : s_rest) attrs.push_back(s.schema()[j]);
  Relation out{Schema(std::move(attrs))};

  std::map<Row, std::vector<const Row*>> index;
  for (const Row& row : s) {
    Row probe;
    probe.reserve(s_shared.size());
    for (std::size_t j : s_shared) probe.push_back(row[j]);
    index[std::move(probe)].push_back(&row);
  }

  for (const Row& left : r) {
    Row probe;
    probe.reserve(r_shared.size());
    for (std::size_t i : r_shared) probe.push_back(left[i]);
    auto hit = index.find(probe);
    if (hit == index.end()) continue;
    for (const Row* right : hit->second) {
      Row joined = left;
      for (std::size_t j : s_rest) joined.push_back((*right)[j]);
      out.insert(std::move(joined));
    }
  }
  return out;
}

Relation project(const Relation& r, std::span<const std::string> attributes) {
  std::vector<std::size_t> positions;
  std::vector<Attribute> attrs;
  for (const auto& name : attributes) {
    const std::size_t pos = r.schema().index_of(name);
    positions.push_back(pos);
    attrs.push_back(r.schema()[pos]);
  }
  Relation out{Schema(std::move(attrs))};
  for (const Row& row : r) {
    Row projected;
    projected.reserve(positions.size());
    for (std::size_t pos : positions) projected.push_back(row[pos]);
    out.insert(std::move(projected));
  }
  return out;
}

Relation project(const Relation& r, std::initializer_list<std::string> attributes) {
  return project(r, std::span<const std::string>(attributes.begin(), attributes.size()));
}

// --- ItemUniverse ----------------------------------------------------------

namespace {

std::string content_version(ValueKind kind, const std::vector<Value>& keys) {
  // 64-bit FNV-1a over the kind tag and each key's display form.
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](std::string_view bytes) {
    for (unsigned char ch : bytes) {
      hash ^= ch;
      hash *= 0x100000001b3ULL;
    }
  };
  mix(kind_name(kind));
  for (const Value& key : keys) {
    mix(std::string_view("\x1f", 1));
    mix(to_string(key));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace

ItemUniverse ItemUniverse::from_keys(std::vector<Value> keys, std::string key_attribute) {
  if (keys.empty()) throw Error(Errc::empty_universe, "item universe needs at least one key");
  const ValueKind kind = kind_of(keys.front());
  if (kind == ValueKind::group_key) {
    throw Error(Errc::type_mismatch, "item keys must be integer or text");
  }
  for (const Value& key : keys) {
    if (kind_of(key) != kind) throw Error(Errc::type_mismatch, "item keys mix integer and text values");
  }
  std::sort(keys.begin(), keys.end());
  auto dup = std::adjacent_find(keys.begin(), keys.end());
  if (dup != keys.end()) throw Error(Errc::duplicate_key, "item key '" + to_string(*dup) + "' appears twice");
  if (keys.size() > UINT32_MAX) throw Error(Errc::universe_too_large, "more than 2^32-1 items");

  ItemUniverse u;
  u.key_attribute_ = std::move(key_attribute);
  u.kind_ = kind;
  u.version_ = content_version(kind, keys);
  u.keys_ = std::move(keys);
  return u;
}

std::optional<std::uint32_t> ItemUniverse::find(const Value& key) const {
  if (kind_of(key) != kind_) return std::nullopt;
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return std::nullopt;
  return static_cast<std::uint32_t>(it - keys_.begin()) + 1;
}

std::uint32_t ItemUniverse::index_of(const Value& key) const {
  if (auto idx = find(key)) return *idx;
  throw Error(Errc::unknown_item, "item key '" + to_string(key) + "' is not in the universe");
}

const Value& ItemUniverse::key_at(std::uint32_t index) const {
  if (index < 1 || index > keys_.size()) {
    throw Error(Errc::corrupt_group_key,
                "dense index " + std::to_string(index) + " outside 1.." + std::to_string(keys_.size()));
  }
  return keys_[index - 1];
}

ItemUniverse build_universe(const Relation& items, std::string_view key_attribute) {
  const std::size_t pos = items.schema().index_of(key_attribute);
  std::vector<Value> keys;
  keys.reserve(items.size());
  for (const Row& row : items) keys.push_back(row[pos]);
  return ItemUniverse::from_keys(std::move(keys), std::string(key_attribute));
}

}  // namespace combridge
