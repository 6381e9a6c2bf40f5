#include "combridge/operators.hpp"

#include <set>
#include <utility>

#include "combridge/combinat.hpp"
#include "combridge/error.hpp"

namespace combridge {

namespace {

std::size_t group_key_column(const Relation& relation, std::string_view column) {
  const std::size_t pos = relation.schema().index_of(column);
  if (relation.schema()[pos].kind != ValueKind::group_key) {
    throw Error(Errc::unknown_attribute,
                "attribute '" + std::string(column) + "' does not hold group keys");
  }
  return pos;
}

void reject_collisions(const Relation& g_rankc, const Relation& items, std::string_view column,
                       const ItemUniverse& universe) {
  const std::string& item_key = universe.key_attribute();
  if (!items.schema().contains(item_key)) {
    throw Error(Errc::unknown_attribute, "item relation lacks key attribute '" + item_key + "'");
  }
  if (g_rankc.schema().contains(item_key)) {
    throw Error(Errc::name_collision, "group relation already has attribute '" + item_key + "'");
  }
  for (const auto& attr : items.schema().attributes()) {
    if (attr.name == item_key) continue;
    if (attr.name == column || g_rankc.schema().contains(attr.name)) {
      throw Error(Errc::name_collision,
                  "attribute '" + attr.name + "' appears in both group and item relations");
    }
  }
}

}  // namespace

Relation rank_inverse_join(const Relation& relation, std::string_view column, const ItemUniverse& universe) {
  const std::size_t pos = group_key_column(relation, column);
  Relation out{Schema({Attribute{std::string(column), ValueKind::group_key},
                       Attribute{universe.key_attribute(), universe.key_kind()}})};

  // Set semantics: a key repeated across input rows expands once.
  std::set<GroupKey> seen;
  for (const Row& row : relation) {
    const auto& key = std::get<GroupKey>(row[pos]);
    if (!seen.insert(key).second) continue;
    Combination members;
    try {
      members = unrank_group(key.h, key.k, universe.size());
    } catch (const Error& e) {
      throw Error(Errc::corrupt_group_key, "group key " + to_string(row[pos]) + ": " + e.what());
    }
    for (std::uint32_t idx : members) out.insert({key, universe.key_at(idx)});
  }
  return out;
}

Relation rank_join_grouped(const Relation& g_rankc, const Relation& items, std::string_view column,
                           const ItemUniverse& universe) {
  group_key_column(g_rankc, column);
  reject_collisions(g_rankc, items, column, universe);
  return natural_join(g_rankc, natural_join(rank_inverse_join(g_rankc, column, universe), items));
}

Relation rank_join_direct(const Relation& b_rankc, const Relation& items, std::string_view column,
                          const ItemUniverse& universe) {
  group_key_column(b_rankc, column);
  const std::string& item_key = universe.key_attribute();
  if (!items.schema().contains(item_key)) {
    throw Error(Errc::unknown_attribute, "item relation lacks key attribute '" + item_key + "'");
  }
  if (items.schema().contains(column)) {
    throw Error(Errc::name_collision, "item relation already has attribute '" + std::string(column) + "'");
  }
  return natural_join(rank_inverse_join(b_rankc, column, universe), items);
}

Relation classic_three_way_join(const Relation& groups, const Relation& bridge, const Relation& items,
                                RefCheck check) {
  if (bridge.schema().size() != 2) {
    throw Error(Errc::arity_mismatch, "classic bridge must have exactly two attributes");
  }
  const std::string group_attr = bridge.schema()[0].name;
  const std::string item_attr = bridge.schema()[1].name;
  const std::size_t g_pos = groups.schema().index_of(group_attr);
  const std::size_t i_pos = items.schema().index_of(item_attr);

  std::set<Value> group_keys;
  for (const Row& row : groups) group_keys.insert(row[g_pos]);
  std::set<Value> item_keys;
  for (const Row& row : items) item_keys.insert(row[i_pos]);

  Relation clean{bridge.schema()};
  for (const Row& row : bridge) {
    const bool has_group = group_keys.count(row[0]) != 0;
    const bool has_item = item_keys.count(row[1]) != 0;
    if (has_group && has_item) {
      clean.insert(row);
      continue;
    }
    if (check == RefCheck::strict) {
      throw Error(Errc::referential_violation,
                  "bridge row (" + to_string(row[0]) + ", " + to_string(row[1]) + ") references a missing " +
                      (has_group ? "item" : "group"));
    }
  }
  return natural_join(natural_join(groups, clean), items);
}

}  // namespace combridge
