#pragma once

#include <string>
#include <string_view>

#include "combridge/relmodel.hpp"

namespace combridge {

inline constexpr std::string_view kGroupRankColumn = "groupRank";

enum class RefCheck { strict, permissive };

/// Rank-Inverse-Join: expands every group key in `column` into one
/// (group key, item key) row per member. The output schema is
/// {column, universe.key_attribute()}.
///
/// Throws Error{unknown_attribute} if `column` is missing or does not hold
/// group keys, and Error{corrupt_group_key} for a key outside 1..C(n,k).
Relation rank_inverse_join(const Relation& relation, std::string_view column, const ItemUniverse& universe);

/// Rank-Join for a group table carrying its own rank column:
///   g_rankc JOIN expand(g_rankc) JOIN items
/// `g_rankc` and `items` may only meet through the expansion; any other
/// shared attribute name raises Error{name_collision}.
Relation rank_join_grouped(const Relation& g_rankc, const Relation& items, std::string_view column,
                           const ItemUniverse& universe);

/// Rank-Join for a bare combinatorial bridge: expand(b_rankc) JOIN items.
Relation rank_join_direct(const Relation& b_rankc, const Relation& items, std::string_view column,
                          const ItemUniverse& universe);

/// Reference three-way join g JOIN b JOIN i over a classic two-column bridge
/// (group key column, item key column). With RefCheck::strict a bridge row
/// whose group or item is missing raises Error{referential_violation};
/// RefCheck::permissive drops such rows.
Relation classic_three_way_join(const Relation& groups, const Relation& bridge, const Relation& items,
                                RefCheck check = RefCheck::strict);

}  // namespace combridge
