#include "combridge/bridgeio.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include "combridge/combinat.hpp"
#include "combridge/csv.hpp"
#include "combridge/error.hpp"

namespace combridge {

std::string_view mode_name(BridgeMode mode) noexcept {
  return mode == BridgeMode::grouped ? "grouped" : "direct";
}

std::optional<BridgeMode> parse_mode(std::string_view text) noexcept {
  if (text == "grouped") return BridgeMode::grouped;
  if (text == "direct") return BridgeMode::direct;
  return std::nullopt;
}

std::string serialize_group_key(const GroupKey& key) {
  return to_decimal(key.h) + ":" + std::to_string(key.k);
}

GroupKey parse_group_key(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || text.find(':', colon + 1) != std::string_view::npos) {
    throw Error(Errc::parse_error, "group key '" + std::string(text) + "' is not of the form h:k");
  }
  GroupKey key;
  Natural k;
  if (!parse_decimal(text.substr(0, colon), key.h) || !parse_decimal(text.substr(colon + 1), k)) {
    throw Error(Errc::parse_error, "group key '" + std::string(text) + "' is not canonical decimal h:k");
  }
  if (k > UINT32_MAX) throw Error(Errc::invalid_group_key, "group size in '" + std::string(text) + "' too large");
  key.k = static_cast<std::uint32_t>(k);
  if (key.h == 0 || key.k == 0) {
    throw Error(Errc::invalid_group_key, "group key '" + std::string(text) + "' has a zero component");
  }
  return key;
}

// --- ClassicBridge ----------------------------------------------------------

ClassicBridge::ClassicBridge(Relation relation) : relation_(std::move(relation)) {
  if (relation_.schema().size() != 2) {
    throw Error(Errc::arity_mismatch, "classic bridge must have exactly two attributes, found " +
                                          std::to_string(relation_.schema().size()));
  }
  if (relation_.schema().key_positions().size() != 2) {
    throw Error(Errc::key_violation, "classic bridge key must span both attributes");
  }
}

// --- compress / decompress --------------------------------------------------

namespace {

Relation correspondence_relation(const Attribute& group_attr, std::string_view rank_column) {
  return Relation(Schema({group_attr, Attribute{std::string(rank_column), ValueKind::group_key}},
                         {group_attr.name}));
}

Relation rank_relation(std::string_view rank_column) {
  return Relation(Schema({Attribute{std::string(rank_column), ValueKind::group_key}}));
}

std::size_t rank_position(const Relation& relation, std::string_view rank_column) {
  const std::size_t pos = relation.schema().index_of(rank_column);
  if (relation.schema()[pos].kind != ValueKind::group_key) {
    throw Error(Errc::type_mismatch, "column '" + std::string(rank_column) + "' does not hold group keys");
  }
  return pos;
}

Combination expand_key(const GroupKey& key, const ItemUniverse& universe) {
  try {
    return unrank_group(key.h, key.k, universe.size());
  } catch (const Error& e) {
    throw Error(Errc::corrupt_group_key, "group key " + serialize_group_key(key) + ": " + e.what());
  }
}

}  // namespace

CompressedBridge compress_bridge(const ClassicBridge& bridge, const ItemUniverse& universe, BridgeMode mode,
                                 std::string_view rank_column) {
  if (bridge.size() == 0) throw Error(Errc::empty_bridge, "bridge has no rows");
  if (rank_column == bridge.group_attribute() || rank_column == bridge.item_attribute()) {
    throw Error(Errc::name_collision, "rank column '" + std::string(rank_column) + "' clashes with a bridge attribute");
  }

  std::map<Value, std::vector<std::uint32_t>> members;
  for (const Row& row : bridge.relation()) members[row[0]].push_back(universe.index_of(row[1]));

  CompressedBridge out{mode,
                       rank_relation(rank_column),
                       correspondence_relation(bridge.relation().schema()[0], rank_column),
                       std::string(rank_column),
                       bridge.item_attribute(),
                       universe.version()};
  for (auto& [group, indices] : members) {
    std::sort(indices.begin(), indices.end());
    GroupKey key{rank_group(indices, universe.size()), static_cast<std::uint32_t>(indices.size())};
    out.correspondence.insert({group, key});
    if (mode == BridgeMode::direct) out.rows.insert({std::move(key)});
  }
  if (mode == BridgeMode::grouped) out.rows = out.correspondence;
  return out;
}

ClassicBridge decompress_bridge(const CompressedBridge& compressed, const ItemUniverse& universe) {
  if (compressed.universe_version != universe.version()) {
    throw Error(Errc::stale_universe, "ranks were minted against universe " + compressed.universe_version +
                                          ", got " + universe.version());
  }
  const Relation& rows = compressed.rows;
  const std::size_t rank_pos = rank_position(rows, compressed.rank_column);
  const std::string item_attr =
      compressed.item_attribute.empty() ? universe.key_attribute() : compressed.item_attribute;

  const Attribute id_attr = compressed.mode == BridgeMode::grouped
                                ? rows.schema()[rank_pos == 0 ? 1 : 0]
                                : rows.schema()[rank_pos];
  Relation out(Schema({id_attr, Attribute{item_attr, universe.key_kind()}}));
  const std::size_t id_pos = rows.schema().index_of(id_attr.name);
  for (const Row& row : rows) {
    const auto& key = std::get<GroupKey>(row[rank_pos]);
    for (std::uint32_t idx : expand_key(key, universe)) out.insert({row[id_pos], universe.key_at(idx)});
  }
  return ClassicBridge(std::move(out));
}

CompressedBridge compressed_from_relation(Relation rows, std::string_view rank_column, std::string universe_version,
                                          std::string item_attribute, std::optional<Relation> correspondence) {
  const std::size_t rank_pos = rank_position(rows, rank_column);
  CompressedBridge out{BridgeMode::grouped,     rank_relation(rank_column),  rank_relation(rank_column),
                       std::string(rank_column), std::move(item_attribute), std::move(universe_version)};
  if (rows.schema().size() == 2) {
    const Attribute group_attr = rows.schema()[rank_pos == 0 ? 1 : 0];
    const std::size_t group_pos = rank_pos == 0 ? 1 : 0;
    Relation keyed = correspondence_relation(group_attr, rank_column);
    for (const Row& row : rows) keyed.insert({row[group_pos], row[rank_pos]});
    out.rows = keyed;
    out.correspondence = std::move(keyed);
    return out;
  }
  if (rows.schema().size() != 1) {
    throw Error(Errc::arity_mismatch, "compressed bridge must have one (direct) or two (grouped) attributes");
  }
  out.mode = BridgeMode::direct;
  out.rows = std::move(rows);
  if (correspondence) {
    const std::size_t corr_rank = rank_position(*correspondence, rank_column);
    if (correspondence->schema().size() != 2) {
      throw Error(Errc::arity_mismatch, "correspondence must have exactly two attributes");
    }
    const std::size_t group_pos = corr_rank == 0 ? 1 : 0;
    Relation keyed = correspondence_relation(correspondence->schema()[group_pos], rank_column);
    for (const Row& row : *correspondence) keyed.insert({row[group_pos], row[corr_rank]});
    out.correspondence = std::move(keyed);
  }
  return out;
}

Relation extend_groups(const Relation& groups, const CompressedBridge& compressed) {
  if (compressed.correspondence.schema().size() != 2) {
    throw Error(Errc::unknown_attribute, "no group correspondence available");
  }
  return natural_join(groups, compressed.correspondence);
}

// --- size accounting --------------------------------------------------------

Ratio make_ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return Ratio{0, 0};
  const std::uint64_t g = std::gcd(num, den);
  return g == 0 ? Ratio{0, 1} : Ratio{num / g, den / g};
}

std::string Ratio::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

bool fits_fixed_width(const GroupKey& key) {
  return key.k < (1U << 8) && key.h < (Natural(1) << 56);
}

std::uint64_t group_key_cost(const GroupKey& key) {
  if (fits_fixed_width(key)) return kGroupKeyBytes;
  return byte_length(key.h) + byte_length(Natural(key.k));
}

namespace {

constexpr std::string_view kCostModelNote =
    "classic_bytes=classic_rows*2*4 and compressed_bytes=8 per group key (more for keys wider than 56+8 bits), "
    "so byte_ratio is at most row_ratio; a width-4 bridge therefore shrinks about 4x, and the often quoted "
    "189,627,136-byte / 32x figure for 740,731 width-4 groups does not follow from this model "
    "(740,731*4=2,962,924 rows, 23,703,392 bytes)";

void finish(CompressionReport& report) {
  report.classic_bytes = report.classic_rows * 2 * kKeyFieldBytes;
  report.avg_group_width = make_ratio(report.classic_rows, report.group_count);
  report.row_ratio = make_ratio(report.classic_rows, report.compressed_rows);
  report.byte_ratio = make_ratio(report.classic_bytes, report.compressed_bytes);
  report.note = kCostModelNote;
}

}  // namespace

CompressionReport compression_stats(const ClassicBridge& bridge, const CompressedBridge& compressed) {
  CompressionReport report;
  report.mode = compressed.mode;
  report.classic_rows = bridge.size();
  std::set<Value> groups;
  for (const Row& row : bridge.relation()) groups.insert(row[0]);
  report.group_count = groups.size();
  report.compressed_rows = compressed.rows.size();

  const std::size_t rank_pos = rank_position(compressed.rows, compressed.rank_column);
  for (const Row& row : compressed.rows) {
    const auto& key = std::get<GroupKey>(row[rank_pos]);
    report.compressed_bytes += group_key_cost(key);
    const std::uint64_t h_bytes = byte_length(key.h);
    report.exact_key_bytes += h_bytes + byte_length(Natural(key.k));
    report.max_h_bytes = std::max(report.max_h_bytes, h_bytes);
    if (!fits_fixed_width(key)) ++report.wide_keys;
  }

  if (compressed.correspondence.schema().size() == 2) {
    const std::size_t corr_rank = rank_position(compressed.correspondence, compressed.rank_column);
    std::set<GroupKey> distinct;
    for (const Row& row : compressed.correspondence) distinct.insert(std::get<GroupKey>(row[corr_rank]));
    report.mergeable_duplicates = compressed.correspondence.size() - distinct.size();
  }
  finish(report);
  return report;
}

CompressionReport cost_model_report(std::uint64_t group_count, std::uint64_t member_count) {
  CompressionReport report;
  report.mode = BridgeMode::direct;
  report.group_count = group_count;
  report.classic_rows = member_count;
  report.compressed_rows = group_count;
  report.compressed_bytes = group_count * kGroupKeyBytes;
  finish(report);
  return report;
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string format_report_key_values(const CompressionReport& r) {
  std::string out;
  auto line = [&out](std::string_view key, const std::string& value) {
    out.append(key).append("=").append(value).append("\n");
  };
  line("mode", std::string(mode_name(r.mode)));
  line("group_count", std::to_string(r.group_count));
  line("classic_rows", std::to_string(r.classic_rows));
  line("compressed_rows", std::to_string(r.compressed_rows));
  line("avg_group_width", r.avg_group_width.str());
  line("avg_group_width_decimal", fixed6(r.avg_group_width.value()));
  line("row_ratio", r.row_ratio.str());
  line("row_ratio_decimal", fixed6(r.row_ratio.value()));
  line("classic_bytes", std::to_string(r.classic_bytes));
  line("compressed_bytes", std::to_string(r.compressed_bytes));
  line("byte_ratio", r.byte_ratio.str());
  line("byte_ratio_decimal", fixed6(r.byte_ratio.value()));
  line("exact_key_bytes", std::to_string(r.exact_key_bytes));
  line("max_h_bytes", std::to_string(r.max_h_bytes));
  line("wide_keys", std::to_string(r.wide_keys));
  line("mergeable_duplicates", std::to_string(r.mergeable_duplicates));
  line("note", r.note);
  return out;
}

std::string format_report_table(const CompressionReport& r) {
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-22s %20s %20s\n", "", "classic", "combinatorial");
  out += buf;
  std::snprintf(buf, sizeof buf, "%-22s %20llu %20llu\n", "rows", static_cast<unsigned long long>(r.classic_rows),
                static_cast<unsigned long long>(r.compressed_rows));
  out += buf;
  std::snprintf(buf, sizeof buf, "%-22s %20llu %20llu\n", "bytes (cost model)",
                static_cast<unsigned long long>(r.classic_bytes), static_cast<unsigned long long>(r.compressed_bytes));
  out += buf;
  std::snprintf(buf, sizeof buf, "%-22s %20s %20llu\n", "bytes (exact keys)", "-",
                static_cast<unsigned long long>(r.exact_key_bytes));
  out += buf;
  std::snprintf(buf, sizeof buf, "groups %llu, mean width %s, row ratio %s, byte ratio %s\n",
                static_cast<unsigned long long>(r.group_count), fixed6(r.avg_group_width.value()).c_str(),
                fixed6(r.row_ratio.value()).c_str(), fixed6(r.byte_ratio.value()).c_str());
  out += buf;
  if (r.mergeable_duplicates != 0) {
    out += "groups sharing an item set with another group: " + std::to_string(r.mergeable_duplicates) + "\n";
  }
  if (r.wide_keys != 0) {
    out += "keys wider than 8 bytes: " + std::to_string(r.wide_keys) + "\n";
  }
  return out;
}

// --- universe manifest ------------------------------------------------------

std::string format_universe_manifest(const ItemUniverse& universe) {
  std::string out = "n=" + std::to_string(universe.size()) + "\n";
  for (const Value& key : universe.keys()) {
    const std::string text = to_string(key);
    if (text.empty() || text.find_first_of("\r\n") != std::string::npos) {
      throw Error(Errc::parse_error, "item key '" + text + "' cannot be written on a single manifest line");
    }
    out += text;
    out.push_back('\n');
  }
  return out;
}

ItemUniverse parse_universe_manifest(std::string_view text, std::string key_attribute, std::string_view source) {
  const std::string src(source);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    pos = end + 1;
  }
  if (lines.empty() || lines.front().rfind("n=", 0) != 0) {
    throw Error(Errc::parse_error, "manifest must start with 'n=<count>'", {src, 1});
  }
  std::int64_t count = 0;
  if (!parse_canonical_int(std::string_view(lines.front()).substr(2), count) || count < 0) {
    throw Error(Errc::parse_error, "bad item count '" + lines.front() + "'", {src, 1});
  }
  if (count == 0) throw Error(Errc::empty_universe, "manifest declares no items", {src, 1});
  if (lines.size() - 1 != static_cast<std::size_t>(count)) {
    throw Error(Errc::parse_error,
                "header declares " + std::to_string(count) + " items, found " + std::to_string(lines.size() - 1),
                {src, 1});
  }

  bool all_int = true;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) throw Error(Errc::parse_error, "empty item key", {src, i + 1});
    std::int64_t ignored = 0;
    all_int = all_int && parse_canonical_int(lines[i], ignored);
  }
  std::vector<Value> keys;
  keys.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    Value key;
    if (all_int) {
      std::int64_t v = 0;
      parse_canonical_int(lines[i], v);
      key = v;
    } else {
      key = lines[i];
    }
    if (!keys.empty() && !(keys.back() < key)) {
      throw Error(keys.back() == key ? Errc::duplicate_key : Errc::parse_error,
                  "item keys must be strictly ascending; '" + lines[i] + "' follows '" + to_string(keys.back()) + "'",
                  {src, i + 1});
    }
    keys.push_back(std::move(key));
  }
  return ItemUniverse::from_keys(std::move(keys), std::move(key_attribute));
}

void write_universe_manifest(const ItemUniverse& universe, const std::filesystem::path& path) {
  write_text_file_atomic(path, format_universe_manifest(universe));
}

ItemUniverse read_universe_manifest(const std::filesystem::path& path, std::string key_attribute) {
  return parse_universe_manifest(read_text_file(path), std::move(key_attribute), path.string());
}

// --- verification -----------------------------------------------------------

namespace {

std::string describe(const Schema& schema, const Row& row) {
  std::string out = "(";
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out += ", ";
    out += schema[i].name + "=" + to_string(row[i]);
  }
  return out + ")";
}

// First row, in canonical order, present on one side only. Columns of
// `actual` are aligned to `expected` by name.
std::optional<std::string> first_difference(const Relation& expected, const Relation& actual,
                                            std::string_view expected_label, std::string_view actual_label) {
  std::vector<std::string> names = expected.schema().names();
  std::vector<std::string> other = actual.schema().names();
  std::sort(names.begin(), names.end());
  std::sort(other.begin(), other.end());
  if (names != other) {
    return std::string(expected_label) + " and " + std::string(actual_label) + " have different attributes";
  }
  const Relation aligned = project(actual, expected.schema().names());
  for (const Row& row : expected) {
    if (!aligned.contains(row)) {
      return "row " + describe(expected.schema(), row) + " of " + std::string(expected_label) + " missing from " +
             std::string(actual_label);
    }
  }
  for (const Row& row : aligned) {
    if (!expected.contains(row)) {
      return "row " + describe(aligned.schema(), row) + " of " + std::string(actual_label) + " not in " +
             std::string(expected_label);
    }
  }
  return std::nullopt;
}

}  // namespace

VerifyReport verify_bridge(const Relation& groups, const ClassicBridge& bridge, const Relation& items,
                           const ItemUniverse& universe, const CompressedBridge& compressed) {
  VerifyReport report;
  const std::string& rank = compressed.rank_column;
  const bool have_corr = compressed.correspondence.schema().size() == 2;
  if (!have_corr) {
    report.first_divergence = "no group correspondence available to align with the classic bridge";
    return report;
  }

  try {
    // Round trip.
    const ClassicBridge restored = decompress_bridge(compressed, universe);
    if (compressed.mode == BridgeMode::grouped) {
      if (auto diff = first_difference(bridge.relation(), restored.relation(), "bridge", "decompressed bridge")) {
        report.first_divergence = *diff;
        return report;
      }
    } else {
      const Relation expected =
          project(natural_join(bridge.relation(), compressed.correspondence), {rank, bridge.item_attribute()});
      if (auto diff = first_difference(expected, restored.relation(), "bridge (by group key)", "decompressed bridge")) {
        report.first_divergence = *diff;
        return report;
      }
    }
    report.roundtrip_ok = true;

    // Join equivalence.
    if (compressed.mode == BridgeMode::grouped) {
      const Relation g_rankc = extend_groups(groups, compressed);
      const Relation ranked = rank_join_grouped(g_rankc, items, rank, universe);
      const Relation classic =
          natural_join(classic_three_way_join(groups, bridge.relation(), items), compressed.correspondence);
      if (auto diff = first_difference(classic, ranked, "classic join", "rank join")) {
        report.first_divergence = *diff;
        return report;
      }
    } else {
      const Relation ranked = rank_join_direct(compressed.rows, items, rank, universe);
      const Relation classic = natural_join(
          project(natural_join(bridge.relation(), compressed.correspondence), {rank, bridge.item_attribute()}),
          items);
      if (auto diff = first_difference(classic, ranked, "classic join", "rank join")) {
        report.first_divergence = *diff;
        return report;
      }
    }
    report.join_ok = true;
  } catch (const Error& e) {
    report.first_divergence = e.what();
  }
  return report;
}

}  // namespace combridge
