#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "combridge/operators.hpp"
#include "combridge/relmodel.hpp"

namespace combridge {

enum class BridgeMode { grouped, direct };

std::string_view mode_name(BridgeMode mode) noexcept;
std::optional<BridgeMode> parse_mode(std::string_view text) noexcept;

// Canonical "h:k" text, decimal, no leading zeros.
std::string serialize_group_key(const GroupKey& key);
// Throws Error{parse_error} for anything outside the canonical grammar and
// Error{invalid_group_key} when h or k is zero.
GroupKey parse_group_key(std::string_view text);

// Two-column many-to-many relation (group key, item key); both columns
// together form the primary key.
class ClassicBridge {
 public:
  explicit ClassicBridge(Relation relation);

  const Relation& relation() const noexcept { return relation_; }
  const std::string& group_attribute() const { return relation_.schema()[0].name; }
  const std::string& item_attribute() const { return relation_.schema()[1].name; }
  std::size_t size() const noexcept { return relation_.size(); }

  friend bool operator==(const ClassicBridge& a, const ClassicBridge& b) {
    return a.relation_ == b.relation_;
  }

 private:
  Relation relation_;
};

struct CompressedBridge {
  BridgeMode mode = BridgeMode::grouped;
  // grouped: (group attribute, rank column), keyed by group.
  // direct:  (rank column), keyed by the rank.
  Relation rows;
  // (group attribute, rank column) for every group; in grouped mode this is
  // `rows` itself, in direct mode it is the verification sidecar.
  Relation correspondence;
  std::string rank_column;
  std::string item_attribute;
  std::string universe_version;
};

CompressedBridge compress_bridge(const ClassicBridge& bridge, const ItemUniverse& universe, BridgeMode mode,
                                 std::string_view rank_column = kGroupRankColumn);

/// Rebuilds the classic bridge. Grouped mode identifies groups by the group
/// attribute; direct mode identifies them by their group key, so the output
/// schema is (rank column, item key).
///
/// Throws Error{stale_universe} if `universe` is not the one the ranks were
/// minted against and Error{corrupt_group_key} for an out-of-range key.
ClassicBridge decompress_bridge(const CompressedBridge& compressed, const ItemUniverse& universe);

// Wraps a compressed relation loaded from disk. Mode follows the arity: two
// columns is grouped, one column is direct. `correspondence` is only consulted
// in direct mode.
CompressedBridge compressed_from_relation(Relation rows, std::string_view rank_column,
                                          std::string universe_version, std::string item_attribute,
                                          std::optional<Relation> correspondence = std::nullopt);

inline CompressedBridge compressed_from_relation(Relation rows, std::string_view rank_column,
                                                 const ItemUniverse& universe,
                                                 std::optional<Relation> correspondence = std::nullopt) {
  return compressed_from_relation(std::move(rows), rank_column, universe.version(), universe.key_attribute(),
                                  std::move(correspondence));
}

// G_rankc: the group relation extended with its rank column.
Relation extend_groups(const Relation& groups, const CompressedBridge& compressed);

// --- size accounting --------------------------------------------------------

struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const noexcept { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;  // "num/den", or "num" when den == 1
  // Ratios from make_ratio are in lowest terms, so fieldwise equality is exact.
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

Ratio make_ratio(std::uint64_t num, std::uint64_t den);

inline constexpr std::uint64_t kKeyFieldBytes = 4;
inline constexpr std::uint64_t kGroupKeyBytes = 8;

// A group key fits the 8-byte fixed layout when h < 2^56 and k < 2^8.
bool fits_fixed_width(const GroupKey& key);
// Cost of one group key: 8 when it fits, else the exact big-endian sizes of h and k.
std::uint64_t group_key_cost(const GroupKey& key);

struct CompressionReport {
  BridgeMode mode = BridgeMode::grouped;
  std::uint64_t group_count = 0;      // distinct groups in the classic bridge
  std::uint64_t classic_rows = 0;     // sum of group widths
  std::uint64_t compressed_rows = 0;  // one per group (grouped) or per distinct key (direct)
  std::uint64_t classic_bytes = 0;    // classic_rows * 2 fields * 4 bytes
  std::uint64_t compressed_bytes = 0; // sum of group_key_cost over compressed rows
  std::uint64_t exact_key_bytes = 0;  // sum of byte_length(h) + byte_length(k)
  std::uint64_t max_h_bytes = 0;
  std::uint64_t wide_keys = 0;        // keys that do not fit 8 bytes
  std::uint64_t mergeable_duplicates = 0;
  Ratio avg_group_width;              // classic_rows / group_count
  Ratio row_ratio;                    // classic_rows / compressed_rows
  Ratio byte_ratio;                   // classic_bytes / compressed_bytes
  std::string note;
};

CompressionReport compression_stats(const ClassicBridge& bridge, const CompressedBridge& compressed);

// Report from aggregate counts alone, assuming every key fits 8 bytes.
CompressionReport cost_model_report(std::uint64_t group_count, std::uint64_t member_count);

// key=value lines, one field per line, fixed order.
std::string format_report_key_values(const CompressionReport& report);
std::string format_report_table(const CompressionReport& report);

// --- universe manifest ------------------------------------------------------
// Line 1 is "n=<count>"; line j+1 holds the key with dense index j. Keys are
// integer when every line is a canonical integer, text otherwise.

std::string format_universe_manifest(const ItemUniverse& universe);
ItemUniverse parse_universe_manifest(std::string_view text, std::string key_attribute = "Item_PK",
                                     std::string_view source = "<memory>");
void write_universe_manifest(const ItemUniverse& universe, const std::filesystem::path& path);
ItemUniverse read_universe_manifest(const std::filesystem::path& path, std::string key_attribute = "Item_PK");

// --- verification -----------------------------------------------------------

struct VerifyReport {
  bool roundtrip_ok = false;
  bool join_ok = false;
  std::string first_divergence;  // empty when both hold

  bool ok() const noexcept { return roundtrip_ok && join_ok; }
};

/// Decompresses `compressed` and compares with `bridge`, then compares the
/// Rank-Join result against the classic three-way join, aligned through the
/// correspondence (group attribute, rank column). Stops at the first
/// divergence.
VerifyReport verify_bridge(const Relation& groups, const ClassicBridge& bridge, const Relation& items,
                           const ItemUniverse& universe, const CompressedBridge& compressed);

}  // namespace combridge
