// combridge: compress many-to-many bridge tables into combinatorial group keys
// and query them with Rank-Join.
//
// Exit codes: 0 success, 1 validation failure, 2 I/O or format error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "combridge/bridgeio.hpp"
#include "combridge/csv.hpp"
#include "combridge/error.hpp"
#include "combridge/operators.hpp"
#include "combridge/synth.hpp"

namespace fs = std::filesystem;
using namespace combridge;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kFormat = 2;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::io_error:
    case Errc::parse_error:
    case Errc::ragged_row:
    case Errc::duplicate_header:
    case Errc::invalid_group_key:
      return kFormat;
    default:
      return kValidation;
  }
}

std::uint32_t max_universe_size() {
  if (const char* env = std::getenv("COMBRIDGE_MAX_N")) {
    std::int64_t v = 0;
    if (parse_canonical_int(env, v) && v > 0) return static_cast<std::uint32_t>(std::min<std::int64_t>(v, UINT32_MAX));
  }
  return 1'000'000;
}

void guard_universe(std::uint64_t n) {
  const std::uint32_t cap = max_universe_size();
  if (n > cap) {
    throw Error(Errc::universe_too_large,
                "universe of " + std::to_string(n) + " items exceeds COMBRIDGE_MAX_N=" + std::to_string(cap));
  }
}

struct Common {
  std::string item_key = "Item_PK";
  std::string column = std::string(kGroupRankColumn);
};

CsvHint rank_hint(const Common& common) {
  CsvHint hint;
  hint.kinds.emplace(common.column, ValueKind::group_key);
  return hint;
}

ItemUniverse universe_from_items(const Relation& items, const Common& common) {
  guard_universe(items.size());
  return build_universe(items, common.item_key);
}

ItemUniverse load_universe(const std::string& path, const Common& common) {
  ItemUniverse universe = read_universe_manifest(path, common.item_key);
  guard_universe(universe.size());
  return universe;
}

BridgeMode mode_from(const std::string& text) {
  auto mode = parse_mode(text);
  if (!mode) throw Error(Errc::parse_error, "--mode must be 'grouped' or 'direct'");
  return *mode;
}

// Bridge relation keyed on both columns, whatever its names.
ClassicBridge load_bridge(const std::string& path) {
  Relation relation = read_relation_csv(path);
  if (relation.empty()) throw Error(Errc::empty_bridge, "empty-universe or empty bridge: no rows", {path, 0});
  return ClassicBridge(std::move(relation));
}

// --- subcommands -------------------------------------------------------------

struct CompressArgs {
  Common common;
  std::string items, bridge, groups, mode = "grouped";
  std::string out, out_universe, out_map, out_groups;
};

int run_compress(const CompressArgs& a) {
  const BridgeMode mode = mode_from(a.mode);
  if (mode == BridgeMode::direct && a.out_map.empty()) {
    throw Error(Errc::parse_error, "--mode direct needs --out-map for the group correspondence sidecar");
  }
  const Relation items = read_relation_csv(a.items);
  if (items.empty()) throw Error(Errc::empty_universe, "empty-universe or empty bridge: no items", {a.items, 0});
  const ItemUniverse universe = universe_from_items(items, a.common);
  const ClassicBridge bridge = load_bridge(a.bridge);

  const CompressedBridge compressed = compress_bridge(bridge, universe, mode, a.common.column);
  write_universe_manifest(universe, a.out_universe);
  write_relation_csv(compressed.rows, a.out);
  if (mode == BridgeMode::direct) write_relation_csv(compressed.correspondence, a.out_map);
  if (!a.groups.empty()) {
    if (a.out_groups.empty()) throw Error(Errc::parse_error, "--groups needs --out-groups");
    write_relation_csv(extend_groups(read_relation_csv(a.groups), compressed), a.out_groups);
  }

  const CompressionReport report = compression_stats(bridge, compressed);
  std::cout << format_report_table(report) << format_report_key_values(report);
  return kOk;
}

struct ExpandArgs {
  Common common;
  std::string compressed, universe, out;
};

int run_expand(const ExpandArgs& a) {
  const ItemUniverse universe = load_universe(a.universe, a.common);
  const Relation rows = read_relation_csv(a.compressed, rank_hint(a.common));
  write_relation_csv(rank_inverse_join(rows, a.common.column, universe), a.out);
  return kOk;
}

struct JoinArgs {
  Common common;
  std::string groups, items, universe, out, mode = "grouped";
};

int run_join(const JoinArgs& a) {
  const BridgeMode mode = mode_from(a.mode);
  const ItemUniverse universe = load_universe(a.universe, a.common);
  const Relation groups = read_relation_csv(a.groups, rank_hint(a.common));
  const Relation items = read_relation_csv(a.items);
  const Relation result = mode == BridgeMode::grouped
                              ? rank_join_grouped(groups, items, a.common.column, universe)
                              : rank_join_direct(groups, items, a.common.column, universe);
  write_relation_csv(result, a.out);
  return kOk;
}

struct StatsArgs {
  Common common;
  std::string bridge, compressed, map;
  std::uint64_t group_count = 0, member_count = 0, avg_width = 0;
};

int run_stats(const StatsArgs& a) {
  CompressionReport report;
  if (a.group_count != 0) {
    if (!a.bridge.empty() || !a.compressed.empty()) {
      throw Error(Errc::parse_error, "--group-count cannot be combined with --bridge/--compressed");
    }
    if ((a.member_count == 0) == (a.avg_width == 0)) {
      throw Error(Errc::parse_error, "--group-count needs exactly one of --member-count or --avg-width");
    }
    report = cost_model_report(a.group_count, a.member_count != 0 ? a.member_count : a.group_count * a.avg_width);
  } else {
    if (a.bridge.empty() || a.compressed.empty()) {
      throw Error(Errc::parse_error, "stats needs --bridge and --compressed, or --group-count");
    }
    const ClassicBridge bridge = load_bridge(a.bridge);
    std::optional<Relation> map;
    if (!a.map.empty()) map = read_relation_csv(a.map, rank_hint(a.common));
    const CompressedBridge compressed =
        compressed_from_relation(read_relation_csv(a.compressed, rank_hint(a.common)), a.common.column, "",
                                 bridge.item_attribute(), std::move(map));
    report = compression_stats(bridge, compressed);
  }
  std::cout << format_report_table(report) << format_report_key_values(report);
  return kOk;
}

struct VerifyArgs {
  Common common;
  std::string items, bridge, groups, compressed, universe, map, mode = "grouped";
  bool strict = true;
};

int run_verify(const VerifyArgs& a) {
  const Relation items = read_relation_csv(a.items);
  if (items.empty()) throw Error(Errc::empty_universe, "empty-universe or empty bridge: no items", {a.items, 0});
  const ItemUniverse universe = universe_from_items(items, a.common);
  if (!a.universe.empty()) {
    const ItemUniverse manifest = load_universe(a.universe, a.common);
    if (manifest.version() != universe.version()) {
      throw Error(Errc::stale_universe, "manifest does not match the item relation", {a.universe, 0});
    }
  }
  ClassicBridge bridge = load_bridge(a.bridge);
  const Relation groups = a.groups.empty()
                              ? project(bridge.relation(), {bridge.group_attribute()})
                              : read_relation_csv(a.groups);

  if (!a.strict) {
    // Drop bridge rows whose group or item is unknown before comparing.
    const std::size_t g_pos = groups.schema().index_of(bridge.group_attribute());
    std::set<Value> known_groups;
    for (const Row& g : groups) known_groups.insert(g[g_pos]);
    Relation kept(bridge.relation().schema());
    for (const Row& row : bridge.relation()) {
      if (known_groups.count(row[0]) != 0 && universe.find(row[1])) kept.insert(row);
    }
    bridge = ClassicBridge(std::move(kept));
  }

  CompressedBridge compressed = [&] {
    if (a.compressed.empty()) return compress_bridge(bridge, universe, mode_from(a.mode), a.common.column);
    std::optional<Relation> map;
    if (!a.map.empty()) map = read_relation_csv(a.map, rank_hint(a.common));
    return compressed_from_relation(read_relation_csv(a.compressed, rank_hint(a.common)), a.common.column,
                                    universe, std::move(map));
  }();

  const VerifyReport report = verify_bridge(groups, bridge, items, universe, compressed);
  std::cout << "roundtrip=" << (report.roundtrip_ok ? "ok" : "FAIL") << "\n"
            << "join_equivalence=" << (report.join_ok ? "ok" : "FAIL") << "\n";
  if (!report.ok()) {
    std::cerr << "combridge: verify: first divergence: " << report.first_divergence << "\n";
    return kValidation;
  }
  return kOk;
}

struct GenArgs {
  std::uint64_t seed = 1;
  std::uint32_t n = kDiagnosisCodes;
  std::uint64_t groups = (kInpatientVisits + 500) / 1000;
  std::string distribution = "inpatient";
  std::uint32_t max_width = 0;
  std::string out_dir = ".";
};

int run_gen(const GenArgs& a) {
  guard_universe(a.n);
  SynthOptions options;
  options.seed = a.seed;
  options.universe_size = a.n;
  options.group_count = a.groups;
  options.max_width = a.max_width;
  if (a.distribution == "inpatient") {
    options.distribution = WidthDistribution::inpatient;
  } else if (a.distribution == "uniform") {
    options.distribution = WidthDistribution::uniform;
  } else {
    throw Error(Errc::parse_error, "--distribution must be 'inpatient' or 'uniform'");
  }
  const SynthDataset data = generate_dataset(options);
  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create directory", {dir.string(), 0});
  write_relation_csv(data.items, dir / "items.csv");
  write_relation_csv(data.groups, dir / "groups.csv");
  write_relation_csv(data.bridge, dir / "bridge.csv");
  std::cout << "groups=" << data.groups.size() << "\nitems=" << data.items.size()
            << "\nbridge_rows=" << data.bridge.size() << "\n";
  return kOk;
}

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--item-key", common.item_key, "Item key attribute")->capture_default_str();
  cmd->add_option("--column", common.column, "Group-key column name")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combridge - combinatorial bridge table compression and Rank-Join"};
  app.require_subcommand(1);

  CompressArgs compress;
  auto* c = app.add_subcommand("compress", "Compress a classic bridge into (h,k) group keys");
  add_common(c, compress.common);
  c->add_option("--items", compress.items, "Item relation CSV")->required();
  c->add_option("--bridge", compress.bridge, "Classic bridge CSV (group, item)")->required();
  c->add_option("--groups", compress.groups, "Group relation CSV to extend with the rank column");
  c->add_option("--mode", compress.mode, "grouped|direct")->capture_default_str();
  c->add_option("--out", compress.out, "Compressed bridge CSV")->required();
  c->add_option("--out-universe", compress.out_universe, "Universe manifest")->required();
  c->add_option("--out-map", compress.out_map, "Group correspondence sidecar (direct mode)");
  c->add_option("--out-groups", compress.out_groups, "Extended group relation CSV");

  ExpandArgs expand;
  auto* e = app.add_subcommand("expand", "Rank-Inverse-Join: expand group keys into member rows");
  add_common(e, expand.common);
  e->add_option("--compressed", expand.compressed, "CSV holding the group-key column")->required();
  e->add_option("--universe", expand.universe, "Universe manifest")->required();
  e->add_option("--out", expand.out, "Output CSV")->required();

  JoinArgs join;
  auto* j = app.add_subcommand("join", "Rank-Join a compressed relation with the item relation");
  add_common(j, join.common);
  j->add_option("--groups", join.groups, "G_rankc (grouped) or B_rankc (direct) CSV")->required();
  j->add_option("--items", join.items, "Item relation CSV")->required();
  j->add_option("--universe", join.universe, "Universe manifest")->required();
  j->add_option("--mode", join.mode, "grouped|direct")->capture_default_str();
  j->add_option("--out", join.out, "Output CSV")->required();

  StatsArgs stats;
  auto* s = app.add_subcommand("stats", "Report row and byte sizes, classic vs combinatorial");
  add_common(s, stats.common);
  s->add_option("--bridge", stats.bridge, "Classic bridge CSV");
  s->add_option("--compressed", stats.compressed, "Compressed bridge CSV");
  s->add_option("--map", stats.map, "Group correspondence sidecar (direct mode)");
  s->add_option("--group-count", stats.group_count, "Cost model from counts: number of groups");
  s->add_option("--member-count", stats.member_count, "Cost model from counts: total memberships");
  s->add_option("--avg-width", stats.avg_width, "Cost model from counts: integral mean width");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check losslessness and Rank-Join equivalence");
  add_common(v, verify.common);
  v->add_option("--items", verify.items, "Item relation CSV")->required();
  v->add_option("--bridge", verify.bridge, "Classic bridge CSV")->required();
  v->add_option("--groups", verify.groups, "Group relation CSV (default: distinct bridge groups)");
  v->add_option("--compressed", verify.compressed, "Compressed bridge to check (default: compress now)");
  v->add_option("--universe", verify.universe, "Universe manifest the compressed bridge was minted with");
  v->add_option("--map", verify.map, "Group correspondence sidecar (direct mode)");
  v->add_option("--mode", verify.mode, "grouped|direct when compressing now")->capture_default_str();
  v->add_flag("--strict,!--permissive", verify.strict,
              "Referential checking (--permissive drops dangling bridge rows)");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic inpatient-shaped dataset");
  g->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  g->add_option("--n", gen.n, "Number of items")->capture_default_str();
  g->add_option("--groups", gen.groups, "Number of groups")->capture_default_str();
  g->add_option("--distribution", gen.distribution, "inpatient|uniform")->capture_default_str();
  g->add_option("--max-width", gen.max_width, "Largest width for the uniform distribution");
  g->add_option("--out-dir", gen.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? kOk : kFormat;
  }

  try {
    if (*c) return run_compress(compress);
    if (*e) return run_expand(expand);
    if (*j) return run_join(join);
    if (*s) return run_stats(stats);
    if (*v) return run_verify(verify);
    if (*g) return run_gen(gen);
  } catch (const Error& err) {
    std::cerr << "combridge: " << err.what() << "\n";
    return exit_code_for(err.code());
  } catch (const std::exception& err) {
    std::cerr << "combridge: " << err.what() << "\n";
    return kFormat;
  }
  return kValidation;
}
