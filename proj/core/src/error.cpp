#include "combridge/error.hpp"

#include <utility>

namespace combridge {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_combination: return "invalid-combination";
    case Errc::invalid_size: return "invalid-size";
    case Errc::rank_out_of_range: return "rank-out-of-range";
    case Errc::duplicate_key: return "duplicate-key";
    case Errc::empty_universe: return "empty-universe";
    case Errc::empty_bridge: return "empty-bridge";
    case Errc::type_mismatch: return "type-mismatch";
    case Errc::unknown_attribute: return "unknown-attribute";
    case Errc::duplicate_attribute: return "duplicate-attribute";
    case Errc::key_violation: return "key-violation";
    case Errc::arity_mismatch: return "arity-mismatch";
    case Errc::corrupt_group_key: return "corrupt-group-key";
    case Errc::referential_violation: return "referential-violation";
    case Errc::unknown_item: return "unknown-item";
    case Errc::stale_universe: return "stale-universe";
    case Errc::parse_error: return "parse-error";
    case Errc::invalid_group_key: return "invalid-group-key";
    case Errc::ragged_row: return "ragged-row";
    case Errc::duplicate_header: return "duplicate-header";
    case Errc::name_collision: return "name-collision";
    case Errc::universe_too_large: return "universe-too-large";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

namespace {

std::string decorate(Errc code, const std::string& message, const SourceLocation* where) {
  std::string out;
  if (where != nullptr) {
    out += where->file;
    if (where->line != 0) out += ":" + std::to_string(where->line);
    out += ": ";
  }
  out += errc_name(code);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(decorate(code, message, nullptr)), code_(code) {}

Error::Error(Errc code, const std::string& message, SourceLocation where)
    : std::runtime_error(decorate(code, message, &where)), code_(code), where_(std::move(where)) {}

}  // namespace combridge
