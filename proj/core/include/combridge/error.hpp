#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace combridge {

enum class Errc {
  invalid_combination,
  invalid_size,
  rank_out_of_range,
  duplicate_key,
  empty_universe,
  empty_bridge,
  type_mismatch,
  unknown_attribute,
  duplicate_attribute,
  key_violation,
  arity_mismatch,
  corrupt_group_key,
  referential_violation,
  unknown_item,
  stale_universe,
  parse_error,
  invalid_group_key,
  ragged_row,
  duplicate_header,
  name_collision,
  universe_too_large,
  io_error,
};

std::string_view errc_name(Errc code) noexcept;

// Where in an input file an error was detected. Line numbers are 1-based and
// count the header as line 1.
struct SourceLocation {
  std::string file;
  std::size_t line = 0;
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Error(Errc code, const std::string& message, SourceLocation where);

  Errc code() const noexcept { return code_; }
  const std::optional<SourceLocation>& where() const noexcept { return where_; }

 private:
  Errc code_;
  std::optional<SourceLocation> where_;
};

}  // namespace combridge
