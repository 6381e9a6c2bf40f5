#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "combridge/relmodel.hpp"

namespace combridge {

// Column typing and key for CSV input. Columns absent from `kinds` are typed
// by inspection: integer when every field is an unquoted canonical integer,
// text otherwise. Group-key columns must be named here.
struct CsvHint {
  std::map<std::string, ValueKind, std::less<>> kinds;
  std::vector<std::string> key;
};

CsvHint hint_for(const Schema& schema);

// RFC-4180 style: comma separator, CRLF or LF records, double-quote quoting
// with "" escapes. The first record names the attributes. Errors carry the
// source name and the 1-based line the offending record starts on.
Relation parse_relation_csv(std::string_view text, const CsvHint& hint = {},
                            std::string_view source = "<memory>");
Relation read_relation_csv(const std::filesystem::path& path, const CsvHint& hint = {});

// Canonical form: header, then rows in key order, LF line endings. Text that
// would read back as an integer is quoted.
std::string format_relation_csv(const Relation& relation);
void write_relation_csv(const Relation& relation, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
// Writes to a sibling temporary and renames over `path`.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

// "0" or -?[1-9][0-9]* within int64 range.
bool parse_canonical_int(std::string_view text, std::int64_t& out);

}  // namespace combridge
