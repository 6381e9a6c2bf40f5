#include "combridge/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "combridge/bridgeio.hpp"
#include "combridge/error.hpp"

namespace combridge {

namespace {

struct Field {
  std::string text;
  bool quoted = false;
};

struct Record {
  std::vector<Field> fields;
  std::size_t line = 0;
};

std::vector<Record> split_records(std::string_view text, std::string_view source) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<Record> records;
  std::size_t line = 1;
  std::size_t pos = 0;
  while (pos < text.size()) {
    Record record;
    record.line = line;
    while (true) {
      Field field;
      if (pos < text.size() && text[pos] == '"') {
        field.quoted = true;
        ++pos;
        while (true) {
          if (pos >= text.size()) {
            throw Error(Errc::parse_error, "unterminated quoted field", {std::string(source), record.line});
          }
          const char ch = text[pos++];
          if (ch == '"') {
            if (pos < text.size() && text[pos] == '"') {
              field.text.push_back('"');
              ++pos;
            } else {
              break;
            }
          } else {
            if (ch == '\n') ++line;
            field.text.push_back(ch);
          }
        }
        if (pos < text.size() && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
          throw Error(Errc::parse_error, "unexpected character after closing quote",
                      {std::string(source), line});
        }
      } else {
        while (pos < text.size() && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
          if (text[pos] == '"') {
            throw Error(Errc::parse_error, "quote inside unquoted field", {std::string(source), line});
          }
          field.text.push_back(text[pos++]);
        }
      }
      record.fields.push_back(std::move(field));
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      break;
    }
    if (pos < text.size() && text[pos] == '\r') ++pos;
    if (pos < text.size() && text[pos] == '\n') ++pos;
    ++line;
    records.push_back(std::move(record));
  }
  return records;
}

bool looks_like_int(const Field& field) {
  std::int64_t ignored = 0;
  return !field.quoted && parse_canonical_int(field.text, ignored);
}

Value convert(const Field& field, ValueKind kind, const std::string& column, const SourceLocation& where) {
  switch (kind) {
    case ValueKind::integer: {
      std::int64_t v = 0;
      if (!parse_canonical_int(field.text, v)) {
        throw Error(Errc::parse_error, "column '" + column + "': '" + field.text + "' is not an integer", where);
      }
      return v;
    }
    case ValueKind::text:
      return field.text;
    case ValueKind::group_key:
      try {
        return parse_group_key(field.text);
      } catch (const Error& e) {
        throw Error(e.code(), "column '" + column + "': " + e.what(), where);
      }
  }
  return field.text;
}

bool needs_quotes(const std::string& text) {
  if (text.empty()) return true;
  std::int64_t ignored = 0;
  if (parse_canonical_int(text, ignored)) return true;
  return text.find_first_of(",\"\r\n") != std::string::npos;
}

void append_field(std::string& out, const Value& value) {
  if (const auto* text = std::get_if<std::string>(&value)) {
    if (!needs_quotes(*text)) {
      out += *text;
      return;
    }
    out.push_back('"');
    for (char ch : *text) {
      if (ch == '"') out.push_back('"');
      out.push_back(ch);
    }
    out.push_back('"');
    return;
  }
  if (const auto* key = std::get_if<GroupKey>(&value)) {
    out += serialize_group_key(*key);
    return;
  }
  out += std::to_string(std::get<std::int64_t>(value));
}

void append_name(std::string& out, const std::string& name) {
  if (name.find_first_of(",\"\r\n") == std::string::npos) {
    out += name;
    return;
  }
  append_field(out, Value{name});
}

}  // namespace

bool parse_canonical_int(std::string_view text, std::int64_t& out) {
  if (text.empty()) return false;
  std::string_view digits = text;
  if (digits.front() == '-') digits.remove_prefix(1);
  if (digits.empty() || (digits.size() > 1 && digits.front() == '0')) return false;
  if (text.front() == '-' && digits == "0") return false;
  for (char ch : digits) {
    if (ch < '0' || ch > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

CsvHint hint_for(const Schema& schema) {
  CsvHint hint;
  for (const auto& attr : schema.attributes()) hint.kinds.emplace(attr.name, attr.kind);
  hint.key = schema.key_names();
  return hint;
}

Relation parse_relation_csv(std::string_view text, const CsvHint& hint, std::string_view source) {
  const std::string src(source);
  std::vector<Record> records = split_records(text, source);
  if (records.empty()) throw Error(Errc::parse_error, "missing header row", {src, 1});

  const Record& header = records.front();
  std::vector<std::string> names;
  for (const Field& f : header.fields) {
    if (f.text.empty()) throw Error(Errc::parse_error, "empty attribute name in header", {src, header.line});
    for (const auto& seen : names) {
      if (seen == f.text) {
        throw Error(Errc::duplicate_header, "attribute '" + f.text + "' repeated in header", {src, header.line});
      }
    }
    names.push_back(f.text);
  }

  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].fields.size() != names.size()) {
      throw Error(Errc::ragged_row,
                  "expected " + std::to_string(names.size()) + " fields, found " +
                      std::to_string(records[r].fields.size()),
                  {src, records[r].line});
    }
  }

  std::vector<Attribute> attrs;
  for (std::size_t c = 0; c < names.size(); ++c) {
    ValueKind kind = ValueKind::integer;
    if (auto it = hint.kinds.find(names[c]); it != hint.kinds.end()) {
      kind = it->second;
    } else {
      for (std::size_t r = 1; r < records.size(); ++r) {
        if (!looks_like_int(records[r].fields[c])) {
          kind = ValueKind::text;
          break;
        }
      }
    }
    attrs.push_back({names[c], kind});
  }

  Schema schema = [&] {
    try {
      return Schema(std::move(attrs), hint.key);
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), {src, header.line});
    }
  }();
  Relation relation(std::move(schema));
  for (std::size_t r = 1; r < records.size(); ++r) {
    const SourceLocation where{src, records[r].line};
    Row row;
    row.reserve(names.size());
    for (std::size_t c = 0; c < names.size(); ++c) {
      row.push_back(convert(records[r].fields[c], relation.schema()[c].kind, names[c], where));
    }
    try {
      relation.insert(std::move(row));
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), where);
    }
  }
  return relation;
}

Relation read_relation_csv(const std::filesystem::path& path, const CsvHint& hint) {
  return parse_relation_csv(read_text_file(path), hint, path.string());
}

std::string format_relation_csv(const Relation& relation) {
  std::string out;
  const auto& attrs = relation.schema().attributes();
  for (std::size_t c = 0; c < attrs.size(); ++c) {
    if (c > 0) out.push_back(',');
    append_name(out, attrs[c].name);
  }
  out.push_back('\n');
  for (const Row& row : relation) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out.push_back(',');
      append_field(out, row[c]);
    }
    out.push_back('\n');
  }
  return out;
}

void write_relation_csv(const Relation& relation, const std::filesystem::path& path) {
  write_text_file_atomic(path, format_relation_csv(relation));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open for reading", {path.string(), 0});
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(Errc::io_error, "read failed", {path.string(), 0});
  return std::move(buf).str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot open for writing", {tmp.string(), 0});
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(Errc::io_error, "write failed", {tmp.string(), 0});
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::io_error, "cannot replace file", {path.string(), 0});
  }
}

}  // namespace combridge
