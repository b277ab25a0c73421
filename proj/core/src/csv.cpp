#include "csv.hpp"

#include <array>
#include <charconv>

#include "eeq/error.hpp"

namespace eeq::detail {

namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";

bool is_blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && fields.front().empty();
}

}  // namespace

std::vector<CsvRecord> read_csv(std::string_view text) {
  if (text.substr(0, kBom.size()) == kBom) text.remove_prefix(kBom.size());

  std::vector<CsvRecord> out;
  CsvRecord current;
  std::string field;
  std::size_t line = 1;
  current.line = line;
  bool in_quotes = false;
  bool after_quote = false;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    after_quote = false;
  };
  auto end_record = [&] {
    end_field();
    if (!is_blank(current.fields)) out.push_back(std::move(current));
    current = CsvRecord{};
    current.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        ++line;
        end_record();
        break;
      case '\n':
        ++line;
        end_record();
        break;
      case '"':
        if (!field.empty() || after_quote) {
          throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(line),
                      "unexpected quote inside unquoted field");
        }
        in_quotes = true;
        break;
      default:
        if (after_quote) {
          throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(line),
                      "characters after closing quote");
        }
        field.push_back(c);
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(current.line),
                "unterminated quoted field");
  }
  if (!field.empty() || !current.fields.empty() || after_quote) end_record();
  return out;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;
  return std::string(buf.data(), ptr);
}

std::string escape_csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace eeq::detail
