#include <unordered_set>

#include "facadex/error.hpp"
#include "facadex/triplify/charset.hpp"
#include "facadex/triplify/triplifiers.hpp"

namespace facadex::triplify {

namespace {

struct Record {
  std::vector<std::string> cells;
  std::size_t line = 0;
  bool blank = false;  // an empty line: one unquoted empty field
};

// RFC 4180 reader. Accepts LF or CRLF record separators.
std::vector<Record> read_csv(std::string_view text) {
  std::vector<Record> records;
  std::size_t i = 0;
  std::size_t line = 1;
  const std::size_t n = text.size();
  while (i < n) {
    Record rec;
    rec.line = line;
    bool any_quoted = false;
    while (true) {
      std::string cell;
      if (i < n && text[i] == '"') {
        any_quoted = true;
        std::size_t open_line = line;
        ++i;
        while (true) {
          if (i >= n)
            throw ParseError("CSV: unterminated quoted field starting on line " +
                                 std::to_string(open_line),
                             open_line);
          char c = text[i];
          if (c == '"') {
            if (i + 1 < n && text[i + 1] == '"') {
              cell += '"';
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          if (c == '\n') ++line;
          cell += c;
          ++i;
        }
        if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
          throw ParseError("CSV: unexpected character after closing quote on line " +
                               std::to_string(line),
                           line);
      } else {
        while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          if (text[i] == '"')
            throw ParseError("CSV: quote inside unquoted field on line " + std::to_string(line),
                             line);
          cell += text[i++];
        }
      }
      rec.cells.push_back(std::move(cell));
      if (i < n && text[i] == ',') {
        ++i;
        continue;
      }
      break;
    }
    if (i < n && text[i] == '\r') {
      ++i;
      if (i < n && text[i] != '\n')
        throw ParseError("CSV: bare carriage return on line " + std::to_string(line), line);
    }
    if (i < n && text[i] == '\n') {
      ++i;
      ++line;
    }
    rec.blank = !any_quoted && rec.cells.size() == 1 && rec.cells[0].empty();
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace

facade::FacadeTree triplify_csv(std::string_view bytes, const TriplifierOptions& opts,
                                Warnings* /*warnings*/) {
  std::string text = decode_to_utf8(bytes, opts.charset);
  std::string_view view = text;
  if (view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);

  std::vector<Record> records = read_csv(view);
  facade::FacadeTree tree;
  std::vector<std::string> headers;
  bool have_headers = false;
  std::int64_t row_index = 0;
  for (Record& rec : records) {
    if (rec.blank) continue;
    if (opts.csv_headers && !have_headers) {
      std::unordered_set<std::string> seen;
      for (const std::string& h : rec.cells) {
        if (!h.empty() && !seen.insert(h).second)
          throw ParseError("CSV: duplicate header '" + h + "' on line " + std::to_string(rec.line),
                           rec.line);
      }
      headers = std::move(rec.cells);
      have_headers = true;
      continue;
    }
    facade::FacadeContainer& row = tree.root->add_container(facade::FacadeKey::number(++row_index));
    for (std::size_t c = 0; c < rec.cells.size(); ++c) {
      if (rec.cells[c].empty()) continue;
      const bool named = opts.csv_headers && c < headers.size() && !headers[c].empty();
      facade::FacadeKey key = named ? facade::FacadeKey::string(headers[c])
                                    : facade::FacadeKey::number(static_cast<std::int64_t>(c) + 1);
      row.add_value(std::move(key), facade::FacadeValue{std::move(rec.cells[c])});
    }
  }
  return tree;
}

}  // namespace facadex::triplify
