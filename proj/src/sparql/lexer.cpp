#include "lexer.hpp"

#include <algorithm>
#include <cctype>

#include "facadex/error.hpp"
#include "facadex/util/strings.hpp"

namespace facadex::sparql {

namespace {

bool is_name_start(unsigned char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c >= 0x80;
}

bool is_name_char(unsigned char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : s_(text) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < s_.size(); ++i)
      if (s_[i] == '\n') line_starts_.push_back(i + 1);
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.offset = i_;
      if (i_ >= s_.size()) {
        t.kind = Tok::End;
        place(t);
        out.push_back(std::move(t));
        return out;
      }
      lex_one(t);
      place(t);
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    auto [line, col] = position(at);
    throw ParseError("SPARQL syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + msg,
                     line, col, at);
  }

  std::pair<std::size_t, std::size_t> position(std::size_t at) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), at);
    std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
    return {line, at - line_starts_[line - 1] + 1};
  }

  void place(Token& t) const {
    auto [line, col] = position(t.offset);
    t.line = line;
    t.column = col;
  }

  void skip_space() {
    while (i_ < s_.size()) {
      if (is_ws(s_[i_])) {
        ++i_;
      } else if (s_[i_] == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  char peek(std::size_t k = 0) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }

  void read_hex_escape(std::string& out, int digits) {
    if (i_ + digits > s_.size()) fail("truncated unicode escape", i_);
    char32_t cp = 0;
    for (int k = 0; k < digits; ++k) {
      char c = s_[i_ + k];
      int v = (c >= '0' && c <= '9')   ? c - '0'
              : (c >= 'a' && c <= 'f') ? c - 'a' + 10
              : (c >= 'A' && c <= 'F') ? c - 'A' + 10
                                       : -1;
      if (v < 0) fail("bad unicode escape", i_);
      cp = cp * 16 + static_cast<char32_t>(v);
    }
    i_ += digits;
    util::append_utf8(out, cp);
  }

  bool try_iri(Token& t) {
    std::size_t save = i_;
    ++i_;
    std::string value;
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == '>') {
        ++i_;
        t.kind = Tok::Iri;
        t.text = std::move(value);
        return true;
      }
      if (c == '\\') {
        if (peek(1) == 'u') {
          i_ += 2;
          read_hex_escape(value, 4);
          continue;
        }
        if (peek(1) == 'U') {
          i_ += 2;
          read_hex_escape(value, 8);
          continue;
        }
        break;
      }
      if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' ||
          c == '|' || c == '^' || c == '`')
        break;
      value += c;
      ++i_;
    }
    i_ = save;
    return false;
  }

  void lex_string(Token& t) {
    char q = s_[i_];
    bool longform = peek(1) == q && peek(2) == q;
    i_ += longform ? 3 : 1;
    std::string value;
    while (true) {
      if (i_ >= s_.size()) fail("unterminated string", t.offset);
      char c = s_[i_];
      if (longform) {
        if (c == q && peek(1) == q && peek(2) == q) {
          // A run of more than three quotes ends with the last three.
          while (peek(3) == q) {
            value += q;
            ++i_;
          }
          i_ += 3;
          break;
        }
      } else {
        if (c == q) {
          ++i_;
          break;
        }
        if (c == '\n' || c == '\r') fail("newline in short string", i_);
      }
      if (c == '\\') {
        char e = peek(1);
        i_ += 2;
        switch (e) {
          case 't': value += '\t'; break;
          case 'b': value += '\b'; break;
          case 'n': value += '\n'; break;
          case 'r': value += '\r'; break;
          case 'f': value += '\f'; break;
          case '"': value += '"'; break;
          case '\'': value += '\''; break;
          case '\\': value += '\\'; break;
          case 'u': read_hex_escape(value, 4); break;
          case 'U': read_hex_escape(value, 8); break;
          default: fail("bad string escape", i_ - 2);
        }
        continue;
      }
      value += c;
      ++i_;
    }
    t.kind = Tok::String;
    t.text = std::move(value);
  }

  void lex_number(Token& t) {
    std::size_t start = i_;
    while (is_digit(peek())) ++i_;
    bool decimal = false;
    if (peek() == '.' && is_digit(peek(1))) {
      decimal = true;
      ++i_;
      while (is_digit(peek())) ++i_;
    }
    bool exponent = false;
    if (peek() == 'e' || peek() == 'E') {
      std::size_t k = 1;
      if (peek(k) == '+' || peek(k) == '-') ++k;
      if (is_digit(peek(k))) {
        exponent = true;
        i_ += k;
        while (is_digit(peek())) ++i_;
      }
    }
    t.kind = exponent ? Tok::Double : decimal ? Tok::Decimal : Tok::Integer;
    t.text = std::string(s_.substr(start, i_ - start));
  }

  // Local part of a prefixed name, starting right after the ':'.
  void lex_local(std::string& out) {
    static const std::string_view kEscapable = "_~.-!$&'()*+,;=/?#@%";
    while (i_ < s_.size()) {
      auto c = static_cast<unsigned char>(s_[i_]);
      if (is_name_char(c) || is_digit(static_cast<char>(c)) || c == ':') {
        out += static_cast<char>(c);
        ++i_;
      } else if (c == '%' && i_ + 2 < s_.size() && std::isxdigit(static_cast<unsigned char>(s_[i_ + 1])) &&
                 std::isxdigit(static_cast<unsigned char>(s_[i_ + 2]))) {
        out.append(s_.substr(i_, 3));
        i_ += 3;
      } else if (c == '\\' && i_ + 1 < s_.size() && kEscapable.find(s_[i_ + 1]) != std::string_view::npos) {
        out += s_[i_ + 1];
        i_ += 2;
      } else if (c == '.') {
        // A dot may not end the name.
        std::size_t k = i_;
        while (k < s_.size() && s_[k] == '.') ++k;
        if (k < s_.size() && (is_name_char(static_cast<unsigned char>(s_[k])) ||
                              is_digit(s_[k]) || s_[k] == ':' || s_[k] == '%' || s_[k] == '\\')) {
          out.append(s_.substr(i_, k - i_));
          i_ = k;
        } else {
          break;
        }
      } else {
        break;
      }
    }
  }

  void lex_one(Token& t) {
    char c = s_[i_];
    auto uc = static_cast<unsigned char>(c);
    if (c == '<') {
      if (try_iri(t)) return;
      if (peek(1) == '=') return punct(t, 2);
      return punct(t, 1);
    }
    if (c == '"' || c == '\'') return lex_string(t);
    if (c == '?' || c == '$') {
      if (i_ + 1 < s_.size() && (is_name_start(static_cast<unsigned char>(s_[i_ + 1])) || is_digit(s_[i_ + 1]))) {
        ++i_;
        std::size_t start = i_;
        while (i_ < s_.size() && (is_name_start(static_cast<unsigned char>(s_[i_])) || is_digit(s_[i_]))) ++i_;
        t.kind = Tok::Var;
        t.text = std::string(s_.substr(start, i_ - start));
        return;
      }
      if (c == '$') fail("bad variable", i_);
      return punct(t, 1);
    }
    if (c == '_' && peek(1) == ':') {
      i_ += 2;
      std::size_t start = i_;
      while (i_ < s_.size() && (is_name_char(static_cast<unsigned char>(s_[i_])) || is_digit(s_[i_]) ||
                                (s_[i_] == '.' && i_ + 1 < s_.size() &&
                                 is_name_char(static_cast<unsigned char>(s_[i_ + 1])))))
        ++i_;
      if (i_ == start) fail("empty blank node label", t.offset);
      t.kind = Tok::Blank;
      t.text = std::string(s_.substr(start, i_ - start));
      return;
    }
    if (c == '@') {
      ++i_;
      std::size_t start = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '-')) ++i_;
      if (i_ == start) fail("empty language tag", t.offset);
      t.kind = Tok::LangTag;
      t.text = std::string(s_.substr(start, i_ - start));
      return;
    }
    if (is_digit(c) || (c == '.' && is_digit(peek(1)))) return lex_number(t);
    if (c == ':' || is_name_start(uc)) {
      std::size_t start = i_;
      while (i_ < s_.size() && (is_name_char(static_cast<unsigned char>(s_[i_])) || is_digit(s_[i_]) ||
                                s_[i_] == '.'))
        ++i_;
      while (i_ > start && s_[i_ - 1] == '.') --i_;
      if (peek() == ':') {
        std::string name(s_.substr(start, i_ - start + 1));
        ++i_;
        lex_local(name);
        t.kind = Tok::PName;
        t.text = std::move(name);
        return;
      }
      if (i_ == start) fail("unexpected character", start);
      t.kind = Tok::Word;
      t.text = std::string(s_.substr(start, i_ - start));
      return;
    }
    if (c == '(' || c == '[') {
      char close = c == '(' ? ')' : ']';
      std::size_t k = i_ + 1;
      while (k < s_.size() && is_ws(s_[k])) ++k;
      if (k < s_.size() && s_[k] == close) {
        i_ = k + 1;
        t.kind = c == '(' ? Tok::Nil : Tok::Anon;
        t.text = c == '(' ? "()" : "[]";
        return;
      }
      return punct(t, 1);
    }
    static const std::string_view kTwo[] = {"!=", ">=", "&&", "||", "^^"};
    for (std::string_view two : kTwo)
      if (s_.substr(i_, 2) == two) return punct(t, 2);
    static const std::string_view kOne = "{}()[].,;*+-/!=<>?|^";
    if (kOne.find(c) != std::string_view::npos) return punct(t, 1);
    fail(std::string("unexpected character '") + c + "'", i_);
  }

  void punct(Token& t, std::size_t n) {
    t.kind = Tok::Punct;
    t.text = std::string(s_.substr(i_, n));
    i_ += n;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::vector<std::size_t> line_starts_;
};

}  // namespace

std::vector<Token> tokenize_query(std::string_view text) { return Lexer(text).run(); }

}  // namespace facadex::sparql
