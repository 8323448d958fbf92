#include "facadex/rdf/reader.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <unordered_map>

#include "facadex/error.hpp"
#include "facadex/rdf/iri.hpp"
#include "facadex/util/strings.hpp"

namespace facadex::rdf {

namespace {

bool is_pn_chars_base(unsigned char c) { return std::isalpha(c) || c >= 0x80; }
bool is_pn_chars_u(unsigned char c) { return is_pn_chars_base(c) || c == '_'; }
bool is_pn_chars(unsigned char c) { return is_pn_chars_u(c) || c == '-' || std::isdigit(c); }

class TurtleParser {
 public:
  TurtleParser(std::string_view text, std::string_view base, bool trig)
      : text_(text), base_(base), trig_(trig) {}

  Dataset parse() {
    skip_ws();
    while (!at_end()) {
      statement();
      skip_ws();
    }
    Dataset ds;
    ds.default_graph = std::make_shared<Graph>(std::move(default_graph_));
    for (auto& [name, g] : named_)
      ds.named.push_back(NamedGraph{name, std::make_shared<Graph>(std::move(g))});
    return ds;
  }

 private:
  // ---- character level ----
  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char get() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      line_start_ = pos_;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("Turtle: " + msg + " at line " + std::to_string(line_) + ", column " +
                         std::to_string(pos_ - line_start_ + 1),
                     line_, pos_ - line_start_ + 1, pos_);
  }

  void skip_ws() {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') get();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        get();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  bool keyword_ahead(std::string_view kw) const {
    if (text_.size() - pos_ < kw.size()) return false;
    if (!util::iequals(text_.substr(pos_, kw.size()), kw)) return false;
    char next = pos_ + kw.size() < text_.size() ? text_[pos_ + kw.size()] : '\0';
    return !is_pn_chars(static_cast<unsigned char>(next)) && next != ':';
  }

  // ---- statements ----
  void statement() {
    if (peek() == '@') {
      if (text_.substr(pos_, 7) == "@prefix") {
        pos_ += 7;
        prefix_decl();
        expect('.');
        return;
      }
      if (text_.substr(pos_, 5) == "@base") {
        pos_ += 5;
        skip_ws();
        base_ = resolve_iri(base_, iriref());
        expect('.');
        return;
      }
      fail("unknown directive");
    }
    if (keyword_ahead("PREFIX")) {
      pos_ += 6;
      prefix_decl();
      return;
    }
    if (keyword_ahead("BASE")) {
      pos_ += 4;
      skip_ws();
      base_ = resolve_iri(base_, iriref());
      return;
    }
    if (trig_) {
      trig_block();
      return;
    }
    triples();
    expect('.');
  }

  void prefix_decl() {
    skip_ws();
    std::string prefix;
    while (!at_end() && peek() != ':') {
      if (!is_pn_chars(static_cast<unsigned char>(peek())) && peek() != '.') fail("bad prefix name");
      prefix += get();
    }
    if (at_end()) fail("expected ':'");
    get();
    skip_ws();
    prefixes_[prefix] = resolve_iri(base_, iriref());
  }

  void trig_block() {
    if (peek() == '{') {
      wrapped_graph(nullptr);
      return;
    }
    if (keyword_ahead("GRAPH")) {
      pos_ += 5;
      skip_ws();
      Term name = label_or_subject();
      skip_ws();
      wrapped_graph(&name);
      return;
    }
    if (peek() == '[' || peek() == '(') {
      // triples2: blankNodePropertyList / collection subject
      triples();
      expect('.');
      return;
    }
    Term subject = label_or_subject();
    skip_ws();
    if (peek() == '{') {
      wrapped_graph(&subject);
      return;
    }
    predicate_object_list(subject);
    expect('.');
  }

  Term label_or_subject() {
    if (peek() == '_' && peek(1) == ':') return blank_node_label();
    if (peek() == '[' && next_non_ws_after(1) == ']') {
      get();
      skip_ws();
      get();
      return fresh_blank();
    }
    return iri();
  }

  char next_non_ws_after(std::size_t k) const {
    std::size_t p = pos_ + k;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    return p < text_.size() ? text_[p] : '\0';
  }

  void wrapped_graph(const Term* name) {
    expect('{');
    Graph* saved = current_;
    if (name != nullptr) {
      auto it = std::find_if(named_.begin(), named_.end(),
                             [&](const auto& e) { return e.first == *name; });
      if (it == named_.end()) {
        named_.emplace_back(*name, Graph{});
        it = std::prev(named_.end());
      }
      current_ = &it->second;
    } else {
      current_ = &default_graph_;
    }
    skip_ws();
    while (peek() != '}') {
      if (at_end()) fail("unterminated graph block");
      triples();
      skip_ws();
      if (peek() == '.') {
        get();
        skip_ws();
      } else if (peek() != '}') {
        fail("expected '.' or '}'");
      }
    }
    get();
    current_ = saved;
  }

  void triples() {
    skip_ws();
    if (peek() == '[' && next_non_ws_after(1) != ']') {
      Term subject = blank_node_property_list();
      skip_ws();
      if (peek() != '.' && peek() != '}') predicate_object_list(subject);
      return;
    }
    Term subject = subject_term();
    predicate_object_list(subject);
  }

  Term subject_term() {
    skip_ws();
    char c = peek();
    if (c == '<' || c == ':' || is_pn_chars_base(static_cast<unsigned char>(c))) return iri();
    if (c == '_' && peek(1) == ':') return blank_node_label();
    if (c == '[') {
      get();
      skip_ws();
      if (peek() != ']') fail("expected ']'");
      get();
      return fresh_blank();
    }
    if (c == '(') return collection();
    fail("expected subject");
  }

  void predicate_object_list(const Term& subject) {
    while (true) {
      skip_ws();
      Term predicate = verb();
      object_list(subject, predicate);
      skip_ws();
      if (peek() != ';') return;
      while (peek() == ';') {
        get();
        skip_ws();
      }
      char c = peek();
      if (c == '.' || c == ']' || c == '}' || at_end()) return;
    }
  }

  Term verb() {
    skip_ws();
    if (peek() == 'a') {
      char n = peek(1);
      if (!is_pn_chars(static_cast<unsigned char>(n)) && n != ':' && n != '.') {
        get();
        return Term::iri(std::string(vocab::kRdfType));
      }
    }
    return iri();
  }

  void object_list(const Term& subject, const Term& predicate) {
    while (true) {
      Term o = object();
      emit(subject, predicate, o);
      skip_ws();
      if (peek() != ',') return;
      get();
    }
  }

  void emit(const Term& s, const Term& p, const Term& o) {
    if (s.is_literal()) fail("literal subject");
    if (!p.is_iri()) fail("predicate must be an IRI");
    current_->add(s, p, o);
  }

  Term object() {
    skip_ws();
    char c = peek();
    if (c == '<' || c == ':') return iri();
    if (c == '_' && peek(1) == ':') return blank_node_label();
    if (c == '[') {
      if (next_non_ws_after(1) == ']') {
        get();
        skip_ws();
        get();
        return fresh_blank();
      }
      return blank_node_property_list();
    }
    if (c == '(') return collection();
    if (c == '"' || c == '\'') return rdf_literal();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.')
      return numeric_literal();
    if (keyword_ahead("true") && text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return Term::boolean(true);
    }
    if (keyword_ahead("false") && text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return Term::boolean(false);
    }
    if (is_pn_chars_base(static_cast<unsigned char>(c))) return iri();
    fail("expected object");
  }

  Term blank_node_property_list() {
    expect('[');
    Term node = fresh_blank();
    predicate_object_list(node);
    expect(']');
    return node;
  }

  Term collection() {
    expect('(');
    std::vector<Term> items;
    skip_ws();
    while (peek() != ')') {
      if (at_end()) fail("unterminated collection");
      items.push_back(object());
      skip_ws();
    }
    get();
    if (items.empty()) return Term::iri(std::string(vocab::kRdfNil));
    Term head = fresh_blank();
    Term cur = head;
    for (std::size_t i = 0; i < items.size(); ++i) {
      emit(cur, Term::iri(std::string(vocab::kRdfFirst)), items[i]);
      Term next = i + 1 < items.size() ? fresh_blank() : Term::iri(std::string(vocab::kRdfNil));
      emit(cur, Term::iri(std::string(vocab::kRdfRest)), next);
      cur = next;
    }
    return head;
  }

  // ---- terms ----
  Term fresh_blank() { return Term::blank("b" + std::to_string(blank_counter_++)); }

  Term blank_node_label() {
    pos_ += 2;
    std::string label;
    while (!at_end()) {
      unsigned char c = static_cast<unsigned char>(peek());
      if (is_pn_chars(c) || (c == '.' && is_pn_chars(static_cast<unsigned char>(peek(1))))) {
        label += get();
      } else {
        break;
      }
    }
    if (label.empty()) fail("empty blank node label");
    auto [it, inserted] = blank_labels_.try_emplace(label, "");
    if (inserted) it->second = "b" + std::to_string(blank_counter_++);
    return Term::blank(it->second);
  }

  std::string iriref() {
    if (peek() != '<') fail("expected IRI");
    get();
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      char c = get();
      if (c == '>') break;
      if (c == '\\') {
        char k = at_end() ? '\0' : get();
        if (k == 'u')
          util::append_utf8(out, hex_escape(4));
        else if (k == 'U')
          util::append_utf8(out, hex_escape(8));
        else
          fail("bad IRI escape");
        continue;
      }
      if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' ||
          c == '|' || c == '^' || c == '`')
        fail("illegal character in IRI");
      out += c;
    }
    return out;
  }

  char32_t hex_escape(int digits) {
    char32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      if (at_end() || !std::isxdigit(static_cast<unsigned char>(peek()))) fail("bad \\u escape");
      char c = get();
      cp = cp * 16 + static_cast<char32_t>(std::isdigit(static_cast<unsigned char>(c))
                                               ? c - '0'
                                               : std::tolower(c) - 'a' + 10);
    }
    return cp;
  }

  Term iri() {
    skip_ws();
    if (peek() == '<') return Term::iri(resolve_iri(base_, iriref()));
    std::string prefix;
    while (!at_end() && peek() != ':') {
      unsigned char c = static_cast<unsigned char>(peek());
      if (!is_pn_chars(c) && c != '.') fail("expected IRI or prefixed name");
      prefix += get();
    }
    if (at_end()) fail("expected ':' in prefixed name");
    get();
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) fail("undeclared prefix '" + prefix + "'");
    return Term::iri(it->second + local_name());
  }

  std::string local_name() {
    std::string out;
    while (!at_end()) {
      unsigned char c = static_cast<unsigned char>(peek());
      if (is_pn_chars(c) || c == ':') {
        out += get();
      } else if (c == '%' && std::isxdigit(static_cast<unsigned char>(peek(1))) &&
                 std::isxdigit(static_cast<unsigned char>(peek(2)))) {
        out += get();
        out += get();
        out += get();
      } else if (c == '\\') {
        get();
        if (at_end()) fail("bad local name escape");
        out += get();
      } else if (c == '.') {
        unsigned char n = static_cast<unsigned char>(peek(1));
        if (is_pn_chars(n) || n == ':' || n == '%' || n == '\\')
          out += get();
        else
          break;
      } else {
        break;
      }
    }
    return out;
  }

  Term rdf_literal() {
    std::string lex = string_literal();
    if (peek() == '@') {
      get();
      std::string lang;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-'))
        lang += get();
      if (lang.empty()) fail("empty language tag");
      return Term::lang_literal(std::move(lex), std::move(lang));
    }
    if (peek() == '^' && peek(1) == '^') {
      pos_ += 2;
      Term dt = iri();
      return Term::literal(std::move(lex), dt.value);
    }
    return Term::literal(std::move(lex));
  }

  std::string string_literal() {
    char q = get();
    bool long_form = peek() == q && peek(1) == q;
    if (long_form) {
      pos_ += 2;
    }
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated string");
      char c = peek();
      if (long_form) {
        if (c == q && peek(1) == q && peek(2) == q) {
          // Up to two extra quotes may close the content ("""a"""" ends in `a"`).
          if (peek(3) == q) {
            out += get();
            continue;
          }
          pos_ += 3;
          return out;
        }
      } else {
        if (c == q) {
          get();
          return out;
        }
        if (c == '\n' || c == '\r') fail("newline in short string");
      }
      get();
      if (c == '\\') {
        if (at_end()) fail("bad escape");
        char e = get();
        switch (e) {
          case 't': out += '\t'; break;
          case 'b': out += '\b'; break;
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 'f': out += '\f'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          case '\\': out += '\\'; break;
          case 'u': util::append_utf8(out, hex_escape(4)); break;
          case 'U': util::append_utf8(out, hex_escape(8)); break;
          default: fail("bad string escape");
        }
      } else {
        out += c;
      }
    }
  }

  Term numeric_literal() {
    std::string s;
    if (peek() == '+' || peek() == '-') s += get();
    while (std::isdigit(static_cast<unsigned char>(peek()))) s += get();
    bool decimal = false;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      decimal = true;
      s += get();
      while (std::isdigit(static_cast<unsigned char>(peek()))) s += get();
    }
    if (peek() == 'e' || peek() == 'E') {
      s += get();
      if (peek() == '+' || peek() == '-') s += get();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("bad exponent");
      while (std::isdigit(static_cast<unsigned char>(peek()))) s += get();
      return Term::literal(std::move(s), vocab::kXsdDouble);
    }
    if (s.empty() || s == "+" || s == "-") fail("bad number");
    return Term::literal(std::move(s), decimal ? vocab::kXsdDecimal : vocab::kXsdInteger);
  }

  std::string_view text_;
  std::string base_;
  bool trig_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
  std::map<std::string, std::string> prefixes_;
  std::unordered_map<std::string, std::string> blank_labels_;
  std::size_t blank_counter_ = 0;
  Graph default_graph_;
  std::deque<std::pair<Term, Graph>> named_;
  Graph* current_ = &default_graph_;
};

}  // namespace

Graph parse_turtle(std::string_view text, std::string_view base) {
  Dataset ds = TurtleParser(text, base, false).parse();
  return *ds.default_graph;
}

Dataset parse_trig(std::string_view text, std::string_view base) {
  return TurtleParser(text, base, true).parse();
}

}  // namespace facadex::rdf
