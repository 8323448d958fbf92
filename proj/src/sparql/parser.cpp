#include "facadex/sparql/parser.hpp"

#include <unordered_map>

#include "facadex/error.hpp"
#include "facadex/rdf/iri.hpp"
#include "facadex/util/strings.hpp"
#include "lexer.hpp"

namespace facadex::sparql {

namespace {

using rdf::Term;

struct BuiltinInfo {
  Op op;
  int min_args;
  int max_args;  // -1: unbounded
};

const std::unordered_map<std::string, BuiltinInfo>& builtins() {
  static const std::unordered_map<std::string, BuiltinInfo> table = {
      {"STR", {Op::Str, 1, 1}},
      {"LANG", {Op::Lang, 1, 1}},
      {"LANGMATCHES", {Op::LangMatches, 2, 2}},
      {"DATATYPE", {Op::Datatype, 1, 1}},
      {"IRI", {Op::Iri, 1, 1}},
      {"URI", {Op::Iri, 1, 1}},
      {"BNODE", {Op::Bnode, 0, 1}},
      {"RAND", {Op::Rand, 0, 0}},
      {"ABS", {Op::Abs, 1, 1}},
      {"CEIL", {Op::Ceil, 1, 1}},
      {"FLOOR", {Op::Floor, 1, 1}},
      {"ROUND", {Op::Round, 1, 1}},
      {"CONCAT", {Op::Concat, 0, -1}},
      {"STRLEN", {Op::StrLen, 1, 1}},
      {"UCASE", {Op::UCase, 1, 1}},
      {"LCASE", {Op::LCase, 1, 1}},
      {"ENCODE_FOR_URI", {Op::EncodeForUri, 1, 1}},
      {"CONTAINS", {Op::Contains, 2, 2}},
      {"STRSTARTS", {Op::StrStarts, 2, 2}},
      {"STRENDS", {Op::StrEnds, 2, 2}},
      {"STRBEFORE", {Op::StrBefore, 2, 2}},
      {"STRAFTER", {Op::StrAfter, 2, 2}},
      {"YEAR", {Op::Year, 1, 1}},
      {"MONTH", {Op::Month, 1, 1}},
      {"DAY", {Op::Day, 1, 1}},
      {"HOURS", {Op::Hours, 1, 1}},
      {"MINUTES", {Op::Minutes, 1, 1}},
      {"SECONDS", {Op::Seconds, 1, 1}},
      {"TIMEZONE", {Op::Timezone, 1, 1}},
      {"TZ", {Op::Tz, 1, 1}},
      {"NOW", {Op::Now, 0, 0}},
      {"UUID", {Op::Uuid, 0, 0}},
      {"STRUUID", {Op::StrUuid, 0, 0}},
      {"MD5", {Op::Md5, 1, 1}},
      {"SHA1", {Op::Sha1, 1, 1}},
      {"SHA256", {Op::Sha256, 1, 1}},
      {"SHA384", {Op::Sha384, 1, 1}},
      {"SHA512", {Op::Sha512, 1, 1}},
      {"COALESCE", {Op::Coalesce, 0, -1}},
      {"IF", {Op::If, 3, 3}},
      {"STRLANG", {Op::StrLang, 2, 2}},
      {"STRDT", {Op::StrDt, 2, 2}},
      {"SAMETERM", {Op::SameTerm, 2, 2}},
      {"ISIRI", {Op::IsIri, 1, 1}},
      {"ISURI", {Op::IsIri, 1, 1}},
      {"ISBLANK", {Op::IsBlank, 1, 1}},
      {"ISLITERAL", {Op::IsLiteral, 1, 1}},
      {"ISNUMERIC", {Op::IsNumeric, 1, 1}},
      {"REGEX", {Op::Regex, 2, 3}},
      {"SUBSTR", {Op::Substr, 2, 3}},
      {"REPLACE", {Op::Replace, 3, 4}},
  };
  return table;
}

const std::unordered_map<std::string, Aggregate::Kind>& aggregate_names() {
  static const std::unordered_map<std::string, Aggregate::Kind> table = {
      {"COUNT", Aggregate::Kind::Count}, {"SUM", Aggregate::Kind::Sum},
      {"MIN", Aggregate::Kind::Min},     {"MAX", Aggregate::Kind::Max},
      {"AVG", Aggregate::Kind::Avg},     {"SAMPLE", Aggregate::Kind::Sample},
      {"GROUP_CONCAT", Aggregate::Kind::GroupConcat},
  };
  return table;
}

std::optional<Op> cast_op(std::string_view iri) {
  if (!iri.starts_with(rdf::vocab::kXsd)) return std::nullopt;
  std::string_view local = iri.substr(rdf::vocab::kXsd.size());
  if (local == "string") return Op::CastString;
  if (local == "integer") return Op::CastInteger;
  if (local == "decimal") return Op::CastDecimal;
  if (local == "double") return Op::CastDouble;
  if (local == "float") return Op::CastFloat;
  if (local == "boolean") return Op::CastBoolean;
  if (local == "dateTime") return Op::CastDateTime;
  return std::nullopt;
}

ExprPtr make_expr(Op op, std::vector<ExprPtr> args = {}) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->args = std::move(args);
  return e;
}

ExprPtr var_expr(int v) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Var;
  e->var = v;
  return e;
}

ExprPtr const_expr(Term t) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Constant;
  e->constant = std::move(t);
  return e;
}

PatternPtr empty_group() { return std::make_shared<Pattern>(); }

bool is_empty_bgp(const PatternPtr& p) { return p->kind == Pattern::Kind::Bgp && p->triples.empty(); }

PatternPtr join(PatternPtr l, PatternPtr r) {
  if (is_empty_bgp(l)) return r;
  if (is_empty_bgp(r)) return l;
  if (l->kind == Pattern::Kind::Bgp && r->kind == Pattern::Kind::Bgp) {
    auto merged = std::make_shared<Pattern>(*l);
    merged->triples.insert(merged->triples.end(), r->triples.begin(), r->triples.end());
    return merged;
  }
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::Join;
  p->left = std::move(l);
  p->right = std::move(r);
  return p;
}

PatternPtr binary(Pattern::Kind kind, PatternPtr l, PatternPtr r) {
  auto p = std::make_shared<Pattern>();
  p->kind = kind;
  p->left = std::move(l);
  p->right = std::move(r);
  return p;
}

class Parser {
 public:
  Parser(std::string_view text, std::string_view base)
      : text_(text), toks_(tokenize_query(text)), base_(base), vars_(std::make_shared<VarTable>()) {}

  std::shared_ptr<const Query> run() {
    auto q = std::make_shared<Query>();
    q->vars = vars_;
    prologue();
    parse_query_body(*q, /*sub=*/false);
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after query");
    q->prefixes.assign(prefixes_.begin(), prefixes_.end());
    q->base = base_;
    return q;
  }

 private:
  // ---- token helpers -------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool is_word(std::string_view w, std::size_t k = 0) const {
    return peek(k).kind == Tok::Word && util::iequals(peek(k).text, w);
  }
  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!is_word(w)) return false;
    next();
    return true;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail("expected " + std::string(w));
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(peek(), msg); }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const {
    std::string found = t.kind == Tok::End ? "end of query" : "'" + t.text + "'";
    throw ParseError("SPARQL syntax error at line " + std::to_string(t.line) + ", column " +
                         std::to_string(t.column) + ": " + msg + " (found " + found + ")",
                     t.line, t.column, t.offset);
  }

  // ---- terms ---------------------------------------------------------------

  std::string resolve(const std::string& iri) const { return rdf::resolve_iri(base_, iri); }

  std::string expand(const Token& t) const {
    std::size_t colon = t.text.find(':');
    std::string prefix = t.text.substr(0, colon);
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) fail_at(t, "undefined prefix '" + prefix + ":'");
    return it->second + t.text.substr(colon + 1);
  }

  bool at_iri() const { return peek().kind == Tok::Iri || peek().kind == Tok::PName; }

  std::string parse_iri() {
    const Token& t = peek();
    if (t.kind == Tok::Iri) {
      next();
      return resolve(t.text);
    }
    if (t.kind == Tok::PName) {
      next();
      return expand(t);
    }
    fail("expected an IRI");
  }

  bool at_literal() const {
    const Token& t = peek();
    if (t.kind == Tok::String || t.kind == Tok::Integer || t.kind == Tok::Decimal || t.kind == Tok::Double)
      return true;
    if ((is_punct("+") || is_punct("-")) &&
        (peek(1).kind == Tok::Integer || peek(1).kind == Tok::Decimal || peek(1).kind == Tok::Double))
      return true;
    return is_word("true") || is_word("false");
  }

  Term parse_literal() {
    const Token& t = peek();
    if (t.kind == Tok::String) {
      next();
      if (peek().kind == Tok::LangTag) return Term::lang_literal(t.text, next().text);
      if (accept_punct("^^")) return Term::literal(t.text, parse_iri());
      return Term::literal(t.text);
    }
    std::string sign;
    if (is_punct("+") || is_punct("-")) sign = next().text;
    const Token& n = peek();
    switch (n.kind) {
      case Tok::Integer: next(); return Term::literal(sign + n.text, rdf::vocab::kXsdInteger);
      case Tok::Decimal: next(); return Term::literal(sign + n.text, rdf::vocab::kXsdDecimal);
      case Tok::Double: next(); return Term::literal(sign + n.text, rdf::vocab::kXsdDouble);
      default: break;
    }
    if (accept_word("true")) return Term::boolean(true);
    if (accept_word("false")) return Term::boolean(false);
    fail("expected a literal");
  }

  int blank_var(const std::string& label) {
    auto it = blank_vars_.find(label);
    if (it != blank_vars_.end()) return it->second;
    int v = vars_->hidden("b");
    blank_vars_.emplace(label, v);
    return v;
  }

  VarOrTerm fresh_node() {
    if (template_mode_) return VarOrTerm::constant(Term::blank("t" + std::to_string(template_blank_++)));
    return VarOrTerm::variable(vars_->hidden("b"));
  }

  // Var, IRI, literal, blank node or NIL.
  std::optional<VarOrTerm> try_var_or_term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var: next(); return VarOrTerm::variable(vars_->get(t.text));
      case Tok::Iri:
      case Tok::PName: return VarOrTerm::constant(Term::iri(parse_iri()));
      case Tok::Blank:
        next();
        if (template_mode_) return VarOrTerm::constant(Term::blank("l" + t.text));
        return VarOrTerm::variable(blank_var(t.text));
      case Tok::Anon: next(); return fresh_node();
      case Tok::Nil: next(); return VarOrTerm::constant(Term::iri(std::string(rdf::vocab::kRdfNil)));
      default: break;
    }
    if (at_literal()) return VarOrTerm::constant(parse_literal());
    return std::nullopt;
  }

  VarOrTerm parse_var_or_iri() {
    if (peek().kind == Tok::Var) return VarOrTerm::variable(vars_->get(next().text));
    return VarOrTerm::constant(Term::iri(parse_iri()));
  }

  // ---- prologue and query forms ---------------------------------------------

  void prologue() {
    while (true) {
      if (accept_word("BASE")) {
        if (peek().kind != Tok::Iri) fail("expected an IRI after BASE");
        base_ = resolve(next().text);
      } else if (accept_word("PREFIX")) {
        const Token& t = peek();
        if (t.kind != Tok::PName || t.text.back() != ':') fail("expected a prefix name after PREFIX");
        next();
        if (peek().kind != Tok::Iri) fail("expected an IRI after the prefix name");
        prefixes_[t.text.substr(0, t.text.size() - 1)] = resolve(next().text);
      } else {
        return;
      }
    }
  }

  void parse_query_body(Query& q, bool sub) {
    Query* saved = current_;
    current_ = &q;
    if (accept_word("SELECT")) {
      q.form = Query::Form::Select;
      select_clause(q);
    } else if (!sub && accept_word("CONSTRUCT")) {
      q.form = Query::Form::Construct;
      if (is_punct("{")) {
        template_mode_ = true;
        next();
        q.construct_template = triples_template();
        expect_punct("}");
        template_mode_ = false;
      } else {
        // CONSTRUCT WHERE { template }
        dataset_clauses(q);
        expect_word("WHERE");
        std::size_t mark = pos_;
        expect_punct("{");
        template_mode_ = true;
        q.construct_template = triples_template();
        template_mode_ = false;
        expect_punct("}");
        pos_ = mark;
        for (const TriplePattern& tp : q.construct_template) {
          if (tp.s.term.is_blank() || tp.o.term.is_blank())
            fail("blank nodes are not allowed in CONSTRUCT WHERE");
        }
        q.where = group_graph_pattern();
        solution_modifiers(q);
        values_clause(q);
        current_ = saved;
        return;
      }
    } else if (!sub && accept_word("ASK")) {
      q.form = Query::Form::Ask;
    } else if (!sub && accept_word("DESCRIBE")) {
      q.form = Query::Form::Describe;
      if (accept_punct("*")) {
        q.select_all = true;
      } else {
        while (peek().kind == Tok::Var || at_iri()) q.describe_targets.push_back(parse_var_or_iri());
        if (q.describe_targets.empty()) fail("expected variables or IRIs after DESCRIBE");
      }
    } else {
      fail(sub ? "expected SELECT" : "expected SELECT, CONSTRUCT, DESCRIBE or ASK");
    }
    if (!sub) dataset_clauses(q);
    if (q.form == Query::Form::Describe && !is_word("WHERE") && !is_punct("{")) {
      q.where = nullptr;
    } else {
      accept_word("WHERE");
      q.where = group_graph_pattern();
    }
    solution_modifiers(q);
    if (q.grouped && q.form == Query::Form::Select) check_grouped_projection(q);
    values_clause(q);
    current_ = saved;
  }

  void select_clause(Query& q) {
    if (accept_word("DISTINCT")) {
      q.distinct = true;
    } else if (accept_word("REDUCED")) {
      q.reduced = true;
    }
    if (accept_punct("*")) {
      q.select_all = true;
      return;
    }
    while (true) {
      if (peek().kind == Tok::Var) {
        q.projection.push_back(ProjectionItem{vars_->get(next().text), nullptr});
      } else if (is_punct("(")) {
        next();
        ExprPtr e = expression(/*allow_aggregates=*/true);
        expect_word("AS");
        if (peek().kind != Tok::Var) fail("expected a variable after AS");
        int v = vars_->get(next().text);
        for (const ProjectionItem& item : q.projection)
          if (item.var == v) fail("variable ?" + vars_->name(v) + " is projected twice");
        q.projection.push_back(ProjectionItem{v, e});
        expect_punct(")");
      } else {
        break;
      }
    }
    if (q.projection.empty()) fail("expected variables or '*' after SELECT");
  }

  void check_grouped_projection(const Query& q) {
    for (const ProjectionItem& item : q.projection) {
      if (item.expr) continue;
      bool keyed = false;
      for (const GroupKey& k : q.group_by) keyed = keyed || k.var == item.var;
      if (!keyed)
        throw ParseError("SPARQL query error: variable ?" + vars_->name(item.var) +
                             " is projected but not grouped",
                         std::nullopt);
    }
    if (q.select_all) throw ParseError("SPARQL query error: SELECT * with GROUP BY", std::nullopt);
  }

  void dataset_clauses(Query& q) {
    while (accept_word("FROM")) {
      if (accept_word("NAMED")) {
        q.from_named.push_back(parse_iri());
      } else {
        q.from.push_back(parse_iri());
      }
    }
  }

  void solution_modifiers(Query& q) {
    if (is_word("GROUP")) {
      next();
      expect_word("BY");
      q.grouped = true;
      do {
        q.group_by.push_back(group_condition());
      } while (peek().kind == Tok::Var || is_punct("(") || at_iri() || is_call_start());
    }
    if (accept_word("HAVING")) {
      q.grouped = true;
      do {
        q.having.push_back(constraint(/*allow_aggregates=*/true));
      } while (is_punct("(") || at_iri() || is_call_start());
    }
    if (is_word("ORDER")) {
      next();
      expect_word("BY");
      do {
        OrderCondition c;
        if (accept_word("ASC")) {
          c.expr = bracketted(true);
        } else if (accept_word("DESC")) {
          c.descending = true;
          c.expr = bracketted(true);
        } else if (peek().kind == Tok::Var) {
          c.expr = var_expr(vars_->get(next().text));
        } else {
          c.expr = constraint(true);
        }
        q.order_by.push_back(std::move(c));
      } while (peek().kind == Tok::Var || is_punct("(") || is_word("ASC") || is_word("DESC") || at_iri() ||
               is_call_start());
    }
    for (int i = 0; i < 2; ++i) {
      if (accept_word("LIMIT")) {
        if (peek().kind != Tok::Integer) fail("expected an integer after LIMIT");
        q.limit = std::stoull(next().text);
      } else if (accept_word("OFFSET")) {
        if (peek().kind != Tok::Integer) fail("expected an integer after OFFSET");
        q.offset = std::stoull(next().text);
      }
    }
  }

  GroupKey group_condition() {
    if (peek().kind == Tok::Var) {
      int v = vars_->get(next().text);
      return GroupKey{var_expr(v), v};
    }
    if (is_punct("(")) {
      next();
      ExprPtr e = expression(false);
      int v;
      if (accept_word("AS")) {
        if (peek().kind != Tok::Var) fail("expected a variable after AS");
        v = vars_->get(next().text);
      } else {
        v = e->op == Op::Var ? e->var : vars_->hidden("g");
      }
      expect_punct(")");
      return GroupKey{e, v};
    }
    ExprPtr e = constraint(false);
    return GroupKey{e, vars_->hidden("g")};
  }

  void values_clause(Query& q) {
    if (accept_word("VALUES")) q.values = data_block();
  }

  // ---- group graph patterns -----------------------------------------------

  PatternPtr group_graph_pattern() {
    if (!is_punct("{")) fail("expected '{'");
    next();
    PatternPtr result;
    if (is_word("SELECT")) {
      auto sub = std::make_shared<Query>();
      sub->vars = vars_;
      parse_query_body(*sub, /*sub=*/true);
      auto p = std::make_shared<Pattern>();
      p->kind = Pattern::Kind::SubQuery;
      p->subquery = sub;
      result = p;
    } else {
      result = group_graph_pattern_sub();
    }
    expect_punct("}");
    return result;
  }

  PatternPtr group_graph_pattern_sub() {
    PatternPtr g = empty_group();
    std::vector<ExprPtr> filters;
    while (!is_punct("}")) {
      if (peek().kind == Tok::End) fail("unterminated group pattern");
      if (is_word("OPTIONAL")) {
        next();
        PatternPtr inner = group_graph_pattern();
        auto lj = std::make_shared<Pattern>();
        lj->kind = Pattern::Kind::LeftJoin;
        lj->left = g;
        if (inner->kind == Pattern::Kind::Filter) {
          lj->right = inner->left;
          lj->exprs = inner->exprs;
        } else {
          lj->right = inner;
        }
        g = lj;
      } else if (is_word("MINUS")) {
        next();
        g = binary(Pattern::Kind::Minus, g, group_graph_pattern());
      } else if (is_word("GRAPH")) {
        next();
        auto p = std::make_shared<Pattern>();
        p->kind = Pattern::Kind::Graph;
        p->name = parse_var_or_iri();
        p->left = group_graph_pattern();
        g = join(g, p);
      } else if (is_word("SERVICE")) {
        next();
        auto p = std::make_shared<Pattern>();
        p->kind = Pattern::Kind::Service;
        p->silent = accept_word("SILENT");
        p->name = parse_var_or_iri();
        std::size_t start = peek().offset;
        p->left = group_graph_pattern();
        std::size_t end = toks_[pos_ - 1].offset + 1;
        p->service_text = std::string(text_.substr(start, end - start));
        g = join(g, p);
      } else if (is_word("FILTER")) {
        next();
        filters.push_back(constraint(false));
      } else if (is_word("BIND")) {
        next();
        expect_punct("(");
        ExprPtr e = expression(false);
        expect_word("AS");
        if (peek().kind != Tok::Var) fail("expected a variable after AS");
        int v = vars_->get(next().text);
        expect_punct(")");
        auto p = std::make_shared<Pattern>();
        p->kind = Pattern::Kind::Extend;
        p->left = g;
        p->var = v;
        p->expr = e;
        g = p;
      } else if (is_word("VALUES")) {
        next();
        g = join(g, data_block());
      } else if (is_punct("{")) {
        PatternPtr u = group_graph_pattern();
        while (accept_word("UNION")) u = binary(Pattern::Kind::Union, u, group_graph_pattern());
        // A nested group is never merged into the surrounding BGP.
        if (u->kind == Pattern::Kind::Bgp && !u->triples.empty()) {
          auto wrap = std::make_shared<Pattern>();
          wrap->kind = Pattern::Kind::Join;
          wrap->left = empty_group();
          wrap->right = u;
          u = wrap;
        }
        g = is_empty_bgp(g) ? u : binary(Pattern::Kind::Join, g, u);
      } else {
        g = join(g, triples_block());
      }
      accept_punct(".");
    }
    if (!filters.empty()) {
      auto f = std::make_shared<Pattern>();
      f->kind = Pattern::Kind::Filter;
      f->left = g;
      f->exprs = std::move(filters);
      g = f;
    }
    return g;
  }

  PatternPtr data_block() {
    auto p = std::make_shared<Pattern>();
    p->kind = Pattern::Kind::Values;
    if (peek().kind == Tok::Var) {
      p->values_vars.push_back(vars_->get(next().text));
      expect_punct("{");
      while (!accept_punct("}")) p->values_rows.push_back({data_value()});
      return p;
    }
    bool nil = peek().kind == Tok::Nil;
    if (nil) {
      next();
    } else {
      expect_punct("(");
      while (peek().kind == Tok::Var) p->values_vars.push_back(vars_->get(next().text));
      expect_punct(")");
    }
    expect_punct("{");
    while (!accept_punct("}")) {
      std::vector<std::optional<Term>> row;
      if (peek().kind == Tok::Nil) {
        next();
      } else {
        expect_punct("(");
        while (!accept_punct(")")) row.push_back(data_value());
      }
      if (row.size() != p->values_vars.size()) fail("VALUES row has the wrong number of values");
      p->values_rows.push_back(std::move(row));
    }
    return p;
  }

  std::optional<Term> data_value() {
    if (accept_word("UNDEF")) return std::nullopt;
    if (at_iri()) return Term::iri(parse_iri());
    if (at_literal()) return parse_literal();
    fail("expected a data value");
  }

  // ---- triples ---------------------------------------------------------------

  struct TripleSink {
    std::vector<TriplePattern> triples;
    std::vector<PathPattern> paths;
  };

  bool at_triples_start() const {
    const Token& t = peek();
    return t.kind == Tok::Var || t.kind == Tok::Iri || t.kind == Tok::PName || t.kind == Tok::Blank ||
           t.kind == Tok::Anon || t.kind == Tok::Nil || at_literal() || is_punct("(") || is_punct("[");
  }

  PatternPtr triples_block() {
    if (!at_triples_start()) fail("expected a triple pattern or graph pattern");
    TripleSink sink;
    triples_same_subject(sink, /*paths=*/true);
    auto bgp = std::make_shared<Pattern>();
    bgp->triples = std::move(sink.triples);
    PatternPtr out = bgp;
    for (PathPattern& pp : sink.paths) {
      auto p = std::make_shared<Pattern>();
      p->kind = Pattern::Kind::Path;
      p->path = std::move(pp);
      out = join(out, p);
    }
    return out;
  }

  std::vector<TriplePattern> triples_template() {
    TripleSink sink;
    while (!is_punct("}")) {
      triples_same_subject(sink, /*paths=*/false);
      if (!accept_punct(".")) break;
    }
    return std::move(sink.triples);
  }

  void triples_same_subject(TripleSink& sink, bool paths) {
    if (is_punct("[") || is_punct("(")) {
      VarOrTerm s = triples_node(sink, paths);
      if (!is_punct(".") && !is_punct("}") && !is_graph_keyword()) property_list(s, sink, paths);
      return;
    }
    auto s = try_var_or_term();
    if (!s) fail("expected a subject");
    property_list(*s, sink, paths);
  }

  bool is_graph_keyword() const {
    static const char* kWords[] = {"OPTIONAL", "MINUS", "GRAPH", "SERVICE", "FILTER", "BIND", "VALUES"};
    for (const char* w : kWords)
      if (is_word(w)) return true;
    return is_punct("{");
  }

  VarOrTerm triples_node(TripleSink& sink, bool paths) {
    if (accept_punct("[")) {
      VarOrTerm node = fresh_node();
      property_list(node, sink, paths);
      expect_punct("]");
      return node;
    }
    expect_punct("(");
    std::vector<VarOrTerm> items;
    while (!accept_punct(")")) items.push_back(graph_node(sink, paths));
    if (items.empty()) fail("empty collection");
    VarOrTerm head = fresh_node();
    VarOrTerm cur = head;
    for (std::size_t i = 0; i < items.size(); ++i) {
      sink.triples.push_back({cur, VarOrTerm::constant(Term::iri(std::string(rdf::vocab::kRdfFirst))), items[i]});
      VarOrTerm rest = i + 1 == items.size() ? VarOrTerm::constant(Term::iri(std::string(rdf::vocab::kRdfNil)))
                                             : fresh_node();
      sink.triples.push_back({cur, VarOrTerm::constant(Term::iri(std::string(rdf::vocab::kRdfRest))), rest});
      cur = rest;
    }
    return head;
  }

  VarOrTerm graph_node(TripleSink& sink, bool paths) {
    if (is_punct("[") || is_punct("(")) return triples_node(sink, paths);
    auto t = try_var_or_term();
    if (!t) fail("expected an RDF term or variable");
    return *t;
  }

  void property_list(const VarOrTerm& s, TripleSink& sink, bool paths) {
    while (true) {
      if (is_punct(".") || is_punct("]") || is_punct("}") || peek().kind == Tok::End) return;
      // Verb.
      std::optional<VarOrTerm> simple;
      PathPtr path;
      if (peek().kind == Tok::Var) {
        simple = VarOrTerm::variable(vars_->get(next().text));
      } else if (is_word("a") && peek().text == "a") {
        next();
        simple = VarOrTerm::constant(Term::iri(std::string(rdf::vocab::kRdfType)));
      } else if (paths) {
        path = path_alternative();
        if (path->kind == PathExpr::Kind::Link) {
          simple = VarOrTerm::constant(path->iri);
          path = nullptr;
        }
      } else {
        simple = VarOrTerm::constant(Term::iri(parse_iri()));
      }
      // Objects.
      do {
        VarOrTerm o = graph_node(sink, paths);
        if (simple) {
          sink.triples.push_back({s, *simple, o});
        } else {
          emit_path(s, path, o, sink);
        }
      } while (accept_punct(","));
      if (!accept_punct(";")) return;
      while (accept_punct(";")) {
      }
    }
  }

  void emit_path(const VarOrTerm& s, const PathPtr& path, const VarOrTerm& o, TripleSink& sink) {
    switch (path->kind) {
      case PathExpr::Kind::Link:
        sink.triples.push_back({s, VarOrTerm::constant(path->iri), o});
        return;
      case PathExpr::Kind::Inverse:
        if (path->parts[0]->kind == PathExpr::Kind::Link) {
          sink.triples.push_back({o, VarOrTerm::constant(path->parts[0]->iri), s});
          return;
        }
        break;
      case PathExpr::Kind::Seq: {
        VarOrTerm cur = s;
        for (std::size_t i = 0; i < path->parts.size(); ++i) {
          VarOrTerm nxt = i + 1 == path->parts.size() ? o : VarOrTerm::variable(vars_->hidden("p"));
          emit_path(cur, path->parts[i], nxt, sink);
          cur = nxt;
        }
        return;
      }
      default:
        break;
    }
    sink.paths.push_back(PathPattern{s, path, o});
  }

  PathPtr path_alternative() {
    PathPtr first = path_sequence();
    if (!is_punct("|")) return first;
    auto alt = std::make_shared<PathExpr>();
    alt->kind = PathExpr::Kind::Alt;
    alt->parts.push_back(first);
    while (accept_punct("|")) alt->parts.push_back(path_sequence());
    return alt;
  }

  PathPtr path_sequence() {
    PathPtr first = path_elt_or_inverse();
    if (!is_punct("/")) return first;
    auto seq = std::make_shared<PathExpr>();
    seq->kind = PathExpr::Kind::Seq;
    seq->parts.push_back(first);
    while (accept_punct("/")) seq->parts.push_back(path_elt_or_inverse());
    return seq;
  }

  PathPtr path_elt_or_inverse() {
    if (accept_punct("^")) {
      auto inv = std::make_shared<PathExpr>();
      inv->kind = PathExpr::Kind::Inverse;
      inv->parts.push_back(path_elt());
      return inv;
    }
    return path_elt();
  }

  PathPtr path_elt() {
    PathPtr primary = path_primary();
    PathExpr::Kind kind;
    if (is_punct("*")) {
      kind = PathExpr::Kind::ZeroOrMore;
    } else if (is_punct("+")) {
      kind = PathExpr::Kind::OneOrMore;
    } else if (is_punct("?")) {
      kind = PathExpr::Kind::ZeroOrOne;
    } else {
      return primary;
    }
    next();
    auto mod = std::make_shared<PathExpr>();
    mod->kind = kind;
    mod->parts.push_back(primary);
    return mod;
  }

  PathPtr path_primary() {
    if (accept_punct("(")) {
      PathPtr p = path_alternative();
      expect_punct(")");
      return p;
    }
    if (accept_punct("!")) {
      auto neg = std::make_shared<PathExpr>();
      neg->kind = PathExpr::Kind::Negated;
      auto one = [&] {
        bool inverse = accept_punct("^");
        Term iri = is_word("a") ? (next(), Term::iri(std::string(rdf::vocab::kRdfType))) : Term::iri(parse_iri());
        (inverse ? neg->inverse : neg->forward).push_back(std::move(iri));
      };
      if (accept_punct("(")) {
        if (!is_punct(")")) {
          one();
          while (accept_punct("|")) one();
        }
        expect_punct(")");
      } else if (peek().kind == Tok::Nil) {
        next();
      } else {
        one();
      }
      return neg;
    }
    auto link = std::make_shared<PathExpr>();
    link->kind = PathExpr::Kind::Link;
    if (is_word("a") && peek().text == "a") {
      next();
      link->iri = Term::iri(std::string(rdf::vocab::kRdfType));
    } else {
      link->iri = Term::iri(parse_iri());
    }
    return link;
  }

  // ---- expressions -----------------------------------------------------------

  bool is_call_start() const {
    if (peek().kind != Tok::Word) return false;
    std::string up = util::to_upper_ascii(peek().text);
    return builtins().count(up) > 0 || aggregate_names().count(up) > 0 || up == "BOUND" ||
           up == "EXISTS" || up == "NOT";
  }

  ExprPtr constraint(bool allow_aggregates) {
    if (is_punct("(")) return bracketted(allow_aggregates);
    if (at_iri()) return iri_or_function(allow_aggregates, /*require_call=*/true);
    if (peek().kind == Tok::Word) return builtin_call(allow_aggregates);
    fail("expected a constraint");
  }

  ExprPtr bracketted(bool allow_aggregates) {
    expect_punct("(");
    ExprPtr e = expression(allow_aggregates);
    expect_punct(")");
    return e;
  }

  ExprPtr expression(bool allow_aggregates) {
    bool saved = allow_aggregates_;
    allow_aggregates_ = allow_aggregates;
    ExprPtr e = or_expr();
    allow_aggregates_ = saved;
    return e;
  }

  ExprPtr or_expr() {
    ExprPtr l = and_expr();
    while (accept_punct("||")) l = make_expr(Op::Or, {l, and_expr()});
    return l;
  }

  ExprPtr and_expr() {
    ExprPtr l = relational();
    while (accept_punct("&&")) l = make_expr(Op::And, {l, relational()});
    return l;
  }

  ExprPtr relational() {
    ExprPtr l = additive();
    static const std::pair<std::string_view, Op> kOps[] = {
        {"=", Op::Eq}, {"!=", Op::Ne}, {"<", Op::Lt}, {">", Op::Gt}, {"<=", Op::Le}, {">=", Op::Ge}};
    for (const auto& [text, op] : kOps) {
      if (accept_punct(text)) return make_expr(op, {l, additive()});
    }
    if (accept_word("IN")) return in_list(Op::In, l);
    if (is_word("NOT") && is_word("IN", 1)) {
      next();
      next();
      return in_list(Op::NotIn, l);
    }
    return l;
  }

  ExprPtr in_list(Op op, ExprPtr l) {
    std::vector<ExprPtr> args{std::move(l)};
    if (peek().kind == Tok::Nil) {
      next();
    } else {
      expect_punct("(");
      args.push_back(or_expr());
      while (accept_punct(",")) args.push_back(or_expr());
      expect_punct(")");
    }
    return make_expr(op, std::move(args));
  }

  ExprPtr additive() {
    ExprPtr l = multiplicative();
    while (true) {
      if (accept_punct("+")) {
        l = make_expr(Op::Add, {l, multiplicative()});
      } else if (accept_punct("-")) {
        l = make_expr(Op::Sub, {l, multiplicative()});
      } else {
        return l;
      }
    }
  }

  ExprPtr multiplicative() {
    ExprPtr l = unary();
    while (true) {
      if (accept_punct("*")) {
        l = make_expr(Op::Mul, {l, unary()});
      } else if (accept_punct("/")) {
        l = make_expr(Op::Div, {l, unary()});
      } else {
        return l;
      }
    }
  }

  ExprPtr unary() {
    if (accept_punct("!")) return make_expr(Op::Not, {primary()});
    if (accept_punct("+")) return make_expr(Op::Pos, {primary()});
    if (accept_punct("-")) return make_expr(Op::Neg, {primary()});
    return primary();
  }

  ExprPtr primary() {
    const Token& t = peek();
    if (is_punct("(")) return bracketted(allow_aggregates_);
    if (t.kind == Tok::Var) {
      next();
      return var_expr(vars_->get(t.text));
    }
    if (at_iri()) return iri_or_function(allow_aggregates_, false);
    if (t.kind == Tok::String || t.kind == Tok::Integer || t.kind == Tok::Decimal || t.kind == Tok::Double ||
        is_word("true") || is_word("false"))
      return const_expr(parse_literal());
    if (t.kind == Tok::Word) return builtin_call(allow_aggregates_);
    fail("expected an expression");
  }

  std::vector<ExprPtr> arg_list(bool allow_aggregates) {
    std::vector<ExprPtr> args;
    if (peek().kind == Tok::Nil) {
      next();
      return args;
    }
    expect_punct("(");
    accept_word("DISTINCT");
    if (is_punct(")")) {
      next();
      return args;
    }
    args.push_back(expression(allow_aggregates));
    while (accept_punct(",")) args.push_back(expression(allow_aggregates));
    expect_punct(")");
    return args;
  }

  ExprPtr iri_or_function(bool allow_aggregates, bool require_call) {
    const Token& at = peek();
    std::string iri = parse_iri();
    if (peek().kind != Tok::Nil && !is_punct("(")) {
      if (require_call) fail_at(at, "expected a function call");
      return const_expr(Term::iri(iri));
    }
    std::vector<ExprPtr> args = arg_list(allow_aggregates);
    if (auto op = cast_op(iri)) {
      if (args.size() != 1) fail_at(at, "a cast takes exactly one argument");
      return make_expr(*op, std::move(args));
    }
    auto e = std::make_shared<Expr>();
    e->op = Op::UnknownFunction;
    e->function_iri = iri;
    e->args = std::move(args);
    return e;
  }

  ExprPtr builtin_call(bool allow_aggregates) {
    const Token& t = peek();
    std::string name = util::to_upper_ascii(t.text);
    if (name == "NOT" && is_word("EXISTS", 1)) {
      next();
      next();
      auto e = std::make_shared<Expr>();
      e->op = Op::NotExists;
      e->pattern = group_graph_pattern();
      return e;
    }
    if (name == "EXISTS") {
      next();
      auto e = std::make_shared<Expr>();
      e->op = Op::Exists;
      e->pattern = group_graph_pattern();
      return e;
    }
    if (name == "BOUND") {
      next();
      expect_punct("(");
      if (peek().kind != Tok::Var) fail("BOUND takes a variable");
      ExprPtr v = var_expr(vars_->get(next().text));
      expect_punct(")");
      return make_expr(Op::Bound, {v});
    }
    auto agg = aggregate_names().find(name);
    if (agg != aggregate_names().end()) {
      if (!allow_aggregates || current_ == nullptr) fail("aggregate not allowed here");
      next();
      return aggregate(agg->second);
    }
    auto it = builtins().find(name);
    if (it == builtins().end()) fail("unknown function or keyword");
    next();
    std::vector<ExprPtr> args;
    if (peek().kind == Tok::Nil) {
      next();
    } else {
      expect_punct("(");
      if (!is_punct(")")) {
        args.push_back(expression(allow_aggregates));
        while (accept_punct(",")) args.push_back(expression(allow_aggregates));
      }
      expect_punct(")");
    }
    const BuiltinInfo& info = it->second;
    int n = static_cast<int>(args.size());
    if (n < info.min_args || (info.max_args >= 0 && n > info.max_args))
      fail_at(t, "wrong number of arguments to " + name);
    return make_expr(info.op, std::move(args));
  }

  ExprPtr aggregate(Aggregate::Kind kind) {
    Aggregate a;
    a.kind = kind;
    expect_punct("(");
    a.distinct = accept_word("DISTINCT");
    if (kind == Aggregate::Kind::Count && accept_punct("*")) {
      a.arg = nullptr;
    } else {
      a.arg = expression(false);
    }
    if (kind == Aggregate::Kind::GroupConcat && accept_punct(";")) {
      expect_word("SEPARATOR");
      expect_punct("=");
      if (peek().kind != Tok::String) fail("expected a string separator");
      a.separator = next().text;
    }
    expect_punct(")");
    a.result_var = vars_->hidden("agg");
    current_->aggregates.push_back(a);
    current_->grouped = true;
    return var_expr(a.result_var);
  }

  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string base_;
  std::unordered_map<std::string, std::string> prefixes_;
  std::shared_ptr<VarTable> vars_;
  std::unordered_map<std::string, int> blank_vars_;
  Query* current_ = nullptr;
  bool allow_aggregates_ = false;
  bool template_mode_ = false;
  int template_blank_ = 0;
};

}  // namespace

std::shared_ptr<const Query> parse_query(std::string_view text, std::string_view base) {
  return Parser(text, base).run();
}

}  // namespace facadex::sparql
