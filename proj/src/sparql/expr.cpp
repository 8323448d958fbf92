#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>

#include "eval.hpp"
#include "facadex/error.hpp"
#include "facadex/rdf/iri.hpp"
#include "facadex/util/strings.hpp"
#include "values.hpp"

namespace facadex::sparql::detail {

namespace {

using rdf::Term;
namespace vocab = rdf::vocab;
using Result = std::optional<TermRef>;

// Two string arguments are compatible when both are plain, or the second is
// plain, or both carry the same language tag.
bool arg_compatible(const Term& a, const Term& b) {
  if (!is_string_like(a) || !is_string_like(b)) return false;
  return !b.has_lang() || a.lang == b.lang;
}

Term like(const Term& model, std::string value) {
  if (model.has_lang()) return Term::lang_literal(std::move(value), model.lang);
  return Term::literal(std::move(value));
}

std::string hex_digest(const EVP_MD* md, const std::string& data) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out, &len, md, nullptr);
  static const char* kHex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += kHex[out[i] >> 4];
    s += kHex[out[i] & 15];
  }
  return s;
}

std::string encode_for_uri(const std::string& s) {
  static const char* kHex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

std::string two_digits(int v) {
  std::string s = std::to_string(v);
  return s.size() < 2 ? "0" + s : s;
}

// XPath replacement syntax to ECMAScript format syntax.
std::string convert_replacement(const std::string& r) {
  std::string out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == '\\' && i + 1 < r.size()) {
      if (r[i + 1] == '$') out += "$$";
      else out += r[i + 1];
      ++i;
    } else if (r[i] == '$' && i + 1 < r.size() && r[i + 1] == '0') {
      out += "$&";
      ++i;
    } else {
      out += r[i];
    }
  }
  return out;
}

std::string uuid4(std::mt19937_64& rng) {
  std::uint64_t hi = rng();
  std::uint64_t lo = rng();
  hi = (hi & 0xFFFFFFFFFFFF0FFFULL) | 0x0000000000004000ULL;
  lo = (lo & 0x3FFFFFFFFFFFFFFFULL) | 0x8000000000000000ULL;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%08llx-%04llx-%04llx-%04llx-%012llx",
                static_cast<unsigned long long>(hi >> 32), static_cast<unsigned long long>((hi >> 16) & 0xFFFF),
                static_cast<unsigned long long>(hi & 0xFFFF), static_cast<unsigned long long>(lo >> 48),
                static_cast<unsigned long long>(lo & 0xFFFFFFFFFFFFULL));
  return buf;
}

std::optional<Numeric> cast_numeric(const Term& t, Numeric::Kind kind) {
  if (!t.is_literal() || t.has_lang()) return std::nullopt;
  Numeric n;
  n.kind = kind;
  if (auto v = to_numeric(t)) {
    long double x = v->as_long_double();
    if (kind == Numeric::Kind::Integer) {
      if (std::isnan(x) || std::isinf(x)) return std::nullopt;
      if (v->kind == Numeric::Kind::Integer) {
        n.i = v->i;
      } else {
        long double tr = std::trunc(x);
        if (tr > 9.2e18L || tr < -9.2e18L) return std::nullopt;
        n.i = static_cast<long long>(tr);
      }
    } else {
      if (kind == Numeric::Kind::Decimal && (std::isnan(x) || std::isinf(x))) return std::nullopt;
      n.d = x;
    }
    return n;
  }
  if (t.datatype == vocab::kXsdBoolean) {
    if (t.value != "true" && t.value != "false" && t.value != "1" && t.value != "0") return std::nullopt;
    bool b = t.value == "true" || t.value == "1";
    n.i = b;
    n.d = b;
    return n;
  }
  if (t.datatype != vocab::kXsdString) return std::nullopt;
  std::string_view dt = kind == Numeric::Kind::Integer   ? vocab::kXsdInteger
                        : kind == Numeric::Kind::Decimal ? vocab::kXsdDecimal
                        : kind == Numeric::Kind::Double  ? vocab::kXsdDouble
                                                         : vocab::kXsdFloat;
  std::string lex(util::trim(t.value));
  return to_numeric(Term::literal(lex, dt));
}

}  // namespace

const std::regex* Evaluator::compile_regex(const std::string& pattern, const std::string& flags) {
  std::string key = flags + '\x1f' + pattern;
  auto it = regex_cache_.find(key);
  if (it != regex_cache_.end()) return it->second.get();
  auto syntax = std::regex::ECMAScript;
  std::string p;
  bool dotall = flags.find('s') != std::string::npos;
  bool extended = flags.find('x') != std::string::npos;
  if (flags.find('q') != std::string::npos) {
    for (char c : pattern) {
      if (std::string_view("\\^$.|?*+()[]{}").find(c) != std::string_view::npos) p += '\\';
      p += c;
    }
  } else {
    bool in_class = false;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      char c = pattern[i];
      if (c == '\\' && i + 1 < pattern.size()) {
        p += c;
        p += pattern[++i];
        continue;
      }
      if (in_class) {
        if (c == ']') in_class = false;
        p += c;
        continue;
      }
      if (c == '[') in_class = true;
      if (extended && (c == ' ' || c == '\t' || c == '\n' || c == '\r')) continue;
      if (dotall && c == '.') {
        p += "[\\s\\S]";
        continue;
      }
      p += c;
    }
  }
  for (char f : flags) {
    if (f == 'i') syntax |= std::regex::icase;
    else if (std::string_view("smxq").find(f) == std::string_view::npos) return nullptr;
  }
  std::unique_ptr<std::regex> re;
  try {
    re = std::make_unique<std::regex>(p, syntax);
  } catch (const std::regex_error&) {
    re = nullptr;
  }
  const std::regex* out = re.get();
  regex_cache_.emplace(std::move(key), std::move(re));
  return out;
}

std::optional<bool> Evaluator::eval_bool(const Expr& e, const Row& row, const Scope& scope) {
  Result r = eval_expr(e, row, scope);
  if (!r) return std::nullopt;
  return effective_boolean(**r);
}

Result Evaluator::eval_expr(const Expr& e, const Row& row, const Scope& scope) {
  switch (e.op) {
    case Op::Constant: return &e.constant;
    case Op::Var: {
      TermRef t = row[static_cast<std::size_t>(e.var)];
      for (auto it = outer_.rbegin(); t == nullptr && it != outer_.rend(); ++it)
        t = (**it)[static_cast<std::size_t>(e.var)];
      if (t == nullptr) return std::nullopt;
      return t;
    }
    case Op::Exists:
    case Op::NotExists: {
      Row seed = row;
      for (const Row* o : outer_)
        for (std::size_t i = 0; i < seed.size(); ++i)
          if (seed[i] == nullptr) seed[i] = (*o)[i];
      outer_.push_back(&row);
      Rows out;
      try {
        out = eval(*e.pattern, scope, Rows{seed});
      } catch (...) {
        outer_.pop_back();
        throw;
      }
      outer_.pop_back();
      bool found = !out.empty();
      return arena_.intern(Term::boolean(e.op == Op::Exists ? found : !found));
    }
    case Op::Or: {
      auto a = eval_bool(*e.args[0], row, scope);
      if (a && *a) return arena_.intern(Term::boolean(true));
      auto b = eval_bool(*e.args[1], row, scope);
      if (b && *b) return arena_.intern(Term::boolean(true));
      if (!a || !b) return std::nullopt;
      return arena_.intern(Term::boolean(false));
    }
    case Op::And: {
      auto a = eval_bool(*e.args[0], row, scope);
      if (a && !*a) return arena_.intern(Term::boolean(false));
      auto b = eval_bool(*e.args[1], row, scope);
      if (b && !*b) return arena_.intern(Term::boolean(false));
      if (!a || !b) return std::nullopt;
      return arena_.intern(Term::boolean(true));
    }
    case Op::Not: {
      auto a = eval_bool(*e.args[0], row, scope);
      if (!a) return std::nullopt;
      return arena_.intern(Term::boolean(!*a));
    }
    case Op::Coalesce:
      for (const ExprPtr& arg : e.args) {
        Result r = eval_expr(*arg, row, scope);
        if (r) return r;
      }
      return std::nullopt;
    case Op::If: {
      auto c = eval_bool(*e.args[0], row, scope);
      if (!c) return std::nullopt;
      return eval_expr(*e.args[*c ? 1 : 2], row, scope);
    }
    case Op::Bound: {
      const Expr& v = *e.args[0];
      if (v.op != Op::Var) return std::nullopt;
      return arena_.intern(Term::boolean(eval_expr(v, row, scope).has_value()));
    }
    case Op::In:
    case Op::NotIn: {
      Result lhs = eval_expr(*e.args[0], row, scope);
      if (!lhs) return std::nullopt;
      bool error = false;
      for (std::size_t i = 1; i < e.args.size(); ++i) {
        Result r = eval_expr(*e.args[i], row, scope);
        std::optional<bool> eq = r ? value_equal(**lhs, **r) : std::nullopt;
        if (!eq) {
          error = true;
        } else if (*eq) {
          return arena_.intern(Term::boolean(e.op == Op::In));
        }
      }
      if (error) return std::nullopt;
      return arena_.intern(Term::boolean(e.op == Op::NotIn));
    }
    default: return call(e, row, scope);
  }
}

Result Evaluator::call(const Expr& e, const Row& row, const Scope& scope) {
  // Nullary functions first; everything else evaluates its arguments eagerly.
  switch (e.op) {
    case Op::Rand: {
      std::uniform_real_distribution<double> dist(0.0, 1.0);
      return arena_.intern(Term::literal(canonical_double(dist(rng_)), vocab::kXsdDouble));
    }
    case Op::Now: {
      if (!now_) {
        std::time_t t = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        now_ = arena_.intern(Term::literal(buf, vocab::kXsdDateTime));
      }
      return *now_;
    }
    case Op::Uuid: return arena_.intern(Term::iri("urn:uuid:" + uuid4(rng_)));
    case Op::StrUuid: return arena_.intern(Term::literal(uuid4(rng_)));
    case Op::Bnode:
      if (e.args.empty()) return arena_.intern(Term::blank("q" + std::to_string(blank_counter_++)));
      break;
    case Op::UnknownFunction: return std::nullopt;
    default: break;
  }

  std::vector<TermRef> a;
  a.reserve(e.args.size());
  for (const ExprPtr& arg : e.args) {
    Result r = eval_expr(*arg, row, scope);
    if (!r) return std::nullopt;
    a.push_back(*r);
  }
  auto boolean = [&](bool b) -> Result { return arena_.intern(Term::boolean(b)); };
  auto simple = [&](std::string s) -> Result { return arena_.intern(Term::literal(std::move(s))); };
  auto number = [&](const Numeric& n) -> Result { return arena_.intern(numeric_term(n)); };
  auto integer = [&](long long v) -> Result { return arena_.intern(Term::integer(v)); };

  switch (e.op) {
    case Op::Eq:
    case Op::Ne: {
      if (a[0] == a[1]) return boolean(e.op == Op::Eq);
      auto eq = value_equal(*a[0], *a[1]);
      if (!eq) return std::nullopt;
      return boolean(e.op == Op::Eq ? *eq : !*eq);
    }
    case Op::Lt:
    case Op::Gt:
    case Op::Le:
    case Op::Ge: {
      auto c = value_compare(*a[0], *a[1]);
      if (!c) return std::nullopt;
      switch (e.op) {
        case Op::Lt: return boolean(*c < 0);
        case Op::Gt: return boolean(*c > 0);
        case Op::Le: return boolean(*c <= 0);
        default: return boolean(*c >= 0);
      }
    }
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      auto x = to_numeric(*a[0]);
      auto y = to_numeric(*a[1]);
      if (!x || !y) return std::nullopt;
      ArithOp op = e.op == Op::Add ? ArithOp::Add : e.op == Op::Sub ? ArithOp::Sub : e.op == Op::Mul ? ArithOp::Mul : ArithOp::Div;
      auto r = arithmetic(op, *x, *y);
      if (!r) return std::nullopt;
      return number(*r);
    }
    case Op::Neg:
    case Op::Pos: {
      auto x = to_numeric(*a[0]);
      if (!x) return std::nullopt;
      if (e.op == Op::Pos) return number(*x);
      Numeric zero;
      auto r = arithmetic(ArithOp::Sub, zero, *x);
      if (!r) return std::nullopt;
      if (x->kind != Numeric::Kind::Integer) r->kind = x->kind;
      return number(*r);
    }
    case Op::Abs:
    case Op::Ceil:
    case Op::Floor:
    case Op::Round: {
      auto x = to_numeric(*a[0]);
      if (!x) return std::nullopt;
      if (x->kind == Numeric::Kind::Integer) {
        if (e.op == Op::Abs && x->i < 0) {
          if (x->i == std::numeric_limits<long long>::min()) return std::nullopt;
          x->i = -x->i;
        }
        return number(*x);
      }
      switch (e.op) {
        case Op::Abs: x->d = std::fabs(x->d); break;
        case Op::Ceil: x->d = std::ceil(x->d); break;
        case Op::Floor: x->d = std::floor(x->d); break;
        default: x->d = std::floor(x->d + 0.5L); break;
      }
      return number(*x);
    }
    case Op::Str:
      if (a[0]->is_blank()) return std::nullopt;
      return simple(a[0]->value);
    case Op::Lang:
      if (!a[0]->is_literal()) return std::nullopt;
      return simple(a[0]->lang);
    case Op::LangMatches: {
      if (!a[0]->is_literal() || !a[1]->is_literal()) return std::nullopt;
      const std::string& tag = a[0]->value;
      const std::string& range = a[1]->value;
      if (range == "*") return boolean(!tag.empty());
      bool m = util::iequals(tag, range) ||
               (tag.size() > range.size() && tag[range.size()] == '-' &&
                util::iequals(std::string_view(tag).substr(0, range.size()), range));
      return boolean(m);
    }
    case Op::Datatype:
      if (!a[0]->is_literal()) return std::nullopt;
      return arena_.intern(Term::iri(a[0]->datatype));
    case Op::Iri:
      if (a[0]->is_iri()) return a[0];
      if (!a[0]->is_string_literal()) return std::nullopt;
      return arena_.intern(Term::iri(query_.base.empty() ? a[0]->value : rdf::resolve_iri(query_.base, a[0]->value)));
    case Op::Bnode: {
      if (!a[0]->is_string_literal()) return std::nullopt;
      if (bnode_row_ != &row) {
        bnode_labels_.clear();
        bnode_row_ = &row;
      }
      auto it = bnode_labels_.find(a[0]->value);
      if (it != bnode_labels_.end()) return it->second;
      TermRef t = arena_.intern(Term::blank("q" + std::to_string(blank_counter_++)));
      bnode_labels_.emplace(a[0]->value, t);
      return t;
    }
    case Op::Concat: {
      std::string s;
      std::optional<std::string> lang;
      bool same_lang = true;
      for (TermRef t : a) {
        if (!is_string_like(*t)) return std::nullopt;
        s += t->value;
        if (!lang) lang = t->lang;
        else if (*lang != t->lang) same_lang = false;
      }
      if (same_lang && lang && !lang->empty()) return arena_.intern(Term::lang_literal(s, *lang));
      return simple(std::move(s));
    }
    case Op::StrLen:
      if (!is_string_like(*a[0])) return std::nullopt;
      return integer(static_cast<long long>(util::utf8_length(a[0]->value)));
    case Op::UCase:
    case Op::LCase:
      if (!is_string_like(*a[0])) return std::nullopt;
      return arena_.intern(like(*a[0], e.op == Op::UCase ? util::to_upper_ascii(a[0]->value)
                                                          : util::to_lower_ascii(a[0]->value)));
    case Op::EncodeForUri:
      if (!is_string_like(*a[0])) return std::nullopt;
      return simple(encode_for_uri(a[0]->value));
    case Op::Contains:
    case Op::StrStarts:
    case Op::StrEnds: {
      if (!arg_compatible(*a[0], *a[1])) return std::nullopt;
      std::string_view s = a[0]->value;
      std::string_view t = a[1]->value;
      if (e.op == Op::Contains) return boolean(s.find(t) != std::string_view::npos);
      if (e.op == Op::StrStarts) return boolean(s.starts_with(t));
      return boolean(s.ends_with(t));
    }
    case Op::StrBefore:
    case Op::StrAfter: {
      if (!arg_compatible(*a[0], *a[1])) return std::nullopt;
      std::size_t pos = a[0]->value.find(a[1]->value);
      if (pos == std::string::npos) return simple("");
      std::string out = e.op == Op::StrBefore ? a[0]->value.substr(0, pos)
                                              : a[0]->value.substr(pos + a[1]->value.size());
      return arena_.intern(like(*a[0], std::move(out)));
    }
    case Op::Year:
    case Op::Month:
    case Op::Day:
    case Op::Hours:
    case Op::Minutes:
    case Op::Seconds:
    case Op::Timezone:
    case Op::Tz: {
      auto dt = to_date_time(*a[0]);
      if (!dt) return std::nullopt;
      switch (e.op) {
        case Op::Year: return integer(dt->year);
        case Op::Month: return integer(dt->month);
        case Op::Day: return integer(dt->day);
        case Op::Hours: return integer(dt->hour);
        case Op::Minutes: return integer(dt->minute);
        case Op::Seconds: {
          Numeric n;
          n.kind = Numeric::Kind::Decimal;
          n.d = dt->second;
          return number(n);
        }
        case Op::Timezone: {
          if (!dt->tz_minutes) return std::nullopt;
          int m = *dt->tz_minutes;
          if (m == 0) return arena_.intern(Term::literal("PT0S", std::string(vocab::kXsd) + "dayTimeDuration"));
          std::string s = m < 0 ? "-PT" : "PT";
          m = std::abs(m);
          if (m / 60) s += std::to_string(m / 60) + "H";
          if (m % 60) s += std::to_string(m % 60) + "M";
          return arena_.intern(Term::literal(s, std::string(vocab::kXsd) + "dayTimeDuration"));
        }
        default: {
          if (!dt->tz_minutes) return simple("");
          int m = *dt->tz_minutes;
          if (m == 0) return simple("Z");
          std::string s = m < 0 ? "-" : "+";
          m = std::abs(m);
          return simple(s + two_digits(m / 60) + ":" + two_digits(m % 60));
        }
      }
    }
    case Op::Md5:
    case Op::Sha1:
    case Op::Sha256:
    case Op::Sha384:
    case Op::Sha512: {
      if (!a[0]->is_string_literal()) return std::nullopt;
      const EVP_MD* md = e.op == Op::Md5      ? EVP_md5()
                         : e.op == Op::Sha1   ? EVP_sha1()
                         : e.op == Op::Sha256 ? EVP_sha256()
                         : e.op == Op::Sha384 ? EVP_sha384()
                                              : EVP_sha512();
      return simple(hex_digest(md, a[0]->value));
    }
    case Op::StrLang:
      if (!a[0]->is_string_literal() || !a[1]->is_string_literal() || a[1]->value.empty()) return std::nullopt;
      return arena_.intern(Term::lang_literal(a[0]->value, a[1]->value));
    case Op::StrDt:
      if (!a[0]->is_string_literal() || !a[1]->is_iri()) return std::nullopt;
      return arena_.intern(Term::literal(a[0]->value, a[1]->value));
    case Op::SameTerm: return boolean(*a[0] == *a[1]);
    case Op::IsIri: return boolean(a[0]->is_iri());
    case Op::IsBlank: return boolean(a[0]->is_blank());
    case Op::IsLiteral: return boolean(a[0]->is_literal());
    case Op::IsNumeric: return boolean(to_numeric(*a[0]).has_value());
    case Op::Regex: {
      if (!is_string_like(*a[0]) || !a[1]->is_string_literal()) return std::nullopt;
      std::string flags = a.size() > 2 ? a[2]->value : "";
      const std::regex* re = compile_regex(a[1]->value, flags);
      if (re == nullptr) return std::nullopt;
      return boolean(std::regex_search(a[0]->value, *re));
    }
    case Op::Replace: {
      if (!is_string_like(*a[0]) || !a[1]->is_string_literal() || !a[2]->is_string_literal()) return std::nullopt;
      std::string flags = a.size() > 3 ? a[3]->value : "";
      const std::regex* re = compile_regex(a[1]->value, flags);
      if (re == nullptr) return std::nullopt;
      std::string out = std::regex_replace(a[0]->value, *re, convert_replacement(a[2]->value));
      return arena_.intern(like(*a[0], std::move(out)));
    }
    case Op::Substr: {
      if (!is_string_like(*a[0])) return std::nullopt;
      auto start = to_numeric(*a[1]);
      if (!start) return std::nullopt;
      std::u32string cps = util::decode_utf8(a[0]->value);
      long double from = std::floor(start->as_long_double() + 0.5L);
      long double to = INFINITY;
      if (a.size() > 2) {
        auto len = to_numeric(*a[2]);
        if (!len) return std::nullopt;
        to = from + std::floor(len->as_long_double() + 0.5L);
      }
      std::u32string out;
      for (std::size_t i = 0; i < cps.size(); ++i) {
        long double pos = static_cast<long double>(i + 1);
        if (pos >= from && pos < to) out += cps[i];
      }
      return arena_.intern(like(*a[0], util::encode_utf8(out)));
    }
    case Op::CastString:
      if (a[0]->is_blank()) return std::nullopt;
      return arena_.intern(Term::literal(a[0]->value, vocab::kXsdString));
    case Op::CastInteger:
    case Op::CastDecimal:
    case Op::CastDouble:
    case Op::CastFloat: {
      Numeric::Kind kind = e.op == Op::CastInteger   ? Numeric::Kind::Integer
                           : e.op == Op::CastDecimal ? Numeric::Kind::Decimal
                           : e.op == Op::CastDouble  ? Numeric::Kind::Double
                                                     : Numeric::Kind::Float;
      auto n = cast_numeric(*a[0], kind);
      if (!n) return std::nullopt;
      if (n->kind != kind) {
        // String source parsed under the target type; integers may overflow.
        if (kind == Numeric::Kind::Integer) return std::nullopt;
        n->kind = kind;
      }
      if (kind != Numeric::Kind::Integer && to_numeric(*a[0]) && to_numeric(*a[0])->kind == Numeric::Kind::Integer)
        n->d = static_cast<long double>(to_numeric(*a[0])->i);
      return number(*n);
    }
    case Op::CastBoolean: {
      const Term& t = *a[0];
      if (!t.is_literal() || t.has_lang()) return std::nullopt;
      if (t.datatype == vocab::kXsdBoolean || t.datatype == vocab::kXsdString) {
        std::string_view v = util::trim(t.value);
        if (v == "true" || v == "1") return boolean(true);
        if (v == "false" || v == "0") return boolean(false);
        return std::nullopt;
      }
      auto n = to_numeric(t);
      if (!n) return std::nullopt;
      long double x = n->as_long_double();
      return boolean(!(x == 0 || std::isnan(x)));
    }
    case Op::CastDateTime: {
      const Term& t = *a[0];
      if (!(t.is_string_literal() || (t.is_literal() && t.datatype == vocab::kXsdDateTime))) return std::nullopt;
      if (!parse_date_time(util::trim(t.value))) return std::nullopt;
      return arena_.intern(Term::literal(std::string(util::trim(t.value)), vocab::kXsdDateTime));
    }
    default: return std::nullopt;
  }
}

}  // namespace facadex::sparql::detail
