#include "values.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace facadex::sparql {

namespace {

using rdf::Term;
namespace vocab = rdf::vocab;

bool is_integer_datatype(std::string_view dt) {
  if (!dt.starts_with(vocab::kXsd)) return false;
  std::string_view local = dt.substr(vocab::kXsd.size());
  static const std::string_view kNames[] = {
      "integer",       "int",          "long",         "short",           "byte",
      "nonNegativeInteger", "positiveInteger", "negativeInteger", "nonPositiveInteger",
      "unsignedLong",  "unsignedInt",  "unsignedShort", "unsignedByte"};
  for (std::string_view n : kNames)
    if (local == n) return true;
  return false;
}

bool digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

std::string_view strip_sign(std::string_view s) {
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
  return s;
}

bool valid_integer(std::string_view s) { return digits(strip_sign(s)); }

bool valid_decimal(std::string_view s) {
  s = strip_sign(s);
  std::size_t dot = s.find('.');
  if (dot == std::string_view::npos) return digits(s);
  std::string_view a = s.substr(0, dot);
  std::string_view b = s.substr(dot + 1);
  if (a.empty() && b.empty()) return false;
  return (a.empty() || digits(a)) && (b.empty() || digits(b));
}

bool valid_double(std::string_view s) {
  if (s == "INF" || s == "-INF" || s == "+INF" || s == "NaN") return true;
  std::size_t e = s.find_first_of("eE");
  if (e == std::string_view::npos) return valid_decimal(s);
  return valid_decimal(s.substr(0, e)) && valid_integer(s.substr(e + 1));
}

long double parse_long_double(std::string_view s) {
  if (s == "INF" || s == "+INF") return INFINITY;
  if (s == "-INF") return -INFINITY;
  if (s == "NaN") return NAN;
  std::string buf(s);
  return std::strtold(buf.c_str(), nullptr);
}

bool is_kind(const Term& t, std::string_view dt) { return t.is_literal() && t.lang.empty() && t.datatype == dt; }

std::optional<bool> parse_boolean(const Term& t) {
  if (!is_kind(t, vocab::kXsdBoolean)) return std::nullopt;
  if (t.value == "true" || t.value == "1") return true;
  if (t.value == "false" || t.value == "0") return false;
  return std::nullopt;
}

bool is_simple_string(const Term& t) { return is_kind(t, vocab::kXsdString); }

template <typename T>
int cmp(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

bool known_datatype(const Term& t) {
  return t.has_lang() || is_simple_string(t) || is_numeric_datatype(t.datatype) ||
         t.datatype == vocab::kXsdBoolean || t.datatype == vocab::kXsdDateTime;
}

long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

}  // namespace

bool is_numeric_datatype(std::string_view dt) {
  return is_integer_datatype(dt) || dt == vocab::kXsdDecimal || dt == vocab::kXsdDouble ||
         dt == vocab::kXsdFloat;
}

std::optional<Numeric> to_numeric(const Term& t) {
  if (!t.is_literal() || t.has_lang()) return std::nullopt;
  const std::string& lex = t.value;
  Numeric n;
  if (is_integer_datatype(t.datatype)) {
    if (!valid_integer(lex)) return std::nullopt;
    std::string_view s = lex;
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n.i);
    if (ec == std::errc()) {
      n.kind = Numeric::Kind::Integer;
      return n;
    }
    n.kind = Numeric::Kind::Decimal;
    n.d = parse_long_double(lex);
    return n;
  }
  if (t.datatype == vocab::kXsdDecimal) {
    if (!valid_decimal(lex)) return std::nullopt;
    n.kind = Numeric::Kind::Decimal;
    n.d = parse_long_double(lex);
    return n;
  }
  if (t.datatype == vocab::kXsdDouble || t.datatype == vocab::kXsdFloat) {
    if (!valid_double(lex)) return std::nullopt;
    n.kind = t.datatype == vocab::kXsdDouble ? Numeric::Kind::Double : Numeric::Kind::Float;
    n.d = parse_long_double(lex);
    if (n.kind == Numeric::Kind::Float) n.d = static_cast<float>(n.d);
    return n;
  }
  return std::nullopt;
}

std::string canonical_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "INF" : "-INF";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  std::string s(buf, end);
  std::size_t e = s.find('e');
  std::string mantissa = s.substr(0, e);
  int exponent = std::stoi(s.substr(e + 1));
  if (mantissa.find('.') == std::string::npos) mantissa += ".0";
  return mantissa + "E" + std::to_string(exponent);
}

std::string canonical_decimal(long double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.18Lf", v);
  std::string s = buf;
  // Keep 18 significant digits at most, then trim trailing zeros.
  std::size_t first = s.find_first_of("123456789");
  std::size_t dot = s.find('.');
  if (first != std::string::npos) {
    std::size_t sig = 0;
    for (std::size_t i = first; i < s.size(); ++i) {
      if (s[i] == '.') continue;
      if (++sig > 18 && i > dot) s[i] = '0';
    }
  }
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s += '0';
  if (s == "-0.0") s = "0.0";
  return s;
}

Term numeric_term(const Numeric& n) {
  switch (n.kind) {
    case Numeric::Kind::Integer: return Term::literal(std::to_string(n.i), vocab::kXsdInteger);
    case Numeric::Kind::Decimal: return Term::literal(canonical_decimal(n.d), vocab::kXsdDecimal);
    case Numeric::Kind::Float:
      return Term::literal(canonical_double(static_cast<float>(n.d)), vocab::kXsdFloat);
    case Numeric::Kind::Double:
      return Term::literal(canonical_double(static_cast<double>(n.d)), vocab::kXsdDouble);
  }
  return Term::literal("0", vocab::kXsdInteger);
}

std::optional<Numeric> arithmetic(ArithOp op, const Numeric& a, const Numeric& b) {
  Numeric r;
  r.kind = std::max(a.kind, b.kind);
  if (r.kind == Numeric::Kind::Integer) {
    long long out = 0;
    bool overflow = false;
    switch (op) {
      case ArithOp::Add: overflow = __builtin_add_overflow(a.i, b.i, &out); break;
      case ArithOp::Sub: overflow = __builtin_sub_overflow(a.i, b.i, &out); break;
      case ArithOp::Mul: overflow = __builtin_mul_overflow(a.i, b.i, &out); break;
      case ArithOp::Div:
        if (b.i == 0) return std::nullopt;
        r.kind = Numeric::Kind::Decimal;
        r.d = static_cast<long double>(a.i) / static_cast<long double>(b.i);
        return r;
    }
    if (!overflow) {
      r.i = out;
      return r;
    }
    r.kind = Numeric::Kind::Decimal;
  }
  long double x = a.as_long_double();
  long double y = b.as_long_double();
  switch (op) {
    case ArithOp::Add: r.d = x + y; break;
    case ArithOp::Sub: r.d = x - y; break;
    case ArithOp::Mul: r.d = x * y; break;
    case ArithOp::Div:
      if (r.kind == Numeric::Kind::Decimal && y == 0) return std::nullopt;
      r.d = x / y;
      break;
  }
  if (r.kind == Numeric::Kind::Float) r.d = static_cast<float>(r.d);
  if (r.kind == Numeric::Kind::Double) r.d = static_cast<double>(r.d);
  return r;
}

long double DateTime::instant() const {
  long long days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  long double s = static_cast<long double>(days) * 86400 + hour * 3600 + minute * 60 + second;
  if (tz_minutes) s -= *tz_minutes * 60;
  return s;
}

std::optional<DateTime> parse_date_time(std::string_view s) {
  DateTime dt;
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && s[i] == '-') {
    negative = true;
    ++i;
  }
  auto number = [&](std::size_t min_len, std::size_t max_len, long long& out) {
    std::size_t start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9' && i - start < max_len) ++i;
    if (i - start < min_len) return false;
    out = std::stoll(std::string(s.substr(start, i - start)));
    return true;
  };
  auto expect = [&](char c) {
    if (i >= s.size() || s[i] != c) return false;
    ++i;
    return true;
  };
  long long y, mo, d, h, mi, sec;
  if (!number(4, 12, y) || !expect('-') || !number(2, 2, mo) || !expect('-') || !number(2, 2, d) ||
      !expect('T') || !number(2, 2, h) || !expect(':') || !number(2, 2, mi) || !expect(':') ||
      !number(2, 2, sec))
    return std::nullopt;
  dt.year = negative ? -y : y;
  dt.month = static_cast<int>(mo);
  dt.day = static_cast<int>(d);
  dt.hour = static_cast<int>(h);
  dt.minute = static_cast<int>(mi);
  dt.second = static_cast<long double>(sec);
  if (i < s.size() && s[i] == '.') {
    std::size_t start = ++i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == start) return std::nullopt;
    dt.second += std::strtold(("0." + std::string(s.substr(start, i - start))).c_str(), nullptr);
  }
  if (i < s.size()) {
    if (s[i] == 'Z') {
      dt.tz_minutes = 0;
      ++i;
    } else if (s[i] == '+' || s[i] == '-') {
      int sign = s[i] == '-' ? -1 : 1;
      ++i;
      long long th, tm;
      if (!number(2, 2, th) || !expect(':') || !number(2, 2, tm)) return std::nullopt;
      dt.tz_minutes = sign * static_cast<int>(th * 60 + tm);
    }
  }
  if (i != s.size()) return std::nullopt;
  if (dt.month < 1 || dt.month > 12 || dt.day < 1 || dt.day > 31 || dt.hour > 24 || dt.minute > 59 ||
      dt.second >= 61)
    return std::nullopt;
  return dt;
}

std::optional<DateTime> to_date_time(const Term& t) {
  if (!is_kind(t, vocab::kXsdDateTime)) return std::nullopt;
  return parse_date_time(t.value);
}

std::optional<bool> effective_boolean(const Term& t) {
  if (!t.is_literal()) return std::nullopt;
  if (t.datatype == vocab::kXsdBoolean) return parse_boolean(t).value_or(false);
  if (t.has_lang() || is_simple_string(t)) return !t.value.empty();
  if (is_numeric_datatype(t.datatype)) {
    auto n = to_numeric(t);
    if (!n) return false;
    if (n->kind == Numeric::Kind::Integer) return n->i != 0;
    return !(n->d == 0 || std::isnan(n->d));
  }
  return std::nullopt;
}

bool is_string_like(const Term& t) { return t.has_lang() || is_simple_string(t); }

std::optional<bool> value_equal(const Term& a, const Term& b) {
  if (!a.is_literal() || !b.is_literal()) return a == b;
  auto na = to_numeric(a);
  auto nb = to_numeric(b);
  if (na && nb) {
    if (na->kind == Numeric::Kind::Integer && nb->kind == Numeric::Kind::Integer) return na->i == nb->i;
    return na->as_long_double() == nb->as_long_double();
  }
  if (is_string_like(a) && is_string_like(b)) return a.value == b.value && a.lang == b.lang;
  auto ba = parse_boolean(a);
  auto bb = parse_boolean(b);
  if (ba && bb) return *ba == *bb;
  auto da = to_date_time(a);
  auto db = to_date_time(b);
  if (da && db) return da->instant() == db->instant();
  if (a == b) return true;
  if (known_datatype(a) && known_datatype(b) && !(na && !nb && is_numeric_datatype(b.datatype)) &&
      a.datatype != b.datatype)
    return false;
  return std::nullopt;
}

std::optional<int> value_compare(const Term& a, const Term& b) {
  if (!a.is_literal() || !b.is_literal()) return std::nullopt;
  auto na = to_numeric(a);
  auto nb = to_numeric(b);
  if (na && nb) {
    if (na->kind == Numeric::Kind::Integer && nb->kind == Numeric::Kind::Integer) return cmp(na->i, nb->i);
    long double x = na->as_long_double();
    long double y = nb->as_long_double();
    if (std::isnan(x) || std::isnan(y)) return std::nullopt;
    return cmp(x, y);
  }
  if (is_simple_string(a) && is_simple_string(b)) return cmp(a.value, b.value);
  if (a.has_lang() && b.has_lang() && a.lang == b.lang) return cmp(a.value, b.value);
  auto ba = parse_boolean(a);
  auto bb = parse_boolean(b);
  if (ba && bb) return cmp(*ba, *bb);
  auto da = to_date_time(a);
  auto db = to_date_time(b);
  if (da && db) return cmp(da->instant(), db->instant());
  return std::nullopt;
}

int order_compare(const Term* a, const Term* b) {
  if (a == b) return 0;
  if (a == nullptr) return -1;
  if (b == nullptr) return 1;
  auto rank = [](const Term& t) { return t.is_blank() ? 0 : t.is_iri() ? 1 : 2; };
  int ra = rank(*a);
  int rb = rank(*b);
  if (ra != rb) return cmp(ra, rb);
  if (!a->is_literal()) return cmp(a->value, b->value);
  if (auto c = value_compare(*a, *b); c && *c != 0) return *c;
  // Plain strings before typed values, then a deterministic tie-break.
  bool sa = is_string_like(*a);
  bool sb = is_string_like(*b);
  if (sa != sb) return sa ? -1 : 1;
  if (int c = cmp(a->datatype, b->datatype); c != 0) return c;
  if (int c = cmp(a->value, b->value); c != 0) return c;
  return cmp(a->lang, b->lang);
}

}  // namespace facadex::sparql
