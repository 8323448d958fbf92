#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "facadex/rdf/term.hpp"

namespace facadex::sparql {

// XSD numeric value. Decimals use long double; integers that overflow 64
// bits are carried as decimals.
struct Numeric {
  enum class Kind { Integer, Decimal, Float, Double };
  Kind kind = Kind::Integer;
  long long i = 0;
  long double d = 0;

  long double as_long_double() const { return kind == Kind::Integer ? static_cast<long double>(i) : d; }
};

bool is_numeric_datatype(std::string_view datatype);

// nullopt unless `t` is a literal of a numeric datatype with a valid lexical form.
std::optional<Numeric> to_numeric(const rdf::Term& t);

rdf::Term numeric_term(const Numeric& n);

std::string canonical_double(double v);
std::string canonical_decimal(long double v);

enum class ArithOp { Add, Sub, Mul, Div };
std::optional<Numeric> arithmetic(ArithOp op, const Numeric& a, const Numeric& b);

struct DateTime {
  long long year = 0;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  long double second = 0;
  std::optional<int> tz_minutes;  // offset from UTC

  // Seconds since 0001-01-01T00:00Z, treating a missing zone as UTC.
  long double instant() const;
};

std::optional<DateTime> parse_date_time(std::string_view lexical);
std::optional<DateTime> to_date_time(const rdf::Term& t);

// Effective boolean value; nullopt is a type error.
std::optional<bool> effective_boolean(const rdf::Term& t);

// Simple literal, xsd:string or language-tagged string.
bool is_string_like(const rdf::Term& t);

// RDFterm-equal with value comparison for known datatypes; nullopt when the
// operands cannot be compared.
std::optional<bool> value_equal(const rdf::Term& a, const rdf::Term& b);

// -1/0/1 for the < > <= >= operators; nullopt on a type error.
std::optional<int> value_compare(const rdf::Term& a, const rdf::Term& b);

// Total order used by ORDER BY, MIN and MAX. Null (unbound) sorts first.
int order_compare(const rdf::Term* a, const rdf::Term* b);

}  // namespace facadex::sparql
