#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "facadex/rdf/term.hpp"

namespace facadex::sparql {

// Variable names for one query, including its subqueries. Blank nodes in
// patterns and aggregate results get hidden variables whose names start with
// a character that cannot begin a SPARQL variable.
class VarTable {
 public:
  int get(const std::string& name);
  int hidden(std::string_view hint);
  std::optional<int> find(const std::string& name) const;
  const std::string& name(int index) const { return names_[static_cast<std::size_t>(index)]; }
  bool is_hidden(int index) const { return names_[static_cast<std::size_t>(index)][0] == '.'; }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  int hidden_counter_ = 0;
};

struct Pattern;
struct Query;
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;
using PatternPtr = std::shared_ptr<const Pattern>;

enum class Op : std::uint8_t {
  Constant, Var, Exists, NotExists,
  Or, And, Not, Eq, Ne, Lt, Gt, Le, Ge, Add, Sub, Mul, Div, Neg, Pos, In, NotIn,
  Str, Lang, LangMatches, Datatype, Bound, Iri, Bnode, Rand, Abs, Ceil, Floor, Round,
  Concat, StrLen, UCase, LCase, EncodeForUri, Contains, StrStarts, StrEnds, StrBefore,
  StrAfter, Year, Month, Day, Hours, Minutes, Seconds, Timezone, Tz, Now, Uuid, StrUuid,
  Md5, Sha1, Sha256, Sha384, Sha512, Coalesce, If, StrLang, StrDt, SameTerm, IsIri,
  IsBlank, IsLiteral, IsNumeric, Regex, Substr, Replace,
  CastString, CastInteger, CastDecimal, CastDouble, CastFloat, CastBoolean, CastDateTime,
  UnknownFunction,
};

struct Expr {
  Op op = Op::Constant;
  rdf::Term constant;       // Constant
  int var = -1;             // Var
  std::vector<ExprPtr> args;
  PatternPtr pattern;       // Exists / NotExists
  std::string function_iri; // UnknownFunction
};

struct Aggregate {
  enum class Kind { Count, Sum, Min, Max, Avg, Sample, GroupConcat };
  Kind kind = Kind::Count;
  bool distinct = false;
  ExprPtr arg;  // null for COUNT(*)
  std::string separator = " ";
  int result_var = -1;
};

struct VarOrTerm {
  int var = -1;
  rdf::Term term;

  static VarOrTerm variable(int v) { return VarOrTerm{v, {}}; }
  static VarOrTerm constant(rdf::Term t) { return VarOrTerm{-1, std::move(t)}; }
  bool is_var() const { return var >= 0; }
};

struct TriplePattern {
  VarOrTerm s;
  VarOrTerm p;
  VarOrTerm o;
};

struct PathExpr;
using PathPtr = std::shared_ptr<const PathExpr>;

struct PathExpr {
  enum class Kind { Link, Inverse, Seq, Alt, ZeroOrMore, OneOrMore, ZeroOrOne, Negated };
  Kind kind = Kind::Link;
  rdf::Term iri;                 // Link
  std::vector<PathPtr> parts;    // Inverse (1), Seq/Alt (2+), modifiers (1)
  std::vector<rdf::Term> forward;  // Negated: !(a|b)
  std::vector<rdf::Term> inverse;  // Negated: !(^a|^b)
};

struct PathPattern {
  VarOrTerm s;
  PathPtr path;
  VarOrTerm o;
};

struct Pattern {
  enum class Kind { Bgp, Path, Join, LeftJoin, Union, Minus, Filter, Extend, Graph, Service, Values, SubQuery };
  Kind kind = Kind::Bgp;

  std::vector<TriplePattern> triples;  // Bgp; empty = the one empty solution
  PathPattern path;                    // Path
  PatternPtr left;                     // Join/LeftJoin/Union/Minus; inner pattern of Filter/Extend/Graph/Service
  PatternPtr right;                    // Join/LeftJoin/Union/Minus
  std::vector<ExprPtr> exprs;          // Filter conjunction; LeftJoin condition
  int var = -1;                        // Extend target
  ExprPtr expr;                        // Extend expression
  VarOrTerm name;                      // Graph name, Service endpoint
  bool silent = false;                 // Service
  std::string service_text;            // Service: source text of the inner group, braces included
  std::vector<int> values_vars;        // Values
  std::vector<std::vector<std::optional<rdf::Term>>> values_rows;
  std::shared_ptr<const Query> subquery;  // SubQuery
};

struct OrderCondition {
  ExprPtr expr;
  bool descending = false;
};

struct ProjectionItem {
  int var = -1;
  ExprPtr expr;  // null for a plain variable
};

struct GroupKey {
  ExprPtr expr;
  int var = -1;  // the variable bound to the key value
};

struct Query {
  enum class Form { Select, Construct, Ask, Describe };
  Form form = Form::Select;
  std::shared_ptr<VarTable> vars;
  std::vector<std::pair<std::string, std::string>> prefixes;
  std::string base;

  bool distinct = false;
  bool reduced = false;
  bool select_all = false;
  std::vector<ProjectionItem> projection;
  std::vector<TriplePattern> construct_template;
  std::vector<VarOrTerm> describe_targets;

  std::vector<std::string> from;
  std::vector<std::string> from_named;

  PatternPtr where;  // null only for DESCRIBE without WHERE
  std::vector<GroupKey> group_by;
  std::vector<Aggregate> aggregates;
  bool grouped = false;  // GROUP BY present or aggregates used
  std::vector<ExprPtr> having;
  std::vector<OrderCondition> order_by;
  std::optional<std::size_t> limit;
  std::size_t offset = 0;
  PatternPtr values;  // trailing VALUES block
};

// Variables that can be bound by `p`, in order of first appearance; hidden
// variables are excluded.
std::vector<int> in_scope_vars(const Pattern& p, const VarTable& vars);

// Variables a SELECT query exposes (the projection, or in-scope variables
// for SELECT *).
std::vector<int> projected_vars(const Query& q);

}  // namespace facadex::sparql
