#pragma once

#include <chrono>
#include <deque>
#include <memory>
#include <optional>
#include <random>
#include <regex>
#include <string>
#include <unordered_map>
#include <vector>

#include "facadex/sparql/engine.hpp"

namespace facadex::sparql::detail {

using TermRef = const rdf::Term*;
using Row = std::vector<TermRef>;
using Rows = std::vector<Row>;

// Owns terms computed during evaluation. Pointers stay valid for the
// lifetime of the arena.
class Arena {
 public:
  TermRef intern(rdf::Term t);

 private:
  std::deque<rdf::Term> terms_;
  std::unordered_map<rdf::Term, TermRef, rdf::TermHash> index_;
};

struct Scope {
  const rdf::Dataset* dataset = nullptr;
  const rdf::Graph* graph = nullptr;
};

class Evaluator {
 public:
  Evaluator(const Query& query, const EngineOptions& options);

  QueryResult run(const rdf::Dataset& dataset);
  Rows eval(const Pattern& p, const Scope& scope, Rows input);
  Rows eval_service(const Pattern& p, Rows input);

  std::size_t width() const { return vars_->size(); }
  const VarTable& vars() const { return *vars_; }
  Arena& arena() { return arena_; }

  // nullopt is an expression error.
  std::optional<TermRef> eval_expr(const Expr& e, const Row& row, const Scope& scope);
  std::optional<bool> eval_bool(const Expr& e, const Row& row, const Scope& scope);

 private:
  Rows eval_bgp(const Pattern& p, const Scope& scope, Rows input);
  Rows eval_path(const Pattern& p, const Scope& scope, Rows input);
  Rows eval_left_join(const Pattern& p, const Scope& scope, Rows input);
  Rows eval_minus(const Pattern& p, const Scope& scope, Rows input);
  Rows eval_graph(const Pattern& p, const Scope& scope);
  Rows eval_values(const Pattern& p);
  Rows eval_service_at(const Pattern& p, const rdf::Term& endpoint);
  Rows solve(const Query& q, const Scope& scope);
  Rows finish(const Query& q, const Scope& scope, Rows rows);
  Rows group(const Query& q, const Scope& scope, Rows rows);

  std::optional<TermRef> call(const Expr& e, const Row& row, const Scope& scope);
  std::optional<TermRef> aggregate_value(const Aggregate& a, const Rows& rows, const Scope& scope);
  const std::regex* compile_regex(const std::string& pattern, const std::string& flags);

  const Query& query_;
  const EngineOptions& options_;
  std::shared_ptr<VarTable> vars_;
  Arena arena_;
  std::vector<std::shared_ptr<const rdf::Dataset>> keep_alive_;
  std::vector<const Row*> outer_;  // EXISTS substitution stack
  std::mt19937_64 rng_{std::random_device{}()};
  std::optional<TermRef> now_;
  std::size_t blank_counter_ = 0;
  std::unordered_map<std::string, std::unique_ptr<std::regex>> regex_cache_;
  std::unordered_map<std::string, TermRef> bnode_labels_;
  const Row* bnode_row_ = nullptr;
  std::size_t service_counter_ = 0;
};

Row empty_row(std::size_t width);
bool compatible(const Row& a, const Row& b);
Row merge(const Row& a, const Row& b);
Rows join(const Rows& a, const Rows& b);

}  // namespace facadex::sparql::detail
