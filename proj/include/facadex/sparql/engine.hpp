#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "facadex/rdf/graph.hpp"
#include "facadex/sparql/algebra.hpp"

namespace facadex::sparql {

// Solution sequence: one column per variable, unbound cells are nullopt.
struct SolutionTable {
  std::vector<std::string> variables;
  std::vector<std::vector<std::optional<rdf::Term>>> rows;
};

using QueryResult = std::variant<SolutionTable, rdf::Graph, bool>;

// Hook for SERVICE endpoints answered locally. When `handles` is true the
// inner group pattern is evaluated over the returned dataset instead of
// contacting a remote endpoint.
class ServiceExtension {
 public:
  virtual ~ServiceExtension() = default;
  virtual bool handles(const rdf::Term& endpoint) const = 0;
  virtual std::shared_ptr<const rdf::Dataset> dataset(const rdf::Term& endpoint) = 0;
};

// Sends `query` to a remote SPARQL endpoint.
using RemoteService = std::function<SolutionTable(const std::string& endpoint, const std::string& query)>;
// Loads the document behind a FROM / FROM NAMED IRI.
using DocumentLoader = std::function<rdf::Graph(const std::string& iri)>;

struct EngineOptions {
  ServiceExtension* extension = nullptr;
  bool allow_federation = true;
  RemoteService remote;
  DocumentLoader loader;
};

// Evaluates a parsed query. FROM / FROM NAMED clauses replace `dataset`.
QueryResult execute(const Query& query, const rdf::Dataset& dataset, const EngineOptions& options = {});
QueryResult execute(std::string_view query_text, const rdf::Dataset& dataset,
                    const EngineOptions& options = {});

// Evaluates a single SERVICE pattern of `query` against `incoming` bindings
// and returns the joined solutions. Columns of `incoming` are matched to
// query variables by name.
SolutionTable evaluate_service(const Query& query, const Pattern& service, const SolutionTable& incoming,
                               const EngineOptions& options = {});

// Query text sent to a remote endpoint for a SERVICE pattern.
std::string remote_service_query(const Query& query, const Pattern& service);

}  // namespace facadex::sparql
