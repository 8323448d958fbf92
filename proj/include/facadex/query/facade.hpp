#pragma once

#include <atomic>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "facadex/dataset/assemble.hpp"
#include "facadex/sparql/engine.hpp"

namespace facadex::query {

// State for one query execution. Not shared between executions.
struct ExecutionContext {
  std::filesystem::path base_directory;
  dataset::DatasetCache cache;
  std::size_t fetch_budget = 1000;
  // Defaults to dataset::make_fetcher with base_directory.
  dataset::Fetcher fetcher;
  bool allow_federation = true;
  std::optional<long> http_timeout_ms;

  // Resources fetched so far; warnings raised while assembling.
  std::atomic<std::size_t> fetch_count{0};
  std::vector<std::string> warnings;
  std::mutex warnings_mu;
};

// Answers SERVICE <x-sparql-anything:...> by assembling the facade dataset
// through the context's cache.
class FacadeServiceExtension : public sparql::ServiceExtension {
 public:
  explicit FacadeServiceExtension(ExecutionContext& ctx);

  bool handles(const rdf::Term& endpoint) const override;
  std::shared_ptr<const rdf::Dataset> dataset(const rdf::Term& endpoint) override;

 private:
  ExecutionContext& ctx_;
  dataset::Fetcher fetcher_;
};

// Parses and evaluates `query_text` over an empty default dataset, resolving
// facade SERVICE clauses. Other SERVICE endpoints are queried over HTTP
// unless ctx.allow_federation is false.
sparql::QueryResult execute_query(std::string_view query_text, ExecutionContext& ctx);

// Evaluates one SERVICE pattern of `query` whose endpoint is a facade IRI
// (or a variable bound to one in `incoming`) and joins with `incoming`.
sparql::SolutionTable resolve_facade_service(const sparql::Query& query, const sparql::Pattern& service,
                                             const sparql::SolutionTable& incoming, ExecutionContext& ctx);

// SPARQL protocol SELECT against a remote endpoint (results-JSON).
sparql::SolutionTable remote_select(const std::string& endpoint, const std::string& query,
                                    long timeout_ms);

}  // namespace facadex::query
