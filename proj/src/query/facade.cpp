#include "facadex/query/facade.hpp"

#include <curl/curl.h>

#include "facadex/error.hpp"
#include "facadex/rdf/reader.hpp"
#include "facadex/sparql/parser.hpp"
#include "facadex/sparql/results.hpp"
#include "facadex/uri/service_uri.hpp"

namespace facadex::query {

namespace {

std::size_t collect(char* data, std::size_t size, std::size_t n, void* user) {
  static_cast<std::string*>(user)->append(data, size * n);
  return size * n;
}

sparql::EngineOptions engine_options(ExecutionContext& ctx, FacadeServiceExtension& ext,
                                     const dataset::Fetcher& fetcher) {
  sparql::EngineOptions opts;
  opts.extension = &ext;
  opts.allow_federation = ctx.allow_federation;
  long timeout = ctx.http_timeout_ms.value_or(dataset::http_timeout_from_env());
  opts.remote = [timeout](const std::string& endpoint, const std::string& q) {
    return remote_select(endpoint, q, timeout);
  };
  opts.loader = [fetcher](const std::string& iri) {
    dataset::FetchedResource r = fetcher(iri);
    return rdf::parse_turtle(r.bytes, iri);
  };
  return opts;
}

dataset::Fetcher default_fetcher(const ExecutionContext& ctx) {
  if (ctx.fetcher) return ctx.fetcher;
  dataset::FetchOptions fo;
  fo.base_directory = ctx.base_directory;
  fo.http_timeout_ms = ctx.http_timeout_ms;
  return dataset::make_fetcher(fo);
}

}  // namespace

FacadeServiceExtension::FacadeServiceExtension(ExecutionContext& ctx) : ctx_(ctx) {
  dataset::Fetcher inner = default_fetcher(ctx);
  ExecutionContext* c = &ctx;
  fetcher_ = [c, inner](std::string_view location) {
    std::size_t n = ++c->fetch_count;
    if (n > c->fetch_budget)
      throw ResourceLimitError("fetch budget of " + std::to_string(c->fetch_budget) + " resources exceeded");
    return inner(location);
  };
}

bool FacadeServiceExtension::handles(const rdf::Term& endpoint) const {
  return endpoint.is_iri() && uri::is_service_uri(endpoint.value);
}

std::shared_ptr<const rdf::Dataset> FacadeServiceExtension::dataset(const rdf::Term& endpoint) {
  try {
    uri::ServiceSpec spec = uri::parse_service_uri(endpoint.value);
    auto entry = ctx_.cache.get_or_build(uri::render_service_uri(spec),
                                         [&] { return dataset::assemble(spec, fetcher_); });
    if (!entry->warnings.empty()) {
      std::lock_guard<std::mutex> lock(ctx_.warnings_mu);
      for (const std::string& w : entry->warnings) ctx_.warnings.push_back("<" + endpoint.value + ">: " + w);
    }
    // Graphs are shared, so the dataset view is cheap to build.
    return std::make_shared<const rdf::Dataset>(entry->as_rdf_dataset());
  } catch (const ResourceLimitError& e) {
    throw ResourceLimitError("SERVICE <" + endpoint.value + ">: " + e.what());
  } catch (const Error& e) {
    throw QueryError("SERVICE <" + endpoint.value + ">: " + e.what());
  }
}

sparql::QueryResult execute_query(std::string_view query_text, ExecutionContext& ctx) {
  if (ctx.fetch_budget < 1) throw PreconditionError("fetch budget must be at least 1");
  auto q = sparql::parse_query(query_text);
  FacadeServiceExtension ext(ctx);
  dataset::Fetcher loader_fetch = default_fetcher(ctx);
  sparql::EngineOptions opts = engine_options(ctx, ext, loader_fetch);
  rdf::Dataset empty;
  sparql::QueryResult result;
  try {
    result = sparql::execute(*q, empty, opts);
  } catch (...) {
    ctx.cache.clear();
    throw;
  }
  ctx.cache.clear();
  return result;
}

sparql::SolutionTable resolve_facade_service(const sparql::Query& query, const sparql::Pattern& service,
                                             const sparql::SolutionTable& incoming, ExecutionContext& ctx) {
  if (service.kind != sparql::Pattern::Kind::Service) throw PreconditionError("not a SERVICE pattern");
  FacadeServiceExtension ext(ctx);
  dataset::Fetcher loader_fetch = default_fetcher(ctx);
  sparql::EngineOptions opts = engine_options(ctx, ext, loader_fetch);
  opts.allow_federation = false;
  return sparql::evaluate_service(query, service, incoming, opts);
}

sparql::SolutionTable remote_select(const std::string& endpoint, const std::string& query, long timeout_ms) {
  CURL* curl = curl_easy_init();
  if (curl == nullptr) throw QueryError("cannot initialise HTTP client");
  char* escaped = curl_easy_escape(curl, query.data(), static_cast<int>(query.size()));
  std::string body = std::string("query=") + escaped;
  curl_free(escaped);
  std::string response;
  curl_slist* headers = nullptr;
  headers = curl_slist_append(headers, "Accept: application/sparql-results+json");
  headers = curl_slist_append(headers, "Content-Type: application/x-www-form-urlencoded");
  curl_easy_setopt(curl, CURLOPT_URL, endpoint.c_str());
  curl_easy_setopt(curl, CURLOPT_POSTFIELDS, body.c_str());
  curl_easy_setopt(curl, CURLOPT_HTTPHEADER, headers);
  curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(curl, CURLOPT_TIMEOUT_MS, timeout_ms);
  curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, collect);
  curl_easy_setopt(curl, CURLOPT_WRITEDATA, &response);
  CURLcode rc = curl_easy_perform(curl);
  long status = 0;
  curl_easy_getinfo(curl, CURLINFO_RESPONSE_CODE, &status);
  curl_slist_free_all(headers);
  curl_easy_cleanup(curl);
  if (rc != CURLE_OK) throw QueryError("SERVICE <" + endpoint + ">: " + curl_easy_strerror(rc));
  if (status >= 400) throw QueryError("SERVICE <" + endpoint + ">: HTTP status " + std::to_string(status));
  return sparql::parse_results_json(response);
}

}  // namespace facadex::query
