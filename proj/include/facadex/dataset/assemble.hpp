#pragma once

#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "facadex/dataset/fetch.hpp"
#include "facadex/rdf/graph.hpp"
#include "facadex/triplify/registry.hpp"
#include "facadex/uri/service_uri.hpp"

namespace facadex::dataset {

struct FacadeDataset {
  rdf::NamedGraph data;
  std::optional<rdf::NamedGraph> metadata;
  std::string media_type;
  std::vector<std::string> warnings;

  // Data graph as default graph; data and metadata graphs as named graphs.
  rdf::Dataset as_rdf_dataset() const;
};

// Media type for a fetched resource: explicit override, then the transport
// Content-Type when a triplifier is registered for it, then the extension.
std::string select_media_type(const uri::ServiceSpec& spec, const FetchedResource& resource,
                              const triplify::TriplifierRegistry& registry);

// Fetches, triplifies and maps the whole resource. The metadata graph is
// built only for images with spec.metadata set; extraction failures become
// warnings. Fetch, parse and configuration errors propagate.
FacadeDataset assemble(const uri::ServiceSpec& spec, const Fetcher& fetcher,
                       const triplify::TriplifierRegistry& registry = triplify::default_registry());

// Per-execution memo of assembled datasets keyed by canonical spec
// rendering. Concurrent requests for the same key share one assembly.
class DatasetCache {
 public:
  using Entry = std::shared_ptr<const FacadeDataset>;

  std::optional<Entry> lookup(const std::string& key) const;
  void store(const std::string& key, Entry dataset);
  // Returns the cached dataset or runs `build` exactly once for this key;
  // a failing build rethrows to every waiter.
  Entry get_or_build(const std::string& key, const std::function<FacadeDataset()>& build);

  std::size_t size() const;
  void clear();

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_future<Entry>> entries_;
};

}  // namespace facadex::dataset
