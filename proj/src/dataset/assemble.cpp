#include "facadex/dataset/assemble.hpp"

#include "facadex/error.hpp"
#include "facadex/facade/model.hpp"
#include "facadex/triplify/triplifiers.hpp"

namespace facadex::dataset {

rdf::Dataset FacadeDataset::as_rdf_dataset() const {
  rdf::Dataset ds;
  ds.default_graph = data.graph;
  ds.named.push_back(data);
  if (metadata) ds.named.push_back(*metadata);
  return ds;
}

std::string select_media_type(const uri::ServiceSpec& spec, const FetchedResource& resource,
                              const triplify::TriplifierRegistry& registry) {
  if (spec.media_type_override) return triplify::media_type_essence(*spec.media_type_override);
  if (resource.declared_media_type) {
    std::string declared = triplify::media_type_essence(*resource.declared_media_type);
    // octet-stream from a server says nothing; let the extension decide.
    if (declared != triplify::kOctetStream && registry.find(declared) != nullptr) return declared;
  }
  return triplify::guess_media_type(spec.location, std::nullopt, registry);
}

FacadeDataset assemble(const uri::ServiceSpec& spec, const Fetcher& fetcher,
                       const triplify::TriplifierRegistry& registry) {
  if (spec.location.empty()) throw PreconditionError("service spec without location");
  FetchedResource resource = fetcher(spec.location);

  FacadeDataset out;
  out.media_type = select_media_type(spec, resource, registry);
  const triplify::Triplifier* triplifier = registry.find(out.media_type);
  if (triplifier == nullptr)
    throw ConfigError("no triplifier registered for media type '" + out.media_type + "'");

  triplify::TriplifierOptions opts = spec.triplifier_options;
  if (!spec.charset && resource.declared_media_type) {
    if (auto cs = triplify::media_type_charset(*resource.declared_media_type)) opts.charset = *cs;
  }

  facade::MintingConfig config;
  if (spec.namespace_iri) config.data_namespace = *spec.namespace_iri;
  config.root_iri = spec.root_iri;
  facade::check_config(config);

  facade::FacadeTree tree = triplifier->triplify(resource.bytes, opts, &out.warnings);
  tree.source_name = spec.location;
  out.data.name = rdf::Term::iri(spec.location);
  out.data.graph = std::make_shared<const rdf::Graph>(facade::tree_to_graph(tree, config, "b"));

  if (spec.metadata) {
    if (!triplify::is_image_media_type(out.media_type)) {
      out.warnings.push_back("metadata: not extracted for media type " + out.media_type);
    } else {
      try {
        facade::FacadeTree meta = triplify::extract_image_metadata(resource.bytes);
        meta.source_name = std::string(rdf::vocab::kMetadataGraph);
        facade::MintingConfig meta_config;
        meta_config.data_namespace = config.data_namespace;
        out.metadata = rdf::NamedGraph{
            rdf::Term::iri(std::string(rdf::vocab::kMetadataGraph)),
            std::make_shared<const rdf::Graph>(facade::tree_to_graph(meta, meta_config, "m"))};
      } catch (const MetadataError& e) {
        out.warnings.push_back(std::string("metadata: ") + e.what());
      }
    }
  }
  return out;
}

std::optional<DatasetCache::Entry> DatasetCache::lookup(const std::string& key) const {
  std::shared_future<Entry> f;
  {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    f = it->second;
  }
  return f.get();
}

void DatasetCache::store(const std::string& key, Entry dataset) {
  std::promise<Entry> p;
  p.set_value(std::move(dataset));
  std::lock_guard lock(mu_);
  entries_[key] = p.get_future().share();
}

DatasetCache::Entry DatasetCache::get_or_build(const std::string& key,
                                               const std::function<FacadeDataset()>& build) {
  std::promise<Entry> promise;
  std::shared_future<Entry> f;
  bool owner = false;
  {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      f = it->second;
    } else {
      f = promise.get_future().share();
      entries_.emplace(key, f);
      owner = true;
    }
  }
  if (owner) {
    try {
      promise.set_value(std::make_shared<const FacadeDataset>(build()));
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
  }
  return f.get();
}

std::size_t DatasetCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

void DatasetCache::clear() {
  std::lock_guard lock(mu_);
  entries_.clear();
}

}  // namespace facadex::dataset
