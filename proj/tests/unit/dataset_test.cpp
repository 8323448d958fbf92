#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <thread>

#include "facadex/dataset/assemble.hpp"
#include "facadex/dataset/fetch.hpp"
#include "facadex/error.hpp"
#include "fixtures.hpp"

namespace ds = facadex::dataset;
namespace rdf = facadex::rdf;
using facadex::testing::TempDir;

TEST_CASE("local fetch") {
  TempDir dir;
  dir.write("three.bin", "abc");
  ds::FetchedResource r = ds::fetch("file:three.bin", {.base_directory = dir.path()});
  CHECK(r.bytes == "abc");
  CHECK_FALSE(r.declared_media_type);
  CHECK(ds::fetch((dir.path() / "three.bin").string()).bytes == "abc");
  CHECK(ds::fetch("file://" + (dir.path() / "three.bin").string()).bytes == "abc");
  CHECK_THROWS_AS(ds::fetch("file:./missing.bin", {.base_directory = dir.path()}), facadex::FetchError);
}

TEST_CASE("local paths") {
  CHECK(ds::local_path("file:./a.csv", "/base") == std::filesystem::path("/base/./a.csv"));
  CHECK(ds::local_path("file:///tmp/a.csv") == std::filesystem::path("/tmp/a.csv"));
  CHECK(ds::local_path("file:a%20b.csv", "/base") == std::filesystem::path("/base/a b.csv"));
  CHECK_FALSE(ds::local_path("http://example.org/a.csv"));
}

TEST_CASE("http fetch through a loopback server") {
  httplib::Server server;
  server.Get("/data.json", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"a\": 1}", "application/json");
  });
  server.Get("/missing", [](const httplib::Request&, httplib::Response& res) { res.status = 404; });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  std::string base = "http://127.0.0.1:" + std::to_string(port);

  ds::FetchedResource r = ds::fetch(base + "/data.json");
  CHECK(r.bytes == "{\"a\": 1}");
  CHECK(r.declared_media_type == "application/json");
  try {
    ds::fetch(base + "/missing");
    FAIL("expected FetchError");
  } catch (const facadex::FetchError& e) {
    CHECK(e.status() == 404);
  }

  // Content-Type drives the triplifier when the extension says nothing.
  ds::FacadeDataset d = ds::assemble(facadex::uri::parse_service_uri("x-sparql-anything:" + base + "/data.json"),
                                     ds::make_fetcher());
  CHECK(d.media_type == "application/json");
  server.stop();
  t.join();
}

TEST_CASE("assembling a csv") {
  TempDir dir;
  dir.write("a.csv", "id,artist\n1034,Blake Robert\n");
  ds::FacadeDataset d = ds::assemble(
      facadex::uri::parse_service_uri("x-sparql-anything:csv.headers=true,location=file:./a.csv"),
      ds::make_fetcher({.base_directory = dir.path()}));
  CHECK(d.media_type == "text/csv");
  CHECK(d.data.name == rdf::Term::iri("file:./a.csv"));
  CHECK(d.data.graph->size() == 4);
  bool found = false;
  for (const rdf::Triple& t : d.data.graph->triples())
    found = found || (t.predicate.value == "http://sparql.xyz/facade-x/data/artist" &&
                      t.object == rdf::Term::literal("Blake Robert"));
  CHECK(found);
  CHECK_FALSE(d.metadata);
  rdf::Dataset rd = d.as_rdf_dataset();
  CHECK(rd.default_graph->size() == 4);
  CHECK(rd.find(rdf::Term::iri("file:./a.csv")) != nullptr);
}

TEST_CASE("assembling an image with metadata") {
  TempDir dir;
  dir.write("img.jpg", facadex::testing::make_jpeg(2, 3, "X"));
  ds::FacadeDataset d = ds::assemble(facadex::uri::parse_service_uri("x-sparql-anything:metadata=true,location=img.jpg"),
                                     ds::make_fetcher({.base_directory = dir.path()}));
  REQUIRE(d.metadata);
  CHECK(d.metadata->name.value == "http://sparql.xyz/facade-x/data/metadata");
  CHECK(d.as_rdf_dataset().named.size() == 2);
  CHECK(d.data.graph->size() == 2);
}

TEST_CASE("metadata on a non-image is a warning") {
  TempDir dir;
  dir.write("a.txt", "hi");
  ds::FacadeDataset d = ds::assemble(facadex::uri::parse_service_uri("x-sparql-anything:metadata=true,location=a.txt"),
                                     ds::make_fetcher({.base_directory = dir.path()}));
  CHECK_FALSE(d.metadata);
  CHECK_FALSE(d.warnings.empty());
}

TEST_CASE("empty text file") {
  TempDir dir;
  dir.write("empty.txt", "");
  ds::FacadeDataset d = ds::assemble(facadex::uri::parse_service_uri("x-sparql-anything:empty.txt"),
                                     ds::make_fetcher({.base_directory = dir.path()}));
  CHECK(d.data.graph->size() == 1);
}

TEST_CASE("media type selection") {
  const auto& reg = facadex::triplify::default_registry();
  ds::FetchedResource r{.bytes = "", .effective_location = "x.json", .declared_media_type = "text/csv"};
  CHECK(ds::select_media_type(facadex::uri::parse_service_uri("x-sparql-anything:x.json"), r, reg) == "text/csv");
  CHECK(ds::select_media_type(facadex::uri::parse_service_uri("x-sparql-anything:mime-type=text/plain,location=x.json"),
                              r, reg) == "text/plain");
  r.declared_media_type = "application/octet-stream";
  CHECK(ds::select_media_type(facadex::uri::parse_service_uri("x-sparql-anything:x.json"), r, reg) ==
        "application/json");
}

TEST_CASE("cache builds once per key") {
  ds::DatasetCache cache;
  std::atomic<int> builds{0};
  auto build = [&] {
    ++builds;
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    return ds::FacadeDataset{};
  };
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) threads.emplace_back([&] { cache.get_or_build("k", build); });
  for (auto& t : threads) t.join();
  CHECK(builds == 1);
  CHECK(cache.size() == 1);
  cache.get_or_build("other", build);
  CHECK(builds == 2);
  CHECK(cache.lookup("k").has_value());
  cache.clear();
  CHECK_FALSE(cache.lookup("k").has_value());

  CHECK_THROWS(cache.get_or_build("bad", []() -> ds::FacadeDataset { throw facadex::FetchError("x", "boom"); }));
  CHECK_THROWS_AS(cache.get_or_build("bad", [] { return ds::FacadeDataset{}; }), facadex::FetchError);
}
