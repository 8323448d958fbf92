#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "facadex/bench/bench.hpp"
#include "facadex/dataset/assemble.hpp"
#include "facadex/error.hpp"
#include "facadex/query/facade.hpp"
#include "facadex/rdf/writer.hpp"
#include "facadex/sparql/results.hpp"
#include "facadex/uri/service_uri.hpp"

namespace {

using namespace facadex;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FetchError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_graph_format(const std::string& f) { return f == "ntriples" || f == "turtle" || f == "trig" || f == "nquads"; }

void write_graph(const rdf::Graph& g, const std::string& format) {
  if (format == "ntriples") {
    rdf::write_ntriples(std::cout, g);
  } else if (format == "turtle") {
    rdf::write_turtle(std::cout, g);
  } else {
    rdf::Dataset ds;
    ds.default_graph = std::make_shared<rdf::Graph>(g);
    if (format == "trig") rdf::write_trig(std::cout, ds);
    else rdf::write_nquads(std::cout, ds);
  }
}

struct TriplifyArgs {
  std::string location;
  std::map<std::string, std::string> options;
  std::string format = "turtle";
};

int cmd_triplify(const TriplifyArgs& a) {
  if (a.location.find(',') != std::string::npos) throw UsageError("location may not contain ','");
  std::string iri(uri::kScheme);
  for (const auto& [k, v] : a.options) iri += k + "=" + v + ",";
  iri += "location=" + a.location;
  uri::ServiceSpec spec = uri::parse_service_uri(iri);
  dataset::FacadeDataset fd = dataset::assemble(spec, dataset::make_fetcher());
  for (const std::string& w : fd.warnings) std::cerr << "warning: " << w << '\n';
  if (spec.metadata && (a.format == "trig" || a.format == "nquads")) {
    rdf::Dataset ds;
    ds.default_graph = std::make_shared<rdf::Graph>();
    ds.named.push_back(fd.data);
    if (fd.metadata) ds.named.push_back(*fd.metadata);
    if (a.format == "trig") rdf::write_trig(std::cout, ds);
    else rdf::write_nquads(std::cout, ds);
    return 0;
  }
  if (spec.metadata) std::cerr << "warning: the metadata graph is only printed with --format trig or nquads\n";
  write_graph(*fd.data.graph, a.format);
  return 0;
}

struct QueryArgs {
  std::string query_file;
  std::optional<std::string> output;
  bool no_federation = false;
  std::string base_dir;
};

int cmd_query(const QueryArgs& a) {
  std::string text = read_file(a.query_file);
  query::ExecutionContext ctx;
  ctx.base_directory = a.base_dir;
  ctx.allow_federation = !a.no_federation;
  sparql::QueryResult result = query::execute_query(text, ctx);
  for (const std::string& w : ctx.warnings) std::cerr << "warning: " << w << '\n';
  if (auto* g = std::get_if<rdf::Graph>(&result)) {
    std::string format = a.output.value_or("turtle");
    if (!is_graph_format(format)) throw UsageError("graph results need a graph format, not " + format);
    write_graph(*g, format);
    return 0;
  }
  std::string format = a.output.value_or("sparql-results-json");
  if (is_graph_format(format)) throw UsageError("solution results need a results format, not " + format);
  if (auto* b = std::get_if<bool>(&result)) {
    if (format == "sparql-results-json") sparql::write_boolean_json(std::cout, *b);
    else sparql::write_boolean_csv(std::cout, *b);
    return 0;
  }
  const auto& table = std::get<sparql::SolutionTable>(result);
  if (format == "sparql-results-json") sparql::write_results_json(std::cout, table);
  else if (format == "sparql-results-csv") sparql::write_results_csv(std::cout, table);
  else sparql::write_results_tsv(std::cout, table);
  return 0;
}

int cmd_tokens(const std::vector<std::string>& files) {
  std::vector<std::pair<std::string, std::string>> texts;
  for (const std::string& f : files) texts.emplace_back(f, read_file(f));
  bench::TokenStats stats = bench::token_stats(texts);
  std::cout << "file,total,distinct\n";
  for (const auto& f : stats.per_file) std::cout << f.name << ',' << f.total << ',' << f.distinct << '\n';
  std::cout << "average," << stats.average_total << ',' << stats.average_distinct << '\n';
  return 0;
}

struct ScaleArgs {
  std::string template_file;
  std::vector<std::size_t> sizes;
  std::string query_file;
  int runs = 3;
};

int cmd_scale(const ScaleArgs& a) {
  std::string tmpl = read_file(a.template_file);
  bench::ScaleOptions opts;
  opts.runs = a.runs;
  std::string q = a.query_file.empty() ? bench::default_scale_query(opts.location) : read_file(a.query_file);
  std::vector<bench::ScaleSample> samples = bench::scale_harness(tmpl, a.sizes, q, opts);
  std::cout << bench::scale_csv(samples);
  // Summary on stderr so stdout stays plain CSV.
  for (const auto& [size, median] : bench::median_by_size(samples)) {
    double sum = 0;
    int n = 0;
    for (const auto& s : samples)
      if (s.size == size) sum += s.elapsed_ms, ++n;
    std::cerr << "size " << size << ": median " << median << " ms, mean " << sum / n << " ms\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query CSV, JSON, XML, text and image files as RDF through SPARQL SERVICE"};
  app.require_subcommand(1);

  TriplifyArgs ta;
  auto* triplify = app.add_subcommand("triplify", "Print the RDF view of one resource");
  triplify->add_option("location", ta.location, "File path, file: or http(s) IRI")->required();
  for (const char* key : {"csv.headers", "mime-type", "metadata", "root", "namespace", "charset", "txt.regex"}) {
    std::string k = key;
    triplify->add_option_function<std::string>(
        "--" + k, [&ta, k](const std::string& v) { ta.options[k] = v; }, "Same as the URI option " + k);
  }
  triplify->add_option("--format", ta.format, "ntriples, turtle, trig or nquads")
      ->check(CLI::IsMember({"ntriples", "turtle", "trig", "nquads"}));

  QueryArgs qa;
  auto* query_cmd = app.add_subcommand("query", "Run a SPARQL query");
  query_cmd->add_option("--query,-q", qa.query_file, "Query file")->required();
  query_cmd->add_option("--output,-o", qa.output, "Output format")
      ->check(CLI::IsMember({"ntriples", "turtle", "trig", "nquads", "sparql-results-json", "sparql-results-csv",
                             "sparql-results-tsv"}));
  query_cmd->add_flag("--no-federation", qa.no_federation, "Reject SERVICE endpoints outside the facade scheme");
  query_cmd->add_option("--base-dir", qa.base_dir, "Directory for relative file locations");

  auto* bench_cmd = app.add_subcommand("bench", "Token metric and scaling benchmarks");
  bench_cmd->require_subcommand(1);
  std::vector<std::string> token_files;
  auto* tokens = bench_cmd->add_subcommand("tokens", "Token counts per query file");
  tokens->add_option("files", token_files, "Query files")->required();
  ScaleArgs sa;
  auto* scale = bench_cmd->add_subcommand("scale", "Time a query over JSON arrays of growing size");
  scale->add_option("--template", sa.template_file, "JSON object copied into the array")->required();
  scale->add_option("--sizes", sa.sizes, "Array lengths, ascending")->delimiter(',')->required();
  scale->add_option("--query", sa.query_file, "Query reading x-sparql-anything:location=scale.json");
  scale->add_option("--runs", sa.runs, "Runs per size")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*triplify) return cmd_triplify(ta);
    if (*query_cmd) return cmd_query(qa);
    if (*tokens) return cmd_tokens(token_files);
    if (*scale) return cmd_scale(sa);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
