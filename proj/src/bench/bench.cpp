#include "facadex/bench/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "facadex/error.hpp"
#include "facadex/query/facade.hpp"

namespace facadex::bench {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || kTokenDelimiters.find(text[i]) != std::string_view::npos) {
      if (i > start) out.emplace_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

TokenStats token_stats(const std::vector<std::pair<std::string, std::string>>& files) {
  if (files.empty()) throw PreconditionError("token statistics need at least one file");
  TokenStats stats;
  double total = 0;
  double distinct = 0;
  for (const auto& [name, text] : files) {
    std::vector<std::string> tokens = tokenize(text);
    std::set<std::string> uniq(tokens.begin(), tokens.end());
    stats.per_file.push_back({name, tokens.size(), uniq.size()});
    total += static_cast<double>(tokens.size());
    distinct += static_cast<double>(uniq.size());
  }
  stats.average_total = total / static_cast<double>(files.size());
  stats.average_distinct = distinct / static_cast<double>(files.size());
  return stats;
}

std::string generate_array(std::string_view template_object, std::size_t n, std::size_t byte_budget) {
  nlohmann::ordered_json tmpl;
  try {
    tmpl = nlohmann::ordered_json::parse(template_object);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON template: ") + e.what(), std::nullopt, std::nullopt, e.byte);
  }
  if (!tmpl.is_object()) throw PreconditionError("JSON template must be an object");
  // Serialize around the "id" member so each copy costs one string build.
  nlohmann::ordered_json probe = tmpl;
  probe["id"] = 0;
  std::string body = probe.dump();
  std::string marker = "\"id\":0";
  std::size_t at = body.find(marker);
  std::string head = body.substr(0, at + marker.size() - 1);
  std::string tail = body.substr(at + marker.size());
  std::size_t estimate = 2 + n * (body.size() + 8);
  if (estimate > byte_budget)
    throw ResourceLimitError("generated array of " + std::to_string(n) + " objects exceeds the byte budget");
  std::string out;
  out.reserve(estimate);
  out += '[';
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ',';
    out += head;
    out += std::to_string(i);
    out += tail;
  }
  out += ']';
  return out;
}

std::string default_scale_query(std::string_view location) {
  return "PREFIX fx: <http://sparql.xyz/facade-x/ns/>\n"
         "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n"
         "CONSTRUCT { ?item ?p ?o } WHERE {\n"
         "  SERVICE <x-sparql-anything:location=" + std::string(location) + "> {\n"
         "    ?root a fx:Root ; ?slot ?item .\n"
         "    ?item ?p ?o .\n"
         "  }\n"
         "}\n";
}

std::vector<ScaleSample> scale_harness(std::string_view template_object, const std::vector<std::size_t>& sizes,
                                       std::string_view query, const ScaleOptions& options) {
  if (!std::is_sorted(sizes.begin(), sizes.end())) throw PreconditionError("sizes must be ascending");
  std::vector<ScaleSample> samples;
  for (std::size_t n : sizes) {
    std::string doc = generate_array(template_object, n, options.byte_budget);
    for (int run = 1; run <= options.runs; ++run) {
      query::ExecutionContext ctx;
      std::string location = options.location;
      ctx.fetcher = [&doc, location](std::string_view loc) {
        if (loc != location) throw FetchError(std::string(loc), "not served by the scaling harness");
        dataset::FetchedResource r;
        r.bytes = doc;
        r.effective_location = location;
        r.fetch_time = std::chrono::system_clock::now();
        return r;
      };
      auto t0 = std::chrono::steady_clock::now();
      query::execute_query(query, ctx);
      auto t1 = std::chrono::steady_clock::now();
      samples.push_back({n, run, std::chrono::duration<double, std::milli>(t1 - t0).count()});
    }
  }
  return samples;
}

std::vector<std::pair<std::size_t, double>> median_by_size(const std::vector<ScaleSample>& samples) {
  std::vector<std::size_t> order;
  std::map<std::size_t, std::vector<double>> by;
  for (const ScaleSample& s : samples) {
    if (!by.count(s.size)) order.push_back(s.size);
    by[s.size].push_back(s.elapsed_ms);
  }
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t n : order) {
    std::vector<double>& v = by[n];
    std::sort(v.begin(), v.end());
    double m = v.size() % 2 ? v[v.size() / 2] : (v[v.size() / 2 - 1] + v[v.size() / 2]) / 2;
    out.emplace_back(n, m);
  }
  return out;
}

double linear_r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("need at least two paired points");
  double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return syy == 0 ? 1.0 : 0.0;
  return sxy * sxy / (sxx * syy);
}

std::string scale_csv(const std::vector<ScaleSample>& samples) {
  std::ostringstream out;
  out << "size,run,elapsed_ms\n";
  for (const ScaleSample& s : samples) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", s.elapsed_ms);
    out << s.size << ',' << s.run << ',' << buf << '\n';
  }
  return out.str();
}

}  // namespace facadex::bench
