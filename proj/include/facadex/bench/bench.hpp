#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace facadex::bench {

// Characters that separate tokens: double quote, ( ) { } , ; newline, tab,
// carriage return and space.
inline constexpr std::string_view kTokenDelimiters = "\"(){},;\n\t\r ";

std::vector<std::string> tokenize(std::string_view text);

struct FileTokens {
  std::string name;
  std::size_t total = 0;
  std::size_t distinct = 0;
};

struct TokenStats {
  std::vector<FileTokens> per_file;
  double average_total = 0;
  double average_distinct = 0;
};

// `files` holds (name, text) pairs. Throws PreconditionError when empty.
TokenStats token_stats(const std::vector<std::pair<std::string, std::string>>& files);

struct ScaleSample {
  std::size_t size = 0;
  int run = 0;
  double elapsed_ms = 0;
};

struct ScaleOptions {
  int runs = 3;
  // Largest generated document; bigger requests raise ResourceLimitError.
  std::size_t byte_budget = std::size_t{1} << 30;
  // Name under which the generated array is served to the query.
  std::string location = "scale.json";
};

// JSON array of `n` copies of `template_object`, each with its "id" member
// set to the copy's index.
std::string generate_array(std::string_view template_object, std::size_t n,
                           std::size_t byte_budget = std::size_t{1} << 30);

// Default CONSTRUCT used for scaling runs: one node per array element with
// all of its members copied over.
std::string default_scale_query(std::string_view location = "scale.json");

// Runs `query` (which must read options.location through a facade SERVICE)
// over generated arrays of each size, `runs` times each. Wall time covers
// triplification and evaluation.
std::vector<ScaleSample> scale_harness(std::string_view template_object, const std::vector<std::size_t>& sizes,
                                       std::string_view query, const ScaleOptions& options = {});

// Median elapsed time per size, in input order of first appearance.
std::vector<std::pair<std::size_t, double>> median_by_size(const std::vector<ScaleSample>& samples);

// Coefficient of determination of the least-squares line through (x, y).
double linear_r_squared(const std::vector<double>& x, const std::vector<double>& y);

std::string scale_csv(const std::vector<ScaleSample>& samples);

}  // namespace facadex::bench
