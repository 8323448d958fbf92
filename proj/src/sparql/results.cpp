#include "facadex/sparql/results.hpp"

#include <algorithm>

#include <json.hpp>

#include "facadex/error.hpp"

namespace facadex::sparql {

namespace {

using ordered_json = nlohmann::ordered_json;
using rdf::Term;

ordered_json term_json(const Term& t) {
  ordered_json j;
  if (t.is_iri()) {
    j["type"] = "uri";
    j["value"] = t.value;
  } else if (t.is_blank()) {
    j["type"] = "bnode";
    j["value"] = t.value;
  } else {
    j["type"] = "literal";
    j["value"] = t.value;
    if (t.has_lang()) j["xml:lang"] = t.lang;
    else if (t.datatype != rdf::vocab::kXsdString) j["datatype"] = t.datatype;
  }
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_results_json(std::ostream& out, const SolutionTable& table) {
  ordered_json doc;
  doc["head"]["vars"] = table.variables;
  ordered_json bindings = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json b = ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < table.variables.size(); ++i)
      if (row[i]) b[table.variables[i]] = term_json(*row[i]);
    bindings.push_back(std::move(b));
  }
  doc["results"]["bindings"] = std::move(bindings);
  out << doc.dump(2) << '\n';
}

void write_boolean_json(std::ostream& out, bool value) {
  ordered_json doc;
  doc["head"] = ordered_json::object();
  doc["boolean"] = value;
  out << doc.dump(2) << '\n';
}

void write_results_csv(std::ostream& out, const SolutionTable& table) {
  for (std::size_t i = 0; i < table.variables.size(); ++i) out << (i ? "," : "") << csv_field(table.variables[i]);
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < table.variables.size(); ++i) {
      if (i) out << ',';
      if (i >= row.size() || !row[i]) continue;
      const Term& t = *row[i];
      out << csv_field(t.is_blank() ? "_:" + t.value : t.value);
    }
    out << "\r\n";
  }
}

void write_results_tsv(std::ostream& out, const SolutionTable& table) {
  for (std::size_t i = 0; i < table.variables.size(); ++i) out << (i ? "\t" : "") << '?' << table.variables[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < table.variables.size(); ++i) {
      if (i) out << '\t';
      if (i < row.size() && row[i]) out << row[i]->to_ntriples();
    }
    out << '\n';
  }
}

void write_boolean_csv(std::ostream& out, bool value) { out << (value ? "true" : "false") << "\r\n"; }

SolutionTable parse_results_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("results JSON: ") + e.what(), std::nullopt, std::nullopt, e.byte);
  }
  SolutionTable table;
  try {
    for (const auto& v : doc.at("head").value("vars", nlohmann::json::array()))
      table.variables.push_back(v.get<std::string>());
    for (const auto& b : doc.at("results").at("bindings")) {
      std::vector<std::optional<Term>> row(table.variables.size());
      for (auto it = b.begin(); it != b.end(); ++it) {
        auto pos = std::find(table.variables.begin(), table.variables.end(), it.key());
        if (pos == table.variables.end()) {
          table.variables.push_back(it.key());
          for (auto& r : table.rows) r.emplace_back();
          row.emplace_back();
          pos = table.variables.end() - 1;
        }
        const auto& cell = it.value();
        std::string type = cell.at("type").get<std::string>();
        std::string value = cell.at("value").get<std::string>();
        Term t;
        if (type == "uri") {
          t = Term::iri(value);
        } else if (type == "bnode") {
          t = Term::blank(value);
        } else if (type == "literal" || type == "typed-literal") {
          if (cell.contains("xml:lang")) t = Term::lang_literal(value, cell["xml:lang"].get<std::string>());
          else if (cell.contains("datatype")) t = Term::literal(value, cell["datatype"].get<std::string>());
          else t = Term::literal(value);
        } else {
          throw ParseError("results JSON: unknown term type '" + type + "'", std::nullopt);
        }
        row[static_cast<std::size_t>(pos - table.variables.begin())] = std::move(t);
      }
      table.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("results JSON: ") + e.what(), std::nullopt);
  }
  return table;
}

std::optional<bool> parse_boolean_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("results JSON: ") + e.what(), std::nullopt, std::nullopt, e.byte);
  }
  if (!doc.is_object() || !doc.contains("boolean") || !doc["boolean"].is_boolean()) return std::nullopt;
  return doc["boolean"].get<bool>();
}

}  // namespace facadex::sparql
