#include "facadex/rdf/writer.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>

namespace facadex::rdf {

PrefixMap default_prefixes() {
  return {
      {"fx", std::string(vocab::kFxNamespace)},
      {"rdf", std::string(vocab::kRdf)},
      {"xsd", std::string(vocab::kXsd)},
      {"xyz", std::string(vocab::kDataNamespace)},
  };
}

void write_ntriples(std::ostream& out, const Graph& graph) {
  for (const IdTriple& t : graph.id_triples()) {
    out << graph.term(t.s).to_ntriples() << ' ' << graph.term(t.p).to_ntriples() << ' '
        << graph.term(t.o).to_ntriples() << " .\n";
  }
}

void write_nquads(std::ostream& out, const Dataset& dataset) {
  write_ntriples(out, *dataset.default_graph);
  for (const NamedGraph& ng : dataset.named) {
    const Graph& g = *ng.graph;
    for (const IdTriple& t : g.id_triples()) {
      out << g.term(t.s).to_ntriples() << ' ' << g.term(t.p).to_ntriples() << ' '
          << g.term(t.o).to_ntriples() << ' ' << ng.name.to_ntriples() << " .\n";
    }
  }
}

namespace {

bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }

// Conservative PN_LOCAL check: ASCII name characters and %XX escapes.
bool valid_local_name(std::string_view s) {
  if (s.empty()) return true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool alnum = std::isalnum(static_cast<unsigned char>(c)) != 0;
    if (alnum || c == '_') continue;
    if (c == '-' && i > 0) continue;
    if (c == '.' && i > 0 && i + 1 < s.size()) continue;
    if (c == '%' && i + 2 < s.size() && is_hex(s[i + 1]) && is_hex(s[i + 2])) {
      i += 2;
      continue;
    }
    return false;
  }
  return true;
}

bool matches_integer(std::string_view s) {
  std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

bool matches_decimal(std::string_view s) {
  std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  std::size_t dot = s.find('.', i);
  if (dot == std::string_view::npos || dot + 1 >= s.size()) return false;
  for (std::size_t k = i; k < s.size(); ++k)
    if (k != dot && !std::isdigit(static_cast<unsigned char>(s[k]))) return false;
  return true;
}

bool matches_double(std::string_view s) {
  std::size_t e = s.find_first_of("eE");
  if (e == std::string_view::npos) return false;
  std::string_view mant = s.substr(0, e);
  std::string_view exp = s.substr(e + 1);
  if (!(matches_integer(mant) || matches_decimal(mant))) {
    // "1." is a valid mantissa in Turtle DOUBLE
    if (mant.size() < 2 || mant.back() != '.' || !matches_integer(mant.substr(0, mant.size() - 1)))
      return false;
  }
  return matches_integer(exp);
}

class TurtleWriter {
 public:
  TurtleWriter(std::ostream& out, const PrefixMap& prefixes) : out_(out), prefixes_(prefixes) {}

  void write_prefixes() {
    for (const auto& [p, ns] : prefixes_) out_ << "@prefix " << p << ": <" << ns << "> .\n";
    if (!prefixes_.empty()) out_ << '\n';
  }

  void write_graph(const Graph& g, const std::string& indent) {
    graph_ = &g;
    const std::size_t n = g.term_count();
    std::vector<std::uint32_t> refs(n, 0);
    std::vector<std::vector<std::uint32_t>> by_subject(n);
    std::vector<TermId> subjects;
    const auto& triples = g.id_triples();
    for (std::uint32_t i = 0; i < triples.size(); ++i) {
      const IdTriple& t = triples[i];
      if (by_subject[t.s].empty()) subjects.push_back(t.s);
      by_subject[t.s].push_back(i);
      if (g.term(t.o).is_blank()) ++refs[t.o];
    }
    inline_.assign(n, false);
    for (TermId id = 0; id < n; ++id) inline_[id] = g.term(id).is_blank() && refs[id] == 1;

    // Nodes only reachable through inline cycles must be promoted to
    // top-level subjects or they would never be written.
    std::vector<bool> covered(n, false);
    std::vector<TermId> top;
    auto cover = [&](TermId root) {
      std::vector<TermId> stack{root};
      while (!stack.empty()) {
        TermId cur = stack.back();
        stack.pop_back();
        if (covered[cur]) continue;
        covered[cur] = true;
        for (std::uint32_t idx : by_subject[cur]) {
          TermId o = triples[idx].o;
          if (inline_[o] && !covered[o]) stack.push_back(o);
        }
      }
    };
    for (TermId s : subjects)
      if (!inline_[s]) {
        top.push_back(s);
        cover(s);
      }
    for (TermId s : subjects) {
      if (!covered[s]) {
        inline_[s] = false;
        top.push_back(s);
        cover(s);
      }
    }
    by_subject_ = &by_subject;
    refs_ = &refs;
    for (TermId s : top) {
      out_ << indent;
      const Term& st = g.term(s);
      if (st.is_blank() && refs[s] == 0)
        out_ << "[]";
      else
        out_ << render(s);
      write_predicates(s, indent + "    ");
      out_ << " .\n";
    }
  }

 private:
  void write_predicates(TermId s, const std::string& indent) {
    const Graph& g = *graph_;
    const auto& triples = g.id_triples();
    // Group objects by predicate in first-seen order.
    std::vector<std::pair<TermId, std::vector<TermId>>> groups;
    for (std::uint32_t idx : (*by_subject_)[s]) {
      const IdTriple& t = triples[idx];
      auto it = std::find_if(groups.begin(), groups.end(),
                             [&](const auto& grp) { return grp.first == t.p; });
      if (it == groups.end())
        groups.push_back({t.p, {t.o}});
      else
        it->second.push_back(t.o);
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
      out_ << (i == 0 ? " " : " ;\n" + indent);
      const Term& p = g.term(groups[i].first);
      out_ << (p.value == vocab::kRdfType && p.is_iri() ? std::string("a") : render(groups[i].first));
      for (std::size_t k = 0; k < groups[i].second.size(); ++k) {
        out_ << (k == 0 ? " " : ", ");
        write_object(groups[i].second[k], indent);
      }
    }
  }

  void write_object(TermId o, const std::string& indent) {
    if (!inline_[o]) {
      out_ << render(o);
      return;
    }
    if ((*by_subject_)[o].empty()) {
      out_ << "[]";
      return;
    }
    out_ << '[';
    write_predicates(o, indent + "    ");
    out_ << "\n" << indent << ']';
  }

  std::string render(TermId id) {
    const Term& t = graph_->term(id);
    switch (t.kind) {
      case TermKind::Iri:
        return render_iri(t.value);
      case TermKind::Blank: {
        auto [it, inserted] = labels_.try_emplace(t.value, "");
        if (inserted) it->second = "b" + std::to_string(labels_.size() - 1);
        return "_:" + it->second;
      }
      case TermKind::Literal:
        return render_literal(t);
    }
    return {};
  }

  std::string render_iri(const std::string& iri) {
    for (const auto& [p, ns] : prefixes_) {
      if (iri.size() >= ns.size() && iri.compare(0, ns.size(), ns) == 0) {
        std::string_view local(iri.data() + ns.size(), iri.size() - ns.size());
        if (valid_local_name(local)) return p + ":" + std::string(local);
      }
    }
    return Term::iri(iri).to_ntriples();
  }

  std::string render_literal(const Term& t) {
    if (!t.lang.empty()) return "\"" + escape_string(t.value) + "\"@" + t.lang;
    if (t.datatype == vocab::kXsdString) return "\"" + escape_string(t.value) + "\"";
    if (t.datatype == vocab::kXsdInteger && matches_integer(t.value)) return t.value;
    if (t.datatype == vocab::kXsdDecimal && matches_decimal(t.value)) return t.value;
    if (t.datatype == vocab::kXsdDouble && matches_double(t.value)) return t.value;
    if (t.datatype == vocab::kXsdBoolean && (t.value == "true" || t.value == "false"))
      return t.value;
    return "\"" + escape_string(t.value) + "\"^^" + render_iri(t.datatype);
  }

  std::ostream& out_;
  const PrefixMap& prefixes_;
  const Graph* graph_ = nullptr;
  const std::vector<std::vector<std::uint32_t>>* by_subject_ = nullptr;
  const std::vector<std::uint32_t>* refs_ = nullptr;
  std::vector<bool> inline_;
  std::unordered_map<std::string, std::string> labels_;
};

}  // namespace

void write_turtle(std::ostream& out, const Graph& graph, const PrefixMap& prefixes) {
  TurtleWriter w(out, prefixes);
  w.write_prefixes();
  w.write_graph(graph, "");
}

void write_trig(std::ostream& out, const Dataset& dataset, const PrefixMap& prefixes) {
  TurtleWriter w(out, prefixes);
  w.write_prefixes();
  if (!dataset.default_graph->empty()) {
    out << "{\n";
    w.write_graph(*dataset.default_graph, "    ");
    out << "}\n";
  }
  for (const NamedGraph& ng : dataset.named) {
    out << ng.name.to_ntriples() << " {\n";
    w.write_graph(*ng.graph, "    ");
    out << "}\n";
  }
}

}  // namespace facadex::rdf
