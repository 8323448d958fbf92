#include "facadex/sparql/algebra.hpp"

#include <algorithm>

namespace facadex::sparql {

int VarTable::get(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  int i = static_cast<int>(names_.size());
  names_.push_back(name);
  index_.emplace(name, i);
  return i;
}

int VarTable::hidden(std::string_view hint) {
  return get("." + std::string(hint) + std::to_string(hidden_counter_++));
}

std::optional<int> VarTable::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

void add(std::vector<int>& out, int v, const VarTable& vars) {
  if (v < 0 || vars.is_hidden(v)) return;
  if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

void collect(const Pattern& p, const VarTable& vars, std::vector<int>& out) {
  switch (p.kind) {
    case Pattern::Kind::Bgp:
      for (const TriplePattern& t : p.triples) {
        add(out, t.s.var, vars);
        add(out, t.p.var, vars);
        add(out, t.o.var, vars);
      }
      break;
    case Pattern::Kind::Path:
      add(out, p.path.s.var, vars);
      add(out, p.path.o.var, vars);
      break;
    case Pattern::Kind::Join:
    case Pattern::Kind::LeftJoin:
    case Pattern::Kind::Union:
      collect(*p.left, vars, out);
      collect(*p.right, vars, out);
      break;
    case Pattern::Kind::Minus:
    case Pattern::Kind::Filter:
      collect(*p.left, vars, out);
      break;
    case Pattern::Kind::Extend:
      collect(*p.left, vars, out);
      add(out, p.var, vars);
      break;
    case Pattern::Kind::Graph:
    case Pattern::Kind::Service:
      add(out, p.name.var, vars);
      collect(*p.left, vars, out);
      break;
    case Pattern::Kind::Values:
      for (int v : p.values_vars) add(out, v, vars);
      break;
    case Pattern::Kind::SubQuery:
      for (int v : projected_vars(*p.subquery)) add(out, v, vars);
      break;
  }
}

}  // namespace

std::vector<int> in_scope_vars(const Pattern& p, const VarTable& vars) {
  std::vector<int> out;
  collect(p, vars, out);
  return out;
}

std::vector<int> projected_vars(const Query& q) {
  std::vector<int> out;
  if (q.select_all) {
    if (q.where) collect(*q.where, *q.vars, out);
    if (q.values) collect(*q.values, *q.vars, out);
    return out;
  }
  for (const ProjectionItem& item : q.projection) out.push_back(item.var);
  return out;
}

}  // namespace facadex::sparql
