#include "eval.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

#include "facadex/error.hpp"
#include "facadex/sparql/parser.hpp"
#include "values.hpp"

namespace facadex::sparql {

namespace detail {

using rdf::Graph;
using rdf::kNoTerm;
using rdf::Term;
using rdf::TermId;

TermRef Arena::intern(Term t) {
  auto it = index_.find(t);
  if (it != index_.end()) return it->second;
  terms_.push_back(std::move(t));
  TermRef r = &terms_.back();
  index_.emplace(*r, r);
  return r;
}

namespace {

bool same(TermRef a, TermRef b) { return a == b || *a == *b; }

std::size_t hash_cells(const Row& row, const std::vector<std::size_t>& cols) {
  std::size_t h = 0;
  rdf::TermHash th;
  for (std::size_t c : cols) h = h * 1000003u ^ (row[c] ? th(*row[c]) : 0x5bd1e995u);
  return h;
}

std::vector<std::size_t> all_columns(std::size_t width) {
  std::vector<std::size_t> cols(width);
  for (std::size_t i = 0; i < width; ++i) cols[i] = i;
  return cols;
}

bool rows_equal(const Row& a, const Row& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] == nullptr) != (b[i] == nullptr)) return false;
    if (a[i] && !same(a[i], b[i])) return false;
  }
  return true;
}

bool is_unit(const Rows& rows) {
  if (rows.size() != 1) return false;
  for (TermRef t : rows[0])
    if (t) return false;
  return true;
}

// Columns bound in every row.
std::vector<bool> certain(const Rows& rows, std::size_t width) {
  std::vector<bool> out(width, true);
  for (const Row& r : rows)
    for (std::size_t i = 0; i < width; ++i)
      if (!r[i]) out[i] = false;
  return out;
}

std::optional<TermId> id_in(const Graph& g, TermRef t) {
  std::size_t n = g.term_count();
  if (n > 0) {
    auto base = reinterpret_cast<std::uintptr_t>(&g.term(0));
    auto p = reinterpret_cast<std::uintptr_t>(t);
    if (p >= base && p < base + n * sizeof(Term) && (p - base) % sizeof(Term) == 0)
      return static_cast<TermId>((p - base) / sizeof(Term));
  }
  return g.lookup(*t);
}

bool zero_length(const PathExpr& p) {
  return p.kind == PathExpr::Kind::ZeroOrMore || p.kind == PathExpr::Kind::ZeroOrOne;
}

void path_targets(const Graph& g, const PathExpr& p, TermId node, bool fwd, std::vector<TermId>& out) {
  using K = PathExpr::Kind;
  switch (p.kind) {
    case K::Link: {
      auto pid = g.lookup(p.iri);
      if (!pid) return;
      if (fwd) {
        g.for_each_match(node, *pid, kNoTerm, [&](const rdf::IdTriple& t) {
          out.push_back(t.o);
          return true;
        });
      } else {
        g.for_each_match(kNoTerm, *pid, node, [&](const rdf::IdTriple& t) {
          out.push_back(t.s);
          return true;
        });
      }
      return;
    }
    case K::Inverse: path_targets(g, *p.parts[0], node, !fwd, out); return;
    case K::Seq: {
      std::vector<TermId> cur{node};
      std::vector<TermId> next;
      for (std::size_t k = 0; k < p.parts.size(); ++k) {
        const PathExpr& part = *p.parts[fwd ? k : p.parts.size() - 1 - k];
        next.clear();
        for (TermId x : cur) path_targets(g, part, x, fwd, next);
        cur.swap(next);
      }
      out.insert(out.end(), cur.begin(), cur.end());
      return;
    }
    case K::Alt:
      for (const PathPtr& part : p.parts) path_targets(g, *part, node, fwd, out);
      return;
    case K::ZeroOrMore:
    case K::OneOrMore: {
      std::unordered_set<TermId> visited;
      std::vector<TermId> frontier{node};
      if (p.kind == K::ZeroOrMore) {
        visited.insert(node);
        out.push_back(node);
      }
      std::vector<TermId> step;
      while (!frontier.empty()) {
        std::vector<TermId> next;
        for (TermId x : frontier) {
          step.clear();
          path_targets(g, *p.parts[0], x, fwd, step);
          for (TermId y : step)
            if (visited.insert(y).second) {
              out.push_back(y);
              next.push_back(y);
            }
        }
        frontier.swap(next);
      }
      return;
    }
    case K::ZeroOrOne: {
      std::unordered_set<TermId> seen{node};
      out.push_back(node);
      std::vector<TermId> step;
      path_targets(g, *p.parts[0], node, fwd, step);
      for (TermId y : step)
        if (seen.insert(y).second) out.push_back(y);
      return;
    }
    case K::Negated: {
      auto excluded = [&](TermId pid, const std::vector<Term>& set) {
        const Term& pt = g.term(pid);
        return std::find(set.begin(), set.end(), pt) != set.end();
      };
      bool use_forward = !p.forward.empty() || p.inverse.empty();
      // Forward members relate node -> object when walking forward.
      auto scan = [&](bool outgoing, const std::vector<Term>& set) {
        if (outgoing) {
          g.for_each_match(node, kNoTerm, kNoTerm, [&](const rdf::IdTriple& t) {
            if (!excluded(t.p, set)) out.push_back(t.o);
            return true;
          });
        } else {
          g.for_each_match(kNoTerm, kNoTerm, node, [&](const rdf::IdTriple& t) {
            if (!excluded(t.p, set)) out.push_back(t.s);
            return true;
          });
        }
      };
      if (use_forward) scan(fwd, p.forward);
      if (!p.inverse.empty()) scan(!fwd, p.inverse);
      return;
    }
  }
}

}  // namespace

Row empty_row(std::size_t width) { return Row(width, nullptr); }

bool compatible(const Row& a, const Row& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i] && !same(a[i], b[i])) return false;
  return true;
}

Row merge(const Row& a, const Row& b) {
  Row r = a;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (!r[i]) r[i] = b[i];
  return r;
}

Rows join(const Rows& a, const Rows& b) {
  if (a.empty() || b.empty()) return {};
  if (is_unit(a)) return b;
  if (is_unit(b)) return a;
  std::size_t width = a[0].size();
  std::vector<bool> ca = certain(a, width);
  std::vector<bool> cb = certain(b, width);
  std::vector<std::size_t> keys;
  for (std::size_t i = 0; i < width; ++i)
    if (ca[i] && cb[i]) keys.push_back(i);
  Rows out;
  if (keys.empty()) {
    for (const Row& x : a)
      for (const Row& y : b)
        if (compatible(x, y)) out.push_back(merge(x, y));
    return out;
  }
  std::unordered_map<std::size_t, std::vector<std::uint32_t>> table;
  for (std::size_t j = 0; j < b.size(); ++j) table[hash_cells(b[j], keys)].push_back(static_cast<std::uint32_t>(j));
  for (const Row& x : a) {
    auto it = table.find(hash_cells(x, keys));
    if (it == table.end()) continue;
    for (std::uint32_t j : it->second)
      if (compatible(x, b[j])) out.push_back(merge(x, b[j]));
  }
  return out;
}

Evaluator::Evaluator(const Query& query, const EngineOptions& options)
    : query_(query), options_(options), vars_(query.vars) {}

Rows Evaluator::eval(const Pattern& p, const Scope& scope, Rows input) {
  using K = Pattern::Kind;
  if (input.empty()) return input;
  // Inside EXISTS, bindings flow into every operator (substitution).
  bool substitute = !outer_.empty();
  auto unit = [&] { return Rows{empty_row(width())}; };
  switch (p.kind) {
    case K::Bgp: return eval_bgp(p, scope, std::move(input));
    case K::Path: return eval_path(p, scope, std::move(input));
    case K::Join: {
      Rows left = eval(*p.left, scope, std::move(input));
      return eval(*p.right, scope, std::move(left));
    }
    case K::Union: {
      Rows left = eval(*p.left, scope, input);
      Rows right = eval(*p.right, scope, std::move(input));
      left.insert(left.end(), std::make_move_iterator(right.begin()), std::make_move_iterator(right.end()));
      return left;
    }
    case K::LeftJoin: return eval_left_join(p, scope, std::move(input));
    case K::Minus: return eval_minus(p, scope, std::move(input));
    case K::Filter: {
      Rows rows = substitute ? eval(*p.left, scope, std::move(input)) : eval(*p.left, scope, unit());
      Rows kept;
      for (Row& r : rows) {
        bool ok = true;
        for (const ExprPtr& e : p.exprs) {
          auto b = eval_bool(*e, r, scope);
          if (!b || !*b) {
            ok = false;
            break;
          }
        }
        if (ok) kept.push_back(std::move(r));
      }
      return substitute ? kept : join(input, kept);
    }
    case K::Extend: {
      Rows rows = substitute ? eval(*p.left, scope, std::move(input)) : eval(*p.left, scope, unit());
      auto v = static_cast<std::size_t>(p.var);
      Rows kept;
      kept.reserve(rows.size());
      for (Row& r : rows) {
        auto value = eval_expr(*p.expr, r, scope);
        if (r[v] == nullptr) {
          if (value) r[v] = *value;
        } else if (!value || !same(r[v], *value)) {
          continue;
        }
        kept.push_back(std::move(r));
      }
      return substitute ? kept : join(input, kept);
    }
    case K::Graph: return join(input, eval_graph(p, scope));
    case K::Service: return eval_service(p, std::move(input));
    case K::Values: return join(input, eval_values(p));
    case K::SubQuery: {
      std::vector<const Row*> saved;
      saved.swap(outer_);
      Rows rows = solve(*p.subquery, scope);
      outer_.swap(saved);
      return join(input, rows);
    }
  }
  return {};
}

Rows Evaluator::eval_bgp(const Pattern& p, const Scope& scope, Rows input) {
  if (p.triples.empty()) return input;
  const Graph& g = *scope.graph;

  struct Pos {
    int var = -1;
    TermId id = kNoTerm;
  };
  struct Tp {
    Pos s, p, o;
  };
  std::vector<Tp> tps;
  for (const TriplePattern& t : p.triples) {
    Tp tp;
    for (auto [src, dst] : {std::pair{&t.s, &tp.s}, std::pair{&t.p, &tp.p}, std::pair{&t.o, &tp.o}}) {
      if (src->is_var()) {
        dst->var = src->var;
      } else {
        auto id = g.lookup(src->term);
        if (!id) return {};
        dst->id = *id;
      }
    }
    tps.push_back(tp);
  }

  // Greedy order: most bound positions first, then smallest index estimate.
  std::vector<bool> bound = certain(input, width());
  std::vector<bool> used(tps.size(), false);
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < tps.size(); ++k) {
    std::size_t best = tps.size();
    int best_score = -1;
    std::size_t best_est = 0;
    for (std::size_t i = 0; i < tps.size(); ++i) {
      if (used[i]) continue;
      int score = 0;
      TermId ids[3];
      const Pos* ps[3] = {&tps[i].s, &tps[i].p, &tps[i].o};
      for (int j = 0; j < 3; ++j) {
        ids[j] = ps[j]->id;
        if (ps[j]->var < 0 || bound[static_cast<std::size_t>(ps[j]->var)]) ++score;
      }
      std::size_t est = g.estimate(ids[0], ids[1], ids[2]);
      if (score > best_score || (score == best_score && est < best_est)) {
        best = i;
        best_score = score;
        best_est = est;
      }
    }
    used[best] = true;
    order.push_back(best);
    for (const Pos* ps : {&tps[best].s, &tps[best].p, &tps[best].o})
      if (ps->var >= 0) bound[static_cast<std::size_t>(ps->var)] = true;
  }

  Rows rows = std::move(input);
  for (std::size_t idx : order) {
    const Tp& tp = tps[idx];
    Rows next;
    for (const Row& r : rows) {
      TermId ids[3];
      const Pos* ps[3] = {&tp.s, &tp.p, &tp.o};
      bool dead = false;
      for (int j = 0; j < 3; ++j) {
        ids[j] = ps[j]->id;
        if (ps[j]->var >= 0) {
          TermRef v = r[static_cast<std::size_t>(ps[j]->var)];
          if (v) {
            auto id = id_in(g, v);
            if (!id) {
              dead = true;
              break;
            }
            ids[j] = *id;
          }
        }
      }
      if (dead) continue;
      g.for_each_match(ids[0], ids[1], ids[2], [&](const rdf::IdTriple& t) {
        Row n = r;
        TermId got[3] = {t.s, t.p, t.o};
        for (int j = 0; j < 3; ++j) {
          if (ids[j] != kNoTerm) continue;
          auto v = static_cast<std::size_t>(ps[j]->var);
          TermRef term = &g.term(got[j]);
          if (n[v] && n[v] != term) return true;  // repeated variable within the pattern
          n[v] = term;
        }
        next.push_back(std::move(n));
        return true;
      });
    }
    rows = std::move(next);
    if (rows.empty()) break;
  }
  return rows;
}

Rows Evaluator::eval_path(const Pattern& p, const Scope& scope, Rows input) {
  const Graph& g = *scope.graph;
  const PathPattern& pp = p.path;
  Rows out;
  std::vector<TermId> targets;
  auto resolve = [&](const VarOrTerm& vt, const Row& r) -> TermRef {
    if (!vt.is_var()) return &vt.term;
    return r[static_cast<std::size_t>(vt.var)];
  };
  for (const Row& r : input) {
    TermRef s = resolve(pp.s, r);
    TermRef o = resolve(pp.o, r);
    auto emit = [&](TermRef sv, TermRef ov) {
      Row n = r;
      if (pp.s.is_var()) n[static_cast<std::size_t>(pp.s.var)] = sv;
      if (pp.o.is_var()) {
        auto ov_idx = static_cast<std::size_t>(pp.o.var);
        if (n[ov_idx] && !same(n[ov_idx], ov)) return;
        n[ov_idx] = ov;
      }
      out.push_back(std::move(n));
    };
    if (s || o) {
      bool forward = s != nullptr;
      TermRef start = forward ? s : o;
      TermRef end = forward ? o : s;
      auto sid = id_in(g, start);
      if (!sid) {
        // A node outside the graph only reaches itself, by a zero-length path.
        if (zero_length(*pp.path) && (!end || same(end, start))) emit(start, start);
        continue;
      }
      targets.clear();
      path_targets(g, *pp.path, *sid, forward, targets);
      std::optional<TermId> eid;
      if (end) {
        eid = id_in(g, end);
        if (!eid) continue;
      }
      for (TermId t : targets) {
        if (eid && t != *eid) continue;
        TermRef tr = &g.term(t);
        if (forward) emit(start, tr);
        else emit(tr, start);
      }
      continue;
    }
    bool same_var = pp.s.var == pp.o.var;
    for (TermId n : g.nodes()) {
      targets.clear();
      path_targets(g, *pp.path, n, true, targets);
      for (TermId t : targets) {
        if (same_var && t != n) continue;
        emit(&g.term(n), &g.term(t));
      }
    }
  }
  return out;
}

Rows Evaluator::eval_left_join(const Pattern& p, const Scope& scope, Rows input) {
  Rows left = eval(*p.left, scope, std::move(input));
  if (left.empty()) return left;
  auto passes = [&](const Row& m) {
    for (const ExprPtr& e : p.exprs) {
      auto b = eval_bool(*e, m, scope);
      if (!b || !*b) return false;
    }
    return true;
  };
  Rows out;
  bool seedable = p.right->kind == Pattern::Kind::Bgp || p.right->kind == Pattern::Kind::Path;
  if (seedable || !outer_.empty()) {
    for (Row& l : left) {
      bool any = false;
      for (Row& m : eval(*p.right, scope, Rows{l})) {
        if (!passes(m)) continue;
        any = true;
        out.push_back(std::move(m));
      }
      if (!any) out.push_back(std::move(l));
    }
    return out;
  }
  Rows right = eval(*p.right, scope, Rows{empty_row(width())});
  for (Row& l : left) {
    bool any = false;
    for (const Row& r : right) {
      if (!compatible(l, r)) continue;
      Row m = merge(l, r);
      if (!passes(m)) continue;
      any = true;
      out.push_back(std::move(m));
    }
    if (!any) out.push_back(std::move(l));
  }
  return out;
}

Rows Evaluator::eval_minus(const Pattern& p, const Scope& scope, Rows input) {
  Rows left = eval(*p.left, scope, std::move(input));
  if (left.empty()) return left;
  std::vector<const Row*> saved;
  saved.swap(outer_);
  Rows right = eval(*p.right, scope, Rows{empty_row(width())});
  outer_.swap(saved);
  Rows out;
  for (Row& l : left) {
    bool removed = false;
    for (const Row& r : right) {
      bool shared = false;
      for (std::size_t i = 0; i < l.size() && !shared; ++i) shared = l[i] && r[i];
      if (shared && compatible(l, r)) {
        removed = true;
        break;
      }
    }
    if (!removed) out.push_back(std::move(l));
  }
  return out;
}

Rows Evaluator::eval_graph(const Pattern& p, const Scope& scope) {
  Rows unit{empty_row(width())};
  if (!p.name.is_var()) {
    const Graph* g = scope.dataset->find(p.name.term);
    if (g == nullptr) return {};
    return eval(*p.left, Scope{scope.dataset, g}, unit);
  }
  auto v = static_cast<std::size_t>(p.name.var);
  Rows out;
  for (const rdf::NamedGraph& ng : scope.dataset->named) {
    for (Row& r : eval(*p.left, Scope{scope.dataset, ng.graph.get()}, unit)) {
      if (r[v] && !same(r[v], &ng.name)) continue;
      r[v] = &ng.name;
      out.push_back(std::move(r));
    }
  }
  return out;
}

Rows Evaluator::eval_values(const Pattern& p) {
  Rows out;
  for (const auto& values : p.values_rows) {
    Row r = empty_row(width());
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i]) r[static_cast<std::size_t>(p.values_vars[i])] = &*values[i];
    out.push_back(std::move(r));
  }
  return out;
}

Rows Evaluator::eval_service(const Pattern& p, Rows input) {
  if (!p.name.is_var()) return join(input, eval_service_at(p, p.name.term));
  auto v = static_cast<std::size_t>(p.name.var);
  // Group incoming bindings by endpoint value, in first-seen order.
  std::vector<TermRef> endpoints;
  std::unordered_map<Term, std::vector<std::size_t>, rdf::TermHash> groups;
  Rows out;
  for (std::size_t i = 0; i < input.size(); ++i) {
    TermRef e = input[i][v];
    if (e == nullptr) {
      // A silent failure contributes the empty solution.
      if (p.silent) {
        out.push_back(input[i]);
        continue;
      }
      throw QueryError("SERVICE endpoint variable ?" + vars_->name(p.name.var) + " is unbound");
    }
    auto [it, fresh] = groups.try_emplace(*e);
    if (fresh) endpoints.push_back(e);
    it->second.push_back(i);
  }
  for (TermRef e : endpoints) {
    Rows subset;
    for (std::size_t i : groups[*e]) subset.push_back(input[i]);
    Rows inner = eval_service_at(p, *e);
    for (Row& r : join(subset, inner)) out.push_back(std::move(r));
  }
  return out;
}

Rows Evaluator::eval_service_at(const Pattern& p, const Term& endpoint) {
  Rows unit{empty_row(width())};
  try {
    if (!endpoint.is_iri()) throw QueryError("SERVICE endpoint is not an IRI: " + endpoint.to_ntriples());
    Rows rows;
    if (options_.extension && options_.extension->handles(endpoint)) {
      auto ds = options_.extension->dataset(endpoint);
      keep_alive_.push_back(ds);
      std::vector<const Row*> saved;
      saved.swap(outer_);
      try {
        rows = eval(*p.left, Scope{ds.get(), ds->default_graph.get()}, unit);
      } catch (...) {
        outer_.swap(saved);
        throw;
      }
      outer_.swap(saved);
    } else {
      if (!options_.allow_federation)
        throw QueryError("federated SERVICE is disabled: <" + endpoint.value + ">");
      if (!options_.remote) throw QueryError("no remote SERVICE handler for <" + endpoint.value + ">");
      SolutionTable table = options_.remote(endpoint.value, remote_service_query(query_, p));
      std::vector<std::optional<int>> cols;
      for (const std::string& name : table.variables) cols.push_back(vars_->find(name));
      for (const auto& src : table.rows) {
        Row r = empty_row(width());
        for (std::size_t c = 0; c < src.size() && c < cols.size(); ++c)
          if (cols[c] && src[c]) r[static_cast<std::size_t>(*cols[c])] = arena_.intern(*src[c]);
        rows.push_back(std::move(r));
      }
    }
    // Blank nodes are scoped to this one SERVICE evaluation.
    std::string prefix = "s" + std::to_string(service_counter_++) + "_";
    std::unordered_map<TermRef, TermRef> relabel;
    for (Row& r : rows)
      for (TermRef& t : r) {
        if (!t || !t->is_blank()) continue;
        auto [it, fresh] = relabel.try_emplace(t, nullptr);
        if (fresh) it->second = arena_.intern(Term::blank(prefix + t->value));
        t = it->second;
      }
    return rows;
  } catch (const Error&) {
    if (p.silent) return unit;
    throw;
  }
}

Rows Evaluator::group(const Query& q, const Scope& scope, Rows rows) {
  std::vector<std::vector<std::size_t>> members;
  std::vector<Row> keys;
  if (q.group_by.empty()) {
    members.emplace_back();
    for (std::size_t i = 0; i < rows.size(); ++i) members[0].push_back(i);
    keys.push_back({});
  } else {
    std::unordered_map<std::size_t, std::vector<std::size_t>> index;
    std::vector<std::size_t> cols(q.group_by.size());
    for (std::size_t k = 0; k < cols.size(); ++k) cols[k] = k;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Row key;
      for (const GroupKey& gk : q.group_by) {
        auto v = eval_expr(*gk.expr, rows[i], scope);
        key.push_back(v ? *v : nullptr);
      }
      std::size_t h = hash_cells(key, cols);
      std::size_t found = members.size();
      for (std::size_t g : index[h])
        if (rows_equal(keys[g], key)) {
          found = g;
          break;
        }
      if (found == members.size()) {
        index[h].push_back(found);
        members.emplace_back();
        keys.push_back(std::move(key));
      }
      members[found].push_back(i);
    }
  }
  Rows out;
  for (std::size_t g = 0; g < members.size(); ++g) {
    Rows part;
    part.reserve(members[g].size());
    for (std::size_t i : members[g]) part.push_back(rows[i]);
    Row r = empty_row(width());
    for (std::size_t k = 0; k < q.group_by.size(); ++k)
      r[static_cast<std::size_t>(q.group_by[k].var)] = keys[g][k];
    for (const Aggregate& a : q.aggregates) {
      auto v = aggregate_value(a, part, scope);
      r[static_cast<std::size_t>(a.result_var)] = v ? *v : nullptr;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::optional<TermRef> Evaluator::aggregate_value(const Aggregate& a, const Rows& rows, const Scope& scope) {
  using K = Aggregate::Kind;
  if (!a.arg) {
    std::size_t n = rows.size();
    if (a.distinct) {
      Rows uniq;
      for (const Row& r : rows)
        if (std::none_of(uniq.begin(), uniq.end(), [&](const Row& u) { return rows_equal(u, r); }))
          uniq.push_back(r);
      n = uniq.size();
    }
    return arena_.intern(Term::integer(static_cast<long long>(n)));
  }
  std::vector<TermRef> vals;
  bool error = false;
  for (const Row& r : rows) {
    auto v = eval_expr(*a.arg, r, scope);
    if (!v) {
      error = true;
      continue;
    }
    vals.push_back(*v);
  }
  if (a.distinct) {
    std::vector<TermRef> uniq;
    std::unordered_set<Term, rdf::TermHash> seen;
    for (TermRef v : vals)
      if (seen.insert(*v).second) uniq.push_back(v);
    vals.swap(uniq);
  }
  switch (a.kind) {
    case K::Count: return arena_.intern(Term::integer(static_cast<long long>(vals.size())));
    case K::Sum:
    case K::Avg: {
      if (error) return std::nullopt;
      Numeric acc;
      for (TermRef v : vals) {
        auto n = to_numeric(*v);
        if (!n) return std::nullopt;
        auto s = arithmetic(ArithOp::Add, acc, *n);
        if (!s) return std::nullopt;
        acc = *s;
      }
      if (a.kind == K::Avg && !vals.empty()) {
        Numeric count;
        count.i = static_cast<long long>(vals.size());
        auto d = arithmetic(ArithOp::Div, acc, count);
        if (!d) return std::nullopt;
        acc = *d;
      }
      return arena_.intern(numeric_term(acc));
    }
    case K::Min:
    case K::Max: {
      if (vals.empty()) return std::nullopt;
      TermRef best = vals[0];
      for (TermRef v : vals) {
        int c = order_compare(v, best);
        if ((a.kind == K::Min && c < 0) || (a.kind == K::Max && c > 0)) best = v;
      }
      return best;
    }
    case K::Sample:
      if (vals.empty()) return std::nullopt;
      return vals[0];
    case K::GroupConcat: {
      std::string s;
      for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) s += a.separator;
        s += vals[i]->value;
      }
      return arena_.intern(Term::literal(std::move(s)));
    }
  }
  return std::nullopt;
}

Rows Evaluator::solve(const Query& q, const Scope& scope) {
  Rows rows{empty_row(width())};
  if (q.where) rows = eval(*q.where, scope, std::move(rows));
  if (q.values) rows = join(rows, eval_values(*q.values));
  return finish(q, scope, std::move(rows));
}

Rows Evaluator::finish(const Query& q, const Scope& scope, Rows rows) {
  if (q.grouped) {
    rows = group(q, scope, std::move(rows));
    Rows kept;
    for (Row& r : rows) {
      bool ok = true;
      for (const ExprPtr& e : q.having) {
        auto b = eval_bool(*e, r, scope);
        if (!b || !*b) {
          ok = false;
          break;
        }
      }
      if (ok) kept.push_back(std::move(r));
    }
    rows = std::move(kept);
  }
  for (const ProjectionItem& item : q.projection) {
    if (!item.expr) continue;
    auto v = static_cast<std::size_t>(item.var);
    for (Row& r : rows) {
      auto value = eval_expr(*item.expr, r, scope);
      if (value && !r[v]) r[v] = *value;
    }
  }
  if (!q.order_by.empty()) {
    std::vector<std::vector<TermRef>> keys(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (const OrderCondition& oc : q.order_by) {
        auto v = eval_expr(*oc.expr, rows[i], scope);
        keys[i].push_back(v ? *v : nullptr);
      }
    std::vector<std::size_t> idx(rows.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      for (std::size_t k = 0; k < q.order_by.size(); ++k) {
        int c = order_compare(keys[x][k], keys[y][k]);
        if (c != 0) return q.order_by[k].descending ? c > 0 : c < 0;
      }
      return false;
    });
    Rows sorted;
    sorted.reserve(rows.size());
    for (std::size_t i : idx) sorted.push_back(std::move(rows[i]));
    rows = std::move(sorted);
  }
  if (q.form == Query::Form::Select) {
    std::vector<int> keep = projected_vars(q);
    for (Row& r : rows) {
      Row n = empty_row(width());
      for (int v : keep) n[static_cast<std::size_t>(v)] = r[static_cast<std::size_t>(v)];
      r = std::move(n);
    }
    if (q.distinct || q.reduced) {
      std::unordered_map<std::size_t, std::vector<std::size_t>> seen;
      std::vector<std::size_t> cols = all_columns(width());
      Rows uniq;
      for (Row& r : rows) {
        auto& bucket = seen[hash_cells(r, cols)];
        if (std::any_of(bucket.begin(), bucket.end(), [&](std::size_t i) { return rows_equal(uniq[i], r); }))
          continue;
        bucket.push_back(uniq.size());
        uniq.push_back(std::move(r));
      }
      rows = std::move(uniq);
    }
  }
  if (q.offset > 0 || q.limit) {
    std::size_t from = std::min(q.offset, rows.size());
    std::size_t to = q.limit ? std::min(rows.size(), from + *q.limit) : rows.size();
    rows = Rows(std::make_move_iterator(rows.begin() + static_cast<std::ptrdiff_t>(from)),
                std::make_move_iterator(rows.begin() + static_cast<std::ptrdiff_t>(to)));
  }
  return rows;
}

QueryResult Evaluator::run(const rdf::Dataset& dataset) {
  const rdf::Dataset* ds = &dataset;
  rdf::Dataset loaded;
  if (!query_.from.empty() || !query_.from_named.empty()) {
    if (!options_.loader) throw QueryError("FROM and FROM NAMED need a document loader");
    auto merged = std::make_shared<Graph>();
    for (std::size_t i = 0; i < query_.from.size(); ++i) {
      Graph g = options_.loader(query_.from[i]);
      std::string prefix = "f" + std::to_string(i) + "_";
      for (rdf::Triple t : g.triples()) {
        if (t.subject.is_blank()) t.subject.value = prefix + t.subject.value;
        if (t.object.is_blank()) t.object.value = prefix + t.object.value;
        merged->add(std::move(t));
      }
    }
    loaded.default_graph = merged;
    for (const std::string& iri : query_.from_named)
      loaded.named.push_back({Term::iri(iri), std::make_shared<Graph>(options_.loader(iri))});
    ds = &loaded;
  }
  Scope scope{ds, ds->default_graph.get()};

  switch (query_.form) {
    case Query::Form::Select: {
      Rows rows = solve(query_, scope);
      SolutionTable table;
      std::vector<int> cols = projected_vars(query_);
      for (int v : cols) table.variables.push_back(vars_->name(v));
      for (const Row& r : rows) {
        std::vector<std::optional<Term>> out;
        for (int v : cols) {
          TermRef t = r[static_cast<std::size_t>(v)];
          out.push_back(t ? std::optional<Term>(*t) : std::nullopt);
        }
        table.rows.push_back(std::move(out));
      }
      return table;
    }
    case Query::Form::Ask: return !solve(query_, scope).empty();
    case Query::Form::Construct: {
      Rows rows = solve(query_, scope);
      Graph g;
      std::size_t counter = 0;
      for (const Row& r : rows) {
        std::unordered_map<std::string, Term> blanks;
        auto inst = [&](const VarOrTerm& vt) -> std::optional<Term> {
          if (vt.is_var()) {
            TermRef t = r[static_cast<std::size_t>(vt.var)];
            if (!t) return std::nullopt;
            return *t;
          }
          if (vt.term.is_blank()) {
            auto [it, fresh] = blanks.try_emplace(vt.term.value);
            if (fresh) it->second = Term::blank("c" + std::to_string(counter++));
            return it->second;
          }
          return vt.term;
        };
        for (const TriplePattern& tp : query_.construct_template) {
          auto s = inst(tp.s);
          auto p = inst(tp.p);
          auto o = inst(tp.o);
          if (!s || !p || !o || s->is_literal() || !p->is_iri()) continue;
          g.add(std::move(*s), std::move(*p), std::move(*o));
        }
      }
      return g;
    }
    case Query::Form::Describe: {
      Rows rows = query_.where ? solve(query_, scope) : Rows{empty_row(width())};
      std::vector<Term> resources;
      for (const VarOrTerm& vt : query_.describe_targets) {
        if (!vt.is_var()) {
          resources.push_back(vt.term);
          continue;
        }
        for (const Row& r : rows) {
          TermRef t = r[static_cast<std::size_t>(vt.var)];
          if (t && t->is_resource()) resources.push_back(*t);
        }
      }
      Graph out;
      const Graph& g = *ds->default_graph;
      std::unordered_set<TermId> done;
      std::vector<TermId> todo;
      for (const Term& t : resources)
        if (auto id = g.lookup(t)) todo.push_back(*id);
      while (!todo.empty()) {
        TermId id = todo.back();
        todo.pop_back();
        if (!done.insert(id).second) continue;
        g.for_each_match(id, kNoTerm, kNoTerm, [&](const rdf::IdTriple& t) {
          out.add(g.term(t.s), g.term(t.p), g.term(t.o));
          if (g.term(t.o).is_blank()) todo.push_back(t.o);
          return true;
        });
      }
      return out;
    }
  }
  return false;
}

}  // namespace detail

QueryResult execute(const Query& query, const rdf::Dataset& dataset, const EngineOptions& options) {
  detail::Evaluator ev(query, options);
  return ev.run(dataset);
}

QueryResult execute(std::string_view query_text, const rdf::Dataset& dataset, const EngineOptions& options) {
  auto q = parse_query(query_text);
  return execute(*q, dataset, options);
}

std::string remote_service_query(const Query& query, const Pattern& service) {
  std::string text;
  if (!query.base.empty()) text += "BASE <" + query.base + ">\n";
  for (const auto& [prefix, iri] : query.prefixes) text += "PREFIX " + prefix + ": <" + iri + ">\n";
  text += "SELECT * WHERE " + service.service_text;
  return text;
}

SolutionTable evaluate_service(const Query& query, const Pattern& service, const SolutionTable& incoming,
                               const EngineOptions& options) {
  detail::Evaluator ev(query, options);
  std::size_t width = ev.width();
  detail::Rows input;
  std::vector<std::optional<int>> cols;
  for (const std::string& name : incoming.variables) cols.push_back(ev.vars().find(name));
  for (const auto& src : incoming.rows) {
    detail::Row r = detail::empty_row(width);
    for (std::size_t c = 0; c < src.size() && c < cols.size(); ++c)
      if (cols[c] && src[c]) r[static_cast<std::size_t>(*cols[c])] = ev.arena().intern(*src[c]);
    input.push_back(std::move(r));
  }
  detail::Rows rows = ev.eval_service(service, std::move(input));

  std::vector<int> out_vars;
  for (const auto& c : cols)
    if (c && std::find(out_vars.begin(), out_vars.end(), *c) == out_vars.end()) out_vars.push_back(*c);
  for (int v : in_scope_vars(service, ev.vars()))
    if (std::find(out_vars.begin(), out_vars.end(), v) == out_vars.end()) out_vars.push_back(v);
  SolutionTable table;
  for (int v : out_vars) table.variables.push_back(ev.vars().name(v));
  for (const detail::Row& r : rows) {
    std::vector<std::optional<rdf::Term>> out;
    for (int v : out_vars) {
      const rdf::Term* t = r[static_cast<std::size_t>(v)];
      out.push_back(t ? std::optional<rdf::Term>(*t) : std::nullopt);
    }
    table.rows.push_back(std::move(out));
  }
  return table;
}

}  // namespace facadex::sparql
