#pragma once

// Shared test helpers: graph construction from text, random graph
// generators, and reference implementations that share no code with the
// library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "confgraph/bundled_examples.hpp"
#include "confgraph/confgraph.hpp"

namespace testing_support {

using namespace confgraph;

inline InferenceGraph graph_from(std::string_view text) {
  auto r = parse_graph(text);
  if (!r.ok()) {
    std::string msg = "test graph failed to parse:";
    for (const auto& d : r.diagnostics) msg += "\n  " + format_diagnostic(d);
    throw std::runtime_error(msg);
  }
  return std::move(*r.graph);
}

inline std::string_view bundled(std::string_view name) {
  for (const auto& [file, body] : kBundledExamples)
    if (file == name) return body;
  throw std::runtime_error("no bundled example " + std::string(name));
}

inline InferenceGraph example(std::string_view name) { return graph_from(bundled(name)); }

inline Literal lit(const InferenceGraph& g, std::string_view name) {
  bool neg = !name.empty() && name.front() == '!';
  if (neg) name.remove_prefix(1);
  auto l = g.find_outcome(name);
  if (!l) throw std::runtime_error("unknown outcome " + std::string(name));
  return g.literal(l->event, l->outcome, neg);
}

/// "a & !b" style conjunction.
inline Proposition prop(const InferenceGraph& g, std::string_view text) {
  std::vector<Literal> lits;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t amp = text.find('&', start);
    std::string_view part = text.substr(start, amp == std::string_view::npos ? std::string_view::npos : amp - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    lits.push_back(lit(g, part));
    if (amp == std::string_view::npos) break;
    start = amp + 1;
  }
  auto p = Proposition::conjoin(lits);
  if (!p) throw std::runtime_error("conflicting conjunction " + std::string(text));
  return *p;
}

inline ConfStatement conf(const InferenceGraph& g, std::string_view subject, std::string_view evidence) {
  return {prop(g, subject), prop(g, evidence)};
}

// ---------------------------------------------------------------------------
// Random graphs

/// DAG over `n` binary events e0..e{n-1}; edges go from lower to higher
/// position in a random permutation, each present with probability `density`.
inline InferenceGraph random_dag(std::mt19937_64& rng, std::size_t n, double density) {
  InferenceGraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_binary_event("e" + std::to_string(i));
  std::vector<EventId> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<EventId>(i);
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution edge(density);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) g.add_link_unchecked(Literal{order[i], 0, false}, Literal{order[j], 0, false}, LinkKind::ProbPos);
  return g;
}

/// Valid graph mixing binary, open and closed multi-outcome events and all
/// four link kinds. Rejected links are skipped.
inline InferenceGraph random_valid_graph(std::mt19937_64& rng, std::size_t max_events = 7,
                                         std::size_t max_links = 9) {
  InferenceGraph g;
  std::uniform_int_distribution<std::size_t> n_events(1, max_events), n_links(0, max_links);
  std::uniform_int_distribution<int> shape(0, 9);
  std::size_t n = n_events(rng);
  int outcome_counter = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::string name = "v" + std::to_string(i);
    int s = shape(rng);
    if (s < 6) {
      g.add_binary_event(name);
    } else if (s < 7) {
      g.add_event(name, {"o" + std::to_string(outcome_counter++)});
    } else {
      std::size_t k = 2 + static_cast<std::size_t>(shape(rng) % 2);
      std::vector<std::string> outs;
      for (std::size_t j = 0; j < k; ++j) outs.push_back("o" + std::to_string(outcome_counter++));
      g.add_event(name, outs, s == 9);
    }
  }
  std::size_t m = n_links(rng);
  std::uniform_int_distribution<EventId> pick(0, static_cast<EventId>(n - 1));
  std::uniform_int_distribution<int> kind(0, 3), coin(0, 1);
  auto random_literal = [&](EventId e) {
    const auto& ev = g.event(e);
    std::uniform_int_distribution<OutcomeIndex> o(0, static_cast<OutcomeIndex>(ev.outcomes.size() - 1));
    return g.literal(e, o(rng), coin(rng) == 1);
  };
  for (std::size_t i = 0; i < m * 3 && g.links().size() < m; ++i) {
    EventId a = pick(rng), b = pick(rng);
    if (a == b) continue;
    try {
      g.add_link(random_literal(a), random_literal(b), static_cast<LinkKind>(kind(rng)));
    } catch (const GraphError&) {
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Reference d-separation: enumerate every simple undirected path.

class PathEnumerator {
 public:
  explicit PathEnumerator(const InferenceGraph& g) : g_(g), n_(g.event_count()), edge_(n_ * n_, 0) {
    for (const auto& l : g.links()) edge_[l.source.event * n_ + l.target.event] = 1;
  }

  bool separated(const std::vector<EventId>& x, const std::vector<EventId>& y, const std::vector<EventId>& z) const {
    std::vector<char> in_z(n_, 0), in_y(n_, 0), z_or_desc(n_, 0);
    for (EventId v : z) in_z[v] = 1;
    for (EventId v : y) in_y[v] = 1;
    for (EventId v = 0; v < n_; ++v)
      for (EventId w : z)
        if (v == w || descends(w, v)) z_or_desc[v] = 1;
    for (EventId start : x) {
      std::vector<EventId> path{start};
      std::vector<char> on(n_, 0);
      on[start] = 1;
      if (open_path_exists(path, on, in_z, in_y, z_or_desc)) return false;
    }
    return true;
  }

 private:
  bool adjacent(EventId a, EventId b) const { return edge_[a * n_ + b] || edge_[b * n_ + a]; }
  bool arrow(EventId a, EventId b) const { return edge_[a * n_ + b] != 0; }

  /// Is `d` a descendant of `a` (a directed path a -> ... -> d, length >= 1)?
  bool descends(EventId d, EventId a) const {
    std::vector<EventId> stack{a};
    std::vector<char> seen(n_, 0);
    while (!stack.empty()) {
      EventId v = stack.back();
      stack.pop_back();
      for (EventId w = 0; w < n_; ++w) {
        if (!arrow(v, w) || seen[w]) continue;
        if (w == d) return true;
        seen[w] = 1;
        stack.push_back(w);
      }
    }
    return false;
  }

  bool blocked_at(EventId prev, EventId mid, EventId next, const std::vector<char>& in_z,
                  const std::vector<char>& z_or_desc) const {
    bool collider = arrow(prev, mid) && arrow(next, mid);
    if (collider) return !z_or_desc[mid];
    return in_z[mid] != 0;
  }

  bool open_path_exists(std::vector<EventId>& path, std::vector<char>& on, const std::vector<char>& in_z,
                        const std::vector<char>& in_y, const std::vector<char>& z_or_desc) const {
    EventId last = path.back();
    for (EventId next = 0; next < n_; ++next) {
      if (on[next] || !adjacent(last, next)) continue;
      if (path.size() >= 2 && blocked_at(path[path.size() - 2], last, next, in_z, z_or_desc)) continue;
      if (in_y[next]) return true;
      path.push_back(next);
      on[next] = 1;
      bool found = open_path_exists(path, on, in_z, in_y, z_or_desc);
      on[next] = 0;
      path.pop_back();
      if (found) return true;
    }
    return false;
  }

  const InferenceGraph& g_;
  EventId n_;
  std::vector<char> edge_;
};

// ---------------------------------------------------------------------------
// Reference numerics: evaluate through decoded assignments rather than the
// library's index matchers.

inline double ref_probability(const InferenceGraph& g, const JointDistribution& d, const Proposition& p) {
  double s = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    Assignment a = d.decode(i);
    bool ok = true;
    for (const auto& l : p.literals()) {
      bool match = a[l.event] == l.outcome;
      if (match == l.negated) ok = false;
    }
    if (ok) s += d.table()[i];
  }
  (void)g;
  return s;
}

inline double ref_conditional(const InferenceGraph& g, const JointDistribution& d, const Proposition& s,
                              const Proposition& e) {
  auto se = Proposition::conjoin(s, e);
  double pe = ref_probability(g, d, e);
  return se ? ref_probability(g, d, *se) / pe : 0.0;
}

/// Every link constraint and marginal bound, recomputed from scratch.
inline bool ref_consistent(const InferenceGraph& g, const JointDistribution& d, double margin) {
  if (std::abs(d.total() - 1.0) > 1e-12) return false;
  for (const auto& ev : g.events())
    for (OutcomeIndex o = 0; o < ev.arity(); ++o)
      if (ref_probability(g, d, Proposition(Literal{ev.id, o, false})) < margin) return false;
  for (const auto& l : g.links()) {
    Literal t = l.target;
    if (is_negative(l.kind)) t.negated = !t.negated;
    Proposition src(l.source), tgt(t);
    double cond = ref_conditional(g, d, tgt, src), prior = ref_probability(g, d, tgt);
    if (is_logical(l.kind)) {
      if (cond < 1.0 - 1e-12 || prior >= 1.0 - margin) return false;
    } else if (cond <= prior + margin) {
      return false;
    }
  }
  return true;
}

}  // namespace testing_support
