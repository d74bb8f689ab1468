#pragma once

// Conditional-independence side conditions, decided by d-separation on the
// event DAG. Logical and probabilistic links are both plain directed edges.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "confgraph/graph.hpp"

namespace confgraph {

using EventSet = std::vector<EventId>;  // sorted, unique

struct SeparationQuery {
  EventSet x;
  EventSet y;
  EventSet z;  // may be empty
};

namespace detail {

inline EventSet normalized(EventSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool intersects(const EventSet& a, const EventSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

}  // namespace detail

inline void check_query(const InferenceGraph& g, const SeparationQuery& q) {
  if (q.x.empty() || q.y.empty()) throw std::invalid_argument("separation query needs nonempty x and y");
  for (const EventSet* s : {&q.x, &q.y, &q.z})
    for (EventId e : *s)
      if (e >= g.event_count()) throw std::invalid_argument("separation query names an unknown event");
  auto x = detail::normalized(q.x), y = detail::normalized(q.y), z = detail::normalized(q.z);
  if (detail::intersects(x, y) || detail::intersects(x, z) || detail::intersects(y, z))
    throw std::invalid_argument("separation query sets must be pairwise disjoint");
}

/// Events reachable from `x` by an active trail given `z` (Bayes-ball).
inline std::vector<char> active_reachable(const InferenceGraph& g, std::span<const EventId> x,
                                          std::span<const EventId> z) {
  const std::size_t n = g.event_count();
  std::vector<char> observed(n, 0), observed_or_ancestor(n, 0);
  for (EventId e : z) observed[e] = 1;

  // Ancestors of the conditioning set (a collider is opened by an observed
  // descendant).
  std::vector<EventId> stack(z.begin(), z.end());
  while (!stack.empty()) {
    EventId v = stack.back();
    stack.pop_back();
    if (observed_or_ancestor[v]) continue;
    observed_or_ancestor[v] = 1;
    for (EventId p : g.parents(v)) stack.push_back(p);
  }

  enum Dir : std::uint8_t { Up = 0, Down = 1 };  // Up: arrived from a child
  std::vector<std::uint8_t> visited(n * 2, 0);
  std::vector<char> reachable(n, 0);
  std::vector<std::pair<EventId, Dir>> work;
  for (EventId e : x) work.emplace_back(e, Up);

  while (!work.empty()) {
    auto [v, dir] = work.back();
    work.pop_back();
    if (visited[v * 2 + dir]) continue;
    visited[v * 2 + dir] = 1;
    if (!observed[v]) reachable[v] = 1;
    if (dir == Up && !observed[v]) {
      for (EventId p : g.parents(v)) work.emplace_back(p, Up);
      for (EventId c : g.children(v)) work.emplace_back(c, Down);
    } else if (dir == Down) {
      if (!observed[v])
        for (EventId c : g.children(v)) work.emplace_back(c, Down);
      if (observed_or_ancestor[v])
        for (EventId p : g.parents(v)) work.emplace_back(p, Up);
    }
  }
  return reachable;
}

inline bool d_separated(const InferenceGraph& g, const SeparationQuery& q) {
  check_query(g, q);
  auto reach = active_reachable(g, q.x, q.z);
  return std::none_of(q.y.begin(), q.y.end(), [&](EventId e) { return reach[e] != 0; });
}

inline bool unconditionally_independent(const InferenceGraph& g, EventId a, EventId b) {
  if (a == b) throw std::invalid_argument("independence of an event with itself");
  return d_separated(g, SeparationQuery{{a}, {b}, {}});
}

/// How literal-level conditioning is lifted to event-level separation.
enum class PivotPolicy {
  /// Conditioning literals must pin their events to single outcomes (after
  /// propagating logical links); otherwise the answer is false.
  Exact,
  /// Condition on the events of the given literals whatever their outcome
  /// sets. Unsound for negated outcomes of multi-outcome events.
  Lenient,
};

/// Is `a` independent of `b` given the conjunction `given`?
///
/// With PivotPolicy::Exact the given literals, plus everything they entail
/// through logical links, fix an assignment of some set of events; the check
/// succeeds when a's and b's events are d-separated given either the given
/// events alone or that whole determined set. Overlapping events give false.
inline bool ci_for_literals(const InferenceGraph& g, const Proposition& a, const Proposition& b,
                            std::span<const Literal> given, PivotPolicy policy = PivotPolicy::Exact) {
  if (a.empty() || b.empty() || a.shares_event(b)) return false;
  EventSet xs = a.events(), ys = b.events();
  EventSet zc;
  for (const auto& l : given) zc.push_back(l.event);
  zc = detail::normalized(zc);

  auto separated_given = [&](const EventSet& z) {
    if (detail::intersects(xs, z) || detail::intersects(ys, z)) return false;
    return d_separated(g, SeparationQuery{xs, ys, z});
  };

  if (policy == PivotPolicy::Lenient) return separated_given(zc);

  auto domain = g.propagate(given);
  if (!domain) return false;
  for (EventId e : zc)
    if (std::popcount((*domain)[e]) != 1) return false;
  if (separated_given(zc)) return true;

  EventSet determined;
  for (EventId e = 0; e < g.event_count(); ++e)
    if (std::popcount((*domain)[e]) == 1) determined.push_back(e);
  return determined != zc && separated_given(determined);
}

inline bool ci_for_literals(const InferenceGraph& g, const Proposition& a, const Proposition& b,
                            const Proposition& given, PivotPolicy policy = PivotPolicy::Exact) {
  return ci_for_literals(g, a, b, given.literals(), policy);
}

}  // namespace confgraph
