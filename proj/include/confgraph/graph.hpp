#pragma once

// Inference-graph data model: events with mutually exclusive outcomes,
// literals over those outcomes, and the four link kinds. Structural checks
// (acyclicity, duplicate and contradictory links) run on every checked
// mutation; validate() re-runs them on graphs built without checks.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace confgraph {

using EventId = std::uint32_t;
using OutcomeIndex = std::uint32_t;
using OutcomeMask = std::uint64_t;

inline constexpr std::size_t kMaxOutcomes = 64;

enum class LinkKind : std::uint8_t { ProbPos, LogicPos, ProbNeg, LogicNeg };

constexpr bool is_logical(LinkKind k) noexcept {
  return k == LinkKind::LogicPos || k == LinkKind::LogicNeg;
}

constexpr bool is_negative(LinkKind k) noexcept {
  return k == LinkKind::ProbNeg || k == LinkKind::LogicNeg;
}

constexpr std::string_view arrow(LinkKind k) noexcept {
  switch (k) {
    case LinkKind::ProbPos: return "->";
    case LinkKind::LogicPos: return "=>";
    case LinkKind::ProbNeg: return "-/>";
    case LinkKind::LogicNeg: return "=/>";
  }
  return "?";
}

constexpr std::string_view kind_name(LinkKind k) noexcept {
  switch (k) {
    case LinkKind::ProbPos: return "prob-pos";
    case LinkKind::LogicPos: return "logic-pos";
    case LinkKind::ProbNeg: return "prob-neg";
    case LinkKind::LogicNeg: return "logic-neg";
  }
  return "?";
}

enum class GraphErrc {
  DuplicateEvent,
  DuplicateOutcome,
  TooManyOutcomes,
  UnknownEvent,
  InvalidLiteral,
  SelfLink,
  CycleIntroduced,
  DuplicateLink,
  ContradictoryLogicalLinks,
  ContradictoryLinks,
};

class GraphError : public std::runtime_error {
 public:
  GraphError(GraphErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  GraphErrc code() const noexcept { return code_; }

 private:
  GraphErrc code_;
};

/// Outcome appended by the model rather than named by the user.
enum class ExtraOutcome : std::uint8_t {
  None,        // closed multi-outcome event
  Complement,  // binary event declared with a single outcome name
  Other,       // open multi-outcome event: outcomes need not be exhaustive
};

struct EventVariable {
  EventId id = 0;
  std::string name;
  std::vector<std::string> outcomes;  // named outcomes, in declaration order
  bool closed = true;
  ExtraOutcome extra = ExtraOutcome::None;

  std::size_t arity() const noexcept {
    return outcomes.size() + (extra == ExtraOutcome::None ? 0 : 1);
  }
  bool binary() const noexcept { return arity() == 2; }
  bool synthetic(OutcomeIndex o) const noexcept { return o >= outcomes.size(); }
  OutcomeMask full_mask() const noexcept {
    return arity() == 64 ? ~OutcomeMask{0} : (OutcomeMask{1} << arity()) - 1;
  }
};

/// "Outcome `outcome` of `event` occurred" or, when negated, "did not occur".
/// Literals built through InferenceGraph::literal() are canonical: on
/// two-outcome events the negated form is replaced by the other outcome.
struct Literal {
  EventId event = 0;
  OutcomeIndex outcome = 0;
  bool negated = false;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Conjunction of literals over distinct events, kept sorted so that
/// structurally equal conjunctions compare (and hash) equal.
class Proposition {
 public:
  Proposition() = default;
  explicit Proposition(Literal l) : lits_{l} {}

  /// Nullopt when two literals disagree on the same event.
  static std::optional<Proposition> conjoin(std::span<const Literal> lits) {
    std::vector<Literal> v(lits.begin(), lits.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i].event == v[i - 1].event) return std::nullopt;
    Proposition p;
    p.lits_ = std::move(v);
    return p;
  }

  static std::optional<Proposition> conjoin(const Proposition& a, const Proposition& b) {
    std::vector<Literal> v(a.lits_);
    v.insert(v.end(), b.lits_.begin(), b.lits_.end());
    return conjoin(v);
  }

  std::span<const Literal> literals() const noexcept { return lits_; }
  std::size_t arity() const noexcept { return lits_.size(); }
  bool empty() const noexcept { return lits_.empty(); }
  bool single() const noexcept { return lits_.size() == 1; }
  const Literal& front() const { return lits_.front(); }

  bool mentions(EventId e) const noexcept {
    return std::any_of(lits_.begin(), lits_.end(),
                       [e](const Literal& l) { return l.event == e; });
  }
  bool shares_event(const Proposition& o) const noexcept {
    return std::any_of(lits_.begin(), lits_.end(),
                       [&](const Literal& l) { return o.mentions(l.event); });
  }
  std::vector<EventId> events() const {
    std::vector<EventId> out;
    out.reserve(lits_.size());
    for (const auto& l : lits_) out.push_back(l.event);
    return out;  // sorted: literals are sorted by event first
  }

  friend auto operator<=>(const Proposition&, const Proposition&) = default;
  friend bool operator==(const Proposition&, const Proposition&) = default;

 private:
  std::vector<Literal> lits_;
};

struct Link {
  Literal source;
  Literal target;  // as written; negative kinds confirm its negation
  LinkKind kind = LinkKind::ProbPos;

  friend bool operator==(const Link&, const Link&) = default;
};

/// Per-event set of still-possible outcomes after unit propagation.
using Domain = std::vector<OutcomeMask>;

class InferenceGraph {
 public:
  /// A single outcome name declares a binary event (the outcome plus its
  /// complement). Several names declare a multi-outcome event; unless
  /// `closed`, a synthetic "other" outcome makes the list non-exhaustive.
  /// Outcome names share one namespace across the whole graph.
  const EventVariable& add_event(std::string name, std::vector<std::string> outcomes,
                                 bool closed = false) {
    if (find_event(name)) throw GraphError(GraphErrc::DuplicateEvent, "duplicate event '" + name + "'");
    if (outcomes.empty())
      throw GraphError(GraphErrc::DuplicateOutcome, "event '" + name + "' declares no outcomes");
    std::set<std::string_view> seen;
    for (const auto& o : outcomes) {
      if (!seen.insert(o).second)
        throw GraphError(GraphErrc::DuplicateOutcome,
                         "outcome '" + o + "' listed twice in event '" + name + "'");
      if (outcome_index_.count(o))
        throw GraphError(GraphErrc::DuplicateOutcome,
                         "outcome name '" + o + "' is already bound to another event");
    }
    EventVariable ev;
    ev.id = static_cast<EventId>(events_.size());
    ev.name = std::move(name);
    ev.outcomes = std::move(outcomes);
    ev.closed = closed || ev.outcomes.size() == 1;
    if (ev.outcomes.size() == 1)
      ev.extra = ExtraOutcome::Complement;
    else if (!closed)
      ev.extra = ExtraOutcome::Other;
    if (ev.arity() > kMaxOutcomes)
      throw GraphError(GraphErrc::TooManyOutcomes, "event '" + ev.name + "' has too many outcomes");
    for (OutcomeIndex i = 0; i < ev.outcomes.size(); ++i)
      outcome_index_.emplace(ev.outcomes[i], Literal{ev.id, i, false});
    event_index_.emplace(ev.name, ev.id);
    events_.push_back(std::move(ev));
    parents_.emplace_back();
    children_.emplace_back();
    return events_.back();
  }

  const EventVariable& add_binary_event(const std::string& name) { return add_event(name, {name}, true); }

  /// Checked insertion: rejects self links, cycles, duplicates and logical
  /// links that would make some outcome impossible.
  void add_link(Literal source, Literal target, LinkKind kind) {
    source = canonical(source);
    target = canonical(target);
    check_literal(source);
    check_literal(target);
    if (source.event == target.event)
      throw GraphError(GraphErrc::SelfLink, "link from '" + event(source.event).name + "' to itself");
    if (event(source.event).synthetic(source.outcome) && !event(source.event).binary())
      throw GraphError(GraphErrc::InvalidLiteral, "links cannot name a synthetic outcome");
    if (event(target.event).synthetic(target.outcome) && !event(target.event).binary())
      throw GraphError(GraphErrc::InvalidLiteral, "links cannot name a synthetic outcome");
    for (const auto& l : links_) {
      if (!(l.source == source && same_base(l.target, target))) continue;
      if (is_logical(l.kind) && is_logical(kind) &&
          (mask(effective_target(l)) & mask(effective_target(Link{source, target, kind}))) == 0)
        throw GraphError(GraphErrc::ContradictoryLogicalLinks,
                         "logical links " + describe(l) + " and " + ascii(source) + " " + std::string(arrow(kind)) +
                             " " + ascii(target) + " make '" + ascii(source) + "' impossible");
      throw GraphError(GraphErrc::DuplicateLink, "duplicate link " + ascii(source) + " " +
                                                       std::string(arrow(l.kind)) + " " + ascii(l.target));
    }
    if (auto clash = partition_conflict(Link{source, target, kind}, links_))
      throw GraphError(GraphErrc::ContradictoryLinks, *clash);
    if (reaches(target.event, source.event))
      throw GraphError(GraphErrc::CycleIntroduced, "link " + ascii(source) + " " +
                                                       std::string(arrow(kind)) + " " + ascii(target) +
                                                       " introduces a cycle");
    add_link_unchecked(source, target, kind);
    if (is_logical(kind)) {
      if (auto bad = first_impossible_literal()) {
        links_.pop_back();
        rebuild_edges();
        throw GraphError(GraphErrc::ContradictoryLogicalLinks,
                         "logical links make '" + ascii(*bad) + "' impossible");
      }
    }
  }

  /// Only checks that both literals refer to registered events.
  void add_link_unchecked(Literal source, Literal target, LinkKind kind) {
    if (source.event >= events_.size() || target.event >= events_.size())
      throw GraphError(GraphErrc::UnknownEvent, "link references an unregistered event");
    links_.push_back(Link{canonical(source), canonical(target), kind});
    add_edge(source.event, target.event);
  }

  std::span<const EventVariable> events() const noexcept { return events_; }
  std::span<const Link> links() const noexcept { return links_; }
  std::size_t event_count() const noexcept { return events_.size(); }
  const EventVariable& event(EventId id) const { return events_.at(id); }

  std::optional<EventId> find_event(std::string_view name) const {
    auto it = event_index_.find(name);
    if (it == event_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Positive literal for a named outcome.
  std::optional<Literal> find_outcome(std::string_view name) const {
    auto it = outcome_index_.find(name);
    if (it == outcome_index_.end()) return std::nullopt;
    return it->second;
  }

  Literal literal(EventId e, OutcomeIndex o, bool negated = false) const {
    return canonical(Literal{e, o, negated});
  }

  Literal canonical(Literal l) const {
    if (l.event < events_.size() && l.negated && events_[l.event].binary() && l.outcome < 2)
      return Literal{l.event, 1 - l.outcome, false};
    return l;
  }

  Literal negate(Literal l) const {
    return canonical(Literal{l.event, l.outcome, !l.negated});
  }

  OutcomeMask mask(Literal l) const {
    const auto& ev = event(l.event);
    OutcomeMask bit = OutcomeMask{1} << l.outcome;
    return l.negated ? (ev.full_mask() & ~bit) : bit;
  }

  bool satisfied_by(Literal l, OutcomeIndex value) const {
    return (mask(l) >> value) & 1U;
  }

  /// True when the literal pins its event to a single outcome.
  bool exact(Literal l) const { return std::popcount(mask(l)) == 1; }

  std::span<const EventId> parents(EventId e) const { return parents_.at(e); }
  std::span<const EventId> children(EventId e) const { return children_.at(e); }

  /// Is there a directed path from `from` to `to` (including from == to)?
  bool reaches(EventId from, EventId to) const {
    std::vector<char> seen(events_.size(), 0);
    std::vector<EventId> stack{from};
    while (!stack.empty()) {
      EventId v = stack.back();
      stack.pop_back();
      if (v == to) return true;
      if (seen[v]) continue;
      seen[v] = 1;
      for (EventId c : children_[v]) stack.push_back(c);
    }
    return false;
  }

  /// Kahn order; events on a cycle are omitted.
  std::vector<EventId> topological_order() const {
    std::vector<std::size_t> indeg(events_.size());
    for (std::size_t v = 0; v < events_.size(); ++v) indeg[v] = parents_[v].size();
    std::vector<EventId> ready, order;
    for (EventId v = 0; v < events_.size(); ++v)
      if (indeg[v] == 0) ready.push_back(v);
    while (!ready.empty()) {
      EventId v = ready.front();
      ready.erase(ready.begin());
      order.push_back(v);
      for (EventId c : children_[v])
        if (--indeg[c] == 0) ready.push_back(c);
    }
    return order;
  }

  /// Every literal the engine reasons about: both outcomes of binary events,
  /// and each named outcome of a multi-outcome event with its negation.
  std::vector<Literal> universe() const {
    std::vector<Literal> out;
    for (const auto& ev : events_) {
      if (ev.binary()) {
        out.push_back(Literal{ev.id, 0, false});
        out.push_back(Literal{ev.id, 1, false});
        continue;
      }
      for (OutcomeIndex o = 0; o < ev.outcomes.size(); ++o) {
        out.push_back(Literal{ev.id, o, false});
        out.push_back(Literal{ev.id, o, true});
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Unit propagation of logical links (forward and contrapositive) from a
  /// set of assumed literals. Nullopt when the assumptions are contradictory.
  /// When `reasons` is given it receives, per event, the indices of the
  /// links that contributed to narrowing that event's outcomes.
  std::optional<Domain> propagate(std::span<const Literal> assumed,
                                  std::vector<std::set<std::size_t>>* reasons = nullptr) const {
    Domain d(events_.size());
    if (reasons) reasons->assign(events_.size(), {});
    for (const auto& ev : events_) d[ev.id] = ev.full_mask();
    for (const auto& l : assumed) {
      d.at(l.event) &= mask(l);
      if (d[l.event] == 0) return std::nullopt;
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t li = 0; li < links_.size(); ++li) {
        const Link& link = links_[li];
        if (!is_logical(link.kind)) continue;
        OutcomeMask smask = mask(link.source);
        OutcomeMask tmask = mask(effective_target(link));
        OutcomeMask& s = d[link.source.event];
        OutcomeMask& t = d[link.target.event];
        if ((s & ~smask) == 0 && (t & ~tmask) != 0) {
          t &= tmask;
          changed = true;
          if (reasons) merge_reason(*reasons, link.target.event, link.source.event, li);
        }
        if ((t & tmask) == 0 && (s & smask) != 0) {
          s &= ~smask;
          changed = true;
          if (reasons) merge_reason(*reasons, link.source.event, link.target.event, li);
        }
        if (s == 0 || t == 0) return std::nullopt;
      }
    }
    return d;
  }

  /// The literal a link confirms: its target, negated for the negative kinds.
  Literal effective_target(const Link& l) const {
    return is_negative(l.kind) ? negate(l.target) : l.target;
  }

  /// Names as written in graph files: "fly", "!fly".
  std::string ascii(Literal l) const { return render(l, "!", "other"); }

  /// Names as printed in proofs: "fly", "¬fly".
  std::string unicode(Literal l) const { return render(l, "¬", "other"); }

  std::string ascii(const Proposition& p) const { return join(p, " & ", false); }
  std::string unicode(const Proposition& p) const { return join(p, " ∧ ", true); }

  std::string describe(const Link& l) const {
    return ascii(l.source) + " " + std::string(arrow(l.kind)) + " " + ascii(l.target);
  }

  /// Literal whose outcome cannot occur under the logical links, if any.
  std::optional<Literal> first_impossible_literal() const {
    for (const auto& ev : events_) {
      for (OutcomeIndex o = 0; o < ev.arity(); ++o) {
        for (bool neg : {false, true}) {
          Literal l = literal(ev.id, o, neg);
          if (!propagate(std::span<const Literal>(&l, 1))) return l;
        }
      }
    }
    return std::nullopt;
  }

  /// Non-empty when `added` and some of `others` confirm a literal under
  /// every cell of a partition of an event, or confirm every cell of a
  /// partition under one source. No distribution satisfies such a set.
  std::optional<std::string> partition_conflict(const Link& added, std::span<const Link> others) const {
    for (bool by_source : {true, false}) {
      auto varying = [&](const Link& l) { return by_source ? l.source : effective_target(l); };
      auto fixed = [&](const Link& l) { return by_source ? effective_target(l) : l.source; };
      const Literal v0 = varying(added), f0 = fixed(added);
      std::vector<const Link*> pool;
      for (const auto& l : others) {
        Literal v = varying(l), f = fixed(l);
        if (v.event == v0.event && f.event == f0.event && mask(f) == mask(f0)) pool.push_back(&l);
      }
      std::vector<const Link*> chosen{&added};
      if (cover(pool, mask(v0), event(v0.event).full_mask(), varying, chosen)) {
        std::vector<std::string> parts;
        for (const Link* l : chosen) parts.push_back(describe(*l));
        std::sort(parts.begin(), parts.end());
        std::string msg = "links";
        for (std::size_t i = 0; i < parts.size(); ++i) msg += (i ? ", " : " ") + parts[i];
        return msg + (by_source ? " confirm '" + ascii(f0) + "' under every outcome of '"
                                : " confirm every outcome of '") +
               event(v0.event).name + "'" + (by_source ? "" : " under '" + ascii(f0) + "'");
      }
    }
    return std::nullopt;
  }

  /// Same source, and targets that name the same outcome up to negation.
  bool same_base(Literal a, Literal b) const {
    if (a.event != b.event) return false;
    if (event(a.event).binary()) return true;
    return a.outcome == b.outcome;
  }

 private:
  template <class Varying>
  bool cover(const std::vector<const Link*>& pool, OutcomeMask used, OutcomeMask full, const Varying& varying,
             std::vector<const Link*>& chosen) const {
    if (used == full) return true;
    OutcomeMask next = full & ~used & (~(full & ~used) + 1);
    for (const Link* l : pool) {
      OutcomeMask m = mask(varying(*l));
      if (!(m & next) || (m & used)) continue;
      chosen.push_back(l);
      if (cover(pool, used | m, full, varying, chosen)) return true;
      chosen.pop_back();
    }
    return false;
  }

  struct Less {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const { return a < b; }
  };

  void check_literal(Literal l) const {
    if (l.event >= events_.size())
      throw GraphError(GraphErrc::UnknownEvent, "literal references an unregistered event");
    if (l.outcome >= events_[l.event].arity())
      throw GraphError(GraphErrc::InvalidLiteral,
                       "literal references a missing outcome of '" + events_[l.event].name + "'");
  }

  static void merge_reason(std::vector<std::set<std::size_t>>& reasons, EventId narrowed,
                           EventId because, std::size_t link) {
    if (narrowed != because) {
      auto copy = reasons[because];
      reasons[narrowed].insert(copy.begin(), copy.end());
    }
    reasons[narrowed].insert(link);
  }

  void add_edge(EventId from, EventId to) {
    auto& p = parents_[to];
    if (std::find(p.begin(), p.end(), from) != p.end()) return;
    p.insert(std::lower_bound(p.begin(), p.end(), from), from);
    auto& c = children_[from];
    c.insert(std::lower_bound(c.begin(), c.end(), to), to);
  }

  void rebuild_edges() {
    for (auto& p : parents_) p.clear();
    for (auto& c : children_) c.clear();
    for (const auto& l : links_) add_edge(l.source.event, l.target.event);
  }

  std::string render(Literal l, std::string_view neg, std::string_view other) const {
    const auto& ev = event(l.event);
    std::string name;
    if (ev.synthetic(l.outcome)) {
      if (ev.extra == ExtraOutcome::Complement) return std::string(neg) + ev.outcomes.front();
      name = std::string(other) + "(" + ev.name + ")";
    } else {
      name = ev.outcomes[l.outcome];
    }
    return l.negated ? std::string(neg) + name : name;
  }

  std::string join(const Proposition& p, std::string_view sep, bool uni) const {
    std::string out;
    for (const auto& l : p.literals()) {
      if (!out.empty()) out += sep;
      out += uni ? unicode(l) : ascii(l);
    }
    return out;
  }

  std::vector<EventVariable> events_;
  std::vector<Link> links_;
  std::vector<std::vector<EventId>> parents_;
  std::vector<std::vector<EventId>> children_;
  std::map<std::string, EventId, Less> event_index_;
  std::map<std::string, Literal, Less> outcome_index_;
};

// ---------------------------------------------------------------------------
// Entailment

/// Does `a` entail `b` under the logical links (reflexive, transitive, with
/// contrapositives and outcome exclusivity)? Vacuously true for an
/// impossible antecedent.
inline bool entails(const InferenceGraph& g, const Proposition& a, const Proposition& b) {
  auto d = g.propagate(a.literals());
  if (!d) return true;
  for (const auto& l : b.literals())
    if (((*d)[l.event] & ~g.mask(l)) != 0) return false;
  return true;
}

inline bool entails(const InferenceGraph& g, Literal a, Literal b) {
  return entails(g, Proposition(a), Proposition(b));
}

/// A conjunction is consistent when propagating it yields no contradiction.
inline bool consistent(const InferenceGraph& g, const Proposition& p) {
  return g.propagate(p.literals()).has_value();
}

// ---------------------------------------------------------------------------
// Validation

enum class FindingKind { Cycle, SelfLink, UnknownReference, SyntheticOutcome, DuplicateLink, Contradiction };

constexpr std::string_view finding_name(FindingKind k) noexcept {
  switch (k) {
    case FindingKind::Cycle: return "cycle";
    case FindingKind::SelfLink: return "self-link";
    case FindingKind::UnknownReference: return "unknown-reference";
    case FindingKind::SyntheticOutcome: return "synthetic-outcome";
    case FindingKind::DuplicateLink: return "duplicate-link";
    case FindingKind::Contradiction: return "contradiction";
  }
  return "?";
}

struct Finding {
  FindingKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;
  bool ok() const noexcept { return findings.empty(); }
  bool has(FindingKind k) const {
    return std::any_of(findings.begin(), findings.end(), [k](const Finding& f) { return f.kind == k; });
  }
};

inline ValidationReport validate(const InferenceGraph& g) {
  ValidationReport report;
  auto add = [&](FindingKind k, std::string msg) { report.findings.push_back({k, std::move(msg)}); };

  bool references_ok = true;
  for (const auto& l : g.links()) {
    for (Literal lit : {l.source, l.target}) {
      if (lit.event >= g.event_count() || lit.outcome >= g.event(lit.event).arity()) {
        add(FindingKind::UnknownReference, "link references an unregistered event or outcome");
        references_ok = false;
      }
    }
  }
  if (!references_ok) return report;

  for (const auto& l : g.links()) {
    if (l.source.event == l.target.event) add(FindingKind::SelfLink, "self link " + g.describe(l));
    for (Literal lit : {l.source, l.target}) {
      const auto& ev = g.event(lit.event);
      if (ev.synthetic(lit.outcome) && !ev.binary())
        add(FindingKind::SyntheticOutcome, "link " + g.describe(l) + " names a synthetic outcome");
    }
  }

  auto links = g.links();
  for (std::size_t i = 0; i < links.size(); ++i)
    for (std::size_t j = i + 1; j < links.size(); ++j)
      if (links[i].source == links[j].source && g.same_base(links[i].target, links[j].target))
        add(FindingKind::DuplicateLink,
            "duplicate links " + g.describe(links[i]) + " and " + g.describe(links[j]));

  auto order = g.topological_order();
  if (order.size() != g.event_count()) {
    std::vector<char> placed(g.event_count(), 0);
    for (EventId v : order) placed[v] = 1;
    std::string members;
    for (const auto& ev : g.events()) {
      if (placed[ev.id]) continue;
      if (!members.empty()) members += ", ";
      members += ev.name;
    }
    add(FindingKind::Cycle, "cycle through events {" + members + "}");
  }

  std::set<std::string> clashes;
  for (std::size_t i = 0; i < links.size(); ++i) {
    std::vector<Link> rest(links.begin(), links.end());
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (auto clash = g.partition_conflict(links[i], rest); clash && clashes.insert(*clash).second)
      add(FindingKind::Contradiction, *clash);
  }

  if (auto bad = g.first_impossible_literal())
    add(FindingKind::Contradiction, "logical links make '" + g.ascii(*bad) + "' impossible");
  return report;
}

// ---------------------------------------------------------------------------
// Structural equality (name based, independent of insertion order)

namespace detail {

inline auto canonical_form(const InferenceGraph& g) {
  std::vector<std::tuple<std::string, std::vector<std::string>, int>> events;
  for (const auto& ev : g.events()) events.emplace_back(ev.name, ev.outcomes, static_cast<int>(ev.extra));
  std::sort(events.begin(), events.end());
  std::vector<std::tuple<std::string, std::string, int>> links;
  for (const auto& l : g.links())
    links.emplace_back(g.ascii(l.source), g.ascii(l.target), static_cast<int>(l.kind));
  std::sort(links.begin(), links.end());
  return std::make_pair(std::move(events), std::move(links));
}

}  // namespace detail

inline bool structurally_equal(const InferenceGraph& a, const InferenceGraph& b) {
  return detail::canonical_form(a) == detail::canonical_form(b);
}

}  // namespace confgraph

template <>
struct std::hash<confgraph::Literal> {
  std::size_t operator()(const confgraph::Literal& l) const noexcept {
    return (std::size_t{l.event} << 33) ^ (std::size_t{l.outcome} << 1) ^ std::size_t{l.negated};
  }
};

template <>
struct std::hash<confgraph::Proposition> {
  std::size_t operator()(const confgraph::Proposition& p) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (const auto& l : p.literals()) h = (h ^ std::hash<confgraph::Literal>{}(l)) * 1099511628211ULL;
    return h;
  }
};
