#pragma once

// Closure of confirmation statements under the lemma rules.
//
// The closure is computed in rounds: round 0 holds one statement per link,
// and round k adds every statement derivable from rounds < k. When several
// derivations of a new statement appear in the same round, the smallest by
// (rule, premises, side conditions) is kept, so both the statement set and
// the recorded proofs are independent of work-list order.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "confgraph/graph.hpp"
#include "confgraph/independence.hpp"

namespace confgraph {

/// Declaration order is derivation preference within a round.
enum class Rule : std::uint8_t {
  BaseLink,
  Subclass,
  Symmetry,
  Negation,
  Specificity,
  Resolution,
  Dilution,
  Irrelevance,
  Relevance,
  ExceptionShield,
  LogicalInherit,
};

constexpr std::string_view rule_name(Rule r) noexcept {
  switch (r) {
    case Rule::BaseLink: return "BaseLink";
    case Rule::Subclass: return "Subclass";
    case Rule::Symmetry: return "Symmetry";
    case Rule::Negation: return "Negation";
    case Rule::Specificity: return "Specificity";
    case Rule::Resolution: return "Resolution";
    case Rule::Dilution: return "Dilution";
    case Rule::Irrelevance: return "Irrelevance";
    case Rule::Relevance: return "Relevance";
    case Rule::ExceptionShield: return "ExceptionShield";
    case Rule::LogicalInherit: return "LogicalInherit";
  }
  return "?";
}

/// Lemma number each rule transcribes; empty for link axioms.
constexpr std::string_view rule_lemma(Rule r) noexcept {
  switch (r) {
    case Rule::BaseLink: return "";
    case Rule::Symmetry: return "4.2";
    case Rule::Negation: return "4.3";
    case Rule::Specificity: return "4.4";
    case Rule::Subclass: return "4.5";
    case Rule::Resolution: return "4.6";
    case Rule::Dilution: return "4.7";
    case Rule::Irrelevance: return "4.8";
    case Rule::Relevance: return "4.9";
    case Rule::ExceptionShield: return "4.10";
    case Rule::LogicalInherit: return "4.11";
  }
  return "";
}

/// p(subject | evidence) > p(subject).
struct ConfStatement {
  Proposition subject;
  Proposition evidence;

  friend auto operator<=>(const ConfStatement&, const ConfStatement&) = default;
  friend bool operator==(const ConfStatement&, const ConfStatement&) = default;
};

/// p(subject | weaker) < p(subject | stronger).
struct StrengthFact {
  Proposition subject;
  Proposition stronger;
  Proposition weaker;

  friend auto operator<=>(const StrengthFact&, const StrengthFact&) = default;
  friend bool operator==(const StrengthFact&, const StrengthFact&) = default;
};

struct Derivation {
  Rule rule = Rule::BaseLink;
  std::vector<ConfStatement> premises;
  std::vector<std::string> side_conditions;
  std::optional<std::size_t> link;  // BaseLink only
  std::size_t round = 0;

  auto key() const { return std::tie(rule, premises, side_conditions, link); }
};

struct EngineOptions {
  std::size_t max_arity = 2;
  bool enable_relevance = true;
  PivotPolicy pivots = PivotPolicy::Exact;
  /// Shuffles the work-lists of every round; the result must not change.
  std::optional<std::uint64_t> shuffle_seed{};
};

struct ProofTree {
  Rule rule = Rule::BaseLink;
  std::variant<ConfStatement, StrengthFact> conclusion;
  std::vector<ProofTree> premises;
  std::vector<std::string> side_conditions;
  std::optional<Link> link;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& p : premises) n += p.size();
    return n;
  }
};

enum class QueryErrc { MalformedQuery, NoProof };

class QueryError : public std::runtime_error {
 public:
  QueryError(QueryErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  QueryErrc code() const noexcept { return code_; }

 private:
  QueryErrc code_;
};

class Closure;
Closure close(const InferenceGraph& g, const EngineOptions& options);

class Closure {
 public:
  const InferenceGraph& graph() const noexcept { return graph_; }
  const EngineOptions& options() const noexcept { return options_; }
  const std::map<ConfStatement, Derivation>& statements() const noexcept { return statements_; }
  const std::map<StrengthFact, Derivation>& strength_facts() const noexcept { return strength_; }
  std::size_t rounds() const noexcept { return rounds_; }

  bool contains(const ConfStatement& s) const { return statements_.count(s) != 0; }

  const Derivation* find(const ConfStatement& s) const {
    auto it = statements_.find(s);
    return it == statements_.end() ? nullptr : &it->second;
  }

  const Derivation* find(const StrengthFact& f) const {
    auto it = strength_.find(f);
    return it == strength_.end() ? nullptr : &it->second;
  }

  ProofTree proof(const ConfStatement& s) const {
    const Derivation& d = statements_.at(s);
    return build(s, d);
  }

  ProofTree proof(const StrengthFact& f) const {
    const Derivation& d = strength_.at(f);
    return build(f, d);
  }

 private:
  friend Closure close(const InferenceGraph& g, const EngineOptions& options);

  ProofTree build(std::variant<ConfStatement, StrengthFact> conclusion, const Derivation& d) const {
    ProofTree t;
    t.rule = d.rule;
    t.conclusion = std::move(conclusion);
    t.side_conditions = d.side_conditions;
    if (d.link) t.link = graph_.links()[*d.link];
    for (const auto& p : d.premises) t.premises.push_back(proof(p));
    return t;
  }

  InferenceGraph graph_;
  EngineOptions options_;
  std::map<ConfStatement, Derivation> statements_;
  std::map<StrengthFact, Derivation> strength_;
  std::size_t rounds_ = 0;
};

// ---------------------------------------------------------------------------
// Rendering helpers

inline std::string render(const InferenceGraph& g, const ConfStatement& s) {
  return "conf(" + g.unicode(s.subject) + ", " + g.unicode(s.evidence) + ")";
}

inline std::string render(const InferenceGraph& g, const StrengthFact& f) {
  std::string a = g.unicode(f.subject);
  return "p(" + a + " | " + g.unicode(f.weaker) + ") < p(" + a + " | " + g.unicode(f.stronger) + ")";
}

inline std::string rule_label(Rule r) {
  if (r == Rule::BaseLink) return std::string(rule_name(r));
  return std::string(rule_name(r)) + "[Lemma " + std::string(rule_lemma(r)) + "]";
}

inline std::string rule_tag(Rule r) {
  if (r == Rule::BaseLink) return std::string(rule_name(r));
  return std::string(rule_name(r)) + "[L" + std::string(rule_lemma(r)) + "]";
}

// ---------------------------------------------------------------------------
// Base statements

/// One statement per link: a -> b and a => b give conf(b, a); the negative
/// kinds give conf(!b, a). The value is the index of the first such link.
inline std::map<ConfStatement, std::size_t> base_statements(const InferenceGraph& g) {
  std::map<ConfStatement, std::size_t> out;
  auto links = g.links();
  for (std::size_t i = 0; i < links.size(); ++i) {
    ConfStatement s{Proposition(g.effective_target(links[i])), Proposition(links[i].source)};
    out.emplace(std::move(s), i);
  }
  return out;
}

namespace detail {

class ClosureBuilder {
 public:
  ClosureBuilder(const InferenceGraph& g, const EngineOptions& options)
      : g_(g), opt_(options), universe_(g.universe()) {
    if (opt_.max_arity == 0) opt_.max_arity = 1;
    if (opt_.shuffle_seed) rng_.seed(*opt_.shuffle_seed);
    build_universe_props();
  }

  void run() {
    for (const auto& [s, link] : base_statements(g_)) {
      if (!admissible(s)) continue;
      Derivation d;
      d.rule = Rule::BaseLink;
      d.link = link;
      known_.emplace(s, std::move(d));
    }
    for (round_ = 1;; ++round_) {
      fresh_.clear();
      fresh_strength_.clear();
      index();
      symmetry();
      negation();
      if (round_ == 1) subclass();
      specificity();
      resolution();
      dilution();
      irrelevance();
      if (opt_.enable_relevance) relevance();
      exception_shield();
      logical_inherit();
      if (fresh_.empty() && fresh_strength_.empty()) break;
      for (auto& [s, d] : fresh_) {
        d.round = round_;
        known_.emplace(s, std::move(d));
      }
      for (auto& [f, d] : fresh_strength_) {
        d.round = round_;
        strength_.emplace(f, std::move(d));
      }
    }
  }

  std::map<ConfStatement, Derivation> take_statements() { return std::move(known_); }
  std::map<StrengthFact, Derivation> take_strength() { return std::move(strength_); }
  std::size_t rounds() const { return round_; }

 private:
  using StmtList = std::vector<const ConfStatement*>;

  // -- indices -------------------------------------------------------------

  void index() {
    order_.clear();
    by_evidence_.clear();
    by_subject_.clear();
    by_evidence_event_.clear();
    for (const auto& [s, d] : known_) order_.push_back(&s);
    shuffle(order_);
    for (const ConfStatement* s : order_) {
      by_evidence_[s->evidence].push_back(s);
      by_subject_[s->subject].push_back(s);
      if (s->evidence.single()) by_evidence_event_[s->evidence.front().event].push_back(s);
    }
    if (opt_.shuffle_seed) shuffle(universe_);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    if (opt_.shuffle_seed) std::shuffle(v.begin(), v.end(), rng_);
  }

  const StmtList& with_subject(const Proposition& p) const {
    static const StmtList empty;
    auto it = by_subject_.find(p);
    return it == by_subject_.end() ? empty : it->second;
  }

  void build_universe_props() {
    props_by_arity_.assign(opt_.max_arity + 1, {});
    std::vector<Literal> lits = universe_;
    std::vector<Proposition> level;
    for (const auto& l : lits) {
      Proposition p(l);
      if (is_consistent(p)) level.push_back(p);
    }
    props_by_arity_[1] = level;
    for (std::size_t k = 2; k <= opt_.max_arity; ++k) {
      std::vector<Proposition> next;
      for (const auto& p : props_by_arity_[k - 1]) {
        for (const auto& l : lits) {
          if (!(p.literals().back().event < l.event)) continue;
          auto q = Proposition::conjoin(p, Proposition(l));
          if (q && is_consistent(*q)) next.push_back(std::move(*q));
        }
      }
      props_by_arity_[k] = std::move(next);
    }
  }

  // -- memoized logic ------------------------------------------------------

  bool is_consistent(const Proposition& p) {
    auto it = consistent_cache_.find(p);
    if (it != consistent_cache_.end()) return it->second;
    bool v = consistent(g_, p);
    consistent_cache_.emplace(p, v);
    return v;
  }

  bool does_entail(const Proposition& a, const Proposition& b) {
    auto key = std::make_pair(a, b);
    auto it = entail_cache_.find(key);
    if (it != entail_cache_.end()) return it->second;
    bool v = entails(g_, a, b);
    entail_cache_.emplace(std::move(key), v);
    return v;
  }

  bool independent(const Proposition& a, const Proposition& b, const Proposition& given) {
    auto key = std::make_tuple(a, b, given);
    auto it = ci_cache_.find(key);
    if (it != ci_cache_.end()) return it->second;
    bool v = ci_for_literals(g_, a, b, given, opt_.pivots);
    ci_cache_.emplace(std::move(key), v);
    return v;
  }

  bool admissible(const ConfStatement& s) {
    if (s.subject.empty() || s.evidence.empty()) return false;
    if (s.subject.arity() > opt_.max_arity || s.evidence.arity() > opt_.max_arity) return false;
    if (s.subject.shares_event(s.evidence)) return false;
    return is_consistent(s.subject) && is_consistent(s.evidence);
  }

  Proposition negation_of(const Proposition& single) const {
    return Proposition(g_.negate(single.front()));
  }

  std::string indep(const Proposition& a, const Proposition& b, const Proposition& given) const {
    return g_.unicode(a) + " ⫫ " + g_.unicode(b) + " | " + g_.unicode(given) + " (d-sep)";
  }
  std::string ent(const Proposition& a, const Proposition& b) const {
    return g_.unicode(a) + " ⊨ " + g_.unicode(b);
  }

  void offer(ConfStatement s, Rule rule, std::vector<ConfStatement> premises,
             std::vector<std::string> sides = {}) {
    if (known_.count(s) || !admissible(s)) return;
    Derivation d;
    d.rule = rule;
    d.premises = std::move(premises);
    d.side_conditions = std::move(sides);
    auto [it, inserted] = fresh_.emplace(std::move(s), d);
    if (!inserted && d.key() < it->second.key()) it->second = std::move(d);
  }

  void offer_strength(StrengthFact f, Rule rule, std::vector<ConfStatement> premises,
                      std::vector<std::string> sides) {
    if (strength_.count(f)) return;
    Derivation d;
    d.rule = rule;
    d.premises = std::move(premises);
    d.side_conditions = std::move(sides);
    auto [it, inserted] = fresh_strength_.emplace(std::move(f), d);
    if (!inserted && d.key() < it->second.key()) it->second = std::move(d);
  }

  bool binary_literal_prop(const Proposition& p) const {
    return p.single() && g_.event(p.front().event).binary();
  }

  // -- rules ---------------------------------------------------------------

  // conf(a, b) |- conf(b, a)
  void symmetry() {
    for (const ConfStatement* s : order_) offer({s->evidence, s->subject}, Rule::Symmetry, {*s});
  }

  // conf(a, b) |- conf(!a, !b), single literals over binary events
  void negation() {
    for (const ConfStatement* s : order_) {
      if (!binary_literal_prop(s->subject) || !binary_literal_prop(s->evidence)) continue;
      offer({negation_of(s->subject), negation_of(s->evidence)}, Rule::Negation, {*s});
    }
  }

  // b |= a, a |/= b |- conf(b, a); premises are the logical links used
  void subclass() {
    auto base = base_statements(g_);
    std::map<std::size_t, ConfStatement> by_link;
    for (const auto& [s, idx] : base) by_link.emplace(idx, s);
    for (const Literal& b : universe_) {
      std::vector<std::set<std::size_t>> reasons;
      auto domain = g_.propagate(std::span<const Literal>(&b, 1), &reasons);
      if (!domain) continue;
      for (const Literal& a : universe_) {
        if (a.event == b.event) continue;
        if (((*domain)[a.event] & ~g_.mask(a)) != 0) continue;  // b does not entail a
        Proposition pa(a), pb(b);
        if (does_entail(pa, pb)) continue;
        std::vector<ConfStatement> premises;
        for (std::size_t li : reasons[a.event]) {
          auto it = by_link.find(li);
          if (it != by_link.end()) premises.push_back(it->second);
        }
        std::sort(premises.begin(), premises.end());
        premises.erase(std::unique(premises.begin(), premises.end()), premises.end());
        offer({pb, pa}, Rule::Subclass, std::move(premises),
              {ent(pb, pa), g_.unicode(pa) + " ⊭ " + g_.unicode(pb)});
      }
    }
  }

  // conf(a, c), conf(b, d), c and d outcomes of one event, a |= b
  //   |- conf(c, a & b)
  void specificity() {
    for (const auto& [event, group] : by_evidence_event_) {
      for (const ConfStatement* s1 : group) {
        for (const ConfStatement* s2 : group) {
          if (s1->evidence == s2->evidence) continue;
          const Proposition& a = s1->subject;
          const Proposition& b = s2->subject;
          if (a == b || !does_entail(a, b)) continue;
          auto ab = Proposition::conjoin(a, b);
          if (!ab || *ab == a) continue;
          offer({s1->evidence, *ab}, Rule::Specificity, {*s1, *s2}, {ent(a, b)});
        }
      }
    }
  }

  // conf(a, c), conf(b, c), a indep b | c (and | !c) |- conf(a, b)
  void resolution() {
    for (const auto& [pivot, subjects] : by_evidence_) {
      if (!pivot.single()) continue;
      Proposition neg = negation_of(pivot);
      for (const ConfStatement* sa : subjects) {
        for (const ConfStatement* sb : subjects) {
          const Proposition& a = sa->subject;
          const Proposition& b = sb->subject;
          if (a == b || a.shares_event(b)) continue;
          if (known_.count({a, b})) continue;
          if (!independent(a, b, pivot) || !independent(a, b, neg)) continue;
          offer({a, b}, Rule::Resolution, {*sa, *sb}, {indep(a, b, pivot), indep(a, b, neg)});
        }
      }
    }
  }

  // conf(a, b), conf(b, c), a indep c | b (and | !b)
  //   |- p(a | c) < p(a | b) and conf(a, c)
  void dilution() {
    for (const ConfStatement* s1 : order_) {
      if (!s1->evidence.single()) continue;
      const Proposition& a = s1->subject;
      const Proposition& b = s1->evidence;
      Proposition neg = negation_of(b);
      for (const ConfStatement* s2 : with_subject(b)) {
        const Proposition& c = s2->evidence;
        if (a.shares_event(c)) continue;
        if (!independent(a, c, b) || !independent(a, c, neg)) continue;
        std::vector<std::string> sides{indep(a, c, b), indep(a, c, neg)};
        offer({a, c}, Rule::Dilution, {*s1, *s2}, sides);
        // With c |= b the two conditionals coincide and the order is not strict.
        if (!does_entail(c, b)) {
          sides.push_back(g_.unicode(c) + " ⊭ " + g_.unicode(b));
          offer_strength({a, b, c}, Rule::Dilution, {*s1, *s2}, std::move(sides));
        }
      }
    }
  }

  // conf(a, c), a indep b | c |- conf(a, b & c)
  void irrelevance() {
    for (const ConfStatement* s : order_) {
      const Proposition& a = s->subject;
      const Proposition& c = s->evidence;
      if (c.arity() >= opt_.max_arity) continue;
      for (std::size_t k = 1; k + c.arity() <= opt_.max_arity; ++k) {
        for (const Proposition& b : props_by_arity_[k]) {
          if (b.shares_event(a) || b.shares_event(c)) continue;
          auto bc = Proposition::conjoin(b, c);
          if (!bc || known_.count({a, *bc})) continue;
          if (!independent(a, b, c)) continue;
          offer({a, *bc}, Rule::Irrelevance, {*s}, {indep(a, b, c)});
        }
      }
    }
  }

  // conf(a, c), conf(b, c), a indep b | c (and | !c) |- conf(a & b, c)
  void relevance() {
    for (const auto& [pivot, subjects] : by_evidence_) {
      if (!pivot.single()) continue;
      Proposition neg = negation_of(pivot);
      for (const ConfStatement* sa : subjects) {
        for (const ConfStatement* sb : subjects) {
          const Proposition& a = sa->subject;
          const Proposition& b = sb->subject;
          if (!(a < b) || a.shares_event(b)) continue;
          auto ab = Proposition::conjoin(a, b);
          if (!ab || ab->arity() > opt_.max_arity || known_.count({*ab, pivot})) continue;
          if (!independent(a, b, pivot) || !independent(a, b, neg)) continue;
          offer({*ab, pivot}, Rule::Relevance, {*sa, *sb}, {indep(a, b, pivot), indep(a, b, neg)});
        }
      }
    }
  }

  // conf(!a, b), conf(a, c), b |= c |- conf(a, !b & c)
  void exception_shield() {
    for (const ConfStatement* s1 : order_) {
      if (!s1->subject.single() || !s1->evidence.single()) continue;
      Proposition a(g_.negate(s1->subject.front()));
      const Proposition& b = s1->evidence;
      Proposition not_b = negation_of(b);
      for (const ConfStatement* s2 : with_subject(a)) {
        const Proposition& c = s2->evidence;
        if (c.mentions(b.front().event) || !does_entail(b, c)) continue;
        auto nbc = Proposition::conjoin(not_b, c);
        if (!nbc) continue;
        offer({a, *nbc}, Rule::ExceptionShield, {*s1, *s2}, {ent(b, c)});
      }
    }
  }

  // r, e direct predecessors of g; r |= e; x |= e; r indep x; conf(g, e);
  // conf(!g, r) |- conf(g, x)
  void logical_inherit() {
    const bool exact = opt_.pivots == PivotPolicy::Exact;
    for (const ConfStatement* s1 : order_) {
      if (!s1->subject.single() || !s1->evidence.single()) continue;
      const Literal g = s1->subject.front();
      const Literal e = s1->evidence.front();
      auto parents = g_.parents(g.event);
      auto is_parent = [&](EventId v) { return std::find(parents.begin(), parents.end(), v) != parents.end(); };
      if (!is_parent(e.event)) continue;
      if (exact && !g_.exact(e)) continue;
      Proposition not_g(g_.negate(g));
      for (const ConfStatement* s2 : with_subject(not_g)) {
        if (!s2->evidence.single()) continue;
        const Literal r = s2->evidence.front();
        if (r.event == e.event || !is_parent(r.event)) continue;
        if (exact && !g_.event(r.event).binary()) continue;
        Proposition pr(r), pe(e), pg(g);
        if (!does_entail(pr, pe)) continue;
        for (const Literal& x : universe_) {
          if (x.event == r.event || x.event == e.event || x.event == g.event) continue;
          Proposition px(x);
          if (known_.count({pg, px}) || !does_entail(px, pe)) continue;
          if (!d_separated(g_, SeparationQuery{{r.event}, {x.event}, {}})) continue;
          EventSet re{std::min(r.event, e.event), std::max(r.event, e.event)};
          if (!d_separated(g_, SeparationQuery{{g.event}, {x.event}, re})) continue;
          offer({pg, px}, Rule::LogicalInherit, {*s1, *s2},
                {g_.unicode(r) + ", " + g_.unicode(e) + " direct predecessors of " + g_.unicode(g),
                 ent(pr, pe), ent(px, pe), g_.unicode(r) + " ⫫ " + g_.unicode(x) + " (d-sep)",
                 g_.unicode(g) + " ⫫ " + g_.unicode(x) + " | " + g_.unicode(r) + ", " + g_.unicode(e) +
                     " (d-sep)"});
        }
      }
    }
  }

  const InferenceGraph& g_;
  EngineOptions opt_;
  std::vector<Literal> universe_;
  std::vector<std::vector<Proposition>> props_by_arity_;
  std::mt19937_64 rng_;
  std::size_t round_ = 0;

  std::map<ConfStatement, Derivation> known_;
  std::map<StrengthFact, Derivation> strength_;
  std::map<ConfStatement, Derivation> fresh_;
  std::map<StrengthFact, Derivation> fresh_strength_;

  StmtList order_;
  std::map<Proposition, StmtList> by_evidence_;
  std::map<Proposition, StmtList> by_subject_;
  std::map<EventId, StmtList> by_evidence_event_;

  std::map<Proposition, bool> consistent_cache_;
  std::map<std::pair<Proposition, Proposition>, bool> entail_cache_;
  std::map<std::tuple<Proposition, Proposition, Proposition>, bool> ci_cache_;
};

}  // namespace detail

inline Closure close(const InferenceGraph& g, const EngineOptions& options = {}) {
  detail::ClosureBuilder builder(g, options);
  builder.run();
  Closure c;
  c.graph_ = g;
  c.options_ = options;
  c.statements_ = builder.take_statements();
  c.strength_ = builder.take_strength();
  c.rounds_ = builder.rounds();
  return c;
}

// ---------------------------------------------------------------------------
// Queries

enum class VerdictKind { Confirmed, Disconfirmed, Unknown };

constexpr std::string_view verdict_name(VerdictKind k) noexcept {
  switch (k) {
    case VerdictKind::Confirmed: return "Confirmed";
    case VerdictKind::Disconfirmed: return "Disconfirmed";
    case VerdictKind::Unknown: return "Unknown";
  }
  return "?";
}

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  ConfStatement asked;
  std::optional<ProofTree> proof;  // of conf(subject, evidence) or conf(!subject, evidence)
};

inline Verdict query(const Closure& c, const Proposition& subject, const Proposition& evidence) {
  if (subject.empty() || evidence.empty())
    throw QueryError(QueryErrc::MalformedQuery, "query needs a subject and evidence");
  for (const Proposition* p : {&subject, &evidence})
    for (const auto& l : p->literals())
      if (l.event >= c.graph().event_count() || l.outcome >= c.graph().event(l.event).arity())
        throw QueryError(QueryErrc::MalformedQuery, "query names an unknown outcome");
  if (subject.shares_event(evidence))
    throw QueryError(QueryErrc::MalformedQuery, "subject and evidence mention the same event");

  Verdict v;
  v.asked = ConfStatement{subject, evidence};
  if (c.contains(v.asked)) {
    v.kind = VerdictKind::Confirmed;
    v.proof = c.proof(v.asked);
    return v;
  }
  if (subject.single()) {
    ConfStatement neg{Proposition(c.graph().negate(subject.front())), evidence};
    if (c.contains(neg)) {
      v.kind = VerdictKind::Disconfirmed;
      v.proof = c.proof(neg);
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Proof text

namespace detail {

inline void render_proof(const InferenceGraph& g, const ProofTree& t, std::size_t depth, std::string& out) {
  out.append(depth * 2, ' ');
  out += rule_label(t.rule);
  out += ": ";
  out += std::visit([&](const auto& c) { return render(g, c); }, t.conclusion);
  std::vector<std::string> sides = t.side_conditions;
  if (t.link) sides.insert(sides.begin(), g.describe(*t.link));
  if (!sides.empty()) {
    out += " ⊣ ";
    for (std::size_t i = 0; i < sides.size(); ++i) {
      if (i) out += "; ";
      out += sides[i];
    }
  }
  out += '\n';
  for (const auto& p : t.premises) render_proof(g, p, depth + 1, out);
}

}  // namespace detail

/// Indented proof, two spaces per level, one rule application per line:
/// `<rule>[Lemma <n>]: conf(<subject>, <evidence>) ⊣ <side conditions>`.
inline std::string render_proof(const InferenceGraph& g, const ProofTree& t) {
  std::string out;
  detail::render_proof(g, t, 0, out);
  return out;
}

inline std::string explain(const InferenceGraph& g, const Verdict& v) {
  if (v.kind == VerdictKind::Unknown || !v.proof)
    throw QueryError(QueryErrc::NoProof, "no proof: " + render(g, v.asked) + " is not derivable");
  return render_proof(g, *v.proof);
}

/// `<rule tag> <= premise; premise | side; side` on one line.
inline std::string summarize(const InferenceGraph& g, const Derivation& d) {
  std::string out = rule_tag(d.rule);
  if (d.link) return out + "  " + g.describe(g.links()[*d.link]);
  if (!d.premises.empty()) {
    out += " <= ";
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      if (i) out += "; ";
      out += render(g, d.premises[i]);
    }
  }
  if (!d.side_conditions.empty()) {
    out += " | ";
    for (std::size_t i = 0; i < d.side_conditions.size(); ++i) {
      if (i) out += "; ";
      out += d.side_conditions[i];
    }
  }
  return out;
}

}  // namespace confgraph
