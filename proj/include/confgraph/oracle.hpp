#pragma once

// Numeric ground truth. Distributions are explicit joint tables over every
// event of a graph, built from per-node conditional tables drawn uniformly
// from the simplex and kept only when every link constraint holds.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "confgraph/engine.hpp"
#include "confgraph/graph.hpp"

namespace confgraph {

enum class OracleErrc { Infeasible, SizeLimit, ZeroEvidence };

class OracleError : public std::runtime_error {
 public:
  OracleError(OracleErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  OracleErrc code() const noexcept { return code_; }

 private:
  OracleErrc code_;
};

/// Largest joint table the oracle builds (twelve binary events).
inline constexpr std::size_t kMaxJointEntries = 4096;

/// Assignment of one outcome per event, indexed by EventId.
using Assignment = std::vector<OutcomeIndex>;

class JointDistribution {
 public:
  JointDistribution() = default;

  /// Uniform table over the given arities.
  explicit JointDistribution(std::vector<std::size_t> arities) : arities_(std::move(arities)) {
    std::size_t n = 1;
    strides_.resize(arities_.size());
    for (std::size_t i = 0; i < arities_.size(); ++i) {
      strides_[i] = n;
      if (arities_[i] == 0 || n > kMaxJointEntries / arities_[i])
        throw OracleError(OracleErrc::SizeLimit, "joint table would exceed " +
                                                     std::to_string(kMaxJointEntries) + " entries");
      n *= arities_[i];
    }
    table_.assign(n, 1.0 / static_cast<double>(n));
  }

  std::size_t size() const noexcept { return table_.size(); }
  std::size_t event_count() const noexcept { return arities_.size(); }
  std::size_t arity(EventId e) const { return arities_.at(e); }
  const std::vector<double>& table() const noexcept { return table_; }
  std::vector<double>& table() noexcept { return table_; }

  OutcomeIndex outcome(std::size_t index, EventId e) const {
    return static_cast<OutcomeIndex>((index / strides_[e]) % arities_[e]);
  }

  Assignment decode(std::size_t index) const {
    Assignment a(arities_.size());
    for (EventId e = 0; e < a.size(); ++e) a[e] = outcome(index, e);
    return a;
  }

  std::size_t encode(const Assignment& a) const {
    std::size_t idx = 0;
    for (std::size_t e = 0; e < a.size(); ++e) idx += a[e] * strides_[e];
    return idx;
  }

  double total() const {
    double s = 0;
    for (double p : table_) s += p;
    return s;
  }

  double probability(const std::function<bool(std::size_t)>& pred) const {
    double s = 0;
    for (std::size_t i = 0; i < table_.size(); ++i)
      if (pred(i)) s += table_[i];
    return s;
  }

  /// Probability that every literal of `p` holds.
  double probability(const InferenceGraph& g, const Proposition& p) const {
    auto m = matcher(g, p);
    double s = 0;
    for (std::size_t i = 0; i < table_.size(); ++i)
      if (m(i)) s += table_[i];
    return s;
  }

  double marginal(EventId e, OutcomeIndex o) const {
    return probability([&](std::size_t i) { return outcome(i, e) == o; });
  }

  double conditional(const InferenceGraph& g, const Proposition& subject, const Proposition& evidence) const {
    auto ms = matcher(g, subject), me = matcher(g, evidence);
    double pe = 0, pse = 0;
    for (std::size_t i = 0; i < table_.size(); ++i) {
      if (!me(i)) continue;
      pe += table_[i];
      if (ms(i)) pse += table_[i];
    }
    if (pe <= 0) throw OracleError(OracleErrc::ZeroEvidence, "conditioning on a zero-probability event");
    return pse / pe;
  }

  bool satisfies(const InferenceGraph& g, const Proposition& p, std::size_t index) const {
    return matcher(g, p)(index);
  }

  /// Predicate over table indices testing every literal of `p`.
  struct Matcher {
    struct Term {
      std::size_t stride, arity;
      OutcomeMask mask;
    };
    std::vector<Term> terms;
    bool operator()(std::size_t index) const {
      for (const auto& t : terms)
        if (!((t.mask >> ((index / t.stride) % t.arity)) & 1U)) return false;
      return true;
    }
  };

  Matcher matcher(const InferenceGraph& g, const Proposition& p) const {
    Matcher m;
    for (const auto& l : p.literals()) m.terms.push_back({strides_.at(l.event), arities_.at(l.event), g.mask(l)});
    return m;
  }

  friend bool operator==(const JointDistribution&, const JointDistribution&) = default;

 private:
  std::vector<std::size_t> arities_;
  std::vector<std::size_t> strides_;
  std::vector<double> table_;
};

inline JointDistribution empty_joint(const InferenceGraph& g) {
  std::vector<std::size_t> arities;
  for (const auto& ev : g.events()) arities.push_back(ev.arity());
  return JointDistribution(std::move(arities));
}

struct SamplerOptions {
  double margin = 1e-3;          // slack on strict link inequalities and marginals
  std::size_t max_tries = 100000;
};

struct Infeasible {
  std::string reason;
  std::size_t tries = 0;
};

/// Conditional table for one node: rows indexed by the parents' joint
/// configuration (parents in ascending EventId order), each a distribution
/// over the node's outcomes.
struct ConditionalTable {
  std::vector<EventId> parents;
  std::vector<std::size_t> parent_arities;
  std::vector<std::vector<double>> rows;

  std::size_t row_index(const Assignment& a) const {
    std::size_t idx = 0, stride = 1;
    for (std::size_t k = 0; k < parents.size(); ++k) {
      idx += a[parents[k]] * stride;
      stride *= parent_arities[k];
    }
    return idx;
  }
};

namespace detail {

inline std::vector<double> simplex_draw(std::mt19937_64& rng, std::size_t n, OutcomeMask allowed) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> row(n, 0.0);
  double sum = 0;
  for (std::size_t o = 0; o < n; ++o) {
    if (!((allowed >> o) & 1U)) continue;
    row[o] = exp1(rng);
    sum += row[o];
  }
  if (sum <= 0) return simplex_draw(rng, n, (n == 64 ? ~OutcomeMask{0} : (OutcomeMask{1} << n) - 1));
  for (double& x : row) x /= sum;
  return row;
}

}  // namespace detail

/// One draw of a distribution factorizing by the graph. Rows whose parent
/// configuration satisfies a logical link's source put all their mass on the
/// outcomes the link allows; every other row is uniform on the simplex.
inline JointDistribution sample_factorized(const InferenceGraph& g, std::mt19937_64& rng,
                                           std::vector<ConditionalTable>* tables_out = nullptr) {
  JointDistribution d = empty_joint(g);
  std::vector<ConditionalTable> tables(g.event_count());
  for (const auto& ev : g.events()) {
    ConditionalTable& t = tables[ev.id];
    auto ps = g.parents(ev.id);
    t.parents.assign(ps.begin(), ps.end());
    std::size_t rows = 1;
    for (EventId p : t.parents) {
      t.parent_arities.push_back(g.event(p).arity());
      rows *= g.event(p).arity();
    }
    Assignment a(g.event_count(), 0);
    for (std::size_t r = 0; r < rows; ++r) {
      std::size_t rest = r;
      for (std::size_t k = 0; k < t.parents.size(); ++k) {
        a[t.parents[k]] = static_cast<OutcomeIndex>(rest % t.parent_arities[k]);
        rest /= t.parent_arities[k];
      }
      OutcomeMask allowed = ev.full_mask();
      for (const auto& link : g.links()) {
        if (!is_logical(link.kind) || link.target.event != ev.id) continue;
        if (g.satisfied_by(link.source, a[link.source.event])) allowed &= g.mask(g.effective_target(link));
      }
      t.rows.push_back(detail::simplex_draw(rng, ev.arity(), allowed));
    }
  }
  auto& table = d.table();
  Assignment a(g.event_count(), 0);
  for (std::size_t i = 0; i < table.size(); ++i) {
    double p = 1.0;
    for (const auto& ev : g.events()) p *= tables[ev.id].rows[tables[ev.id].row_index(a)][a[ev.id]];
    table[i] = p;
    for (std::size_t e = 0; e < a.size(); ++e) {  // odometer, event 0 fastest
      if (++a[e] < d.arity(static_cast<EventId>(e))) break;
      a[e] = 0;
    }
  }
  if (tables_out) *tables_out = std::move(tables);
  return d;
}

/// Link constraints a distribution fails, as readable messages. A logical
/// link whose conditional is not 1 is reported with `structural` set.
struct ConstraintFailure {
  std::string message;
  bool structural = false;
};

inline std::vector<ConstraintFailure> constraint_violations(const InferenceGraph& g, const JointDistribution& d,
                                                            double margin) {
  std::vector<ConstraintFailure> out;
  std::vector<std::vector<double>> marg(g.event_count());
  for (const auto& ev : g.events()) marg[ev.id].assign(ev.arity(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (EventId e = 0; e < g.event_count(); ++e) marg[e][d.outcome(i, e)] += d.table()[i];
  for (const auto& ev : g.events())
    for (OutcomeIndex o = 0; o < ev.arity(); ++o)
      if (marg[ev.id][o] < margin)
        out.push_back({"outcome " + g.ascii(Literal{ev.id, o, false}) + " has marginal below margin", false});
  for (const auto& link : g.links()) {
    Proposition s(link.source), t(g.effective_target(link));
    double ps = d.probability(g, s);
    if (ps <= 0) {
      out.push_back({"source of " + g.describe(link) + " has zero probability", false});
      continue;
    }
    double cond = d.conditional(g, t, s);
    double prior = d.probability(g, t);
    if (is_logical(link.kind)) {
      if (cond < 1.0 - 1e-12) out.push_back({"logical link " + g.describe(link) + " is not certain", true});
      else if (prior >= 1.0 - margin) out.push_back({"logical link " + g.describe(link) + " has no prior shift", false});
    } else if (!(cond > prior + margin)) {
      out.push_back({"link " + g.describe(link) + " shift below margin", false});
    }
  }
  return out;
}

namespace detail {

/// Link and marginal checks with matchers prepared once per graph; stops at
/// the first failure.
class ConstraintChecker {
 public:
  ConstraintChecker(const InferenceGraph& g, const JointDistribution& shape, double margin)
      : g_(g), margin_(margin) {
    for (const auto& l : g.links())
      links_.push_back({shape.matcher(g, Proposition(l.source)), shape.matcher(g, Proposition(g.effective_target(l))),
                        is_logical(l.kind)});
  }

  /// Empty when every constraint holds; "!" prefix marks a structural failure.
  std::optional<std::string> first_failure(const JointDistribution& d) const {
    const auto& t = d.table();
    for (std::size_t k = 0; k < links_.size(); ++k) {
      const auto& c = links_[k];
      double ps = 0, pst = 0, pt = 0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        bool tgt = c.target(i);
        if (tgt) pt += t[i];
        if (c.source(i)) {
          ps += t[i];
          if (tgt) pst += t[i];
        }
      }
      if (ps < margin_) return "source of " + g_.describe(g_.links()[k]) + " below margin";
      double cond = pst / ps;
      if (c.logical) {
        if (cond < 1.0 - 1e-12) return "!logical link " + g_.describe(g_.links()[k]) + " is not certain";
        if (pt >= 1.0 - margin_) return "logical link " + g_.describe(g_.links()[k]) + " has no prior shift";
      } else if (!(cond > pt + margin_)) {
        return "link " + g_.describe(g_.links()[k]) + " shift below margin";
      }
    }
    for (const auto& ev : g_.events())
      for (OutcomeIndex o = 0; o < ev.arity(); ++o)
        if (d.marginal(ev.id, o) < margin_)
          return "outcome " + g_.ascii(Literal{ev.id, o, false}) + " has marginal below margin";
    return std::nullopt;
  }

 private:
  struct LinkCheck {
    JointDistribution::Matcher source, target;
    bool logical;
  };
  const InferenceGraph& g_;
  double margin_;
  std::vector<LinkCheck> links_;
};

}  // namespace detail

/// Rejection sampling with a generator seeded by `seed`; identical seeds give
/// bit-identical tables.
inline std::variant<JointDistribution, Infeasible> sample_consistent(const InferenceGraph& g, std::uint64_t seed,
                                                                      const SamplerOptions& opts = {}) {
  const JointDistribution shape = empty_joint(g);  // throws SizeLimit before any sampling
  const detail::ConstraintChecker checker(g, shape, opts.margin);
  std::mt19937_64 rng(seed);
  std::string last;
  for (std::size_t attempt = 1; attempt <= opts.max_tries; ++attempt) {
    JointDistribution d = sample_factorized(g, rng);
    auto failure = checker.first_failure(d);
    if (!failure) return d;
    if (failure->front() == '!') return Infeasible{failure->substr(1), attempt};
    last = std::move(*failure);
  }
  return Infeasible{"no consistent distribution in " + std::to_string(opts.max_tries) + " tries (last: " + last + ")",
                    opts.max_tries};
}

/// p(subject | evidence) − p(subject).
inline double shift(const InferenceGraph& g, const JointDistribution& d, const ConfStatement& s) {
  return d.conditional(g, s.subject, s.evidence) - d.probability(g, s.subject);
}

inline bool holds(const InferenceGraph& g, const JointDistribution& d, const ConfStatement& s, double eps = 1e-9) {
  return shift(g, d, s) > eps;
}

inline bool holds(const InferenceGraph& g, const JointDistribution& d, const StrengthFact& f, double eps = 1e-9) {
  return d.conditional(g, f.subject, f.stronger) - d.conditional(g, f.subject, f.weaker) > eps;
}

// ---------------------------------------------------------------------------
// Reports

struct Violation {
  std::uint64_t seed = 0;
  std::string statement;
  double p_cond = 0;   // p(subject | evidence), or p(subject | weaker) for orderings
  double p_prior = 0;  // p(subject), or p(subject | stronger) for orderings
};

struct SoundnessReport {
  std::string graph;
  std::size_t n_samples = 0;
  std::size_t seeds_run = 0;
  std::uint64_t first_seed = 0;
  std::size_t statements = 0;
  std::size_t strength_facts = 0;
  std::vector<Violation> violations;
  std::optional<Infeasible> infeasible;

  bool ok() const noexcept { return violations.empty() && !infeasible; }
};

struct VerifyOptions {
  SamplerOptions sampler;
  double eps = 1e-9;
  std::size_t max_violations = 1000;
};

/// Checks every statement and ordering of `c` in `n_samples` distributions,
/// sample i drawn with seed `seed + i`.
inline SoundnessReport verify_closure(const Closure& c, std::size_t n_samples, std::uint64_t seed,
                                      const VerifyOptions& opts = {}, std::string graph_name = {}) {
  const InferenceGraph& g = c.graph();
  SoundnessReport r;
  r.graph = std::move(graph_name);
  r.n_samples = n_samples;
  r.first_seed = seed;
  r.statements = c.statements().size();
  r.strength_facts = c.strength_facts().size();
  for (std::size_t i = 0; i < n_samples; ++i) {
    auto sampled = sample_consistent(g, seed + i, opts.sampler);
    if (auto* inf = std::get_if<Infeasible>(&sampled)) {
      r.infeasible = *inf;
      return r;
    }
    const auto& d = std::get<JointDistribution>(sampled);
    ++r.seeds_run;
    for (const auto& [s, deriv] : c.statements()) {
      if (holds(g, d, s, opts.eps) || r.violations.size() >= opts.max_violations) continue;
      r.violations.push_back({seed + i, render(g, s), d.conditional(g, s.subject, s.evidence),
                              d.probability(g, s.subject)});
    }
    for (const auto& [f, deriv] : c.strength_facts()) {
      if (holds(g, d, f, opts.eps) || r.violations.size() >= opts.max_violations) continue;
      r.violations.push_back({seed + i, render(g, f), d.conditional(g, f.subject, f.weaker),
                              d.conditional(g, f.subject, f.stronger)});
    }
  }
  return r;
}

struct DilutionReport {
  std::size_t seeds_run = 0;
  std::vector<Violation> violations;
  std::optional<Infeasible> infeasible;
};

inline DilutionReport check_dilution(const InferenceGraph& g, const StrengthFact& f, std::size_t n_samples,
                                     std::uint64_t seed, const VerifyOptions& opts = {}) {
  DilutionReport r;
  for (std::size_t i = 0; i < n_samples; ++i) {
    auto sampled = sample_consistent(g, seed + i, opts.sampler);
    if (auto* inf = std::get_if<Infeasible>(&sampled)) {
      r.infeasible = *inf;
      return r;
    }
    const auto& d = std::get<JointDistribution>(sampled);
    ++r.seeds_run;
    if (!holds(g, d, f, opts.eps))
      r.violations.push_back({seed + i, render(g, f), d.conditional(g, f.subject, f.weaker),
                              d.conditional(g, f.subject, f.stronger)});
  }
  return r;
}

struct Witness {
  std::uint64_t seed = 0;
  JointDistribution distribution;
  double p_cond = 0;
  double p_prior = 0;
};

/// First sampled consistent distribution in which `s` fails. Nullopt means
/// none was found within the budget, which is evidence rather than proof that
/// `s` holds everywhere.
inline std::optional<Witness> find_counterexample(const InferenceGraph& g, const ConfStatement& s,
                                                  std::size_t n_samples, std::uint64_t seed,
                                                  const VerifyOptions& opts = {}) {
  for (std::size_t i = 0; i < n_samples; ++i) {
    auto sampled = sample_consistent(g, seed + i, opts.sampler);
    if (auto* inf = std::get_if<Infeasible>(&sampled))
      throw OracleError(OracleErrc::Infeasible, inf->reason);
    auto& d = std::get<JointDistribution>(sampled);
    if (!holds(g, d, s, opts.eps)) {
      double pc = d.conditional(g, s.subject, s.evidence), pp = d.probability(g, s.subject);
      return Witness{seed + i, std::move(d), pc, pp};
    }
  }
  return std::nullopt;
}

}  // namespace confgraph
