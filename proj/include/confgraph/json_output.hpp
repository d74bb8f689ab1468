#pragma once

// JSON renderings of proofs, closures, verdicts and oracle reports.

#include <string>

#include <nlohmann/json.hpp>

#include "confgraph/engine.hpp"
#include "confgraph/graph.hpp"
#include "confgraph/oracle.hpp"

namespace confgraph {

inline nlohmann::json to_json(const InferenceGraph& g, const ProofTree& t) {
  nlohmann::json j;
  j["rule"] = rule_name(t.rule);
  j["lemma"] = rule_lemma(t.rule).empty() ? nlohmann::json(nullptr) : nlohmann::json(rule_lemma(t.rule));
  j["statement"] = std::visit([&](const auto& c) { return render(g, c); }, t.conclusion);
  j["premises"] = nlohmann::json::array();
  for (const auto& p : t.premises) j["premises"].push_back(to_json(g, p));
  j["side_conditions"] = t.side_conditions;
  j["link"] = t.link ? nlohmann::json(g.describe(*t.link)) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const InferenceGraph& g, const Verdict& v) {
  nlohmann::json j;
  j["query"] = render(g, v.asked);
  j["verdict"] = verdict_name(v.kind);
  j["proof"] = v.proof ? to_json(g, *v.proof) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const Closure& c) {
  const InferenceGraph& g = c.graph();
  nlohmann::json j;
  j["max_arity"] = c.options().max_arity;
  j["rounds"] = c.rounds();
  auto& stmts = j["statements"] = nlohmann::json::array();
  for (const auto& [s, d] : c.statements())
    stmts.push_back({{"statement", render(g, s)},
                     {"subject", g.ascii(s.subject)},
                     {"evidence", g.ascii(s.evidence)},
                     {"rule", rule_name(d.rule)},
                     {"round", d.round},
                     {"summary", summarize(g, d)}});
  auto& facts = j["strength_facts"] = nlohmann::json::array();
  for (const auto& [f, d] : c.strength_facts())
    facts.push_back({{"statement", render(g, f)},
                     {"subject", g.ascii(f.subject)},
                     {"stronger", g.ascii(f.stronger)},
                     {"weaker", g.ascii(f.weaker)},
                     {"rule", rule_name(d.rule)},
                     {"round", d.round},
                     {"summary", summarize(g, d)}});
  return j;
}

inline nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json j;
  j["valid"] = r.ok();
  j["findings"] = nlohmann::json::array();
  for (const auto& f : r.findings) j["findings"].push_back({{"kind", finding_name(f.kind)}, {"message", f.message}});
  return j;
}

inline nlohmann::json to_json(const SoundnessReport& r) {
  nlohmann::json j;
  j["graph"] = r.graph;
  j["n_samples"] = r.n_samples;
  j["seeds_run"] = r.seeds_run;
  j["first_seed"] = r.first_seed;
  j["statements"] = r.statements;
  j["strength_facts"] = r.strength_facts;
  j["violations"] = nlohmann::json::array();
  for (const auto& v : r.violations)
    j["violations"].push_back(
        {{"seed", v.seed}, {"statement", v.statement}, {"p_cond", v.p_cond}, {"p_prior", v.p_prior}});
  if (r.infeasible) j["infeasible"] = {{"reason", r.infeasible->reason}, {"tries", r.infeasible->tries}};
  return j;
}

}  // namespace confgraph
