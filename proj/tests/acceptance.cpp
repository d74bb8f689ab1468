// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"

using namespace confgraph;
using namespace testing_support;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int n, bool pass, const std::string& title, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", n, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

void note(const std::string& line) { std::printf("    %s\n", line.c_str()); }

ParsedQuery parse_or_throw(const InferenceGraph& g, const std::string& text) {
  auto r = parse_query(text, g);
  if (!r.ok()) throw std::runtime_error("bad query " + text);
  return *r.query;
}

// 1. Golden verdicts

struct GoldenRow {
  const char* graph;
  const char* query;
  std::vector<VerdictKind> accepted;
};

void golden_table() {
  using V = VerdictKind;
  const std::vector<GoldenRow> rows = {
      {"birds.igr", "conf(fly, bird)?", {V::Confirmed}},
      {"birds.igr", "conf(fly, emu)?", {V::Disconfirmed}},
      {"birds.igr", "conf(!fly, bird & emu)?", {V::Confirmed}},
      {"birds.igr", "conf(emu, bird)?", {V::Confirmed}},
      {"birds.igr", "conf(!airborn, emu)?", {V::Confirmed}},
      {"birds.igr", "conf(feathers, fly)?", {V::Confirmed}},
      {"nixon.igr", "conf(dove, quaker)?", {V::Confirmed}},
      {"nixon.igr", "conf(hawk, republican)?", {V::Confirmed}},
      {"nixon.igr", "conf(hawk, quaker & republican)?", {V::Unknown}},
      {"nixon.igr", "conf(dove, quaker & republican)?", {V::Unknown}},
      {"nixon.igr", "conf(political, quaker)?", {V::Confirmed}},
      {"nixon.igr", "conf(!hawk, quaker)?", {V::Unknown}},
      {"elephants.igr", "conf(gray, african)?", {V::Confirmed}},
      {"elephants.igr", "conf(!gray, royal & african)?", {V::Confirmed}},
      {"diagnosis.igr", "conf(flu, sneeze)?", {V::Confirmed}},
      {"diagnosis.igr", "conf(w-flu, sneeze)?", {V::Confirmed}},
      {"diagnosis.igr", "conf(o-flu, sneeze)?", {V::Unknown, V::Disconfirmed}},
      {"diagnosis.igr", "conf(o-flu, !sneeze)?", {V::Confirmed}},
  };
  auto t0 = Clock::now();
  std::map<std::string, std::pair<InferenceGraph, std::optional<Closure>>> cache;
  std::size_t matched = 0;
  std::vector<std::string> lines;
  for (const auto& row : rows) {
    auto& entry = cache[row.graph];
    if (!entry.second) {
      entry.first = example(row.graph);
      entry.second = close(entry.first);
    }
    auto q = parse_or_throw(entry.first, row.query);
    Verdict v = query(*entry.second, q.subject, q.evidence);
    bool ok = std::find(row.accepted.begin(), row.accepted.end(), v.kind) != row.accepted.end();
    matched += ok;
    std::string rule = v.proof ? " via " + std::string(rule_name(v.proof->rule)) : "";
    std::string expected(verdict_name(row.accepted.front()));
    for (std::size_t i = 1; i < row.accepted.size(); ++i) expected += "|" + std::string(verdict_name(row.accepted[i]));
    lines.push_back(std::string(ok ? "ok   " : "MISS ") + row.graph + " " + row.query + " -> " +
                    std::string(verdict_name(v.kind)) + rule + (ok ? "" : " (expected " + expected + ")"));
  }
  double secs = seconds_since(t0);
  bool pass = matched == rows.size() && secs < 5.0;
  report(1, pass, "golden verdict table",
         std::to_string(matched) + "/" + std::to_string(rows.size()) + " rows, " + std::to_string(secs) + " s < 5 s");
  for (const auto& l : lines) note(l);
}

// 2. Per-rule soundness on minimal premise graphs

struct RuleCase {
  Rule rule;
  const char* graph;
  const char* conclusion;
};

bool check_rule_case(const RuleCase& rc, std::string& detail) {
  auto g = graph_from(rc.graph);
  Closure c = close(g);
  auto q = parse_or_throw(g, rc.conclusion);
  ConfStatement target{q.subject, q.evidence};
  const Derivation* d = c.find(target);
  if (!d) {
    detail = "conclusion " + render(g, target) + " not derived";
    return false;
  }
  bool by_rule = d->rule == rc.rule;
  for (const auto& [s, deriv] : c.statements())
    if (deriv.rule == rc.rule) by_rule = true;
  if (!by_rule) {
    detail = std::string(rule_name(rc.rule)) + " never fired";
    return false;
  }
  std::size_t target_fail = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto sampled = sample_consistent(g, seed);
    if (std::holds_alternative<Infeasible>(sampled)) {
      detail = "sampler infeasible";
      return false;
    }
    if (!holds(g, std::get<JointDistribution>(sampled), target)) ++target_fail;
  }
  SoundnessReport all = verify_closure(c, 1000, 0);
  detail = render(g, target) + " by " + std::string(rule_name(d->rule)) + ": " + std::to_string(1000 - target_fail) +
           "/1000; whole closure (" + std::to_string(all.statements) + " statements) " +
           std::to_string(all.violations.size()) + " violations";
  return target_fail == 0 && all.ok();
}

bool relevance_sound = false;

void rule_soundness() {
  const std::vector<RuleCase> cases = {
      {Rule::Symmetry, "a -> b.", "conf(a, b)?"},
      {Rule::Negation, "a -> b.", "conf(!b, !a)?"},
      {Rule::Subclass, "emu => bird.", "conf(emu, bird)?"},
      {Rule::Specificity, "bird -> fly.\nemu => bird.\nemu -/> fly.", "conf(!fly, bird & emu)?"},
      {Rule::Resolution, "c -> a.\nc -> b.", "conf(a, b)?"},
      {Rule::Dilution, "a -> b.\nb -> c.", "conf(a, c)?"},
      {Rule::Irrelevance, "c -> a.\nb -> c.", "conf(a, b & c)?"},
      {Rule::Relevance, "c -> a.\nc -> b.", "conf(a & b, c)?"},
      {Rule::ExceptionShield, "elephant -> gray.\nroyal => elephant.\nroyal -/> gray.",
       "conf(gray, !royal & elephant)?"},
      {Rule::LogicalInherit, "royal => elephant.\nafrican => elephant.\nelephant -> gray.\nroyal -/> gray.",
       "conf(gray, african)?"},
  };
  auto t0 = Clock::now();
  std::size_t passed = 0;
  std::vector<std::string> lines;
  for (const auto& rc : cases) {
    std::string detail;
    bool ok = check_rule_case(rc, detail);
    if (rc.rule == Rule::Relevance) relevance_sound = ok;
    passed += ok;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + std::string(rule_name(rc.rule)) + ": " + detail);
  }

  // Ordering p(a|c) < p(a|b) on the chain a -> b -> c.
  auto chain = graph_from("a -> b.\nb -> c.");
  Closure cc = close(chain);
  StrengthFact f{prop(chain, "a"), prop(chain, "b"), prop(chain, "c")};
  bool ordering_ok = false;
  if (const Derivation* d = cc.find(f); d && d->rule == Rule::Dilution) {
    auto r = check_dilution(chain, f, 1000, 0);
    ordering_ok = r.violations.empty() && !r.infeasible && r.seeds_run == 1000;
    lines.push_back(std::string(ordering_ok ? "ok   " : "FAIL ") + render(chain, f) + ": " +
                    std::to_string(1000 - r.violations.size()) + "/1000");
  } else {
    lines.push_back("FAIL ordering " + render(chain, f) + " not derived by Dilution");
  }
  double secs = seconds_since(t0);
  bool pass = passed == cases.size() && ordering_ok && secs < 60.0;
  report(2, pass, "rule soundness on minimal graphs",
         std::to_string(passed) + "/" + std::to_string(cases.size()) + " rules, ordering " +
             (ordering_ok ? "holds" : "fails") + ", " + std::to_string(secs) + " s < 60 s");
  for (const auto& l : lines) note(l);
}

// 3. Non-derivability witnesses

void witnesses() {
  struct Case {
    const char* graph;
    const char* query;
  };
  const Case cases[] = {{"birds.igr", "conf(fly, emu)?"}, {"nixon.igr", "conf(hawk, quaker & republican)?"}};
  std::size_t found = 0;
  std::vector<std::string> lines;
  for (const auto& c : cases) {
    auto g = example(c.graph);
    auto q = parse_or_throw(g, c.query);
    ConfStatement s{q.subject, q.evidence};
    auto w = find_counterexample(g, s, 10000, 42);
    // Independent recheck of the witness.
    bool ok = w && ref_consistent(g, w->distribution, 1e-3) &&
              ref_conditional(g, w->distribution, s.subject, s.evidence) <=
                  ref_probability(g, w->distribution, s.subject) + 1e-9;
    found += ok;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + c.graph + " " + render(g, s) +
                    (w ? ": seed " + std::to_string(w->seed) + ", p(s|e)=" + std::to_string(w->p_cond) +
                             " <= p(s)=" + std::to_string(w->p_prior)
                       : ": no witness"));
  }
  report(3, found == 2, "non-derivability witnesses within 10000 samples", std::to_string(found) + "/2 found");
  for (const auto& l : lines) note(l);
}

// 4. d-separation agreement and numeric independence

void dsep_agreement() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  std::uniform_real_distribution<double> density(0.05, 0.7);
  std::size_t triples = 0, disagreements = 0;
  for (int iter = 0; iter < 200; ++iter) {
    auto g = random_dag(rng, size(rng), density(rng));
    PathEnumerator ref(g);
    const EventId n = static_cast<EventId>(g.event_count());
    for (EventId x = 0; x < n; ++x)
      for (EventId y = 0; y < n; ++y) {
        if (x == y) continue;
        std::vector<EventId> rest;
        for (EventId v = 0; v < n; ++v)
          if (v != x && v != y) rest.push_back(v);
        for (std::uint32_t bits = 0; bits < (1u << rest.size()); ++bits) {
          std::vector<EventId> z;
          for (std::size_t k = 0; k < rest.size(); ++k)
            if (bits >> k & 1u) z.push_back(rest[k]);
          ++triples;
          if (d_separated(g, {{x}, {y}, z}) != ref.separated({x}, {y}, z)) ++disagreements;
        }
      }
  }

  std::size_t checked = 0, numeric_fail = 0;
  double worst = 0;
  std::uniform_int_distribution<std::size_t> small(2, 6);
  for (int iter = 0; iter < 60; ++iter) {
    auto g = random_dag(rng, small(rng), 0.4);
    auto d = sample_factorized(g, rng);
    const EventId n = static_cast<EventId>(g.event_count());
    for (EventId x = 0; x < n; ++x)
      for (EventId y = x + 1; y < n; ++y) {
        std::vector<EventId> rest;
        for (EventId v = 0; v < n; ++v)
          if (v != x && v != y) rest.push_back(v);
        for (std::uint32_t bits = 0; bits < (1u << rest.size()); ++bits) {
          std::vector<EventId> z;
          for (std::size_t k = 0; k < rest.size(); ++k)
            if (bits >> k & 1u) z.push_back(rest[k]);
          if (!d_separated(g, {{x}, {y}, z})) continue;
          ++checked;
          bool bad = false;
          for (std::uint32_t zv = 0; zv < (1u << z.size()); ++zv) {
            std::vector<Literal> zl;
            for (std::size_t k = 0; k < z.size(); ++k) zl.push_back(Literal{z[k], zv >> k & 1u, false});
            auto zp = *Proposition::conjoin(zl);
            for (OutcomeIndex xo = 0; xo < 2; ++xo)
              for (OutcomeIndex yo = 0; yo < 2; ++yo) {
                Proposition xp(Literal{x, xo, false});
                Proposition yp(Literal{y, yo, false});
                // p(x, y | z) = p(x | z) p(y | z)
                auto xyz = *Proposition::conjoin(*Proposition::conjoin(xp, yp), zp);
                auto xz = *Proposition::conjoin(xp, zp);
                auto yz = *Proposition::conjoin(yp, zp);
                double pz = z.empty() ? 1.0 : ref_probability(g, d, zp);
                double lhs = ref_probability(g, d, xyz) / pz;
                double rhs = (ref_probability(g, d, xz) / pz) * (ref_probability(g, d, yz) / pz);
                worst = std::max(worst, std::abs(lhs - rhs));
                if (std::abs(lhs - rhs) > 1e-6) bad = true;
              }
          }
          numeric_fail += bad;
        }
      }
  }
  double secs = seconds_since(t0);
  report(4, disagreements == 0 && numeric_fail == 0 && checked > 0, "d-separation oracle agreement",
         std::to_string(triples) + " triples on 200 DAGs, " + std::to_string(disagreements) + " disagreements; " +
             std::to_string(checked) + " separated triples numerically checked, max deviation " +
             sci(worst) + " (tol 1e-6); " + std::to_string(secs) + " s");
}

// 5. Closure determinism under shuffled work-lists

bool same_closure(const Closure& a, const Closure& b) {
  if (a.statements().size() != b.statements().size() || a.strength_facts().size() != b.strength_facts().size())
    return false;
  for (auto ia = a.statements().begin(), ib = b.statements().begin(); ia != a.statements().end(); ++ia, ++ib)
    if (!(ia->first == ib->first) || ia->second.key() != ib->second.key()) return false;
  for (auto ia = a.strength_facts().begin(), ib = b.strength_facts().begin(); ia != a.strength_facts().end(); ++ia, ++ib)
    if (!(ia->first == ib->first) || ia->second.key() != ib->second.key()) return false;
  return true;
}

void determinism() {
  std::size_t same = 0, total = 0;
  std::string detail;
  for (const auto& [name, body] : kBundledExamples) {
    auto g = graph_from(body);
    Closure plain = close(g);
    bool ok = true;
    for (std::uint64_t seed : {1u, 2u, 977u}) {
      EngineOptions o;
      o.shuffle_seed = seed;
      ok = ok && same_closure(plain, close(g, o));
    }
    ++total;
    same += ok;
    detail += std::string(name) + "=" + std::to_string(plain.statements().size()) + (ok ? " " : "(differs) ");
  }
  report(5, same == total, "closure determinism under shuffles",
         std::to_string(same) + "/" + std::to_string(total) + " graphs identical; " + detail);
}

// 6. DSL round trip

void round_trip() {
  std::size_t ok = 0, total = 0;
  auto check = [&](const InferenceGraph& g) {
    ++total;
    auto back = parse_graph(serialize(g));
    if (back.ok() && structurally_equal(g, *back.graph)) ++ok;
  };
  std::size_t files = 0;
  for (const auto& [name, body] : kBundledExamples) {
    check(graph_from(body));
    ++files;
  }
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) check(random_valid_graph(rng));
  report(6, ok == total, "DSL round trip",
         std::to_string(ok) + "/" + std::to_string(total) + " graphs (" + std::to_string(files) +
             " example files + 100 random)");
}

// 7. Relevance rule adjudication

void relevance_adjudication() {
  EngineOptions defaults;
  bool consistent = relevance_sound == defaults.enable_relevance;
  report(7, consistent, "relevance rule adjudication",
         relevance_sound ? "minimal graph clean over 1000 samples; rule enabled by default"
                         : "counterexample found; rule must be disabled by default");
}

void lenient_info() {
  auto g = example("nixon.igr");
  EngineOptions o;
  o.pivots = PivotPolicy::Lenient;
  Closure lenient = close(g, o);
  auto s = conf(g, "political", "quaker");
  Verdict v = query(lenient, s.subject, s.evidence);
  auto w = find_counterexample(g, s, 10000, 42);
  std::printf("[INFO] nixon conf(political, quaker): lenient pivots give %s%s; oracle %s\n",
              verdict_name(v.kind).data(), v.proof ? (" via " + std::string(rule_name(v.proof->rule))).c_str() : "",
              w ? ("witness at seed " + std::to_string(w->seed) + ": p(political|quaker)=" +
                   std::to_string(w->p_cond) + " <= p(political)=" + std::to_string(w->p_prior))
                      .c_str()
                : "found no witness");
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  golden_table();
  rule_soundness();
  witnesses();
  dsep_agreement();
  determinism();
  round_trip();
  relevance_adjudication();
  lenient_info();
  std::printf("%d criteria failed; total %.2f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
