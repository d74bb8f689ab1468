// confgraph: validate inference graphs, derive closures, answer confirmation
// queries, and check results against sampled distributions.
//
// Exit codes: 0 success / Confirmed / witness found, 1 Unknown / not found,
// 2 Disconfirmed, 3 input error, 4 soundness violation.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "confgraph/bundled_examples.hpp"
#include "confgraph/confgraph.hpp"
#include "confgraph/json_output.hpp"

namespace {

using namespace confgraph;

enum Exit : int { kOk = 0, kUnknown = 1, kDisconfirmed = 2, kInputError = 3, kViolation = 4 };

struct InputError {
  std::string message;
};

struct Loaded {
  std::string name;
  InferenceGraph graph;
};

std::string read_source(const std::string& path, std::string& display) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_regular_file(path, ec)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError{"cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    display = path;
    return ss.str();
  }
  if (fs::exists(path, ec)) throw InputError{"'" + path + "' is not a regular file"};
  std::string base = fs::path(path).filename().string();
  for (const auto& [name, body] : kBundledExamples) {
    if (name == base || name == base + ".igr") {
      display = std::string(name);
      return std::string(body);
    }
  }
  throw InputError{"no such file '" + path + "'"};
}

Loaded load_graph(const std::string& path) {
  Loaded out;
  std::string text = read_source(path, out.name);
  ParseResult r = parse_graph(text);
  for (const auto& d : r.diagnostics) std::cerr << format_diagnostic(d, out.name) << "\n";
  if (!r.ok()) throw InputError{"'" + out.name + "' has " + std::to_string(r.error_count()) + " error(s)"};
  out.graph = std::move(*r.graph);
  return out;
}

ParsedQuery load_query(const InferenceGraph& g, const std::string& text) {
  QueryParseResult r = parse_query(text, g);
  for (const auto& d : r.diagnostics) std::cerr << format_diagnostic(d, "query") << "\n";
  if (!r.ok()) throw InputError{"malformed query"};
  return *r.query;
}

struct Common {
  std::size_t arity = 0;  // 0: environment or default
  bool lenient = false;
  bool no_relevance = false;
  bool json = false;
};

EngineOptions engine_options(const Common& c) {
  EngineOptions o;
  o.max_arity = 2;
  if (const char* env = std::getenv("CONFGRAPH_ARITY"); env && *env) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw InputError{"CONFGRAPH_ARITY must be a positive integer"};
    o.max_arity = static_cast<std::size_t>(v);
  }
  if (c.arity > 0) o.max_arity = c.arity;
  o.pivots = c.lenient ? PivotPolicy::Lenient : PivotPolicy::Exact;
  o.enable_relevance = !c.no_relevance;
  return o;
}

std::size_t display_width(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_validate(const std::string& file, const Common& c) {
  std::string display;
  std::string text = read_source(file, display);
  ParseResult r = parse_graph(text);
  ValidationReport report;
  if (r.ok()) report = validate(*r.graph);
  if (c.json) {
    nlohmann::json j = to_json(report);
    j["valid"] = r.ok() && report.ok();
    j["graph"] = display;
    j["diagnostics"] = nlohmann::json::array();
    for (const auto& d : r.diagnostics)
      j["diagnostics"].push_back({{"line", d.span.line},
                                  {"column", d.span.column},
                                  {"length", d.span.length},
                                  {"severity", d.severity == Severity::Error ? "error" : "warning"},
                                  {"message", d.message}});
    print_json(j);
  } else {
    for (const auto& d : r.diagnostics) std::cout << format_diagnostic(d, display) << "\n";
    for (const auto& f : report.findings) std::cout << display << ": " << finding_name(f.kind) << ": " << f.message << "\n";
    if (r.ok() && report.ok())
      std::cout << display << ": valid (" << r.graph->event_count() << " events, " << r.graph->links().size()
                << " links)\n";
  }
  return r.ok() && report.ok() ? kOk : kInputError;
}

int cmd_derive(const std::string& file, const Common& c) {
  Loaded in = load_graph(file);
  Closure closure = close(in.graph, engine_options(c));
  if (c.json) {
    nlohmann::json j = to_json(closure);
    j["graph"] = in.name;
    print_json(j);
    return kOk;
  }
  struct Row {
    std::size_t round;
    std::string text, summary;
  };
  std::vector<Row> rows;
  for (const auto& [s, d] : closure.statements()) rows.push_back({d.round, render(in.graph, s), summarize(in.graph, d)});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return std::tie(a.round, a.text) < std::tie(b.round, b.text); });
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, display_width(r.text));
  for (const auto& r : rows)
    std::cout << r.text << std::string(width + 2 - display_width(r.text), ' ') << r.summary << "\n";
  if (!closure.strength_facts().empty()) {
    std::cout << "\n";
    std::vector<Row> facts;
    for (const auto& [f, d] : closure.strength_facts()) facts.push_back({d.round, render(in.graph, f), summarize(in.graph, d)});
    std::sort(facts.begin(), facts.end(), [](const Row& a, const Row& b) { return a.text < b.text; });
    for (const auto& r : facts) std::cout << r.text << "  " << r.summary << "\n";
  }
  return kOk;
}

int cmd_query(const std::string& file, const std::string& text, bool proof, const Common& c) {
  Loaded in = load_graph(file);
  ParsedQuery q = load_query(in.graph, text);
  Closure closure = close(in.graph, engine_options(c));
  Verdict v = query(closure, q.subject, q.evidence);
  if (c.json) {
    print_json(to_json(in.graph, v));
  } else {
    std::cout << verdict_name(v.kind) << "\n";
    if (proof && v.kind != VerdictKind::Unknown) std::cout << explain(in.graph, v);
  }
  switch (v.kind) {
    case VerdictKind::Confirmed: return kOk;
    case VerdictKind::Disconfirmed: return kDisconfirmed;
    case VerdictKind::Unknown: return kUnknown;
  }
  return kUnknown;
}

int cmd_verify(const std::string& file, std::size_t samples, std::uint64_t seed, double margin, const Common& c) {
  Loaded in = load_graph(file);
  if (!(margin > 0)) throw InputError{"--margin must be positive"};
  (void)empty_joint(in.graph);
  Closure closure = close(in.graph, engine_options(c));
  VerifyOptions opts;
  opts.sampler.margin = margin;
  SoundnessReport r = verify_closure(closure, samples, seed, opts, in.name);
  if (c.json) {
    print_json(to_json(r));
  } else {
    std::cout << "graph: " << r.graph << "\n"
              << "closure: " << r.statements << " statements, " << r.strength_facts << " orderings\n"
              << "samples: " << r.seeds_run << " of " << r.n_samples << " (seeds " << seed << ".."
              << seed + (samples ? samples - 1 : 0) << ")\n"
              << "violations: " << r.violations.size() << "\n";
    for (const auto& v : r.violations)
      std::cout << "  seed " << v.seed << ": " << v.statement << "  (" << v.p_cond << " vs " << v.p_prior << ")\n";
  }
  if (r.infeasible) {
    std::cerr << "error: infeasible: " << r.infeasible->reason << "\n";
    return kInputError;
  }
  return r.violations.empty() ? kOk : kViolation;
}

int cmd_counterexample(const std::string& file, const std::string& text, std::size_t samples, std::uint64_t seed,
                       double margin, const Common& c) {
  Loaded in = load_graph(file);
  ParsedQuery q = load_query(in.graph, text);
  if (!(margin > 0)) throw InputError{"--margin must be positive"};
  VerifyOptions opts;
  opts.sampler.margin = margin;
  ConfStatement s{q.subject, q.evidence};
  auto w = find_counterexample(in.graph, s, samples, seed, opts);
  const std::string subj = in.graph.unicode(s.subject), ev = in.graph.unicode(s.evidence);
  if (c.json) {
    nlohmann::json j;
    j["graph"] = in.name;
    j["statement"] = render(in.graph, s);
    j["found"] = w.has_value();
    j["samples"] = samples;
    j["first_seed"] = seed;
    if (w) {
      j["seed"] = w->seed;
      j["p_cond"] = w->p_cond;
      j["p_prior"] = w->p_prior;
      auto& m = j["marginals"] = nlohmann::json::object();
      for (const auto& e : in.graph.events())
        for (OutcomeIndex o = 0; o < e.arity(); ++o)
          m[in.graph.ascii(Literal{e.id, o, false})] = w->distribution.marginal(e.id, o);
    }
    print_json(j);
  } else if (w) {
    std::cout << "witness at seed " << w->seed << " against " << render(in.graph, s) << "\n"
              << "  p(" << subj << " | " << ev << ") = " << w->p_cond << "\n"
              << "  p(" << subj << ") = " << w->p_prior << "\n";
  } else {
    std::cout << "NotFound: " << render(in.graph, s) << " held in all " << samples << " samples\n";
  }
  return w ? kOk : kUnknown;
}

int cmd_examples(const std::string& name) {
  if (name.empty()) {
    for (const auto& [file, body] : kBundledExamples) std::cout << file << "\n";
    return kOk;
  }
  for (const auto& [file, body] : kBundledExamples) {
    if (file == name || file == name + ".igr") {
      std::cout << body;
      return kOk;
    }
  }
  throw InputError{"no bundled example '" + name + "'"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qualitative confirmation reasoning over inference graphs"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("--lenient-pivots", common.lenient,
               "Treat a negated outcome of a multi-outcome event as an observed pivot");
  app.add_flag("--no-relevance", common.no_relevance, "Disable the relevance rule");

  std::string file, text, example;
  bool proof = false;
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  double margin = 1e-3;

  auto arity_opt = [&](CLI::App* sub) {
    sub->add_option("--arity", common.arity, "Largest conjunction size (default 2, or CONFGRAPH_ARITY)")
        ->check(CLI::PositiveNumber);
  };
  auto json_opt = [&](CLI::App* sub) { sub->add_flag("--json", common.json, "JSON output"); };

  auto* validate_cmd = app.add_subcommand("validate", "Check a graph file");
  validate_cmd->add_option("graph", file, "Graph file (.igr)")->required();
  json_opt(validate_cmd);

  auto* derive_cmd = app.add_subcommand("derive", "List every derived statement with a one-line proof");
  derive_cmd->add_option("graph", file, "Graph file (.igr)")->required();
  arity_opt(derive_cmd);
  json_opt(derive_cmd);

  auto* query_cmd = app.add_subcommand("query", "Answer a confirmation query");
  query_cmd->add_option("graph", file, "Graph file (.igr)")->required();
  query_cmd->add_option("query", text, "Query, e.g. \"conf(fly, bird)?\"")->required();
  query_cmd->add_flag("--proof", proof, "Print the proof tree");
  arity_opt(query_cmd);
  json_opt(query_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Check the closure against sampled distributions");
  verify_cmd->add_option("graph", file, "Graph file (.igr)")->required();
  verify_cmd->add_option("--samples", samples, "Number of distributions (default 1000)");
  verify_cmd->add_option("--seed", seed, "First seed (default 42)");
  verify_cmd->add_option("--margin", margin, "Slack on sampled link constraints (default 1e-3)");
  arity_opt(verify_cmd);
  json_opt(verify_cmd);

  auto* cx_cmd = app.add_subcommand("counterexample", "Search for a distribution refuting a statement");
  cx_cmd->add_option("graph", file, "Graph file (.igr)")->required();
  cx_cmd->add_option("query", text, "Statement, e.g. \"conf(fly, emu)?\"")->required();
  cx_cmd->add_option("--samples", samples, "Number of distributions (default 1000)");
  cx_cmd->add_option("--seed", seed, "First seed (default 42)");
  cx_cmd->add_option("--margin", margin, "Slack on sampled link constraints (default 1e-3)");
  json_opt(cx_cmd);

  auto* examples_cmd = app.add_subcommand("examples", "List bundled example graphs, or print one");
  examples_cmd->add_option("name", example, "Example to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*validate_cmd) return cmd_validate(file, common);
    if (*derive_cmd) return cmd_derive(file, common);
    if (*query_cmd) return cmd_query(file, text, proof, common);
    if (*verify_cmd) return cmd_verify(file, samples, seed, margin, common);
    if (*cx_cmd) return cmd_counterexample(file, text, samples, seed, margin, common);
    if (*examples_cmd) return cmd_examples(example);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kInputError;
  } catch (const OracleError& e) {
    if (e.code() == OracleErrc::SizeLimit)
      std::cerr << "error: graph exceeds the oracle size limit: " << e.what() << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const QueryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
