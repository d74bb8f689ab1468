#pragma once

// Text format for inference graphs (.igr) and confirmation queries.
//
//   # comment
//   event stance { hawk, dove }.      open event: gains an "other" outcome
//   event sex { male, female } closed.
//   quaker -> dove.                   prob-pos      emu => bird.   logic-pos
//   emu -/> fly.                      prob-neg      x =/> y.       logic-neg
//
// A bare name not bound to any outcome declares a binary event of that name.

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "confgraph/graph.hpp"

namespace confgraph {

struct SourceSpan {
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based, in code points
  std::size_t length = 1;
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  SourceSpan span;
  Severity severity = Severity::Error;
  std::string message;
};

inline std::string format_diagnostic(const ParseDiagnostic& d, std::string_view source_name = "<input>") {
  return std::string(source_name) + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) +
         ": " + (d.severity == Severity::Error ? "error" : "warning") + ": " + d.message;
}

namespace dsl {

enum class Tok { Name, LBrace, RBrace, Comma, Dot, Bang, Amp, LParen, RParen, Question, Arrow, Unknown, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

inline bool name_start(char c) { return c >= 'a' && c <= 'z'; }
inline bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-';
}
inline bool operator_char(char c) { return std::string_view("-=/<>~|*+%^:;@$").find(c) != std::string_view::npos; }

inline std::optional<LinkKind> arrow_kind(std::string_view s) {
  if (s == "->") return LinkKind::ProbPos;
  if (s == "=>") return LinkKind::LogicPos;
  if (s == "-/>") return LinkKind::ProbNeg;
  if (s == "=/>") return LinkKind::LogicNeg;
  return std::nullopt;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", {line_, column_, 1}});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        column_ = 1;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        advance();
      } else {
        return;
      }
    }
  }

  // Moves one byte; columns count code points, so continuation bytes are free.
  void advance() {
    if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) ++column_;
    ++pos_;
  }

  Token take(Tok kind, std::size_t start, std::size_t start_col) {
    return {kind, std::string(text_.substr(start, pos_ - start)), {line_, start_col, column_ - start_col}};
  }

  Token next() {
    const std::size_t start = pos_, col = column_;
    const char c = text_[pos_];
    if (name_start(c)) {
      advance();
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (d == '-') {
          // "-" belongs to the name only when another name character follows.
          if (pos_ + 1 < text_.size() && name_char(text_[pos_ + 1]) && text_[pos_ + 1] != '-') {
            advance();
            continue;
          }
          break;
        }
        if (!name_char(d)) break;
        advance();
      }
      return take(Tok::Name, start, col);
    }
    if (operator_char(c)) {
      while (pos_ < text_.size() && operator_char(text_[pos_])) advance();
      Token t = take(Tok::Arrow, start, col);
      if (!arrow_kind(t.text)) t.kind = Tok::Unknown;
      return t;
    }
    static constexpr std::pair<char, Tok> singles[] = {
        {'{', Tok::LBrace}, {'}', Tok::RBrace}, {',', Tok::Comma},  {'.', Tok::Dot},
        {'!', Tok::Bang},   {'&', Tok::Amp},    {'(', Tok::LParen}, {')', Tok::RParen},
        {'?', Tok::Question}};
    for (auto [ch, kind] : singles) {
      if (c == ch) {
        advance();
        return take(kind, start, col);
      }
    }
    advance();
    while (pos_ < text_.size() && (static_cast<unsigned char>(text_[pos_]) & 0xC0) == 0x80) advance();
    return take(Tok::Unknown, start, col);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

inline std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

struct LiteralSyntax {
  bool negated = false;
  Token name;
  SourceSpan span;  // covers the "!" when present
};

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  const Token& take() {
    const Token& t = peek();
    if (i_ < toks_.size() - 1) ++i_;
    return t;
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool done() const { return at(Tok::End); }

  /// Skips past the next "." (or to the end).
  void recover() {
    while (!done()) {
      if (take().kind == Tok::Dot) return;
    }
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace dsl

struct ParseResult {
  std::optional<InferenceGraph> graph;  // set only when there are no errors
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const noexcept { return graph.has_value(); }
  std::size_t error_count() const {
    return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                  [](const auto& d) { return d.severity == Severity::Error; }));
  }
};

namespace detail {

class GraphParser {
 public:
  explicit GraphParser(std::string_view text) : cur_(dsl::Lexer(text).run()) {}

  ParseResult run() {
    while (!cur_.done()) {
      if (!statement()) cur_.recover();
    }
    ParseResult r;
    r.diagnostics = std::move(diags_);
    if (std::none_of(r.diagnostics.begin(), r.diagnostics.end(),
                     [](const auto& d) { return d.severity == Severity::Error; }))
      r.graph = std::move(g_);
    return r;
  }

 private:
  using Tok = dsl::Tok;

  bool error(const SourceSpan& span, std::string msg) {
    diags_.push_back({span, Severity::Error, std::move(msg)});
    return false;
  }

  // For errors found after the statement's "." was consumed: no resync needed.
  bool semantic(const SourceSpan& span, std::string msg) {
    error(span, std::move(msg));
    return true;
  }

  bool unexpected(const dsl::Token& t, std::string_view wanted) {
    if (t.kind == Tok::Unknown && dsl::operator_char(t.text.front()))
      return error(t.span, "unknown arrow '" + t.text + "'");
    if (t.kind == Tok::Unknown) return error(t.span, "unexpected character '" + t.text + "'");
    return error(t.span, "expected " + std::string(wanted) + ", found " + dsl::describe(t));
  }

  bool expect(Tok kind, std::string_view wanted, dsl::Token* out = nullptr) {
    if (!cur_.at(kind)) return unexpected(cur_.peek(), wanted);
    const dsl::Token& t = cur_.take();
    if (out) *out = t;
    return true;
  }

  bool statement() {
    if (cur_.at(Tok::Name) && cur_.peek().text == "event" && cur_.peek(1).kind == Tok::Name) return event_decl();
    return link_stmt();
  }

  bool event_decl() {
    cur_.take();
    dsl::Token name;
    expect(Tok::Name, "event name", &name);
    if (!expect(Tok::LBrace, "'{'")) return false;
    std::vector<dsl::Token> outcomes;
    for (;;) {
      dsl::Token o;
      if (!expect(Tok::Name, "outcome name", &o)) return false;
      outcomes.push_back(o);
      if (cur_.at(Tok::Comma)) {
        cur_.take();
        continue;
      }
      if (!expect(Tok::RBrace, "',' or '}'")) return false;
      break;
    }
    std::optional<dsl::Token> closed;
    if (cur_.at(Tok::Name) && cur_.peek().text == "closed") closed = cur_.take();
    if (!expect(Tok::Dot, closed ? "'.'" : "'closed' or '.'")) return false;

    if (g_.find_event(name.text)) return semantic(name.span, "duplicate event '" + name.text + "'");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      for (std::size_t j = 0; j < i; ++j)
        if (outcomes[j].text == o.text) return semantic(o.span, "outcome '" + o.text + "' listed twice");
      if (g_.find_outcome(o.text))
        return semantic(o.span, "outcome name '" + o.text + "' is already bound to another event");
      names.push_back(o.text);
    }
    if (closed && outcomes.size() == 1)
      diags_.push_back({closed->span, Severity::Warning, "'closed' has no effect on a single-outcome event"});
    try {
      g_.add_event(name.text, std::move(names), closed.has_value());
    } catch (const GraphError& e) {
      return semantic(name.span, e.what());
    }
    return true;
  }

  bool literal(dsl::LiteralSyntax& out) {
    const SourceSpan start = cur_.peek().span;
    out.negated = false;
    if (cur_.at(Tok::Bang)) {
      cur_.take();
      out.negated = true;
    }
    if (!expect(Tok::Name, "outcome name", &out.name)) return false;
    out.span = out.name.span;
    if (out.negated && start.line == out.name.span.line) {
      out.span = start;
      out.span.length = out.name.span.column + out.name.span.length - start.column;
    }
    return true;
  }

  std::optional<Literal> resolve(const dsl::LiteralSyntax& s) {
    if (auto l = g_.find_outcome(s.name.text)) return g_.literal(l->event, l->outcome, s.negated);
    if (g_.find_event(s.name.text)) {
      error(s.name.span, "'" + s.name.text + "' is an event, not an outcome; name one of its outcomes");
      return std::nullopt;
    }
    const auto& ev = g_.add_binary_event(s.name.text);
    return g_.literal(ev.id, 0, s.negated);
  }

  bool link_stmt() {
    dsl::LiteralSyntax src, tgt;
    if (!literal(src)) return false;
    const dsl::Token arrow = cur_.peek();
    if (arrow.kind != Tok::Arrow) return unexpected(arrow, "an arrow (->, =>, -/>, =/>)");
    cur_.take();
    if (!literal(tgt)) return false;
    if (!expect(Tok::Dot, "'.'")) return false;

    auto s = resolve(src);
    if (!s) return true;
    auto t = resolve(tgt);
    if (!t) return true;
    try {
      g_.add_link(*s, *t, *dsl::arrow_kind(arrow.text));
    } catch (const GraphError& e) {
      return semantic(arrow.span, e.what());
    }
    return true;
  }

  dsl::Cursor cur_;
  InferenceGraph g_;
  std::vector<ParseDiagnostic> diags_;
};

}  // namespace detail

/// Parses a whole graph file. Every failure yields at least one diagnostic;
/// the graph is returned only when no errors were found.
inline ParseResult parse_graph(std::string_view text) { return detail::GraphParser(text).run(); }

// ---------------------------------------------------------------------------
// Queries

struct ParsedQuery {
  Proposition subject;
  Proposition evidence;
};

struct QueryParseResult {
  std::optional<ParsedQuery> query;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const noexcept { return query.has_value(); }
};

namespace detail {

class QueryParser {
 public:
  QueryParser(std::string_view text, const InferenceGraph& g) : cur_(dsl::Lexer(text).run()), g_(g) {}

  QueryParseResult run() {
    QueryParseResult r;
    auto q = parse();
    r.diagnostics = std::move(diags_);
    if (q && r.diagnostics.empty()) r.query = std::move(q);
    if (!r.query && r.diagnostics.empty()) r.diagnostics.push_back({cur_.peek().span, Severity::Error, "malformed query"});
    return r;
  }

 private:
  using Tok = dsl::Tok;

  std::nullopt_t error(const SourceSpan& span, std::string msg) {
    diags_.push_back({span, Severity::Error, std::move(msg)});
    return std::nullopt;
  }

  bool expect(Tok kind, std::string_view wanted, dsl::Token* out = nullptr) {
    const dsl::Token& t = cur_.peek();
    if (t.kind != kind) {
      error(t.span, "expected " + std::string(wanted) + ", found " + dsl::describe(t));
      return false;
    }
    cur_.take();
    if (out) *out = t;
    return true;
  }

  std::optional<std::pair<Proposition, SourceSpan>> prop() {
    std::vector<Literal> lits;
    const SourceSpan start = cur_.peek().span;
    SourceSpan end = start;
    for (;;) {
      bool neg = false;
      if (cur_.at(Tok::Bang)) {
        cur_.take();
        neg = true;
      }
      dsl::Token name;
      if (!expect(Tok::Name, "outcome name", &name)) return std::nullopt;
      end = name.span;
      auto l = g_.find_outcome(name.text);
      if (!l) return error(name.span, "unknown outcome '" + name.text + "'");
      Literal lit = g_.literal(l->event, l->outcome, neg);
      for (const auto& prev : lits)
        if (prev.event == lit.event)
          return error(name.span, "'" + name.text + "' repeats an event already in this conjunction");
      lits.push_back(lit);
      if (!cur_.at(Tok::Amp)) break;
      cur_.take();
    }
    SourceSpan span = start;
    if (end.line == start.line) span.length = end.column + end.length - start.column;
    return std::make_pair(*Proposition::conjoin(lits), span);
  }

  std::optional<ParsedQuery> parse() {
    dsl::Token head;
    if (!expect(Tok::Name, "'conf'", &head)) return std::nullopt;
    if (head.text != "conf") return error(head.span, "expected 'conf', found '" + head.text + "'");
    if (!expect(Tok::LParen, "'('")) return std::nullopt;
    auto subject = prop();
    if (!subject) return std::nullopt;
    if (!expect(Tok::Comma, "','")) return std::nullopt;
    auto evidence = prop();
    if (!evidence) return std::nullopt;
    if (!expect(Tok::RParen, "')'")) return std::nullopt;
    if (cur_.at(Tok::Question)) cur_.take();
    if (!cur_.done()) return error(cur_.peek().span, "unexpected " + dsl::describe(cur_.peek()) + " after query");
    if (subject->first.shares_event(evidence->first))
      return error(evidence->second, "subject and evidence overlap on an event");
    return ParsedQuery{std::move(subject->first), std::move(evidence->first)};
  }

  dsl::Cursor cur_;
  const InferenceGraph& g_;
  std::vector<ParseDiagnostic> diags_;
};

}  // namespace detail

/// `conf(<prop>, <prop>)` with an optional trailing `?`, where a prop is
/// literals joined by `&`. Names must already be outcomes of `g`.
inline QueryParseResult parse_query(std::string_view text, const InferenceGraph& g) {
  return detail::QueryParser(text, g).run();
}

// ---------------------------------------------------------------------------
// Serialization

/// Declarations first (events sorted by name), then links sorted by
/// (source, target, kind). Binary events named after their only outcome are
/// left implicit unless no link mentions them.
inline std::string serialize(const InferenceGraph& g) {
  std::vector<char> linked(g.event_count(), 0);
  for (const auto& l : g.links()) linked[l.source.event] = linked[l.target.event] = 1;

  std::vector<const EventVariable*> events;
  for (const auto& ev : g.events()) events.push_back(&ev);
  std::sort(events.begin(), events.end(), [](auto* a, auto* b) { return a->name < b->name; });

  std::string out;
  for (const EventVariable* ev : events) {
    bool implicit = ev->extra == ExtraOutcome::Complement && ev->outcomes.front() == ev->name;
    if (implicit && linked[ev->id]) continue;
    out += "event " + ev->name + " { ";
    for (std::size_t i = 0; i < ev->outcomes.size(); ++i) {
      if (i) out += ", ";
      out += ev->outcomes[i];
    }
    out += " }";
    if (ev->extra == ExtraOutcome::None) out += " closed";
    out += ".\n";
  }

  std::vector<std::tuple<std::string, std::string, LinkKind>> links;
  for (const auto& l : g.links()) links.emplace_back(g.ascii(l.source), g.ascii(l.target), l.kind);
  std::sort(links.begin(), links.end());
  for (const auto& [s, t, k] : links) out += s + " " + std::string(arrow(k)) + " " + t + ".\n";
  return out;
}

}  // namespace confgraph
