//===----------------------------------------------------------------------===//
//
// Copyright 2026 The coopver authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
//===----------------------------------------------------------------------===//
//
// Single-pass translation from source text to a CFA. Each statement is
// compiled against the list of dangling edges that flow into it; the
// statement creates its start location, patches those edges to it and
// returns the edges that leave it.
//
//===----------------------------------------------------------------------===//

#include "coopver/cfa.hpp"
#include "lexer.hpp"

#include <algorithm>

namespace coopver {

using detail::Tok;
using detail::Token;
using detail::TokenStream;
using detail::is_keyword;

namespace {

using Pending = std::vector<int>;

bool is_type_word(std::string_view s) {
  return s == "unsigned" || s == "signed" || s == "int" || s == "char" || s == "short" ||
         s == "long" || s == "void" || s == "_Bool";
}

bool is_nondet_name(std::string_view s) {
  return s == "nondet" || s.substr(0, 18) == "__VERIFIER_nondet_";
}

bool is_error_call(std::string_view s) {
  return s == "verifier_error" || s == "__VERIFIER_error" || s == "reach_error";
}

bool is_error_label(std::string_view s) { return s == "Error" || s == "ERROR"; }

SourceSpan span_of(const Token &first, const Token &last) {
  return {first.line, first.col, last.end_line, last.end_col};
}

class Builder {
public:
  Builder(std::string_view text, const ParseOptions &opts)
      : text_(text), ts_(detail::tokenize(text)) {
    cfa_.path = opts.path;
    cfa_.symbols = SymbolTable(opts.width);
    cfa_.program_hash = sha256_hex(text);
  }

  Cfa build();

private:
  int new_loc(const Token &t) {
    cfa_.line_map.push_back(span_of(t, t));
    return static_cast<int>(cfa_.line_map.size()) - 1;
  }
  int add_edge(int src, Operation op, SourceSpan span, int dst = -1) {
    int id = static_cast<int>(cfa_.edges.size());
    cfa_.edges.push_back({id, src, dst, std::move(op), span});
    return id;
  }
  void patch(const Pending &pend, int loc) {
    for (int e : pend)
      cfa_.edges[e].dst = loc;
  }
  int start(const Token &t, const Pending &pend) {
    int loc = new_loc(t);
    patch(pend, loc);
    return loc;
  }
  void finish_span(int loc, const Token &first) {
    cfa_.line_map[loc] = span_of(first, ts_.previous());
  }

  int lookup(const Token &t) {
    auto id = cfa_.symbols.find(t.text);
    if (!id)
      ts_.fail_at(t, "use of undeclared variable '" + t.text + "'");
    return *id;
  }
  void check_vars(const ExprPtr &e, const Token &where) {
    for (const auto &v : free_vars(e))
      if (!cfa_.symbols.contains(v))
        ts_.fail_at(where, "use of undeclared variable '" + v + "'");
  }
  ExprPtr arith(const Token &where) {
    ExprPtr e = detail::as_arith(detail::parse_expression(ts_), where);
    check_vars(e, where);
    return e;
  }
  ExprPtr condition(const Token &where) {
    ExprPtr e = detail::parse_condition(ts_);
    check_vars(e, where);
    return e;
  }

  void function();
  Pending block_body(Pending pend);
  Pending statement(Pending pend);
  Pending declaration(Pending pend);
  Pending if_stmt(Pending pend);
  Pending while_stmt(Pending pend);
  Pending return_stmt(Pending pend);
  Pending labelled(Pending pend);
  Pending assert_stmt(Pending pend);
  Pending call_stmt(Pending pend);
  Pending update_stmt(Pending pend);
  Pending assignment(Pending pend, const Token &first, const Token &target);

  std::optional<EncodingStyle> error_branch_style(size_t begin, size_t end) const;
  void finalize();

  std::string_view text_;
  TokenStream ts_;
  Cfa cfa_;
  Pending returns_;
  bool seen_main_ = false;
};

Cfa Builder::build() {
  while (!ts_.at_end())
    function();
  if (!seen_main_)
    throw Error("program has no 'main' function");
  finalize();
  return std::move(cfa_);
}

void Builder::function() {
  const Token &first = ts_.peek();
  while (ts_.accept("extern") || ts_.accept("static") || ts_.accept("const")) {
  }
  bool typed = false;
  while (ts_.peek().kind == Tok::Ident && is_type_word(ts_.peek().text)) {
    ts_.next();
    typed = true;
  }
  if (!typed)
    ts_.fail_at(first, "expected a declaration but found '" + first.text + "'");
  const Token &name = ts_.next();
  if (name.kind != Tok::Ident || is_keyword(name.text))
    ts_.fail_at(name, "expected an identifier");
  if (!ts_.is("("))
    ts_.fail_at(name, "global variables are not supported");
  ts_.next();
  ts_.accept("void");
  if (!ts_.is(")"))
    ts_.fail("procedures with parameters are not supported");
  ts_.next();
  if (ts_.accept(";"))
    return; // prototype
  if (!ts_.is("{"))
    ts_.fail("expected '{' or ';' after procedure header");
  if (name.text != "main")
    ts_.fail_at(name, "only 'main' may be defined, found '" + name.text + "'");
  if (seen_main_)
    ts_.fail_at(name, "redefinition of 'main'");
  seen_main_ = true;
  ts_.next();
  Pending rest = block_body({});
  const Token &close = ts_.previous();
  cfa_.exit = new_loc(close);
  patch(rest, cfa_.exit);
  patch(returns_, cfa_.exit);
}

Pending Builder::block_body(Pending pend) {
  while (!ts_.is("}")) {
    if (ts_.at_end())
      ts_.fail("unexpected end of input, missing '}'");
    pend = statement(std::move(pend));
  }
  ts_.next();
  return pend;
}

Pending Builder::statement(Pending pend) {
  const Token &t = ts_.peek();
  if (ts_.accept("{"))
    return block_body(std::move(pend));
  if (ts_.accept(";"))
    return pend;
  if (ts_.is("++") || ts_.is("--"))
    return update_stmt(std::move(pend));
  if (t.kind != Tok::Ident)
    ts_.fail("expected a statement but found '" + t.text + "'");
  if (is_type_word(t.text))
    return declaration(std::move(pend));
  if (t.text == "if")
    return if_stmt(std::move(pend));
  if (t.text == "while")
    return while_stmt(std::move(pend));
  if (t.text == "return")
    return return_stmt(std::move(pend));
  if (t.text == "assert" && ts_.is("(", 1))
    return assert_stmt(std::move(pend));
  if (ts_.is(":", 1))
    return labelled(std::move(pend));
  if (ts_.is("(", 1))
    return call_stmt(std::move(pend));
  if (is_keyword(t.text))
    ts_.fail("unexpected keyword '" + t.text + "'");
  return update_stmt(std::move(pend));
}

Pending Builder::declaration(Pending pend) {
  bool is_signed = true;
  while (ts_.peek().kind == Tok::Ident && is_type_word(ts_.peek().text)) {
    if (ts_.peek().text == "unsigned")
      is_signed = false;
    ts_.next();
  }
  if (ts_.peek().kind == Tok::Ident && ts_.is("(", 1))
    ts_.fail("nested procedure definitions are not supported");
  for (;;) {
    const Token &name = ts_.next();
    if (name.kind != Tok::Ident || is_keyword(name.text))
      ts_.fail_at(name, "expected a variable name");
    try {
      cfa_.symbols.add(name.text, is_signed);
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      ts_.fail_at(name, e.what());
    }
    if (ts_.accept("="))
      pend = assignment(std::move(pend), name, name);
    if (ts_.accept(","))
      continue;
    ts_.expect(";");
    return pend;
  }
}

// Parses the right-hand side after `target =` and emits the edge.
Pending Builder::assignment(Pending pend, const Token &first, const Token &target) {
  int var = lookup(target);
  const Token &rhs = ts_.peek();
  if (rhs.kind == Tok::Ident && is_nondet_name(rhs.text) && ts_.is("(", 1)) {
    ts_.next();
    ts_.next();
    ts_.expect(")");
    int loc = start(first, pend);
    finish_span(loc, first);
    return {add_edge(loc, Operation::havoc(target.text, var), cfa_.line_map[loc])};
  }
  ExprPtr e = arith(rhs);
  int loc = start(first, pend);
  finish_span(loc, first);
  return {add_edge(loc, Operation::assign(target.text, var, e), cfa_.line_map[loc])};
}

// Assignments, compound assignments and increments.
Pending Builder::update_stmt(Pending pend) {
  const Token &first = ts_.peek();
  if (ts_.is("++") || ts_.is("--")) {
    bool inc = ts_.next().text == "++";
    const Token &target = ts_.next();
    if (target.kind != Tok::Ident)
      ts_.fail_at(target, "expected a variable after increment operator");
    int var = lookup(target);
    ts_.expect(";");
    ExprPtr e = Expr::binary(inc ? ExprKind::Add : ExprKind::Sub, Expr::var(target.text),
                             Expr::int_lit(1));
    int loc = start(first, pend);
    finish_span(loc, first);
    return {add_edge(loc, Operation::assign(target.text, var, e), cfa_.line_map[loc])};
  }
  const Token &target = ts_.next();
  int var = lookup(target);
  const Token &op = ts_.next();
  ExprPtr e;
  if (op.text == "=") {
    Pending out = assignment(std::move(pend), first, target);
    ts_.expect(";");
    return out;
  }
  if (op.text == "++" || op.text == "--") {
    e = Expr::binary(op.text == "++" ? ExprKind::Add : ExprKind::Sub, Expr::var(target.text),
                     Expr::int_lit(1));
  } else if (op.text == "+=" || op.text == "-=" || op.text == "*=" || op.text == "/=" ||
             op.text == "%=") {
    static const std::pair<std::string_view, ExprKind> kinds[] = {
        {"+=", ExprKind::Add}, {"-=", ExprKind::Sub}, {"*=", ExprKind::Mul},
        {"/=", ExprKind::Div}, {"%=", ExprKind::Rem}};
    ExprKind k = ExprKind::Add;
    for (const auto &[s, kind] : kinds)
      if (s == op.text)
        k = kind;
    e = Expr::binary(k, Expr::var(target.text), arith(ts_.peek()));
  } else {
    ts_.fail_at(op, "expected an assignment but found '" + op.text + "'");
  }
  ts_.expect(";");
  int loc = start(first, pend);
  finish_span(loc, first);
  return {add_edge(loc, Operation::assign(target.text, var, e), cfa_.line_map[loc])};
}

Pending Builder::if_stmt(Pending pend) {
  const Token &kw = ts_.next();
  ts_.expect("(");
  const Token &cstart = ts_.peek();
  ExprPtr c = condition(cstart);
  SourceSpan cspan = span_of(cstart, ts_.previous());
  ts_.expect(")");
  int loc = start(kw, pend);
  finish_span(loc, kw);
  int e_then = add_edge(loc, Operation::assume(c, true), cspan);
  int e_else = add_edge(loc, Operation::assume(mk_not(c), false), cspan);
  size_t then_begin = ts_.position();
  Pending out = statement({e_then});
  size_t then_end = ts_.position();
  if (ts_.accept("else")) {
    Pending other = statement({e_else});
    out.insert(out.end(), other.begin(), other.end());
    return out;
  }
  out.push_back(e_else);
  if (auto style = error_branch_style(then_begin, then_end)) {
    const Token &last = ts_.at(then_end - 1);
    ExprPtr phi = c->kind() == ExprKind::Not ? c->arg(0) : mk_not(c);
    cfa_.property_sites.push_back(
        {*style, loc, phi, kw.offset, last.end_offset, kw.line, last.end_line});
  }
  return out;
}

// Recognizes `{ Error: return [e]; }`, `{ Error: ; }` and `{ verifier_error(); }`
// (braces optional) as a property encoding.
std::optional<EncodingStyle> Builder::error_branch_style(size_t begin, size_t end) const {
  if (end <= begin)
    return std::nullopt;
  if (ts_.at(begin).text == "{" && ts_.at(end - 1).text == "}") {
    ++begin;
    --end;
  }
  auto text = [&](size_t i) -> std::string_view {
    return i < end ? std::string_view(ts_.at(i).text) : std::string_view();
  };
  if (is_error_call(text(begin)) && text(begin + 1) == "(" && text(begin + 2) == ")" &&
      text(begin + 3) == ";" && begin + 4 == end)
    return EncodingStyle::VerifierErrorCall;
  if (is_error_label(text(begin)) && text(begin + 1) == ":") {
    size_t i = begin + 2;
    if (text(i) == "return")
      while (i < end && text(i) != ";")
        ++i;
    if (text(i) == ";" && i + 1 == end)
      return EncodingStyle::ErrorLabel;
  }
  return std::nullopt;
}

Pending Builder::while_stmt(Pending pend) {
  const Token &kw = ts_.next();
  ts_.expect("(");
  const Token &cstart = ts_.peek();
  ExprPtr c = condition(cstart);
  SourceSpan cspan = span_of(cstart, ts_.previous());
  ts_.expect(")");
  int head = start(kw, pend);
  finish_span(head, kw);
  int e_in = add_edge(head, Operation::assume(c, true), cspan);
  int e_out = add_edge(head, Operation::assume(mk_not(c), false), cspan);
  Pending body = statement({e_in});
  patch(body, head);
  cfa_.loops.push_back({head, kw.line, ts_.previous().end_line});
  return {e_out};
}

Pending Builder::return_stmt(Pending pend) {
  const Token &kw = ts_.next();
  if (!ts_.is(";"))
    arith(ts_.peek());
  ts_.expect(";");
  int loc = start(kw, pend);
  finish_span(loc, kw);
  returns_.push_back(add_edge(loc, Operation::ret(), cfa_.line_map[loc]));
  return {};
}

Pending Builder::labelled(Pending pend) {
  const Token &label = ts_.next();
  ts_.next();
  if (!is_error_label(label.text))
    return statement(std::move(pend));
  int loc = start(label, pend);
  finish_span(loc, label);
  return statement({add_edge(loc, Operation::error_label(), cfa_.line_map[loc])});
}

Pending Builder::assert_stmt(Pending pend) {
  const Token &kw = ts_.next();
  ts_.expect("(");
  const Token &cstart = ts_.peek();
  ExprPtr c = condition(cstart);
  ts_.expect(")");
  ts_.expect(";");
  int loc = start(kw, pend);
  finish_span(loc, kw);
  SourceSpan span = cfa_.line_map[loc];
  int ok = add_edge(loc, Operation::assume(c, true), span);
  int err = new_loc(kw);
  cfa_.line_map[err] = span;
  add_edge(loc, Operation::assume(mk_not(c), false), span, err);
  returns_.push_back(add_edge(err, Operation::error_label(), span));
  cfa_.property_sites.push_back({EncodingStyle::AssertStmt, loc, c, kw.offset,
                                 ts_.previous().end_offset, kw.line, ts_.previous().end_line});
  return {ok};
}

Pending Builder::call_stmt(Pending pend) {
  const Token &name = ts_.next();
  if (is_nondet_name(name.text) || cfa_.symbols.contains(name.text))
    ts_.fail_at(name, "'" + name.text + "' cannot be called here");
  ts_.expect("(");
  if (!ts_.is(")"))
    ts_.fail("calls with arguments are not supported");
  ts_.next();
  ts_.expect(";");
  int loc = start(name, pend);
  finish_span(loc, name);
  if (is_error_call(name.text)) {
    returns_.push_back(add_edge(loc, Operation::error_label(), cfa_.line_map[loc]));
    return {};
  }
  return {add_edge(loc, Operation::call(name.text), cfa_.line_map[loc])};
}

// Adjacency, natural loops via dominators, and the reducibility check.
void Builder::finalize() {
  const size_t n = cfa_.line_map.size();
  cfa_.initial = 0;
  cfa_.out_edges.assign(n, {});
  cfa_.in_edges.assign(n, {});
  for (const Edge &e : cfa_.edges) {
    cfa_.out_edges[e.src].push_back(e.id);
    cfa_.in_edges[e.dst].push_back(e.id);
  }

  // Reverse postorder over reachable locations.
  std::vector<int> order;
  std::vector<int> state(n, 0);
  std::vector<std::pair<int, size_t>> stack{{cfa_.initial, 0}};
  state[cfa_.initial] = 1;
  std::vector<std::pair<int, int>> retreating;
  while (!stack.empty()) {
    auto &[v, i] = stack.back();
    if (i < cfa_.out_edges[v].size()) {
      int w = cfa_.edges[cfa_.out_edges[v][i++]].dst;
      if (state[w] == 0) {
        state[w] = 1;
        stack.push_back({w, 0});
      } else if (state[w] == 1) {
        retreating.push_back({v, w});
      }
    } else {
      state[v] = 2;
      order.push_back(v);
      stack.pop_back();
    }
  }
  std::reverse(order.begin(), order.end());
  std::vector<int> rpo(n, -1);
  for (size_t i = 0; i < order.size(); ++i)
    rpo[order[i]] = static_cast<int>(i);

  // Cooper-Harvey-Kennedy iterative dominators.
  std::vector<int> idom(n, -1);
  idom[cfa_.initial] = cfa_.initial;
  auto intersect = [&](int a, int b) {
    while (a != b) {
      while (rpo[a] > rpo[b])
        a = idom[a];
      while (rpo[b] > rpo[a])
        b = idom[b];
    }
    return a;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (int v : order) {
      if (v == cfa_.initial)
        continue;
      int nd = -1;
      for (int e : cfa_.in_edges[v]) {
        int p = cfa_.edges[e].src;
        if (idom[p] < 0)
          continue;
        nd = nd < 0 ? p : intersect(p, nd);
      }
      if (nd >= 0 && idom[v] != nd) {
        idom[v] = nd;
        changed = true;
      }
    }
  }
  auto dominates = [&](int a, int b) {
    for (;;) {
      if (a == b)
        return true;
      if (b == cfa_.initial)
        return false;
      b = idom[b];
    }
  };

  cfa_.is_loop_head.assign(n, false);
  for (auto [src, head] : retreating) {
    if (!dominates(head, src))
      throw Error("irreducible control flow is not supported");
    cfa_.is_loop_head[head] = true;
  }
  std::vector<LoopInfo> loops;
  for (const LoopInfo &l : cfa_.loops)
    if (cfa_.is_loop_head[l.head])
      loops.push_back(l);
  cfa_.loops = std::move(loops);
  for (size_t v = 0; v < n; ++v)
    if (cfa_.is_loop_head[v])
      cfa_.loop_heads.push_back(static_cast<int>(v));
}

} // namespace

Cfa parse_program(std::string_view text, const ParseOptions &opts) {
  return Builder(text, opts).build();
}

Cfa parse_file(const std::string &path, const ParseOptions &opts) {
  ParseOptions o = opts;
  o.path = path;
  return parse_program(read_text_file(path), o);
}

} // namespace coopver
