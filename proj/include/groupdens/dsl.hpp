#pragma once

// Text forms for groups, elements, and set expressions.  The grammar here is
// the single source of truth for CLI inputs and golden files; parse and
// canonical_print are inverse on ASTs.

#include <cctype>
#include <string>
#include <vector>

#include "groupdens/errors.hpp"
#include "groupdens/group.hpp"
#include "groupdens/sets.hpp"

namespace groupdens {
namespace dsl {

namespace detail {

struct Cursor {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Cursor(const std::string& s) : src(s) {}

  bool eof() const { return pos >= src.size(); }
  char peek() const { return eof() ? '\0' : src[pos]; }

  void advance() {
    if (eof()) return;
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(src[pos]))) advance();
  }

  [[noreturn]] void fail(const std::string& expected) const {
    std::string got = eof() ? "end of input" : std::string("'") + peek() + "'";
    throw ParseError(line, col, expected, got);
  }

  void expect(char ch, const std::string& what) {
    skip_ws();
    if (peek() != ch) fail(what);
    advance();
  }

  bool accept(char ch) {
    skip_ws();
    if (peek() != ch) return false;
    advance();
    return true;
  }

  std::string ident() {
    skip_ws();
    if (!std::isalpha(static_cast<unsigned char>(peek()))) fail("a name");
    std::string out;
    while (!eof() && std::isalpha(static_cast<unsigned char>(peek()))) {
      out += peek();
      advance();
    }
    return out;
  }

  long long integer() {
    skip_ws();
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      advance();
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("an integer");
    long long v = 0;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      advance();
    }
    return neg ? -v : v;
  }
};

inline GroupSpec group_atom(Cursor& c) {
  c.skip_ws();
  const int ln = c.line, col = c.col;
  std::string id = c.ident();
  if (id == "Z") {
    c.skip_ws();
    if (c.peek() == '^') {
      c.advance();
      long long d = c.integer();
      if (d < 1) throw CapacityError("Z^d needs d >= 1");
      return GroupSpec::free_abelian(static_cast<int>(d));
    }
    return GroupSpec::free_abelian(1);
  }
  auto arg = [&]() {
    c.expect('(', "'('");
    long long n = c.integer();
    c.expect(')', "')'");
    return n;
  };
  if (id == "Zmod") return GroupSpec::cyclic(static_cast<int>(arg()));
  if (id == "Sym") {
    long long n = arg();
    if (n > 8) throw CapacityError("Sym(n) supported up to n = 8");
    return GroupSpec::symmetric(static_cast<int>(n));
  }
  if (id == "Dih") return GroupSpec::dihedral(static_cast<int>(arg()));
  if (id == "Free") return GroupSpec::free_group(static_cast<int>(arg()));
  throw ParseError(ln, col, "a group name (Z, Zmod, Sym, Dih, Free)", id);
}

inline bool finite_spec(const GroupSpec& s) {
  switch (s.kind) {
    case GroupSpec::Kind::Cyclic:
    case GroupSpec::Kind::Symmetric:
    case GroupSpec::Kind::Dihedral:
      return true;
    case GroupSpec::Kind::Product: {
      for (const auto& f : s.factors)
        if (!finite_spec(f)) return false;
      return true;
    }
    default:
      return false;
  }
}

}  // namespace detail

inline GroupSpec parse_group(const std::string& text) {
  detail::Cursor c(text);
  std::vector<GroupSpec> factors;
  factors.push_back(detail::group_atom(c));
  while (true) {
    c.skip_ws();
    if (c.peek() != 'x') break;
    c.advance();
    factors.push_back(detail::group_atom(c));
  }
  c.skip_ws();
  if (!c.eof()) c.fail("end of input");
  if (factors.size() == 1) return factors[0];
  for (const auto& f : factors)
    if (!detail::finite_spec(f))
      throw Unsupported("direct products are supported for finite factors only");
  return GroupSpec::product(std::move(factors));
}

namespace detail {

// Element literal, matching Group::print_elem for the group kind.
inline Elem parse_elem(Cursor& c, const Group& gr) {
  const auto kind = gr.spec().kind;
  c.skip_ws();
  switch (kind) {
    case GroupSpec::Kind::Free: {
      if (!std::isalpha(static_cast<unsigned char>(c.peek()))) c.fail("a word");
      std::string w;
      while (!c.eof() && std::isalpha(static_cast<unsigned char>(c.peek()))) {
        w += c.peek();
        c.advance();
      }
      if (w == "e") return Elem{{}};
      std::vector<long long> ls;
      for (char ch : w) {
        long long l = std::islower(static_cast<unsigned char>(ch))
                          ? (ch - 'a') + 1
                          : -((ch - 'A') + 1);
        ls.push_back(l);
      }
      Elem e{std::move(ls)};
      gr.check_elem(e);  // range + reduced
      return e;
    }
    case GroupSpec::Kind::FreeAbelian: {
      const size_t d = static_cast<size_t>(gr.spec().n);
      if (d == 1) return Elem{{c.integer()}};
      c.expect('(', "'('");
      std::vector<long long> v;
      for (size_t i = 0; i < d; ++i) {
        if (i) c.expect(',', "','");
        v.push_back(c.integer());
      }
      c.expect(')', "')'");
      return Elem{std::move(v)};
    }
    case GroupSpec::Kind::Product: {
      c.expect('(', "'('");
      const auto& fs = gr.factors();
      std::vector<uint64_t> ix(fs.size());
      for (size_t f = 0; f < fs.size(); ++f) {
        if (f) c.expect(',', "','");
        long long v = c.integer();
        if (v < 0 || static_cast<uint64_t>(v) >= fs[f].order())
          throw InvalidElement("tuple coordinate out of range for " +
                               fs[f].name());
        ix[f] = static_cast<uint64_t>(v);
      }
      c.expect(')', "')'");
      Elem e{{static_cast<long long>(gr.join_index(ix))}};
      gr.check_elem(e);
      return e;
    }
    default: {
      Elem e{{c.integer()}};
      gr.check_elem(e);
      return e;
    }
  }
}

SetPtr parse_union(Cursor& c, const Group& gr);

inline SetPtr parse_set_atom(Cursor& c, const Group& gr) {
  c.skip_ws();
  if (c.peek() == '(') {
    c.advance();
    SetPtr s = parse_union(c, gr);
    c.expect(')', "')'");
    return s;
  }
  if (c.peek() == '{') {
    c.advance();
    std::vector<Elem> es;
    c.skip_ws();
    if (c.peek() != '}') {
      es.push_back(parse_elem(c, gr));
      while (c.accept(',')) es.push_back(parse_elem(c, gr));
    }
    c.expect('}', "'}'");
    return make_explicit(gr, std::move(es));
  }
  if (!std::isalpha(static_cast<unsigned char>(c.peek())))
    c.fail("a set expression");
  const int ln = c.line, col = c.col;
  std::string id = c.ident();
  if (id == "residues") {
    c.expect('(', "'('");
    std::vector<long long> moduli;
    c.skip_ws();
    if (c.peek() == '(') {
      c.advance();
      moduli.push_back(c.integer());
      while (c.accept(',')) moduli.push_back(c.integer());
      c.expect(')', "')'");
    } else {
      moduli.push_back(c.integer());
    }
    c.expect(';', "';'");
    std::vector<Elem> classes;
    classes.push_back(parse_elem(c, gr));
    while (c.accept(',')) classes.push_back(parse_elem(c, gr));
    c.expect(')', "')'");
    return make_residues(gr, std::move(moduli), std::move(classes));
  }
  if (id == "prefix") {
    c.expect('(', "'('");
    std::vector<long long> letters;
    do {
      c.skip_ws();
      char ch = c.peek();
      if (!std::isalpha(static_cast<unsigned char>(ch))) c.fail("a letter");
      c.advance();
      letters.push_back(std::islower(static_cast<unsigned char>(ch))
                            ? (ch - 'a') + 1
                            : -((ch - 'A') + 1));
    } while (c.accept(','));
    c.expect(')', "')'");
    return make_prefix(gr, std::move(letters));
  }
  if (id == "inv") {
    c.expect('(', "'('");
    SetPtr s = parse_union(c, gr);
    c.expect(')', "')'");
    return set_inverse(std::move(s));
  }
  if (id == "shift") {
    c.expect('(', "'('");
    Elem g = parse_elem(c, gr);
    c.expect(',', "','");
    SetPtr s = parse_union(c, gr);
    c.expect(')', "')'");
    return set_shift(gr, g, std::move(s));
  }
  if (id == "conj") {
    c.expect('(', "'('");
    SetPtr s = parse_union(c, gr);
    c.expect(',', "','");
    Elem g = parse_elem(c, gr);
    c.expect(')', "')'");
    return set_conj(gr, std::move(s), g);
  }
  if (id == "wr") {
    c.expect('(', "'('");
    SetPtr s = parse_union(c, gr);
    c.expect(',', "','");
    SetPtr e = parse_union(c, gr);
    c.expect(')', "')'");
    return set_wr(std::move(s), std::move(e));
  }
  throw ParseError(ln, col,
                   "a set (list, residues, prefix, inv, shift, conj, wr)", id);
}

inline SetPtr parse_unary(Cursor& c, const Group& gr) {
  c.skip_ws();
  if (c.peek() == '!') {
    c.advance();
    return set_compl(parse_unary(c, gr));
  }
  return parse_set_atom(c, gr);
}

inline SetPtr parse_product(Cursor& c, const Group& gr) {
  SetPtr s = parse_unary(c, gr);
  while (c.accept('*')) s = set_product(std::move(s), parse_unary(c, gr));
  return s;
}

inline SetPtr parse_inter(Cursor& c, const Group& gr) {
  std::vector<SetPtr> args;
  args.push_back(parse_product(c, gr));
  while (c.accept('&')) args.push_back(parse_product(c, gr));
  return args.size() == 1 ? args[0] : set_inter(std::move(args));
}

inline SetPtr parse_union(Cursor& c, const Group& gr) {
  std::vector<SetPtr> args;
  args.push_back(parse_inter(c, gr));
  while (c.accept('|')) args.push_back(parse_inter(c, gr));
  return args.size() == 1 ? args[0] : set_union(std::move(args));
}

}  // namespace detail

inline SetPtr parse_set(const std::string& text, const Group& gr) {
  detail::Cursor c(text);
  SetPtr s = detail::parse_union(c, gr);
  c.skip_ws();
  if (!c.eof()) c.fail("end of input");
  return s;
}

// ---------------------------------------------------------------------------
// Canonical printing.  Binding strength: | < & < * < !; atoms bind tightest.
// Printing uses the minimum parentheses that reparse to the same tree.

namespace detail {

inline int prec_of(SetNode::Kind k) {
  switch (k) {
    case SetNode::Kind::Union: return 1;
    case SetNode::Kind::Inter: return 2;
    case SetNode::Kind::Product: return 3;
    case SetNode::Kind::Compl: return 4;
    default: return 5;
  }
}

inline std::string print_node(const Group& gr, const SetPtr& s, int context) {
  std::string out;
  const int p = prec_of(s->kind);
  switch (s->kind) {
    case SetNode::Kind::Explicit: {
      out = "{";
      for (size_t i = 0; i < s->elems.size(); ++i) {
        if (i) out += ",";
        out += gr.print_elem(s->elems[i]);
      }
      out += "}";
      break;
    }
    case SetNode::Kind::Residues: {
      out = "residues(";
      if (s->moduli.size() == 1) {
        out += std::to_string(s->moduli[0]);
      } else {
        out += "(";
        for (size_t i = 0; i < s->moduli.size(); ++i) {
          if (i) out += ",";
          out += std::to_string(s->moduli[i]);
        }
        out += ")";
      }
      out += ";";
      for (size_t i = 0; i < s->classes.size(); ++i) {
        if (i) out += ",";
        out += gr.print_elem(s->classes[i]);
      }
      out += ")";
      break;
    }
    case SetNode::Kind::Prefix: {
      out = "prefix(";
      for (size_t i = 0; i < s->letters.size(); ++i) {
        if (i) out += ",";
        long long l = s->letters[i];
        out += static_cast<char>(l > 0 ? 'a' + (l - 1) : 'A' + (-l - 1));
      }
      out += ")";
      break;
    }
    case SetNode::Kind::Union:
    case SetNode::Kind::Inter: {
      const char* op = s->kind == SetNode::Kind::Union ? "|" : "&";
      for (size_t i = 0; i < s->args.size(); ++i) {
        if (i) out += op;
        out += print_node(gr, s->args[i], p + 1);
      }
      break;
    }
    case SetNode::Kind::Product: {
      out = print_node(gr, s->args[0], p);
      out += "*";
      out += print_node(gr, s->args[1], p + 1);
      break;
    }
    case SetNode::Kind::Compl:
      out = "!" + print_node(gr, s->args[0], p);
      break;
    case SetNode::Kind::Inverse:
      out = "inv(" + print_node(gr, s->args[0], 0) + ")";
      break;
    case SetNode::Kind::Shift:
      out = "shift(" + gr.print_elem(s->g) + "," +
            print_node(gr, s->args[0], 0) + ")";
      break;
    case SetNode::Kind::Conj:
      out = "conj(" + print_node(gr, s->args[0], 0) + "," +
            gr.print_elem(s->g) + ")";
      break;
    case SetNode::Kind::Wr:
      out = "wr(" + print_node(gr, s->args[0], 0) + "," +
            print_node(gr, s->args[1], 0) + ")";
      break;
  }
  if (p < context) return "(" + out + ")";
  return out;
}

}  // namespace detail

inline std::string canonical_print(const Group& gr, const SetPtr& s) {
  return detail::print_node(gr, s, 0);
}

// Structural AST equality; order-sensitive on arguments, which parse and
// canonical constructors keep deterministic.
inline bool set_equal(const SetPtr& a, const SetPtr& b) {
  if (a->kind != b->kind) return false;
  auto elems_eq = [](const std::vector<Elem>& x, const std::vector<Elem>& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (x[i].v != y[i].v) return false;
    return true;
  };
  if (!elems_eq(a->elems, b->elems)) return false;
  if (a->moduli != b->moduli) return false;
  if (!elems_eq(a->classes, b->classes)) return false;
  if (a->letters != b->letters) return false;
  if (a->g.v != b->g.v) return false;
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!set_equal(a->args[i], b->args[i])) return false;
  return true;
}

}  // namespace dsl
}  // namespace groupdens
