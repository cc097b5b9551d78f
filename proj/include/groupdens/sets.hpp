#pragma once

#include <boost/dynamic_bitset.hpp>
#include <algorithm>
#include <memory>
#include <optional>
#include <vector>

#include "groupdens/group.hpp"

namespace groupdens {

using Bits = boost::dynamic_bitset<>;

// ---------------------------------------------------------------------------
// Subsets are immutable expression trees. Leaves: explicit element lists,
// residue classes on Z^d, first-letter (prefix) sets on free groups. Interior
// nodes: boolean algebra, product sets, inverses, shifts gA, conjugates
// g^-1 A g and the conjugation spread wr(A, E) = union of x^-1 A x over E.
//
// Membership is exact. Shapes without an exact decision route are rejected
// (Unsupported / WindowTooSmall), never approximated.
// ---------------------------------------------------------------------------

struct SetNode;
using SetPtr = std::shared_ptr<const SetNode>;

struct SetNode {
  enum class Kind {
    Explicit, Residues, Prefix,
    Union, Inter, Compl, Product, Inverse, Shift, Conj, Wr
  };
  Kind kind = Kind::Explicit;
  std::vector<Elem> elems;         // Explicit (canonically sorted, distinct)
  std::vector<long long> moduli;   // Residues
  std::vector<Elem> classes;       // Residues (reduced, sorted, distinct)
  std::vector<long long> letters;  // Prefix (rank-sorted, distinct)
  std::vector<SetPtr> args;
  Elem g;                          // Shift / Conj parameter
};

inline SetPtr make_explicit(const Group& gr, std::vector<Elem> es) {
  for (const auto& e : es) gr.check_elem(e);
  std::sort(es.begin(), es.end(),
            [&](const Elem& a, const Elem& b) { return gr.less(a, b); });
  es.erase(std::unique(es.begin(), es.end()), es.end());
  auto n = std::make_shared<SetNode>();
  n->kind = SetNode::Kind::Explicit;
  n->elems = std::move(es);
  return n;
}

inline SetPtr make_residues(const Group& gr, std::vector<long long> moduli,
                            std::vector<Elem> classes) {
  if (gr.spec().kind != GroupSpec::Kind::FreeAbelian)
    throw Unsupported("residues sets live on Z^d");
  const size_t d = static_cast<size_t>(gr.spec().n);
  if (moduli.size() == 1 && d > 1) moduli.assign(d, moduli[0]);
  if (moduli.size() != d) throw Unsupported("residues modulus arity mismatch");
  for (auto m : moduli)
    if (m < 1) throw Unsupported("residue modulus must be >= 1");
  for (auto& c : classes) {
    if (c.v.size() != d) throw InvalidElement("residue class arity mismatch");
    for (size_t i = 0; i < d; ++i) c.v[i] = ((c.v[i] % moduli[i]) + moduli[i]) % moduli[i];
  }
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  auto n = std::make_shared<SetNode>();
  n->kind = SetNode::Kind::Residues;
  n->moduli = std::move(moduli);
  n->classes = std::move(classes);
  return n;
}

inline SetPtr make_prefix(const Group& gr, std::vector<long long> letters) {
  if (gr.spec().kind != GroupSpec::Kind::Free)
    throw Unsupported("prefix sets live on free groups");
  for (auto l : letters)
    if (l == 0 || l > gr.spec().n || l < -gr.spec().n)
      throw InvalidElement("prefix letter out of range");
  std::sort(letters.begin(), letters.end(), [](long long a, long long b) {
    return detail::letter_rank(a) < detail::letter_rank(b);
  });
  letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
  auto n = std::make_shared<SetNode>();
  n->kind = SetNode::Kind::Prefix;
  n->letters = std::move(letters);
  return n;
}

namespace detail {
inline SetPtr set_op(SetNode::Kind k, std::vector<SetPtr> args) {
  auto n = std::make_shared<SetNode>();
  n->kind = k;
  n->args = std::move(args);
  return n;
}
}  // namespace detail

// Union and intersection are n-ary; nested nodes of the same kind flatten so
// associativity never shows up in the tree.
inline SetPtr set_union(std::vector<SetPtr> args) {
  std::vector<SetPtr> flat;
  for (auto& a : args) {
    if (a->kind == SetNode::Kind::Union)
      flat.insert(flat.end(), a->args.begin(), a->args.end());
    else
      flat.push_back(std::move(a));
  }
  if (flat.size() == 1) return flat[0];
  return detail::set_op(SetNode::Kind::Union, std::move(flat));
}

inline SetPtr set_inter(std::vector<SetPtr> args) {
  std::vector<SetPtr> flat;
  for (auto& a : args) {
    if (a->kind == SetNode::Kind::Inter)
      flat.insert(flat.end(), a->args.begin(), a->args.end());
    else
      flat.push_back(std::move(a));
  }
  if (flat.size() == 1) return flat[0];
  return detail::set_op(SetNode::Kind::Inter, std::move(flat));
}

inline SetPtr set_compl(SetPtr a) { return detail::set_op(SetNode::Kind::Compl, {std::move(a)}); }
inline SetPtr set_product(SetPtr a, SetPtr b) {
  return detail::set_op(SetNode::Kind::Product, {std::move(a), std::move(b)});
}
inline SetPtr set_inverse(SetPtr a) { return detail::set_op(SetNode::Kind::Inverse, {std::move(a)}); }

inline SetPtr set_shift(const Group& gr, const Elem& g, SetPtr a) {
  gr.check_elem(g);
  auto n = std::make_shared<SetNode>();
  n->kind = SetNode::Kind::Shift;
  n->args = {std::move(a)};
  n->g = g;
  return n;
}

inline SetPtr set_conj(const Group& gr, SetPtr a, const Elem& g) {
  gr.check_elem(g);
  auto n = std::make_shared<SetNode>();
  n->kind = SetNode::Kind::Conj;
  n->args = {std::move(a)};
  n->g = g;
  return n;
}

inline SetPtr set_wr(SetPtr a, SetPtr e) {
  return detail::set_op(SetNode::Kind::Wr, {std::move(a), std::move(e)});
}

inline SetPtr empty_set() {
  auto n = std::make_shared<SetNode>();
  n->kind = SetNode::Kind::Explicit;
  return n;
}

// ---------------------------------------------------------------------------
// Enumeration: exact finite element lists for shapes that admit them.
// ---------------------------------------------------------------------------

bool set_contains(const Group& gr, const SetPtr& s, const Elem& x);
Bits realize(const Group& gr, const SetPtr& s, const Window& w);

inline bool set_enumerable(const Group& gr, const SetPtr& s) {
  if (gr.finite()) return true;
  switch (s->kind) {
    case SetNode::Kind::Explicit: return true;
    case SetNode::Kind::Residues:
    case SetNode::Kind::Prefix:
    case SetNode::Kind::Compl: return false;
    case SetNode::Kind::Union:
    case SetNode::Kind::Product: {
      for (const auto& a : s->args)
        if (!set_enumerable(gr, a)) return false;
      return true;
    }
    case SetNode::Kind::Inter: {
      for (const auto& a : s->args)
        if (set_enumerable(gr, a)) return true;
      return false;
    }
    case SetNode::Kind::Inverse:
    case SetNode::Kind::Shift:
    case SetNode::Kind::Conj: return set_enumerable(gr, s->args[0]);
    case SetNode::Kind::Wr:
      return set_enumerable(gr, s->args[0]) && set_enumerable(gr, s->args[1]);
  }
  return false;
}

inline std::vector<Elem> enumerate_set(const Group& gr, const SetPtr& s) {
  constexpr size_t kCap = 1u << 20;
  auto canon = [&](std::vector<Elem> es) {
    std::sort(es.begin(), es.end(),
              [&](const Elem& a, const Elem& b) { return gr.less(a, b); });
    es.erase(std::unique(es.begin(), es.end()), es.end());
    if (es.size() > kCap) throw CapacityError("enumeration too large");
    return es;
  };
  if (gr.finite() && s->kind != SetNode::Kind::Explicit) {
    Window w = gr.full_window();
    Bits b = realize(gr, s, w);
    std::vector<Elem> es;
    for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i))
      es.push_back(w.elems[i]);
    return es;
  }
  switch (s->kind) {
    case SetNode::Kind::Explicit: return s->elems;
    case SetNode::Kind::Union: {
      std::vector<Elem> es;
      for (const auto& a : s->args) {
        auto ea = enumerate_set(gr, a);
        es.insert(es.end(), ea.begin(), ea.end());
      }
      return canon(std::move(es));
    }
    case SetNode::Kind::Inter: {
      int base = -1;
      for (size_t i = 0; i < s->args.size(); ++i)
        if (set_enumerable(gr, s->args[i])) { base = (int)i; break; }
      if (base < 0) throw Unsupported("intersection not enumerable");
      std::vector<Elem> es;
      for (const auto& e : enumerate_set(gr, s->args[base])) {
        bool in = true;
        for (size_t i = 0; i < s->args.size() && in; ++i)
          if ((int)i != base) in = set_contains(gr, s->args[i], e);
        if (in) es.push_back(e);
      }
      return canon(std::move(es));
    }
    case SetNode::Kind::Product: {
      auto ea = enumerate_set(gr, s->args[0]);
      auto eb = enumerate_set(gr, s->args[1]);
      if (ea.size() * eb.size() > kCap) throw CapacityError("product too large");
      std::vector<Elem> es;
      for (const auto& a : ea)
        for (const auto& b : eb) es.push_back(gr.mul(a, b));
      return canon(std::move(es));
    }
    case SetNode::Kind::Inverse: {
      std::vector<Elem> es;
      for (const auto& e : enumerate_set(gr, s->args[0])) es.push_back(gr.inv(e));
      return canon(std::move(es));
    }
    case SetNode::Kind::Shift: {
      std::vector<Elem> es;
      for (const auto& e : enumerate_set(gr, s->args[0])) es.push_back(gr.mul(s->g, e));
      return canon(std::move(es));
    }
    case SetNode::Kind::Conj: {
      std::vector<Elem> es;
      for (const auto& e : enumerate_set(gr, s->args[0])) es.push_back(gr.conj(e, s->g));
      return canon(std::move(es));
    }
    case SetNode::Kind::Wr: {
      auto base = enumerate_set(gr, s->args[0]);
      auto spread = enumerate_set(gr, s->args[1]);
      std::vector<Elem> es;
      for (const auto& x : spread)
        for (const auto& e : base) es.push_back(gr.conj(e, x));
      return canon(std::move(es));
    }
    default:
      throw Unsupported("set is not finitely enumerable");
  }
}

// ---------------------------------------------------------------------------
// Membership.
// ---------------------------------------------------------------------------

namespace detail {

inline bool letter_in(const std::vector<long long>& ls, long long l) {
  return std::find(ls.begin(), ls.end(), l) != ls.end();
}

// z in Prefix(L1) * Prefix(L2)^-1, decided in closed form. Writing z = w1 *
// w2^-1 with w1 in P(L1), w2 in P(L2) is possible iff one of:
//   z = e           and L1, L2 share a letter;
//   head survives:  first(z) in L1, with some L2 word not forcing total
//                   cancellation (|z| >= 2: any; |z| = 1: a letter != z^-1);
//   total cancel:   inv(last(z)) in L2 and L1 has a letter != first(z).
inline bool prefix_invprefix_contains(const std::vector<long long>& l1,
                                      const std::vector<long long>& l2,
                                      const Elem& z) {
  if (l1.empty() || l2.empty()) return false;
  if (z.v.empty()) {
    for (auto a : l1)
      if (letter_in(l2, a)) return true;
    return false;
  }
  long long first = z.v.front(), last = z.v.back();
  if (letter_in(l1, first)) {
    if (z.v.size() >= 2) return true;
    for (auto b : l2)
      if (b != -first) return true;
  }
  if (letter_in(l2, -last)) {
    for (auto a : l1)
      if (a != first) return true;
  }
  return false;
}

}  // namespace detail

inline bool set_contains(const Group& gr, const SetPtr& s, const Elem& x) {
  gr.check_elem(x);
  switch (s->kind) {
    case SetNode::Kind::Explicit:
      return std::find(s->elems.begin(), s->elems.end(), x) != s->elems.end();
    case SetNode::Kind::Residues: {
      Elem r = x;
      for (size_t i = 0; i < s->moduli.size(); ++i)
        r.v[i] = ((r.v[i] % s->moduli[i]) + s->moduli[i]) % s->moduli[i];
      return std::binary_search(s->classes.begin(), s->classes.end(), r);
    }
    case SetNode::Kind::Prefix:
      return !x.v.empty() && detail::letter_in(s->letters, x.v.front());
    case SetNode::Kind::Union: {
      for (const auto& a : s->args)
        if (set_contains(gr, a, x)) return true;
      return false;
    }
    case SetNode::Kind::Inter: {
      for (const auto& a : s->args)
        if (!set_contains(gr, a, x)) return false;
      return true;
    }
    case SetNode::Kind::Compl:
      return !set_contains(gr, s->args[0], x);
    case SetNode::Kind::Inverse:
      return set_contains(gr, s->args[0], gr.inv(x));
    case SetNode::Kind::Shift:
      return set_contains(gr, s->args[0], gr.mul(gr.inv(s->g), x));
    case SetNode::Kind::Conj:
      return set_contains(gr, s->args[0], gr.mul(gr.mul(s->g, x), gr.inv(s->g)));
    case SetNode::Kind::Wr: {
      for (const auto& e : enumerate_set(gr, s->args[1]))
        if (set_contains(gr, s->args[0], gr.mul(gr.mul(e, x), gr.inv(e))))
          return true;
      return false;
    }
    case SetNode::Kind::Product: {
      const SetPtr& A = s->args[0];
      const SetPtr& B = s->args[1];
      if (A->kind == SetNode::Kind::Prefix &&
          B->kind == SetNode::Kind::Inverse &&
          B->args[0]->kind == SetNode::Kind::Prefix)
        return detail::prefix_invprefix_contains(A->letters,
                                                 B->args[0]->letters, x);
      if (set_enumerable(gr, A)) {
        for (const auto& a : enumerate_set(gr, A))
          if (set_contains(gr, B, gr.mul(gr.inv(a), x))) return true;
        return false;
      }
      if (set_enumerable(gr, B)) {
        for (const auto& b : enumerate_set(gr, B))
          if (set_contains(gr, A, gr.mul(x, gr.inv(b)))) return true;
        return false;
      }
      throw WindowTooSmall("product membership undecidable for these shapes");
    }
  }
  throw Error("unreachable");
}

// Static probe used by set_algebra to fail early instead of mid-computation.
inline bool set_decidable(const Group& gr, const SetPtr& s) {
  switch (s->kind) {
    case SetNode::Kind::Explicit: return true;
    case SetNode::Kind::Residues:
    case SetNode::Kind::Prefix: return true;
    case SetNode::Kind::Union:
    case SetNode::Kind::Inter: {
      for (const auto& a : s->args)
        if (!set_decidable(gr, a)) return false;
      return true;
    }
    case SetNode::Kind::Compl:
    case SetNode::Kind::Inverse:
    case SetNode::Kind::Shift:
    case SetNode::Kind::Conj: return set_decidable(gr, s->args[0]);
    case SetNode::Kind::Wr:
      return set_decidable(gr, s->args[0]) && set_enumerable(gr, s->args[1]);
    case SetNode::Kind::Product: {
      if (gr.finite())
        return set_decidable(gr, s->args[0]) && set_decidable(gr, s->args[1]);
      const SetPtr& A = s->args[0];
      const SetPtr& B = s->args[1];
      if (A->kind == SetNode::Kind::Prefix &&
          B->kind == SetNode::Kind::Inverse &&
          B->args[0]->kind == SetNode::Kind::Prefix)
        return true;
      return (set_enumerable(gr, A) && set_decidable(gr, B)) ||
             (set_enumerable(gr, B) && set_decidable(gr, A));
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Realization over a window. On finite groups composite nodes are realized
// structurally over the full carrier (products by index arithmetic); on
// infinite groups bit i is the exact membership of the i-th window element.
// ---------------------------------------------------------------------------

inline Bits realize(const Group& gr, const SetPtr& s, const Window& w) {
  const size_t n = w.size();
  if (gr.finite() && w.full_carrier) {
    Bits out(n);
    switch (s->kind) {
      case SetNode::Kind::Explicit:
        for (const auto& e : s->elems) out.set(gr.to_index(e));
        return out;
      case SetNode::Kind::Union: {
        for (const auto& a : s->args) out |= realize(gr, a, w);
        return out;
      }
      case SetNode::Kind::Inter: {
        out.set();
        for (const auto& a : s->args) out &= realize(gr, a, w);
        return out;
      }
      case SetNode::Kind::Compl:
        return ~realize(gr, s->args[0], w);
      case SetNode::Kind::Inverse: {
        Bits in = realize(gr, s->args[0], w);
        for (auto i = in.find_first(); i != Bits::npos; i = in.find_next(i))
          out.set(gr.to_index(gr.inv(gr.from_index(i))));
        return out;
      }
      case SetNode::Kind::Shift: {
        Bits in = realize(gr, s->args[0], w);
        for (auto i = in.find_first(); i != Bits::npos; i = in.find_next(i))
          out.set(gr.to_index(gr.mul(s->g, gr.from_index(i))));
        return out;
      }
      case SetNode::Kind::Conj: {
        Bits in = realize(gr, s->args[0], w);
        for (auto i = in.find_first(); i != Bits::npos; i = in.find_next(i))
          out.set(gr.to_index(gr.conj(gr.from_index(i), s->g)));
        return out;
      }
      case SetNode::Kind::Product: {
        Bits ba = realize(gr, s->args[0], w);
        Bits bb = realize(gr, s->args[1], w);
        for (auto i = ba.find_first(); i != Bits::npos; i = ba.find_next(i))
          for (auto j = bb.find_first(); j != Bits::npos; j = bb.find_next(j))
            out.set(gr.to_index(gr.mul(gr.from_index(i), gr.from_index(j))));
        return out;
      }
      case SetNode::Kind::Wr: {
        Bits in = realize(gr, s->args[0], w);
        Bits es = realize(gr, s->args[1], w);
        for (auto x = es.find_first(); x != Bits::npos; x = es.find_next(x)) {
          Elem xe = gr.from_index(x);
          for (auto i = in.find_first(); i != Bits::npos; i = in.find_next(i))
            out.set(gr.to_index(gr.conj(gr.from_index(i), xe)));
        }
        return out;
      }
      default:
        break;
    }
    for (size_t i = 0; i < n; ++i)
      if (set_contains(gr, s, w.elems[i])) out.set(i);
    return out;
  }
  Bits out(n);
  for (size_t i = 0; i < n; ++i)
    if (set_contains(gr, s, w.elems[i])) out.set(i);
  return out;
}

// ---------------------------------------------------------------------------
// Residue normal form on Z^d: exact periodic description of any boolean /
// product / shift combination of Residues leaves. Explicit leaves are not
// periodic and yield nullopt.
// ---------------------------------------------------------------------------

struct ResidueForm {
  std::vector<long long> moduli;
  std::vector<Elem> classes;  // sorted, reduced

  bool contains(const Elem& x) const {
    Elem r = x;
    for (size_t i = 0; i < moduli.size(); ++i)
      r.v[i] = ((r.v[i] % moduli[i]) + moduli[i]) % moduli[i];
    return std::binary_search(classes.begin(), classes.end(), r);
  }
};

namespace detail {

inline uint64_t box_size(const std::vector<long long>& m) {
  uint64_t s = 1;
  for (auto x : m) {
    s *= static_cast<uint64_t>(x);
    if (s > (1u << 22)) throw CapacityError("residue box too large");
  }
  return s;
}

inline ResidueForm lift(const ResidueForm& f, const std::vector<long long>& m) {
  ResidueForm out;
  out.moduli = m;
  uint64_t total = box_size(m);
  std::vector<long long> x(m.size(), 0);
  for (uint64_t it = 0; it < total; ++it) {
    if (f.contains(Elem{x})) out.classes.push_back(Elem{x});
    size_t i = m.size();
    while (i-- > 0) {
      if (++x[i] < m[i]) break;
      x[i] = 0;
    }
  }
  std::sort(out.classes.begin(), out.classes.end());
  return out;
}

}  // namespace detail

inline std::optional<ResidueForm> residue_normal(const Group& gr, const SetPtr& s) {
  if (gr.spec().kind != GroupSpec::Kind::FreeAbelian) return std::nullopt;
  const size_t d = static_cast<size_t>(gr.spec().n);
  auto common = [&](const ResidueForm& a, const ResidueForm& b) {
    std::vector<long long> m(d);
    for (size_t i = 0; i < d; ++i) m[i] = std::lcm(a.moduli[i], b.moduli[i]);
    return m;
  };
  switch (s->kind) {
    case SetNode::Kind::Residues:
      return ResidueForm{s->moduli, s->classes};
    case SetNode::Kind::Explicit:
      return std::nullopt;
    case SetNode::Kind::Prefix:
      return std::nullopt;
    case SetNode::Kind::Union:
    case SetNode::Kind::Inter: {
      std::vector<ResidueForm> fs;
      for (const auto& a : s->args) {
        auto f = residue_normal(gr, a);
        if (!f) return std::nullopt;
        fs.push_back(std::move(*f));
      }
      ResidueForm acc = fs[0];
      for (size_t k = 1; k < fs.size(); ++k) {
        auto m = common(acc, fs[k]);
        ResidueForm la = detail::lift(acc, m), lb = detail::lift(fs[k], m);
        ResidueForm out;
        out.moduli = m;
        if (s->kind == SetNode::Kind::Union) {
          std::set_union(la.classes.begin(), la.classes.end(),
                         lb.classes.begin(), lb.classes.end(),
                         std::back_inserter(out.classes));
        } else {
          std::set_intersection(la.classes.begin(), la.classes.end(),
                                lb.classes.begin(), lb.classes.end(),
                                std::back_inserter(out.classes));
        }
        acc = std::move(out);
      }
      return acc;
    }
    case SetNode::Kind::Compl: {
      auto f = residue_normal(gr, s->args[0]);
      if (!f) return std::nullopt;
      ResidueForm out;
      out.moduli = f->moduli;
      uint64_t total = detail::box_size(f->moduli);
      std::vector<long long> x(d, 0);
      for (uint64_t it = 0; it < total; ++it) {
        if (!f->contains(Elem{x})) out.classes.push_back(Elem{x});
        size_t i = d;
        while (i-- > 0) {
          if (++x[i] < f->moduli[i]) break;
          x[i] = 0;
        }
      }
      std::sort(out.classes.begin(), out.classes.end());
      return out;
    }
    case SetNode::Kind::Inverse: {
      auto f = residue_normal(gr, s->args[0]);
      if (!f) return std::nullopt;
      ResidueForm out;
      out.moduli = f->moduli;
      for (auto c : f->classes) {
        for (size_t i = 0; i < d; ++i)
          c.v[i] = (f->moduli[i] - c.v[i]) % f->moduli[i];
        out.classes.push_back(c);
      }
      std::sort(out.classes.begin(), out.classes.end());
      return out;
    }
    case SetNode::Kind::Shift: {
      auto f = residue_normal(gr, s->args[0]);
      if (!f) return std::nullopt;
      ResidueForm out;
      out.moduli = f->moduli;
      for (auto c : f->classes) {
        for (size_t i = 0; i < d; ++i)
          c.v[i] = ((c.v[i] + s->g.v[i]) % f->moduli[i] + f->moduli[i]) % f->moduli[i];
        out.classes.push_back(c);
      }
      std::sort(out.classes.begin(), out.classes.end());
      return out;
    }
    case SetNode::Kind::Conj:
      return residue_normal(gr, s->args[0]);
    case SetNode::Kind::Wr: {
      // abelian: conjugation is trivial, the spread adds nothing
      return residue_normal(gr, s->args[0]);
    }
    case SetNode::Kind::Product: {
      auto fa = residue_normal(gr, s->args[0]);
      auto fb = residue_normal(gr, s->args[1]);
      if (!fa || !fb) return std::nullopt;
      // A + B is periodic mod gcd of the periods componentwise
      std::vector<long long> m(d);
      for (size_t i = 0; i < d; ++i) m[i] = std::gcd(fa->moduli[i], fb->moduli[i]);
      ResidueForm out;
      out.moduli = m;
      std::vector<Elem> cs;
      for (const auto& a : fa->classes)
        for (const auto& b : fb->classes) {
          Elem c = a;
          for (size_t i = 0; i < d; ++i)
            c.v[i] = (a.v[i] + b.v[i]) % m[i];
          cs.push_back(std::move(c));
        }
      std::sort(cs.begin(), cs.end());
      cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
      out.classes = std::move(cs);
      return out;
    }
  }
  return std::nullopt;
}

// Exact finite quotient of a periodic set: the reduction map plus the image
// of the classes as an explicit subset of the quotient group.
inline std::optional<std::pair<QuotientMap, SetPtr>> quotient_set(
    const Group& gr, const SetPtr& s) {
  auto f = residue_normal(gr, s);
  if (!f) return std::nullopt;
  QuotientMap q = QuotientMap::make(gr, f->moduli);
  std::vector<Elem> img;
  for (const auto& c : f->classes) img.push_back(q.apply(c));
  return std::make_pair(std::move(q), make_explicit(*q.target, std::move(img)));
}

}  // namespace groupdens
