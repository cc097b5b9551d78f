#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "groupdens/errors.hpp"

namespace groupdens {

// ---------------------------------------------------------------------------
// Group descriptions.
//
// Supported carriers: Z/n, finite direct products, Sym(n) for n <= 8,
// dihedral groups, Z^d and free groups F_k. Finite groups expose a canonical
// index enumeration; infinite groups are handled through windows (balls).
// ---------------------------------------------------------------------------

struct GroupSpec {
  enum class Kind { Cyclic, Product, Symmetric, Dihedral, FreeAbelian, Free };
  Kind kind = Kind::Cyclic;
  int n = 1;                        // modulus / degree / dimension / rank
  std::vector<GroupSpec> factors;   // Product only

  static GroupSpec cyclic(int n) { return {Kind::Cyclic, n, {}}; }
  static GroupSpec symmetric(int n) { return {Kind::Symmetric, n, {}}; }
  static GroupSpec dihedral(int n) { return {Kind::Dihedral, n, {}}; }
  static GroupSpec free_abelian(int d) { return {Kind::FreeAbelian, d, {}}; }
  static GroupSpec free_group(int k) { return {Kind::Free, k, {}}; }
  static GroupSpec product(std::vector<GroupSpec> fs) {
    return {Kind::Product, 0, std::move(fs)};
  }

  bool operator==(const GroupSpec& o) const {
    return kind == o.kind && n == o.n && factors == o.factors;
  }
};

// Element encoding:
//   finite groups   v = {index}
//   Z^d             v = d coordinates
//   free groups     v = reduced word, letter +k = generator k, -k = its inverse
struct Elem {
  std::vector<long long> v;
  auto operator<=>(const Elem&) const = default;
};

inline Elem elem1(long long x) { return Elem{{x}}; }

// Ordered list of distinct elements with the identity present. Finite groups
// always use the full carrier in index order.
struct Window {
  std::vector<Elem> elems;
  std::map<Elem, uint32_t> pos;
  bool full_carrier = false;

  size_t size() const { return elems.size(); }
  bool contains(const Elem& e) const { return pos.count(e) != 0; }
  uint32_t index_of(const Elem& e) const {
    auto it = pos.find(e);
    if (it == pos.end()) throw WindowTooSmall("element not in window");
    return it->second;
  }
  static Window of(std::vector<Elem> es, bool full = false) {
    Window w;
    w.elems = std::move(es);
    w.full_carrier = full;
    for (uint32_t i = 0; i < w.elems.size(); ++i) {
      if (!w.pos.emplace(w.elems[i], i).second)
        throw Error("window elements must be distinct");
    }
    return w;
  }
};

namespace detail {

// Lexicographic rank of a permutation (one-line form) and its inverse.
inline uint64_t perm_rank(const std::vector<uint8_t>& p) {
  const size_t n = p.size();
  uint64_t r = 0;
  for (size_t i = 0; i < n; ++i) {
    uint64_t smaller = 0;
    for (size_t j = i + 1; j < n; ++j)
      if (p[j] < p[i]) ++smaller;
    uint64_t f = 1;
    for (size_t j = 2; j <= n - 1 - i; ++j) f *= j;
    r += smaller * f;
  }
  return r;
}

inline std::vector<uint8_t> perm_unrank(uint64_t r, size_t n) {
  std::vector<uint8_t> avail(n), p(n);
  std::iota(avail.begin(), avail.end(), 0);
  uint64_t f = 1;
  for (size_t j = 2; j <= n; ++j) f *= j;
  for (size_t i = 0; i < n; ++i) {
    f /= (n - i);
    size_t k = static_cast<size_t>(r / f);
    r %= f;
    p[i] = avail[k];
    avail.erase(avail.begin() + k);
  }
  return p;
}

// Canonical free-group letter order: a < a^-1 < b < b^-1 < ...
inline int letter_rank(long long letter) {
  long long k = letter > 0 ? letter : -letter;
  return static_cast<int>(2 * (k - 1) + (letter < 0 ? 1 : 0));
}

inline void free_append(std::vector<long long>& w, long long letter) {
  if (!w.empty() && w.back() == -letter)
    w.pop_back();
  else
    w.push_back(letter);
}

}  // namespace detail

class Group {
 public:
  explicit Group(GroupSpec spec) : spec_(std::move(spec)) { init(); }

  const GroupSpec& spec() const { return spec_; }
  bool finite() const { return finite_; }
  bool abelian() const { return abelian_; }

  uint64_t order() const {
    if (!finite_) throw Unsupported("order() on infinite group");
    return order_;
  }

  uint64_t exponent() const {
    if (!finite_) throw Unsupported("exponent() on infinite group");
    return exponent_;
  }

  // Canonical printable name; round-trips through the DSL group grammar.
  std::string name() const { return name_of(spec_); }

  Elem identity() const {
    switch (spec_.kind) {
      case GroupSpec::Kind::FreeAbelian:
        return Elem{std::vector<long long>(spec_.n, 0)};
      case GroupSpec::Kind::Free:
        return Elem{{}};
      default:
        return elem1(0);
    }
  }

  bool is_elem(const Elem& e) const {
    switch (spec_.kind) {
      case GroupSpec::Kind::FreeAbelian:
        return e.v.size() == static_cast<size_t>(spec_.n);
      case GroupSpec::Kind::Free: {
        for (size_t i = 0; i < e.v.size(); ++i) {
          long long l = e.v[i];
          if (l == 0 || l > spec_.n || l < -spec_.n) return false;
          if (i + 1 < e.v.size() && e.v[i + 1] == -l) return false;  // not reduced
        }
        return true;
      }
      default:
        return e.v.size() == 1 && e.v[0] >= 0 &&
               static_cast<uint64_t>(e.v[0]) < order_;
    }
  }

  void check_elem(const Elem& e) const {
    if (!is_elem(e)) throw InvalidElement("not an element of " + name());
  }

  Elem mul(const Elem& a, const Elem& b) const {
    check_elem(a);
    check_elem(b);
    switch (spec_.kind) {
      case GroupSpec::Kind::Cyclic:
        return elem1((a.v[0] + b.v[0]) % spec_.n);
      case GroupSpec::Kind::Product: {
        std::vector<uint64_t> ia = split_index(a.v[0]), ib = split_index(b.v[0]);
        std::vector<uint64_t> ic(children_.size());
        for (size_t f = 0; f < children_.size(); ++f)
          ic[f] = children_[f]
                      .mul(elem1(static_cast<long long>(ia[f])),
                           elem1(static_cast<long long>(ib[f])))
                      .v[0];
        return elem1(static_cast<long long>(join_index(ic)));
      }
      case GroupSpec::Kind::Symmetric: {
        if (!mul_table_.empty())
          return elem1(mul_table_[a.v[0] * order_ + b.v[0]]);
        // (a*b)(x) = a(b(x))
        const auto& pa = perms_[a.v[0]];
        const auto& pb = perms_[b.v[0]];
        std::vector<uint8_t> pc(pa.size());
        for (size_t x = 0; x < pa.size(); ++x) pc[x] = pa[pb[x]];
        return elem1(static_cast<long long>(detail::perm_rank(pc)));
      }
      case GroupSpec::Kind::Dihedral: {
        // r^k s^f with s r = r^-1 s;  index = f*n + k.
        long long n = spec_.n;
        long long k1 = a.v[0] % n, f1 = a.v[0] / n;
        long long k2 = b.v[0] % n, f2 = b.v[0] / n;
        long long k = f1 ? (k1 - k2 % n + n) % n : (k1 + k2) % n;
        long long f = (f1 + f2) % 2;
        return elem1(f * n + k);
      }
      case GroupSpec::Kind::FreeAbelian: {
        Elem c = a;
        for (size_t i = 0; i < c.v.size(); ++i) c.v[i] += b.v[i];
        return c;
      }
      case GroupSpec::Kind::Free: {
        std::vector<long long> w = a.v;
        for (long long l : b.v) detail::free_append(w, l);
        return Elem{std::move(w)};
      }
    }
    throw Error("unreachable");
  }

  Elem inv(const Elem& a) const {
    check_elem(a);
    switch (spec_.kind) {
      case GroupSpec::Kind::Cyclic:
        return elem1((spec_.n - a.v[0]) % spec_.n);
      case GroupSpec::Kind::Product: {
        std::vector<uint64_t> ia = split_index(a.v[0]);
        std::vector<uint64_t> ic(children_.size());
        for (size_t f = 0; f < children_.size(); ++f)
          ic[f] = children_[f].inv(elem1(static_cast<long long>(ia[f]))).v[0];
        return elem1(static_cast<long long>(join_index(ic)));
      }
      case GroupSpec::Kind::Symmetric: {
        const auto& p = perms_[a.v[0]];
        std::vector<uint8_t> q(p.size());
        for (size_t x = 0; x < p.size(); ++x) q[p[x]] = static_cast<uint8_t>(x);
        return elem1(static_cast<long long>(detail::perm_rank(q)));
      }
      case GroupSpec::Kind::Dihedral: {
        long long n = spec_.n;
        long long k = a.v[0] % n, f = a.v[0] / n;
        return elem1(f ? a.v[0] : (n - k) % n);
      }
      case GroupSpec::Kind::FreeAbelian: {
        Elem c = a;
        for (auto& x : c.v) x = -x;
        return c;
      }
      case GroupSpec::Kind::Free: {
        std::vector<long long> w(a.v.rbegin(), a.v.rend());
        for (auto& l : w) l = -l;
        return Elem{std::move(w)};
      }
    }
    throw Error("unreachable");
  }

  Elem conj(const Elem& g, const Elem& x) const {  // x^-1 g x
    return mul(mul(inv(x), g), x);
  }

  // Canonical order of elements; window enumeration and witness reporting
  // follow it. Finite: index. Z^d: sup-norm then lexicographic. Free: word
  // length then the letter order a < a^-1 < b < b^-1.
  bool less(const Elem& a, const Elem& b) const {
    switch (spec_.kind) {
      case GroupSpec::Kind::FreeAbelian: {
        long long na = 0, nb = 0;
        for (auto x : a.v) na = std::max(na, x < 0 ? -x : x);
        for (auto x : b.v) nb = std::max(nb, x < 0 ? -x : x);
        if (na != nb) return na < nb;
        return a.v < b.v;
      }
      case GroupSpec::Kind::Free: {
        if (a.v.size() != b.v.size()) return a.v.size() < b.v.size();
        for (size_t i = 0; i < a.v.size(); ++i) {
          int ra = detail::letter_rank(a.v[i]), rb = detail::letter_rank(b.v[i]);
          if (ra != rb) return ra < rb;
        }
        return false;
      }
      default:
        return a.v[0] < b.v[0];
    }
  }

  uint64_t to_index(const Elem& e) const {
    if (!finite_) throw Unsupported("to_index on infinite group");
    check_elem(e);
    return static_cast<uint64_t>(e.v[0]);
  }

  Elem from_index(uint64_t i) const {
    if (!finite_) throw Unsupported("from_index on infinite group");
    if (i >= order_) throw InvalidElement("index out of range");
    return elem1(static_cast<long long>(i));
  }

  Window full_window() const {
    if (!finite_) throw Unsupported("full window of infinite group");
    std::vector<Elem> es;
    es.reserve(order_);
    for (uint64_t i = 0; i < order_; ++i) es.push_back(elem1((long long)i));
    return Window::of(std::move(es), true);
  }

  // Ball of the given radius in the canonical order. Finite groups return the
  // full carrier regardless of radius.
  Window ball(int radius) const {
    if (radius < 0) throw Error("negative radius");
    if (finite_) return full_window();
    if (spec_.kind == GroupSpec::Kind::FreeAbelian) {
      const int d = spec_.n;
      double count = 1;
      for (int i = 0; i < d; ++i) count *= 2.0 * radius + 1;
      if (count > 2e6) throw CapacityError("ball too large");
      std::vector<Elem> es;
      for (int s = 0; s <= radius; ++s) {
        std::vector<Elem> shell;
        std::vector<long long> x(d, -s);
        while (true) {
          long long norm = 0;
          for (auto c : x) norm = std::max(norm, c < 0 ? -c : c);
          if (norm == s) shell.push_back(Elem{x});
          int i = d - 1;
          while (i >= 0 && x[i] == s) x[i--] = -s;
          if (i < 0) break;
          ++x[i];
        }
        std::sort(shell.begin(), shell.end());
        for (auto& e : shell) es.push_back(std::move(e));
      }
      return Window::of(std::move(es));
    }
    // free group: breadth-first by length, letters in rank order
    const int k = spec_.n;
    std::vector<long long> letters;
    for (int g = 1; g <= k; ++g) {
      letters.push_back(g);
      letters.push_back(-g);
    }
    std::sort(letters.begin(), letters.end(), [](long long a, long long b) {
      return detail::letter_rank(a) < detail::letter_rank(b);
    });
    std::vector<Elem> es = {Elem{{}}};
    size_t level_begin = 0;
    for (int len = 1; len <= radius; ++len) {
      size_t level_end = es.size();
      for (size_t i = level_begin; i < level_end; ++i) {
        for (long long l : letters) {
          if (!es[i].v.empty() && es[i].v.back() == -l) continue;
          Elem w = es[i];
          w.v.push_back(l);
          es.push_back(std::move(w));
          if (es.size() > 2000000) throw CapacityError("ball too large");
        }
      }
      level_begin = level_end;
    }
    return Window::of(std::move(es));
  }

  std::string print_elem(const Elem& e) const {
    check_elem(e);
    switch (spec_.kind) {
      case GroupSpec::Kind::FreeAbelian: {
        if (spec_.n == 1) return std::to_string(e.v[0]);
        std::string s = "(";
        for (size_t i = 0; i < e.v.size(); ++i) {
          if (i) s += ",";
          s += std::to_string(e.v[i]);
        }
        return s + ")";
      }
      case GroupSpec::Kind::Free: {
        if (e.v.empty()) return "e";
        std::string s;
        for (long long l : e.v)
          s += static_cast<char>(l > 0 ? 'a' + (l - 1) : 'A' + (-l - 1));
        return s;
      }
      case GroupSpec::Kind::Product: {
        std::vector<uint64_t> ix = split_index(e.v[0]);
        std::string s = "(";
        for (size_t f = 0; f < children_.size(); ++f) {
          if (f) s += ",";
          s += children_[f].print_elem(elem1(static_cast<long long>(ix[f])));
        }
        return s + ")";
      }
      default:
        return std::to_string(e.v[0]);
    }
  }

  // Product-group helpers (index <-> factor indices, lexicographic order,
  // first factor most significant).
  std::vector<uint64_t> split_index(long long idx) const {
    std::vector<uint64_t> out(children_.size());
    uint64_t r = static_cast<uint64_t>(idx);
    for (size_t f = children_.size(); f-- > 0;) {
      out[f] = r % children_[f].order();
      r /= children_[f].order();
    }
    return out;
  }
  uint64_t join_index(const std::vector<uint64_t>& ix) const {
    uint64_t r = 0;
    for (size_t f = 0; f < children_.size(); ++f)
      r = r * children_[f].order() + ix[f];
    return r;
  }
  const std::vector<Group>& factors() const { return children_; }

 private:
  void init() {
    switch (spec_.kind) {
      case GroupSpec::Kind::Cyclic:
        if (spec_.n < 1) throw CapacityError("Zmod modulus must be >= 1");
        finite_ = true;
        order_ = spec_.n;
        exponent_ = spec_.n;
        abelian_ = true;
        break;
      case GroupSpec::Kind::Product: {
        if (spec_.factors.empty()) throw CapacityError("empty product");
        finite_ = true;
        order_ = 1;
        exponent_ = 1;
        abelian_ = true;
        for (const auto& f : spec_.factors) {
          children_.emplace_back(f);
          if (!children_.back().finite())
            throw CapacityError("product factors must be finite (use Z^d)");
          order_ *= children_.back().order();
          exponent_ = std::lcm(exponent_, children_.back().exponent());
          abelian_ = abelian_ && children_.back().abelian();
          if (order_ > (1ull << 40)) throw CapacityError("product too large");
        }
        break;
      }
      case GroupSpec::Kind::Symmetric: {
        if (spec_.n < 1 || spec_.n > 8)
          throw CapacityError("Sym(n) supported for 1 <= n <= 8");
        finite_ = true;
        order_ = 1;
        for (int i = 2; i <= spec_.n; ++i) order_ *= i;
        exponent_ = 1;
        for (int i = 1; i <= spec_.n; ++i) exponent_ = std::lcm<uint64_t>(exponent_, i);
        abelian_ = spec_.n <= 2;
        perms_.reserve(order_);
        for (uint64_t r = 0; r < order_; ++r)
          perms_.push_back(detail::perm_unrank(r, spec_.n));
        if (order_ <= 5040) {
          mul_table_.resize(order_ * order_);
          std::vector<uint8_t> pc(spec_.n);
          for (uint64_t i = 0; i < order_; ++i)
            for (uint64_t j = 0; j < order_; ++j) {
              for (int x = 0; x < spec_.n; ++x) pc[x] = perms_[i][perms_[j][x]];
              mul_table_[i * order_ + j] =
                  static_cast<uint32_t>(detail::perm_rank(pc));
            }
        }
        break;
      }
      case GroupSpec::Kind::Dihedral:
        if (spec_.n < 1) throw CapacityError("Dih(n) needs n >= 1");
        finite_ = true;
        order_ = 2ull * spec_.n;
        exponent_ = std::lcm<uint64_t>(spec_.n, 2);
        abelian_ = spec_.n <= 2;
        break;
      case GroupSpec::Kind::FreeAbelian:
        if (spec_.n < 1) throw CapacityError("Z^d needs d >= 1");
        finite_ = false;
        abelian_ = true;
        break;
      case GroupSpec::Kind::Free:
        if (spec_.n < 1 || spec_.n > 26)
          throw CapacityError("Free(k) supported for 1 <= k <= 26");
        finite_ = false;
        abelian_ = spec_.n == 1;
        break;
    }
  }

  static std::string name_of(const GroupSpec& s) {
    switch (s.kind) {
      case GroupSpec::Kind::Cyclic:
        return "Zmod(" + std::to_string(s.n) + ")";
      case GroupSpec::Kind::Symmetric:
        return "Sym(" + std::to_string(s.n) + ")";
      case GroupSpec::Kind::Dihedral:
        return "Dih(" + std::to_string(s.n) + ")";
      case GroupSpec::Kind::FreeAbelian:
        return s.n == 1 ? "Z" : "Z^" + std::to_string(s.n);
      case GroupSpec::Kind::Free:
        return "Free(" + std::to_string(s.n) + ")";
      case GroupSpec::Kind::Product: {
        std::string out;
        for (size_t i = 0; i < s.factors.size(); ++i) {
          if (i) out += " x ";
          out += name_of(s.factors[i]);
        }
        return out;
      }
    }
    return "?";
  }

  GroupSpec spec_;
  bool finite_ = false;
  bool abelian_ = false;
  uint64_t order_ = 0;
  uint64_t exponent_ = 0;
  std::vector<Group> children_;
  std::vector<std::vector<uint8_t>> perms_;  // Symmetric one-line forms
  std::vector<uint32_t> mul_table_;          // Symmetric, order <= 5040
};

// Componentwise reduction Z^d -> Zmod(m_1) x ... x Zmod(m_d).
struct QuotientMap {
  std::vector<long long> moduli;
  std::shared_ptr<Group> target;

  static QuotientMap make(const Group& g, std::vector<long long> moduli) {
    if (g.spec().kind != GroupSpec::Kind::FreeAbelian)
      throw Unsupported("quotient_map requires Z^d");
    if (moduli.size() != static_cast<size_t>(g.spec().n))
      throw Unsupported("quotient_map modulus arity mismatch");
    for (auto m : moduli)
      if (m < 1) throw Unsupported("quotient modulus must be >= 1");
    QuotientMap q;
    q.moduli = std::move(moduli);
    if (q.moduli.size() == 1) {
      q.target = std::make_shared<Group>(GroupSpec::cyclic((int)q.moduli[0]));
    } else {
      std::vector<GroupSpec> fs;
      for (auto m : q.moduli) fs.push_back(GroupSpec::cyclic((int)m));
      q.target = std::make_shared<Group>(GroupSpec::product(std::move(fs)));
    }
    return q;
  }

  Elem apply(const Elem& e) const {
    std::vector<uint64_t> ix(moduli.size());
    for (size_t i = 0; i < moduli.size(); ++i)
      ix[i] = static_cast<uint64_t>(((e.v[i] % moduli[i]) + moduli[i]) % moduli[i]);
    if (moduli.size() == 1) return elem1(static_cast<long long>(ix[0]));
    return elem1(static_cast<long long>(target->join_index(ix)));
  }

  // Minimal representative in Z^d of a quotient element.
  Elem rep(const Elem& q) const {
    std::vector<long long> coords;
    if (moduli.size() == 1) {
      coords.push_back(q.v[0]);
    } else {
      for (uint64_t c : target->split_index(q.v[0]))
        coords.push_back(static_cast<long long>(c));
    }
    return Elem{std::move(coords)};
  }
};

// Left action of a finite group on a finite index set. The regular action
// (X = G) and coset spaces G/H are the two constructors.
struct Action {
  std::shared_ptr<Group> group;
  uint32_t points = 0;
  std::vector<uint32_t> table;  // table[g * points + x] = g . x

  uint32_t act(uint64_t g, uint32_t x) const { return table[g * points + x]; }

  static Action regular(const Group& g) {
    Action a;
    a.group = std::make_shared<Group>(g);
    a.points = static_cast<uint32_t>(g.order());
    a.table.resize(g.order() * g.order());
    for (uint64_t i = 0; i < g.order(); ++i)
      for (uint64_t j = 0; j < g.order(); ++j)
        a.table[i * a.points + j] = static_cast<uint32_t>(
            g.to_index(g.mul(g.from_index(i), g.from_index(j))));
    return a;
  }

  // Points are left cosets gH, numbered by their minimal representative.
  static Action cosets(const Group& g, const std::vector<Elem>& sub) {
    for (const auto& h : sub) g.check_elem(h);
    std::vector<char> in_h(g.order(), 0);
    for (const auto& h : sub) in_h[g.to_index(h)] = 1;
    if (!in_h[0]) throw Unsupported("subgroup must contain the identity");
    for (const auto& a : sub)
      for (const auto& b : sub)
        if (!in_h[g.to_index(g.mul(a, g.inv(b)))])
          throw Unsupported("not a subgroup");
    std::vector<int> coset_of(g.order(), -1);
    std::vector<uint64_t> reps;
    for (uint64_t x = 0; x < g.order(); ++x) {
      if (coset_of[x] >= 0) continue;
      int c = static_cast<int>(reps.size());
      reps.push_back(x);
      for (const auto& h : sub)
        coset_of[g.to_index(g.mul(g.from_index(x), h))] = c;
    }
    Action a;
    a.group = std::make_shared<Group>(g);
    a.points = static_cast<uint32_t>(reps.size());
    a.table.resize(g.order() * reps.size());
    for (uint64_t i = 0; i < g.order(); ++i)
      for (uint32_t c = 0; c < a.points; ++c)
        a.table[i * a.points + c] = static_cast<uint32_t>(
            coset_of[g.to_index(g.mul(g.from_index(i), g.from_index(reps[c])))]);
    return a;
  }
};

}  // namespace groupdens
