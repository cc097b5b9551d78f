#pragma once

// Extremal density functionals, computed as values of finite zero-sum games
// over exact rationals.
//
// The common shape: a density like is12(A) = inf_mu sup_x mu*delta_x(A) is the
// value of a matrix game whose rows are candidate support points for mu and
// whose columns are test points x (or pairs (x,y) for the double-sup
// variants).  On a finite group both sides range over the full carrier and the
// LP value is the exact density.  On Z^d and free groups the row side is
// restricted to a support window, which makes the result a certified upper
// bound on the restricted-support infimum; the column side is still exact,
// because for the supported set shapes (explicit finite, residue classes,
// prefix sets) the sup over the whole group is attained within a computable
// candidate list.  Periodic subsets of Z^d bypass windows entirely: the
// functional is computed in the finite quotient and transported back.
//
// Column candidate completeness:
//   explicit A:  g*x in A forces x in g^{-1}A, so {g^{-1}a} covers every
//                column with a nonzero payoff profile;
//   residues:    payoffs depend on x mod the period vector only;
//   prefix(L):   profiles over rows of length <= M are decided by x's
//                first letter and length, realized inside ball(M+1).
// Anything else is rejected rather than approximated.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "groupdens/errors.hpp"
#include "groupdens/group.hpp"
#include "groupdens/lp.hpp"
#include "groupdens/measure.hpp"
#include "groupdens/rational.hpp"
#include "groupdens/sets.hpp"

namespace groupdens {

struct DensityConfig {
  int kmax = -1;               // -1: |G| for finite |G| <= 12, else 8
  int grid_denominator = 4;    // outer-measure grids for sup-inf-sup
  int exact_limit = 12;        // full C-enumeration bound for subadditivization
  int ladder_levels = 8;       // box ladder length for density* on Z^d
  uint64_t column_cap = 1u << 21;
  uint64_t subset_cap = 1u << 21;
};

struct DensityResult {
  enum class Kind { Exact, UpperBound, LowerBound, Interval };
  Kind kind = Kind::Exact;
  Rat lo = 0, hi = 0;          // Exact: lo == hi
  std::string method;          // lp-game | quotient | subset-enum | grid | oracle
  std::optional<Measure> witness_measure;
  std::vector<std::vector<Elem>> witness_points;
  std::vector<Rat> sequence;   // ladder values, where applicable

  Rat value() const {
    if (kind != Kind::Exact) throw Error("value() on a non-exact density result");
    return lo;
  }
  static DensityResult exact(Rat v, std::string m) {
    DensityResult r;
    r.kind = Kind::Exact;
    r.lo = v;
    r.hi = std::move(v);
    r.method = std::move(m);
    return r;
  }
  static DensityResult upper(Rat v, std::string m) {
    DensityResult r;
    r.kind = Kind::UpperBound;
    r.lo = 0;
    r.hi = std::move(v);
    r.method = std::move(m);
    return r;
  }
  static DensityResult lower(Rat v, std::string m) {
    DensityResult r;
    r.kind = Kind::LowerBound;
    r.lo = std::move(v);
    r.hi = 1;
    r.method = std::move(m);
    return r;
  }
  static DensityResult interval(Rat a, Rat b, std::string m) {
    DensityResult r;
    r.kind = Kind::Interval;
    r.lo = std::move(a);
    r.hi = std::move(b);
    r.method = std::move(m);
    return r;
  }
};

namespace detail {

struct Cols {
  std::vector<Bits> profiles;
  std::vector<std::vector<Elem>> labels;  // one representative test tuple per column
};

// Keep the first representative of each distinct payoff profile, drop all-zero
// columns (they can never realize the sup unless there are no columns at all,
// and the empty-set case is short-circuited before the game is built).
inline Cols dedupe(Cols&& in) {
  Cols out;
  std::map<std::vector<Bits::block_type>, size_t> seen;
  for (size_t j = 0; j < in.profiles.size(); ++j) {
    if (!in.profiles[j].any()) continue;
    std::vector<Bits::block_type> key(in.profiles[j].num_blocks());
    boost::to_block_range(in.profiles[j], key.begin());
    if (seen.emplace(std::move(key), j).second) {
      out.profiles.push_back(std::move(in.profiles[j]));
      out.labels.push_back(std::move(in.labels[j]));
    }
  }
  return out;
}

// Letters of a prefix set if the node is a prefix leaf or a union/intersection
// of such; unions merge letter sets, intersections intersect them.
inline std::optional<std::vector<long long>> prefix_normal(const SetPtr& s) {
  if (!s) return std::nullopt;
  switch (s->kind) {
    case SetNode::Kind::Prefix:
      return s->letters;
    case SetNode::Kind::Union:
    case SetNode::Kind::Inter: {
      std::optional<std::vector<long long>> acc;
      for (const auto& a : s->args) {
        auto la = prefix_normal(a);
        if (!la) return std::nullopt;
        if (!acc) {
          acc = std::move(la);
          continue;
        }
        std::vector<long long> merged;
        if (s->kind == SetNode::Kind::Union)
          std::set_union(acc->begin(), acc->end(), la->begin(), la->end(),
                         std::back_inserter(merged));
        else
          std::set_intersection(acc->begin(), acc->end(), la->begin(), la->end(),
                                std::back_inserter(merged));
        acc = std::move(merged);
      }
      return acc;
    }
    default:
      return std::nullopt;
  }
}

inline size_t max_word_len(const std::vector<Elem>& rows) {
  size_t m = 0;
  for (const auto& e : rows) m = std::max(m, e.v.size());
  return m;
}

// Payoff profiles of sup_x over single test points, for rows of support
// candidates.  Exhaustive over x whenever that is finite, otherwise over a
// candidate list proven to cover every achievable profile maximum.
inline Cols single_sup_columns(const Group& g, const std::vector<Elem>& rows,
                               const SetPtr& a, const DensityConfig& cfg) {
  (void)cfg;
  Cols c;
  const size_t n = rows.size();
  auto add = [&](const Elem& x) {
    Bits p(n);
    for (size_t i = 0; i < n; ++i)
      if (set_contains(g, a, g.mul(rows[i], x))) p.set(i);
    c.profiles.push_back(std::move(p));
    c.labels.push_back({x});
  };
  if (g.finite()) {
    for (uint64_t i = 0; i < g.order(); ++i) add(elem1(static_cast<long long>(i)));
    return dedupe(std::move(c));
  }
  if (g.spec().kind == GroupSpec::Kind::FreeAbelian) {
    if (auto rf = residue_normal(g, a)) {
      std::vector<long long> x(rf->moduli.size(), 0);
      uint64_t total = box_size(rf->moduli);
      for (uint64_t it = 0; it < total; ++it) {
        add(Elem{x});
        for (size_t i = 0; i < x.size(); ++i) {
          if (++x[i] < rf->moduli[i]) break;
          x[i] = 0;
        }
      }
      return dedupe(std::move(c));
    }
    if (set_enumerable(g, a)) {
      auto ae = enumerate_set(g, a);
      std::vector<Elem> cand;
      for (const auto& r : rows)
        for (const auto& e : ae) cand.push_back(g.mul(g.inv(r), e));
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
      for (const auto& x : cand) add(x);
      return dedupe(std::move(c));
    }
    throw Unsupported("single-sup columns: set shape not supported on " + g.name());
  }
  if (g.spec().kind == GroupSpec::Kind::Free) {
    if (prefix_normal(a)) {
      auto ball = g.ball(static_cast<int>(max_word_len(rows)) + 1);
      for (const auto& x : ball.elems) add(x);
      return dedupe(std::move(c));
    }
    if (set_enumerable(g, a)) {
      auto ae = enumerate_set(g, a);
      std::vector<Elem> cand;
      for (const auto& r : rows)
        for (const auto& e : ae) cand.push_back(g.mul(g.inv(r), e));
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
      for (const auto& x : cand) add(x);
      return dedupe(std::move(c));
    }
    throw Unsupported("single-sup columns: set shape not supported on " + g.name());
  }
  throw Unsupported("single-sup columns: group not supported: " + g.name());
}

// Payoff profiles of sup over pairs (x,y), payoff [x * g * y in A].
inline Cols double_sup_columns(const Group& g, const std::vector<Elem>& rows,
                               const SetPtr& a, const DensityConfig& cfg) {
  Cols c;
  const size_t n = rows.size();
  auto add = [&](const Elem& x, const Elem& y) {
    Bits p(n);
    for (size_t i = 0; i < n; ++i)
      if (set_contains(g, a, g.mul(g.mul(x, rows[i]), y))) p.set(i);
    c.profiles.push_back(std::move(p));
    c.labels.push_back({x, y});
  };
  if (g.finite()) {
    for (uint64_t i = 0; i < g.order(); ++i)
      for (uint64_t j = 0; j < g.order(); ++j)
        add(elem1(static_cast<long long>(i)), elem1(static_cast<long long>(j)));
    return dedupe(std::move(c));
  }
  if (g.spec().kind == GroupSpec::Kind::FreeAbelian) {
    // x + g + y depends on x + y only; reuse the single-shift candidates.
    auto single = single_sup_columns(g, rows, a, cfg);
    Cols out;
    const Elem id = g.identity();
    for (size_t j = 0; j < single.profiles.size(); ++j) {
      out.profiles.push_back(std::move(single.profiles[j]));
      out.labels.push_back({single.labels[j][0], id});
    }
    return out;
  }
  if (g.spec().kind == GroupSpec::Kind::Free) {
    if (auto letters = prefix_normal(a)) {
      if (letters->empty()) return c;
      // x = l^(M+1), y = e pins every conjugate x*g*y to first letter l:
      // |g| <= M cannot cancel through the leading run.  The all-ones profile
      // dominates every other achievable column.
      const size_t m = max_word_len(rows);
      Elem x;
      for (size_t i = 0; i <= m; ++i) x.v.push_back((*letters)[0]);
      add(x, g.identity());
      return c;
    }
    if (set_enumerable(g, a)) {
      // Bounded search: y over increasing balls, x forced into a*(g*y)^{-1}.
      // Accepted only if the profile set stabilizes between consecutive radii.
      auto ae = enumerate_set(g, a);
      const int m = static_cast<int>(max_word_len(rows));
      int r = 0;
      for (const auto& e : ae) r = std::max(r, static_cast<int>(e.v.size()));
      const int rad = 2 * (m + r) + 2;
      auto profile_set = [&](int yrad) {
        std::map<std::vector<Bits::block_type>, std::pair<Elem, Elem>> acc;
        auto ball = g.ball(yrad);
        for (const auto& y : ball.elems) {
          std::vector<Elem> xs;
          for (const auto& rr : rows)
            for (const auto& e : ae) xs.push_back(g.mul(e, g.inv(g.mul(rr, y))));
          std::sort(xs.begin(), xs.end());
          xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
          for (const auto& x : xs) {
            Bits p(n);
            for (size_t i = 0; i < n; ++i)
              if (set_contains(g, a, g.mul(g.mul(x, rows[i]), y))) p.set(i);
            if (!p.any()) continue;
            std::vector<Bits::block_type> key(p.num_blocks());
            boost::to_block_range(p, key.begin());
            acc.emplace(std::move(key), std::make_pair(x, y));
          }
        }
        return acc;
      };
      auto prev = profile_set(rad - 1);
      auto cur = profile_set(rad);
      bool same = prev.size() == cur.size();
      if (same)
        for (auto it1 = prev.begin(), it2 = cur.begin(); it1 != prev.end(); ++it1, ++it2)
          if (it1->first != it2->first) { same = false; break; }
      if (!same)
        throw Unsupported("double-sup column search did not stabilize; not certifiable");
      for (auto& [key, xy] : cur) {
        Bits p(n);
        boost::from_block_range(key.begin(), key.end(), p);
        p.resize(n);
        c.profiles.push_back(std::move(p));
        c.labels.push_back({xy.first, xy.second});
      }
      return c;
    }
    throw Unsupported("double-sup columns: set shape not supported on " + g.name());
  }
  throw Unsupported("double-sup columns: group not supported: " + g.name());
}

inline GameMatrix game_from_cols(const Group& g, const std::vector<Elem>& rows,
                                 const Cols& cols) {
  GameMatrix gm;
  gm.a.assign(rows.size(), std::vector<Rat>(cols.profiles.size(), 0));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.profiles.size(); ++j)
      if (cols.profiles[j][i]) gm.a[i][j] = 1;
  for (const auto& r : rows) gm.row_labels.push_back(g.print_elem(r));
  for (const auto& lab : cols.labels) {
    std::string s = g.print_elem(lab[0]);
    for (size_t t = 1; t < lab.size(); ++t) s += "|" + g.print_elem(lab[t]);
    gm.col_labels.push_back(s);
  }
  return gm;
}

inline Measure strategy_measure(const std::vector<Elem>& rows,
                                const std::vector<Rat>& strat) {
  std::vector<std::pair<Elem, Rat>> w;
  for (size_t i = 0; i < rows.size(); ++i)
    if (strat[i] != 0) w.emplace_back(rows[i], strat[i]);
  return Measure::of(w);
}

// Shortcut detection: is the set empty / the whole group, when cheaply decidable.
inline std::optional<bool> known_empty(const Group& g, const SetPtr& a) {
  if (g.finite()) {
    auto w = g.full_window();
    return realize(g, a, w).none();
  }
  if (g.spec().kind == GroupSpec::Kind::FreeAbelian)
    if (auto rf = residue_normal(g, a)) return rf->classes.empty();
  if (auto letters = prefix_normal(a)) return letters->empty();
  if (set_enumerable(g, a)) return enumerate_set(g, a).empty();
  return std::nullopt;
}

inline std::optional<bool> known_full(const Group& g, const SetPtr& a) {
  if (g.finite()) {
    auto w = g.full_window();
    return realize(g, a, w).count() == g.order();
  }
  if (g.spec().kind == GroupSpec::Kind::FreeAbelian)
    if (auto rf = residue_normal(g, a)) {
      uint64_t total = box_size(rf->moduli);
      return rf->classes.size() == total;
    }
  if (prefix_normal(a)) return false;      // a prefix set never contains e
  if (set_enumerable(g, a)) return false;  // finite subset of an infinite G
  return std::nullopt;
}

inline int effective_kmax(const Group& g, const DensityConfig& cfg) {
  if (cfg.kmax > 0) return cfg.kmax;
  if (g.finite() && g.order() <= 12) return static_cast<int>(g.order());
  return 8;
}

// Enumerate subsets of {0..n-1} of size 1..k in (size, lex) order.  The total
// count is checked against the cap up front so an oversized request fails
// before any work is done.
inline void for_each_subset(size_t n, int k, uint64_t cap,
                            const std::function<void(const std::vector<size_t>&)>& f) {
  BigInt total = 0, binom = 1;
  for (int sz = 1; sz <= k && sz <= static_cast<int>(n); ++sz) {
    binom = binom * static_cast<long long>(n - static_cast<size_t>(sz) + 1) / sz;
    total += binom;
    if (total > cap)
      throw CapacityError("subset enumeration exceeds cap; lower kmax or shrink the window");
  }
  uint64_t count = 0;
  std::vector<size_t> pick;
  for (int sz = 1; sz <= k && sz <= static_cast<int>(n); ++sz) {
    pick.assign(static_cast<size_t>(sz), 0);
    for (size_t i = 0; i < pick.size(); ++i) pick[i] = i;
    while (true) {
      if (++count > cap)
        throw CapacityError("subset enumeration exceeds cap; lower kmax or shrink the window");
      f(pick);
      int i = sz - 1;
      while (i >= 0 && pick[static_cast<size_t>(i)] == n - static_cast<size_t>(sz - i)) --i;
      if (i < 0) break;
      ++pick[static_cast<size_t>(i)];
      for (size_t j = static_cast<size_t>(i) + 1; j < pick.size(); ++j)
        pick[j] = pick[j - 1] + 1;
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Kelley intersection number of a finite family over a window.

struct KelleyResult {
  Rat value;
  std::vector<size_t> tuple;        // witness multiset, by family index
  std::vector<Rat> weights;         // optimal convex weights (LP route)
};

// Direct search over multisets (B_{i1},...,B_{in}), n <= max_tuple:
// value = min over multisets of max{|F| : intersection over F nonempty}/n.
inline KelleyResult kelley_bruteforce(const Group& g,
                                      const std::vector<SetPtr>& family,
                                      const Window& w, int max_tuple = 4) {
  if (family.empty()) throw Error("kelley: empty family");
  std::vector<Bits> bits;
  for (const auto& s : family) bits.push_back(realize(g, s, w));
  KelleyResult best;
  best.value = 2;  // above any attainable value
  std::vector<size_t> tup;
  std::function<void(size_t)> rec = [&](size_t start) {
    if (!tup.empty()) {
      const size_t m = tup.size();
      size_t best_f = 0;
      for (uint64_t mask = 1; mask < (1ull << m); ++mask) {
        size_t pc = static_cast<size_t>(__builtin_popcountll(mask));
        if (pc <= best_f) continue;
        Bits acc(w.elems.size());
        acc.set();
        for (size_t i = 0; i < m; ++i)
          if (mask & (1ull << i)) acc &= bits[tup[i]];
        if (acc.any()) best_f = pc;
      }
      Rat v = rat(static_cast<long long>(best_f), static_cast<long long>(m));
      if (v < best.value) {
        best.value = v;
        best.tuple = tup;
      }
    }
    if (tup.size() == static_cast<size_t>(max_tuple)) return;
    for (size_t i = start; i < bits.size(); ++i) {
      tup.push_back(i);
      rec(i);
      tup.pop_back();
    }
  };
  rec(0);
  return best;
}

// LP route: the intersection number is the value of the game with rows the
// family members, columns the window points, payoff [y in B].
inline KelleyResult kelley_lp(const Group& g, const std::vector<SetPtr>& family,
                              const Window& w) {
  if (family.empty()) throw Error("kelley: empty family");
  GameMatrix gm;
  gm.a.assign(family.size(), std::vector<Rat>(w.elems.size(), 0));
  bool any = false;
  for (size_t i = 0; i < family.size(); ++i) {
    Bits b = realize(g, family[i], w);
    for (size_t j = 0; j < w.elems.size(); ++j)
      if (b[j]) {
        gm.a[i][j] = 1;
        any = true;
      }
    gm.row_labels.push_back("B" + std::to_string(i));
  }
  for (const auto& e : w.elems) gm.col_labels.push_back(g.print_elem(e));
  KelleyResult r;
  if (!any || w.elems.empty()) {
    // Convention: every intersection over a nonempty F is empty, max F = 0.
    r.value = 0;
    r.weights.assign(family.size(), 0);
    if (!family.empty()) r.weights[0] = 1;
    return r;
  }
  auto sol = game_value(gm);
  r.value = sol.value;
  r.weights = sol.row_strategy;
  return r;
}

// ---------------------------------------------------------------------------
// inf-sup density: is12(A) = inf_mu sup_x mu*delta_x(A).

inline DensityResult is12(const Group& g, const SetPtr& a,
                          const Window* support = nullptr,
                          const DensityConfig& cfg = {}) {
  if (auto e = detail::known_empty(g, a); e && *e)
    return DensityResult::exact(0, "oracle");
  if (auto f = detail::known_full(g, a); f && *f)
    return DensityResult::exact(1, "oracle");
  // An explicit support window asks for the windowed estimate; the quotient
  // shortcut applies only when the caller leaves the route open.
  if (!support && !g.finite() && g.spec().kind == GroupSpec::Kind::FreeAbelian) {
    if (auto q = quotient_set(g, a)) {
      auto res = is12(*q->first.target, q->second, nullptr, cfg);
      DensityResult out = DensityResult::exact(res.value(), "quotient");
      if (res.witness_measure) {
        std::vector<std::pair<Elem, Rat>> w;
        for (const auto& [e, m] : res.witness_measure->weights())
          w.emplace_back(q->first.rep(e), m);
        out.witness_measure = Measure::of(w);
      }
      for (const auto& pt : res.witness_points)
        out.witness_points.push_back({q->first.rep(pt[0])});
      return out;
    }
  }
  std::vector<Elem> rows;
  if (g.finite()) {
    rows = g.full_window().elems;
  } else {
    if (!support) throw Error("is12: a support window is required on " + g.name());
    rows = support->elems;
  }
  auto cols = detail::single_sup_columns(g, rows, a, cfg);
  if (cols.profiles.empty()) return DensityResult::exact(0, "lp-game");
  auto gm = detail::game_from_cols(g, rows, cols);
  auto sol = game_value(gm);
  DensityResult out = g.finite() ? DensityResult::exact(sol.value, "lp-game")
                                 : DensityResult::upper(sol.value, "lp-game");
  out.witness_measure = detail::strategy_measure(rows, sol.row_strategy);
  for (size_t j = 0; j < cols.labels.size(); ++j)
    if (sol.col_strategy[j] != 0) out.witness_points.push_back(cols.labels[j]);
  return out;
}

// sup-inf dual on a finite group: si21(A) = sup_nu inf_x nu(xA).  Same game
// seen from the column player; the optimal column mixture is the witness.
inline DensityResult si21(const Group& g, const SetPtr& a,
                          const DensityConfig& cfg = {}) {
  if (!g.finite()) throw Unsupported("si21 requires a finite group");
  if (auto e = detail::known_empty(g, a); e && *e)
    return DensityResult::exact(0, "oracle");
  auto rows = g.full_window().elems;
  auto cols = detail::single_sup_columns(g, rows, a, cfg);
  if (cols.profiles.empty()) return DensityResult::exact(0, "lp-game");
  auto gm = detail::game_from_cols(g, rows, cols);
  auto sol = game_value(gm);
  DensityResult out = DensityResult::exact(sol.value, "lp-game");
  // nu lives on test points: mass on column labels.
  std::vector<std::pair<Elem, Rat>> w;
  for (size_t j = 0; j < cols.labels.size(); ++j)
    if (sol.col_strategy[j] != 0) w.emplace_back(cols.labels[j][0], sol.col_strategy[j]);
  out.witness_measure = Measure::of(w);
  for (size_t i = 0; i < rows.size(); ++i)
    if (sol.row_payoffs[i] == sol.value) {
      out.witness_points.push_back({rows[i]});
      break;
    }
  return out;
}

// Uniform-measure variant: inf over uniform measures on subsets F, |F| <= kmax.
// Exact when every subset of a finite group is enumerated; otherwise an upper
// bound from the visited candidates.
inline DensityResult us12(const Group& g, const SetPtr& a,
                          const Window* support = nullptr,
                          const DensityConfig& cfg = {}) {
  if (auto e = detail::known_empty(g, a); e && *e)
    return DensityResult::exact(0, "oracle");
  if (!support && !g.finite() && g.spec().kind == GroupSpec::Kind::FreeAbelian) {
    if (auto q = quotient_set(g, a)) {
      DensityConfig qcfg = cfg;
      qcfg.kmax = static_cast<int>(q->first.target->order());
      auto res = us12(*q->first.target, q->second, nullptr, qcfg);
      DensityResult out = res;
      out.method = "quotient";
      out.witness_measure.reset();
      out.witness_points.clear();
      if (res.witness_measure) {
        std::vector<std::pair<Elem, Rat>> w;
        for (const auto& [e, m] : res.witness_measure->weights())
          w.emplace_back(q->first.rep(e), m);
        out.witness_measure = Measure::of(w);
      }
      return out;
    }
  }
  std::vector<Elem> base;
  if (g.finite()) {
    base = g.full_window().elems;
  } else {
    if (!support) throw Error("us12: a support window is required on " + g.name());
    base = support->elems;
  }
  const int kmax = detail::effective_kmax(g, cfg);
  Rat best = 2;
  std::vector<size_t> best_f;
  detail::for_each_subset(base.size(), kmax, cfg.subset_cap,
                          [&](const std::vector<size_t>& pick) {
    std::vector<Elem> rows;
    for (size_t i : pick) rows.push_back(base[i]);
    auto cols = detail::single_sup_columns(g, rows, a, cfg);
    Rat v = 0;
    for (const auto& p : cols.profiles) {
      Rat pv = rat(static_cast<long long>(p.count()),
                   static_cast<long long>(rows.size()));
      if (pv > v) v = pv;
    }
    if (v < best) {
      best = v;
      best_f = pick;
    }
  });
  const bool complete = g.finite() && kmax >= static_cast<int>(g.order());
  DensityResult out = complete ? DensityResult::exact(best, "subset-enum")
                               : DensityResult::upper(best, "subset-enum");
  std::vector<Elem> f;
  for (size_t i : best_f) f.push_back(base[i]);
  if (!f.empty()) {
    out.witness_measure = Measure::uniform(f);
    out.witness_points.push_back(std::move(f));
  }
  return out;
}

// Two-sided translate variant: iss213(A) = inf_mu sup_{x,y} mu(x^{-1}A y^{-1})
// written as sup over pair columns with payoff [x*g*y in A].
inline DensityResult iss213(const Group& g, const SetPtr& a,
                            const Window* support = nullptr,
                            const DensityConfig& cfg = {}) {
  if (auto e = detail::known_empty(g, a); e && *e)
    return DensityResult::exact(0, "oracle");
  if (auto f = detail::known_full(g, a); f && *f)
    return DensityResult::exact(1, "oracle");
  if (!support && !g.finite() && g.spec().kind == GroupSpec::Kind::FreeAbelian) {
    if (auto q = quotient_set(g, a)) {
      auto res = iss213(*q->first.target, q->second, nullptr, cfg);
      DensityResult out = DensityResult::exact(res.value(), "quotient");
      return out;
    }
  }
  std::vector<Elem> rows;
  if (g.finite()) {
    rows = g.full_window().elems;
  } else {
    if (!support) throw Error("iss213: a support window is required on " + g.name());
    rows = support->elems;
  }
  auto cols = detail::double_sup_columns(g, rows, a, cfg);
  if (cols.profiles.empty()) return DensityResult::exact(0, "lp-game");
  auto gm = detail::game_from_cols(g, rows, cols);
  auto sol = game_value(gm);
  DensityResult out = g.finite() ? DensityResult::exact(sol.value, "lp-game")
                                 : DensityResult::upper(sol.value, "lp-game");
  out.witness_measure = detail::strategy_measure(rows, sol.row_strategy);
  for (size_t j = 0; j < cols.labels.size(); ++j)
    if (sol.col_strategy[j] != 0) out.witness_points.push_back(cols.labels[j]);
  return out;
}

// Uniform two-sided variant.  Shortcut: if some pair (x,y) puts every row
// inside A (an all-ones column), every F scores 1 and the min is 1.
inline DensityResult uss213_search(const Group& g, const SetPtr& a,
                                   const Window* support = nullptr,
                                   const DensityConfig& cfg = {}) {
  if (auto e = detail::known_empty(g, a); e && *e)
    return DensityResult::exact(0, "oracle");
  std::vector<Elem> base;
  if (g.finite()) {
    base = g.full_window().elems;
  } else {
    if (!support) throw Error("uss213: a support window is required on " + g.name());
    base = support->elems;
  }
  {
    auto cols = detail::double_sup_columns(g, base, a, cfg);
    for (size_t j = 0; j < cols.profiles.size(); ++j)
      if (cols.profiles[j].count() == base.size()) {
        DensityResult out = DensityResult::exact(1, "lp-game");
        out.witness_points.push_back(cols.labels[j]);
        return out;
      }
  }
  const int kmax = detail::effective_kmax(g, cfg);
  Rat best = 2;
  std::vector<size_t> best_f;
  detail::for_each_subset(base.size(), kmax, cfg.subset_cap,
                          [&](const std::vector<size_t>& pick) {
    std::vector<Elem> rows;
    for (size_t i : pick) rows.push_back(base[i]);
    auto cols = detail::double_sup_columns(g, rows, a, cfg);
    Rat v = 0;
    for (const auto& p : cols.profiles) {
      Rat pv = rat(static_cast<long long>(p.count()),
                   static_cast<long long>(rows.size()));
      if (pv > v) v = pv;
    }
    if (v < best) {
      best = v;
      best_f = pick;
    }
  });
  const bool complete = g.finite() && kmax >= static_cast<int>(g.order());
  DensityResult out = complete ? DensityResult::exact(best, "subset-enum")
                               : DensityResult::upper(best, "subset-enum");
  std::vector<Elem> f;
  for (size_t i : best_f) f.push_back(base[i]);
  if (!f.empty()) {
    out.witness_measure = Measure::uniform(f);
    out.witness_points.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// sup-inf-sup: sis123(A) = sup_{mu1} inf_{mu2} sup_x (mu1*mu2*delta_x)(A).
//
// Outer mu1 ranges over enumerated candidates (uniform measures on subsets up
// to kmax, then reduced rational grids with denominator up to the configured
// bound); the inner inf-sup is an exact game for each candidate.  The result
// brackets the true value between the best candidate and iss213.

namespace detail {

inline void for_each_grid_measure(const std::vector<Elem>& base, int max_den,
                                  const std::function<void(const Measure&)>& f) {
  const size_t n = base.size();
  for (int d = 1; d <= max_den; ++d) {
    std::vector<int> parts(n, 0);
    std::function<void(size_t, int)> rec = [&](size_t i, int left) {
      if (i + 1 == n) {
        parts[i] = left;
        int gcd = d;
        for (int p : parts) gcd = std::gcd(gcd, p);
        if (gcd == 1) {
          std::vector<std::pair<Elem, Rat>> w;
          for (size_t t = 0; t < n; ++t)
            if (parts[t] > 0) w.emplace_back(base[t], rat(parts[t], d));
          f(Measure::of(w));
        }
        return;
      }
      for (int p = 0; p <= left; ++p) {
        parts[i] = p;
        rec(i + 1, left - p);
      }
    };
    if (n > 0) rec(0, d);
  }
}

// inf_{mu2} sup_x (mu1 * mu2 * delta_x)(A) on a finite group, as a game with
// rows the support of mu2 and columns the test points x.
inline Rat inner_game_after(const Group& g, const Measure& mu1, const SetPtr& a) {
  auto carrier = g.full_window().elems;
  GameMatrix gm;
  gm.a.assign(carrier.size(), std::vector<Rat>(carrier.size(), 0));
  bool any = false;
  for (size_t i = 0; i < carrier.size(); ++i)
    for (size_t j = 0; j < carrier.size(); ++j) {
      Rat v = 0;
      for (const auto& [e, m] : mu1.weights())
        if (set_contains(g, a, g.mul(g.mul(e, carrier[i]), carrier[j]))) v += m;
      gm.a[i][j] = v;
      if (v != 0) any = true;
    }
  if (!any) return 0;
  for (const auto& e : carrier) gm.row_labels.push_back(g.print_elem(e));
  for (const auto& e : carrier) gm.col_labels.push_back(g.print_elem(e));
  return game_value(gm).value;
}

}  // namespace detail

inline DensityResult sis123(const Group& g, const SetPtr& a,
                            const DensityConfig& cfg = {}) {
  if (!g.finite()) {
    if (g.spec().kind == GroupSpec::Kind::FreeAbelian) {
      if (auto q = quotient_set(g, a)) {
        auto res = sis123(*q->first.target, q->second, cfg);
        res.method = "quotient";
        res.witness_measure.reset();
        res.witness_points.clear();
        return res;
      }
    }
    throw Unsupported("sis123 requires a finite group or a periodic subset of Z^d");
  }
  if (auto e = detail::known_empty(g, a); e && *e)
    return DensityResult::exact(0, "oracle");
  auto base = g.full_window().elems;
  const int kmax = detail::effective_kmax(g, cfg);
  Rat best = 0;
  std::optional<Measure> best_mu;
  auto consider = [&](const Measure& mu1) {
    Rat v = detail::inner_game_after(g, mu1, a);
    if (v > best || !best_mu) {
      best = v;
      best_mu = mu1;
    }
  };
  detail::for_each_subset(base.size(), kmax, cfg.subset_cap,
                          [&](const std::vector<size_t>& pick) {
    std::vector<Elem> f;
    for (size_t i : pick) f.push_back(base[i]);
    consider(Measure::uniform(f));
  });
  detail::for_each_grid_measure(base, cfg.grid_denominator, consider);
  Rat up = iss213(g, a, nullptr, cfg).value();
  DensityResult out = (best == up) ? DensityResult::exact(best, "grid")
                                   : DensityResult::interval(best, up, "grid");
  out.witness_measure = best_mu;
  return out;
}

// ---------------------------------------------------------------------------
// Subadditivization: (h f)(A) = sup_C [f(A u C) - f(C)] over subsets C of a
// finite group, f given on carrier bitsets.  Exhaustive up to exact_limit.

inline DensityResult subadditivize(const Group& g,
                                   const std::function<Rat(const Bits&)>& f,
                                   const Bits& a, const DensityConfig& cfg = {}) {
  if (!g.finite()) throw Unsupported("subadditivize requires a finite group");
  const size_t n = g.order();
  if (static_cast<int>(n) > cfg.exact_limit)
    throw CapacityError("subadditivize: carrier too large for exhaustive C-enumeration");
  Rat best;
  Bits best_c;
  bool first = true;
  for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
    Bits c(n);
    for (size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) c.set(i);
    Rat v = f(a | c) - f(c);
    if (first || v > best) {
      best = v;
      best_c = c;
      first = false;
    }
  }
  DensityResult out = DensityResult::exact(best, "subset-enum");
  std::vector<Elem> c_elems;
  for (size_t i = 0; i < n; ++i)
    if (best_c[i]) c_elems.push_back(elem1(static_cast<long long>(i)));
  out.witness_points.push_back(std::move(c_elems));
  return out;
}

// ---------------------------------------------------------------------------
// Upper Banach density on Z^d, along the cube ladder [0,L)^d.  For periodic
// sets the quotient computes the limit exactly; for explicit finite sets the
// translate max per rung is exact (only translates meeting the cube matter),
// and the best rung is a certified lower bound on the limsup.

inline DensityResult dstar_window(const Group& g, const SetPtr& a,
                                  const DensityConfig& cfg = {}) {
  if (g.spec().kind != GroupSpec::Kind::FreeAbelian)
    throw Unsupported("density* is defined on Z^d here");
  const size_t d = g.spec().n;
  if (auto q = quotient_set(g, a)) {
    auto& qm = q->first;
    auto w = qm.target->full_window();
    Bits b = realize(*qm.target, q->second, w);
    Rat v = rat(static_cast<long long>(b.count()),
                static_cast<long long>(qm.target->order()));
    return DensityResult::exact(v, "quotient");
  }
  if (!set_enumerable(g, a))
    throw Unsupported("density*: need a periodic or explicitly finite set");
  auto ae = enumerate_set(g, a);
  if (ae.empty()) return DensityResult::exact(0, "oracle");
  DensityResult out;
  out.kind = DensityResult::Kind::LowerBound;
  out.method = "subset-enum";
  std::vector<Elem> last_t;
  for (int lev = 1; lev <= cfg.ladder_levels; ++lev) {
    const long long L = lev;
    BigInt volb = 1;
    for (size_t i = 0; i < d; ++i) volb *= L;
    // Translate candidates: t with (A - t) meeting [0,L)^d, i.e. t in A - cube.
    std::map<std::vector<long long>, int> counts;
    std::vector<long long> off(d, 0);
    while (true) {
      for (const auto& e : ae) {
        std::vector<long long> t(d);
        for (size_t i = 0; i < d; ++i) t[i] = e.v[i] - off[i];
        counts[t]++;
      }
      size_t i = 0;
      for (; i < d; ++i) {
        if (++off[i] < L) break;
        off[i] = 0;
      }
      if (i == d) break;
    }
    int mx = 0;
    std::vector<long long> mt(d, 0);
    for (const auto& [t, c] : counts)
      if (c > mx) {
        mx = c;
        mt = t;
      }
    Rat rung = Rat(BigInt(mx)) / Rat(volb);
    out.sequence.push_back(rung);
    last_t = {Elem{mt}};
  }
  // Each rung is the exact best translate ratio for its box; the reported
  // scalar is the final rung, with the full sequence alongside.
  out.lo = out.sequence.back();
  out.hi = 1;
  out.witness_points.push_back(last_t);
  return out;
}

// ---------------------------------------------------------------------------
// Pattern evaluator for quantifier strings over convolution slots.
//
// A pattern is a word e over {u,i,I,s,S} with a permutation s of {1..n}: the
// p-th quantifier binds measure mu_p, and the convolution is taken in the
// order mu_{s(1)} * ... * mu_{s(n)} applied to A.  u/i/I are infima
// (over uniform / finitely supported / all measures), s/S suprema.  Every
// position except the one mapped to the innermost slot must be one of u,i,s.
// On a finite group I and S coincide with i and s.

struct ExtremalPattern {
  std::string e;           // length n, chars in {u,i,I,s,S}
  std::vector<int> perm;   // s as a permutation of 1..n

  size_t arity() const { return e.size(); }

  void validate() const {
    const size_t n = e.size();
    if (n == 0 || n > 3) throw Error("pattern arity must be 1..3");
    if (perm.size() != n) throw Error("pattern permutation length mismatch");
    std::vector<bool> seen(n + 1, false);
    for (int p : perm) {
      if (p < 1 || p > static_cast<int>(n) || seen[static_cast<size_t>(p)])
        throw Error("pattern permutation must be a permutation of 1.." +
                    std::to_string(n));
      seen[static_cast<size_t>(p)] = true;
    }
    int innermost = perm[n - 1];  // quantifier position bound to the last slot
    for (size_t p = 1; p <= n; ++p) {
      char c = e[p - 1];
      if (c != 'u' && c != 'i' && c != 'I' && c != 's' && c != 'S')
        throw Error("pattern letters must be among u,i,I,s,S");
      if (static_cast<int>(p) != innermost && c != 'u' && c != 'i' && c != 's')
        throw Error("only the innermost-slot quantifier may be I or S");
    }
  }
};

namespace detail {

// Convolution slot product for Dirac arguments z_1..z_n in quantifier-position
// order: returns z_{perm[0]} * z_{perm[1]} * ... * z_{perm[n-1]}.
inline Elem slot_product(const Group& g, const ExtremalPattern& pat,
                         const std::vector<Elem>& z) {
  Elem acc = z[static_cast<size_t>(pat.perm[0] - 1)];
  for (size_t t = 1; t < pat.perm.size(); ++t)
    acc = g.mul(acc, z[static_cast<size_t>(pat.perm[t] - 1)]);
  return acc;
}

inline bool is_min_dir(char c) { return c == 'u' || c == 'i' || c == 'I'; }

}  // namespace detail

// Exact when the quantifier prefix collapses (all-equal directions, or a
// depth-2 game, possibly after merging the two innermost when they share a
// direction).  The residual depth-3 alternation is bracketed: candidate outer
// measures on one side, a quantifier-swapped exact game on the other.
inline DensityResult eval_extremal(const Group& g, const SetPtr& a,
                                   const ExtremalPattern& pat,
                                   const DensityConfig& cfg = {}) {
  pat.validate();
  if (!g.finite()) throw Unsupported("pattern evaluation requires a finite group");
  const size_t n = pat.arity();
  auto carrier = g.full_window().elems;
  const size_t N = carrier.size();
  auto w = g.full_window();
  Bits ab = realize(g, a, w);
  auto inA = [&](const Elem& e) { return ab[w.index_of(e)]; };

  std::vector<char> dir(n);           // '<' min, '>' max, by quantifier position
  for (size_t p = 0; p < n; ++p) dir[p] = detail::is_min_dir(pat.e[p]) ? '<' : '>';

  // All directions equal: Diracs suffice on both readings; the value is 0/1.
  bool all_eq = true;
  for (size_t p = 1; p < n; ++p)
    if (dir[p] != dir[0]) all_eq = false;
  if (all_eq) {
    // min over tuples of [prod in A] is 0 unless A = G; max is 1 unless empty.
    if (dir[0] == '<')
      return DensityResult::exact(ab.count() == N ? 1 : 0, "oracle");
    return DensityResult::exact(ab.any() ? 1 : 0, "oracle");
  }

  // A rigid letter away from the innermost nesting position demands a pure
  // point there.  Its variable sits in the last product slot, so pinning it
  // to x right-translates the target set; when every quantifier before it
  // shares its direction the extreme hoists to the front, and the residual
  // lower-arity pattern is evaluated per pinned point.
  for (size_t p = 0; p + 1 < n; ++p) {
    if (pat.e[p] != 'I' && pat.e[p] != 'S') continue;
    bool hoist = true;
    for (size_t q = 0; q < p; ++q)
      if (dir[q] != dir[p]) hoist = false;
    if (!hoist)
      throw Unsupported(
          "rigid quantifier behind an opposite-direction prefix is not evaluated");
    ExtremalPattern sub;
    for (size_t q = 0; q < n; ++q)
      if (q != p) sub.e += pat.e[q];
    for (size_t t = 0; t + 1 < n; ++t) {
      int q = pat.perm[t];
      sub.perm.push_back(q > static_cast<int>(p) + 1 ? q - 1 : q);
    }
    const bool outer_max = pat.e[p] == 'S';
    Rat best_lo = outer_max ? Rat(-1) : Rat(2);
    Rat best_hi = best_lo;
    bool all_exact = true;
    Elem best_x = carrier[0];
    for (const auto& x : carrier) {
      auto ax = set_product(a, make_explicit(g, {g.inv(x)}));
      auto r = eval_extremal(g, ax, sub, cfg);
      if (r.kind != DensityResult::Kind::Exact) all_exact = false;
      // The pure extreme over pinned points acts on both bound sides.
      if (outer_max ? r.hi > best_hi : r.hi < best_hi) best_hi = r.hi;
      if (outer_max ? r.lo > best_lo : r.lo < best_lo) {
        best_lo = r.lo;
        best_x = x;
      }
    }
    DensityResult out =
        all_exact ? DensityResult::exact(best_lo, "point-scan")
                  : DensityResult::interval(best_lo, best_hi, "point-scan");
    out.witness_points.push_back({best_x});
    return out;
  }

  // Locate the outermost position where the direction changes: positions
  // 0..k-1 share dir[0], position k differs.
  size_t k = 1;
  while (dir[k] == dir[0]) ++k;

  // Inner tail positions k..n-1: if they all share a direction, Dirac tuples
  // for them are exact (innermost linearity, applied repeatedly).  With the
  // head positions 0..k-1 also collapsible only when k == 1 (a lone outer
  // quantifier): that is the depth-2 game.
  bool tail_eq = true;
  for (size_t p = k + 1; p < n; ++p)
    if (dir[p] != dir[k]) tail_eq = false;

  auto tuple_payoff = [&](const std::vector<Elem>& z) {
    return inA(detail::slot_product(g, pat, z)) ? Rat(1) : Rat(0);
  };

  if (k == 1 && tail_eq) {
    // Q1 against joint Dirac tuples for positions 2..n.  Rows = the side being
    // minimized; u on the outer min restricts to uniform supports.
    const bool outer_min = dir[0] == '<';
    // Enumerate joint tuples for the tail.
    std::vector<std::vector<Elem>> tails;
    std::vector<size_t> idx(n - 1, 0);
    while (true) {
      std::vector<Elem> t;
      for (size_t q = 0; q < n - 1; ++q) t.push_back(carrier[idx[q]]);
      tails.push_back(std::move(t));
      size_t q = 0;
      for (; q < n - 1; ++q) {
        if (++idx[q] < N) break;
        idx[q] = 0;
      }
      if (q == n - 1) break;
    }
    auto payoff = [&](size_t row_i, size_t tail_j) {
      std::vector<Elem> z(n);
      z[0] = carrier[row_i];
      for (size_t q = 1; q < n; ++q) z[q] = tails[tail_j][q - 1];
      return tuple_payoff(z);
    };
    if (pat.e[0] == 'u' && outer_min) {
      // min over uniform supports F of max over tails of avg payoff.
      const int kmax = detail::effective_kmax(g, cfg);
      Rat best = 2;
      std::vector<size_t> best_f;
      detail::for_each_subset(N, kmax, cfg.subset_cap,
                              [&](const std::vector<size_t>& pick) {
        Rat v = 0;
        for (size_t j = 0; j < tails.size(); ++j) {
          Rat s = 0;
          for (size_t i : pick) s += payoff(i, j);
          s /= static_cast<long long>(pick.size());
          if (s > v) v = s;
        }
        if (v < best) {
          best = v;
          best_f = pick;
        }
      });
      const bool complete = kmax >= static_cast<int>(N);
      DensityResult out = complete ? DensityResult::exact(best, "subset-enum")
                                   : DensityResult::upper(best, "subset-enum");
      std::vector<Elem> f;
      for (size_t i : best_f) f.push_back(carrier[i]);
      if (!f.empty()) out.witness_measure = Measure::uniform(f);
      return out;
    }
    GameMatrix gm;
    if (outer_min) {
      gm.a.assign(N, std::vector<Rat>(tails.size(), 0));
      for (size_t i = 0; i < N; ++i)
        for (size_t j = 0; j < tails.size(); ++j) gm.a[i][j] = payoff(i, j);
    } else {
      // Outer max: rows are the minimizing tail tuples.
      gm.a.assign(tails.size(), std::vector<Rat>(N, 0));
      for (size_t j = 0; j < tails.size(); ++j)
        for (size_t i = 0; i < N; ++i) gm.a[j][i] = payoff(i, j);
    }
    for (size_t i = 0; i < gm.rows(); ++i) gm.row_labels.push_back("r" + std::to_string(i));
    for (size_t j = 0; j < gm.cols(); ++j) gm.col_labels.push_back("c" + std::to_string(j));
    auto sol = game_value(gm);
    DensityResult out = DensityResult::exact(sol.value, "lp-game");
    if (outer_min)
      out.witness_measure = detail::strategy_measure(carrier, sol.row_strategy);
    else
      out.witness_measure = detail::strategy_measure(carrier, sol.col_strategy);
    return out;
  }

  if (k == 2 && n == 3) {
    // Head of two same-direction quantifiers over an opposite innermost:
    // bracket by candidate joint head measures against the swapped game.
    // Swapping Q2 out: Q1 Q2 Q3 vs Q2 Q1 Q3 with Q1,Q3... here dir[0]==dir[1],
    // so swap Q2 := position 1 inward past nothing; instead bound by moving
    // the innermost out: min <= minmax <= max etc.  Concretely:
    //   if head is sup-sup-inf:  value <= sup_{mu2} inf_{z3} sup_{z1} payoff
    //   if head is inf-inf-sup:  value >= inf_{mu2} sup_{z3} inf_{z1} payoff
    // and the candidate search on (mu1 x mu2) products gives the other side.
    const bool head_max = dir[0] == '>';
    // Swapped bound: move the second head quantifier past the innermost one
    // and fold sup_{z1} (resp. inf_{z1}) into the entries; what remains is an
    // exact two-player game between mu2 and z3.
    GameMatrix gm;
    if (head_max) {
      gm.a.assign(N, std::vector<Rat>(N, 0));
      for (size_t mid = 0; mid < N; ++mid)
        for (size_t z3 = 0; z3 < N; ++z3) {
          Rat mx = 0;
          for (size_t z1 = 0; z1 < N; ++z1) {
            std::vector<Elem> z(3);
            z[1] = carrier[mid];
            z[0] = carrier[z1];
            z[2] = carrier[z3];
            Rat p = tuple_payoff(z);
            if (p > mx) mx = p;
          }
          gm.a[z3][mid] = mx;  // rows minimize over z3, columns mix mu2
        }
    } else {
      gm.a.assign(N, std::vector<Rat>(N, 0));
      for (size_t mid = 0; mid < N; ++mid)
        for (size_t z3 = 0; z3 < N; ++z3) {
          Rat mn = 1;
          for (size_t z1 = 0; z1 < N; ++z1) {
            std::vector<Elem> z(3);
            z[1] = carrier[mid];
            z[0] = carrier[z1];
            z[2] = carrier[z3];
            if (tuple_payoff(z) < mn) mn = tuple_payoff(z);
          }
          gm.a[mid][z3] = mn;  // rows mix mu2 minimizing, columns z3 maximize
        }
    }
    for (size_t i = 0; i < gm.rows(); ++i) gm.row_labels.push_back("r" + std::to_string(i));
    for (size_t j = 0; j < gm.cols(); ++j) gm.col_labels.push_back("c" + std::to_string(j));
    Rat swapped = game_value(gm).value;
    // Candidate head measures: product of enumerated mu1, mu2 (uniform subsets
    // and grids), inner Dirac exact.
    Rat cand = head_max ? Rat(0) : Rat(1);
    std::vector<Measure> pool;
    {
      const int kmax = detail::effective_kmax(g, cfg);
      detail::for_each_subset(N, kmax, cfg.subset_cap,
                              [&](const std::vector<size_t>& pick) {
        std::vector<Elem> f;
        for (size_t i : pick) f.push_back(carrier[i]);
        pool.push_back(Measure::uniform(f));
      });
      detail::for_each_grid_measure(carrier, cfg.grid_denominator,
                                    [&](const Measure& m) { pool.push_back(m); });
    }
    for (const auto& m1 : pool)
      for (const auto& m2 : pool) {
        // value for fixed (mu1, mu2): optimize innermost Dirac z3.
        Rat inner = head_max ? Rat(1) : Rat(0);
        for (size_t z3 = 0; z3 < N; ++z3) {
          Rat s = 0;
          for (const auto& [e1, w1] : m1.weights())
            for (const auto& [e2, w2] : m2.weights()) {
              std::vector<Elem> z(3);
              z[0] = e1;
              z[1] = e2;
              z[2] = carrier[z3];
              s += w1 * w2 * tuple_payoff(z);
            }
          if (head_max) {
            if (s < inner) inner = s;
          } else {
            if (s > inner) inner = s;
          }
        }
        if (head_max) {
          if (inner > cand) cand = inner;
        } else {
          if (inner < cand) cand = inner;
        }
      }
    Rat lo = head_max ? cand : swapped;
    Rat hi = head_max ? swapped : cand;
    if (lo == hi) return DensityResult::exact(lo, "grid");
    return DensityResult::interval(lo, hi, "grid");
  }

  // k == 1 && !tail_eq: alternating depth 3 (e.g. s-i-s).  Outer candidates
  // plus a swapped game where the outer quantifier moves inside; the two
  // innermost then share its direction and collapse jointly.
  {
    const bool outer_max = dir[0] == '>';
    // Swapped bound: Q1 Q2 Q3 -> Q2 (Q1 Q3): dir[0] == dir[2] here.
    std::vector<std::pair<Elem, Elem>> pairs;
    for (size_t i = 0; i < N; ++i)
      for (size_t j = 0; j < N; ++j) pairs.emplace_back(carrier[i], carrier[j]);
    GameMatrix gm;
    if (outer_max) {
      // bound above... outer sup moved in: sup1 Q2 Q3 <= Q2 sup1 Q3 ==
      // Q2 (max over joint (z1,z3)); Q2 is a min, so game: mu2 rows vs nothing
      // to mix on the other side; inf_{mu2} max_{(z1,z3)} avg is a game with
      // columns the joint pairs.
      gm.a.assign(N, std::vector<Rat>(pairs.size(), 0));
      for (size_t mid = 0; mid < N; ++mid)
        for (size_t pr = 0; pr < pairs.size(); ++pr) {
          std::vector<Elem> z(3);
          z[1] = carrier[mid];
          z[0] = pairs[pr].first;
          z[2] = pairs[pr].second;
          gm.a[mid][pr] = tuple_payoff(z);
        }
    } else {
      // inf1 Q2 Q3 >= Q2 inf1 Q3 == sup_{mu2} min over joint pairs: game with
      // rows the joint pairs (minimizing), columns mu2 support.
      gm.a.assign(pairs.size(), std::vector<Rat>(N, 0));
      for (size_t pr = 0; pr < pairs.size(); ++pr)
        for (size_t mid = 0; mid < N; ++mid) {
          std::vector<Elem> z(3);
          z[1] = carrier[mid];
          z[0] = pairs[pr].first;
          z[2] = pairs[pr].second;
          gm.a[pr][mid] = tuple_payoff(z);
        }
    }
    for (size_t i = 0; i < gm.rows(); ++i) gm.row_labels.push_back("r" + std::to_string(i));
    for (size_t j = 0; j < gm.cols(); ++j) gm.col_labels.push_back("c" + std::to_string(j));
    Rat swapped = game_value(gm).value;
    // Candidate outer measures with exact inner depth-2 game.
    Rat cand = outer_max ? Rat(0) : Rat(1);
    std::optional<Measure> best_mu;
    auto consider = [&](const Measure& mu1) {
      // Inner: Q2 Q3 with mu1 fixed; build the (z2, z3) payoff and solve the
      // alternating game (dir[1] vs dir[2]).
      GameMatrix ig;
      const bool q2_min = dir[1] == '<';
      ig.a.assign(N, std::vector<Rat>(N, 0));
      for (size_t i2 = 0; i2 < N; ++i2)
        for (size_t i3 = 0; i3 < N; ++i3) {
          Rat s = 0;
          for (const auto& [e1, w1] : mu1.weights()) {
            std::vector<Elem> z(3);
            z[0] = e1;
            z[1] = carrier[i2];
            z[2] = carrier[i3];
            s += w1 * tuple_payoff(z);
          }
          if (q2_min)
            ig.a[i2][i3] = s;
          else
            ig.a[i3][i2] = s;
        }
      for (size_t i = 0; i < N; ++i) {
        ig.row_labels.push_back("r" + std::to_string(i));
        ig.col_labels.push_back("c" + std::to_string(i));
      }
      Rat v = game_value(ig).value;
      if (outer_max ? (v > cand) : (v < cand)) {
        cand = v;
        best_mu = mu1;
      }
    };
    const int kmax = detail::effective_kmax(g, cfg);
    if (pat.e[0] == 'u') {
      detail::for_each_subset(N, kmax, cfg.subset_cap,
                              [&](const std::vector<size_t>& pick) {
        std::vector<Elem> f;
        for (size_t i : pick) f.push_back(carrier[i]);
        consider(Measure::uniform(f));
      });
    } else {
      detail::for_each_subset(N, kmax, cfg.subset_cap,
                              [&](const std::vector<size_t>& pick) {
        std::vector<Elem> f;
        for (size_t i : pick) f.push_back(carrier[i]);
        consider(Measure::uniform(f));
      });
      detail::for_each_grid_measure(carrier, cfg.grid_denominator, consider);
    }
    Rat lo = outer_max ? cand : swapped;
    Rat hi = outer_max ? swapped : cand;
    DensityResult out = (lo == hi) ? DensityResult::exact(lo, "grid")
                                   : DensityResult::interval(lo, hi, "grid");
    out.witness_measure = best_mu;
    return out;
  }
}

// ---------------------------------------------------------------------------
// Convenience: is12 over a transitive action (rows = acting group, columns =
// points of the space).

inline DensityResult is12_action(const Action& act, const Bits& a) {
  const Group& g = *act.group;
  const size_t np = act.points;
  if (a.size() != np) throw Error("is12_action: bitset size mismatch");
  if (a.none()) return DensityResult::exact(0, "oracle");
  if (a.count() == np) return DensityResult::exact(1, "oracle");
  GameMatrix gm;
  gm.a.assign(g.order(), std::vector<Rat>(np, 0));
  for (uint64_t i = 0; i < g.order(); ++i)
    for (size_t x = 0; x < np; ++x)
      if (a[act.act(i, static_cast<uint32_t>(x))]) gm.a[i][x] = 1;
  for (uint64_t i = 0; i < g.order(); ++i)
    gm.row_labels.push_back(g.print_elem(elem1(static_cast<long long>(i))));
  for (size_t x = 0; x < np; ++x) gm.col_labels.push_back("p" + std::to_string(x));
  auto sol = game_value(gm);
  DensityResult out = DensityResult::exact(sol.value, "lp-game");
  out.witness_measure = detail::strategy_measure(g.full_window().elems, sol.row_strategy);
  return out;
}

// Subadditivized is12 on a finite group, with memoization across the subset
// lattice (the C-enumeration revisits many A u C patterns).

inline DensityResult his12(const Group& g, const SetPtr& a,
                           const DensityConfig& cfg = {}) {
  if (!g.finite()) throw Unsupported("his12 requires a finite group");
  auto w = g.full_window();
  Bits ab = realize(g, a, w);
  auto cache = std::make_shared<std::map<std::vector<Bits::block_type>, Rat>>();
  auto base = [&g, cache, cfg](const Bits& b) -> Rat {
    std::vector<Bits::block_type> key(b.num_blocks());
    boost::to_block_range(b, key.begin());
    if (auto it = cache->find(key); it != cache->end()) return it->second;
    std::vector<Elem> elems;
    for (size_t i = 0; i < b.size(); ++i)
      if (b[i]) elems.push_back(elem1(static_cast<long long>(i)));
    Rat v = 0;
    if (!elems.empty()) {
      auto s = make_explicit(g, elems);
      v = is12(g, s, nullptr, cfg).value();
    }
    (*cache)[key] = v;
    return v;
  };
  return subadditivize(g, base, ab, cfg);
}

}  // namespace groupdens
