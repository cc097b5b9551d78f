#pragma once

// Combinatorial indices: packing and covering by translates, partition
// analysis, homothety and representability witnesses, Folner boxes, and the
// inequality checks tying these to the density functionals.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "groupdens/density.hpp"
#include "groupdens/errors.hpp"
#include "groupdens/group.hpp"
#include "groupdens/rational.hpp"
#include "groupdens/sets.hpp"

namespace groupdens {

// max over k = 1..n of 1 + k + ... + k^(n-k); the k = 1 term degenerates to n.
inline BigInt partition_cover_bound(int n) {
  if (n < 1) throw Error("partition bound needs n >= 1");
  BigInt best = 0;
  for (int k = 1; k <= n; ++k) {
    BigInt term = 0, pw = 1;
    for (int j = 0; j <= n - k; ++j) {
      term += pw;
      pw *= k;
    }
    if (term > best) best = term;
  }
  return best;
}

// A A^{-1} and A^{-1} A as set expressions.
inline SetPtr diff_right(const SetPtr& a) { return set_product(a, set_inverse(a)); }
inline SetPtr diff_left(const SetPtr& a) { return set_product(set_inverse(a), a); }

// ---------------------------------------------------------------------------
// Packing index: the largest family of pairwise disjoint left translates.

struct PackResult {
  uint64_t value = 0;
  bool at_least = false;       // true: a lower bound (cap hit or window-restricted)
  std::vector<Elem> witness;   // translate positions, pairwise disjoint
};

namespace detail {

// xA and yA meet iff x^{-1} y lies in A A^{-1}.
inline bool translates_conflict(const Group& gr, const SetPtr& aainv,
                                const Elem& x, const Elem& y) {
  return set_contains(gr, aainv, gr.mul(gr.inv(x), y));
}

// Exact maximum independent set over <= 64 vertices.  Branches on the first
// remaining vertex; stop > 0 ends the search once that many are packed.
struct MisSearch {
  const std::vector<Bits>& adj;
  uint64_t stop;
  std::vector<size_t> best, cur;

  void run(Bits cand) {
    if (stop > 0 && best.size() >= stop) return;
    if (cur.size() + cand.count() <= best.size()) return;
    if (cand.none()) {
      best = cur;
      return;
    }
    size_t v = cand.find_first();
    Bits incl = cand;
    incl &= ~adj[v];
    incl.reset(v);
    cur.push_back(v);
    run(incl);
    cur.pop_back();
    if (stop > 0 && best.size() >= stop) return;
    cand.reset(v);
    run(cand);
  }
};

}  // namespace detail

inline PackResult packing_index(const Group& gr, const SetPtr& a, int cap = 12,
                                const Window* search = nullptr) {
  if (cap < 1) throw Error("packing: cap must be >= 1");
  if (auto e = detail::known_empty(gr, a); e && *e)
    throw Error("packing index of an empty set is undefined");
  if (!gr.finite() && gr.spec().kind == GroupSpec::Kind::FreeAbelian) {
    if (auto q = quotient_set(gr, a)) {
      auto res = packing_index(*q->first.target, q->second, cap, nullptr);
      PackResult out;
      out.value = res.value;
      out.at_least = res.at_least;
      for (const auto& w : res.witness) out.witness.push_back(q->first.rep(w));
      return out;
    }
  }
  std::vector<Elem> verts;
  if (gr.finite()) {
    verts = gr.full_window().elems;
  } else {
    if (!search) throw Error("packing on " + gr.name() + " needs a search window");
    verts = search->elems;
  }
  SetPtr aainv = diff_right(a);
  // Greedy pass in canonical order; establishes a bound and often the cap.
  std::vector<size_t> picked;
  for (size_t i = 0; i < verts.size() && picked.size() < (size_t)cap; ++i) {
    bool ok = true;
    for (size_t j : picked)
      if (detail::translates_conflict(gr, aainv, verts[j], verts[i])) {
        ok = false;
        break;
      }
    if (ok) picked.push_back(i);
  }
  const bool capped = picked.size() >= (size_t)cap;
  const bool small = verts.size() <= 64;
  if (!capped && small) {
    std::vector<Bits> adj(verts.size(), Bits(verts.size()));
    for (size_t i = 0; i < verts.size(); ++i)
      for (size_t j = i + 1; j < verts.size(); ++j)
        if (detail::translates_conflict(gr, aainv, verts[i], verts[j])) {
          adj[i].set(j);
          adj[j].set(i);
        }
    detail::MisSearch mis{adj, gr.finite() ? 0u : (uint64_t)cap, {}, {}};
    Bits all(verts.size());
    all.set();
    mis.run(all);
    if (mis.best.size() > picked.size()) picked = mis.best;
  }
  PackResult out;
  out.value = picked.size();
  // Exact only when the whole finite carrier was explored below the cap; a
  // packing that uses every group element cannot be beaten either.
  out.at_least = !(gr.finite() && small && picked.size() < (size_t)cap);
  if (gr.finite() && out.value == gr.order()) out.at_least = false;
  for (size_t i : picked) out.witness.push_back(verts[i]);
  for (size_t i = 0; i < out.witness.size(); ++i)
    for (size_t j = i + 1; j < out.witness.size(); ++j)
      if (detail::translates_conflict(gr, aainv, out.witness[i], out.witness[j]))
        throw Error("packing: witness failed disjointness re-check");
  return out;
}

// ---------------------------------------------------------------------------
// Covering number: fewest left translates of A covering the group.

struct CovResult {
  enum class Kind { Exact, AtMost, Infinite };
  Kind kind = Kind::Exact;
  uint64_t value = 0;
  std::vector<Elem> witness;  // translate positions whose union covers
};

namespace detail {

struct CoverSearch {
  const std::vector<Bits>& sets;
  int cap;
  std::vector<size_t> best, cur;
  std::vector<std::vector<size_t>> covers_of;  // point -> covering set indices

  void run(const Bits& uncovered) {
    if (uncovered.none()) {
      if (best.empty() || cur.size() < best.size()) best = cur;
      return;
    }
    size_t limit = best.empty() ? (size_t)cap : std::min((size_t)cap, best.size() - 1);
    if (cur.size() >= limit) return;
    size_t biggest = 0;
    for (const auto& s : sets) biggest = std::max(biggest, (size_t)s.count());
    if (cur.size() + (uncovered.count() + biggest - 1) / biggest > limit) return;
    // Branch on the point with the fewest candidate translates.
    size_t pick = uncovered.find_first(), fewest = SIZE_MAX;
    for (size_t p = uncovered.find_first(); p != Bits::npos;
         p = uncovered.find_next(p))
      if (covers_of[p].size() < fewest) {
        fewest = covers_of[p].size();
        pick = p;
      }
    for (size_t si : covers_of[pick]) {
      cur.push_back(si);
      Bits rest = uncovered;
      rest &= ~sets[si];
      run(rest);
      cur.pop_back();
    }
  }
};

}  // namespace detail

inline CovResult covering_number(const Group& gr, const SetPtr& a, int cap = 20) {
  if (cap < 1) throw Error("covering: cap must be >= 1");
  if (auto e = detail::known_empty(gr, a); e && *e)
    throw Error("covering number of an empty set is undefined");
  if (!gr.finite()) {
    if (gr.spec().kind == GroupSpec::Kind::FreeAbelian)
      if (auto q = quotient_set(gr, a)) {
        auto res = covering_number(*q->first.target, q->second, cap);
        CovResult out;
        out.kind = res.kind;
        out.value = res.value;
        for (const auto& w : res.witness) out.witness.push_back(q->first.rep(w));
        return out;
      }
    if (set_enumerable(gr, a)) {
      // Finitely many translates of a finite set never cover an infinite group.
      CovResult out;
      out.kind = CovResult::Kind::Infinite;
      return out;
    }
    throw Unsupported("covering number on " + gr.name() +
                      " needs a periodic or finite set");
  }
  auto w = gr.full_window();
  Bits ab = realize(gr, a, w);
  const size_t n = w.elems.size();
  // Distinct translate bitsets, earliest representative kept.
  std::vector<Bits> sets;
  std::vector<Elem> reps;
  std::set<std::vector<Bits::block_type>> seen;
  for (size_t xi = 0; xi < n; ++xi) {
    Bits t(n);
    for (size_t gi = 0; gi < n; ++gi)
      if (ab[gi]) t.set(w.index_of(gr.mul(w.elems[xi], w.elems[gi])));
    std::vector<Bits::block_type> key(t.num_blocks());
    boost::to_block_range(t, key.begin());
    if (seen.insert(key).second) {
      sets.push_back(std::move(t));
      reps.push_back(w.elems[xi]);
    }
  }
  // Greedy upper bound first.
  std::vector<size_t> greedy;
  {
    Bits uncovered(n);
    uncovered.set();
    while (uncovered.any()) {
      size_t bi = SIZE_MAX, bc = 0;
      for (size_t si = 0; si < sets.size(); ++si) {
        Bits inter = sets[si];
        inter &= uncovered;
        size_t c = inter.count();
        if (c > bc) {
          bc = c;
          bi = si;
        }
      }
      if (bi == SIZE_MAX) throw Error("covering: translates cannot cover");
      greedy.push_back(bi);
      uncovered &= ~sets[bi];
    }
  }
  detail::CoverSearch cs{sets, cap, {}, {}, {}};
  cs.covers_of.assign(n, {});
  for (size_t si = 0; si < sets.size(); ++si)
    for (size_t p = sets[si].find_first(); p != Bits::npos;
         p = sets[si].find_next(p))
      cs.covers_of[p].push_back(si);
  if (greedy.size() <= (size_t)cap) cs.best = greedy;
  Bits all(n);
  all.set();
  cs.run(all);
  CovResult out;
  if (!cs.best.empty()) {
    out.kind = CovResult::Kind::Exact;
    out.value = cs.best.size();
    for (size_t si : cs.best) out.witness.push_back(reps[si]);
  } else {
    // Optimum proven above the cap; the greedy certificate still covers.
    out.kind = CovResult::Kind::AtMost;
    out.value = greedy.size();
    for (size_t si : greedy) out.witness.push_back(reps[si]);
  }
  Bits check(n);
  for (const auto& x : out.witness)
    for (size_t gi = 0; gi < n; ++gi)
      if (ab[gi]) check.set(w.index_of(gr.mul(x, w.elems[gi])));
  if (check.count() != n) throw Error("covering: witness failed cover re-check");
  return out;
}

// ---------------------------------------------------------------------------

// On a finite group, right thickness degenerates: F = G forces A = G.
inline bool is_right_thick(const Group& gr, const SetPtr& a) {
  if (!gr.finite()) throw Unsupported("thickness check requires a finite group");
  auto w = gr.full_window();
  return realize(gr, a, w).count() == gr.order();
}

// If us12(A) + us12(B) > 1 then AB must be everything.  Returns whether that
// implication holds for the given pair (vacuous truth included).
inline bool ergo_sum_check(const Group& gr, const SetPtr& a, const SetPtr& b) {
  if (!gr.finite()) throw Unsupported("ergo-sum check requires a finite group");
  DensityConfig cfg;
  cfg.kmax = static_cast<int>(gr.order());
  Rat ua = us12(gr, a, nullptr, cfg).value();
  Rat ub = us12(gr, b, nullptr, cfg).value();
  if (ua + ub <= 1) return true;
  return is_right_thick(gr, set_product(a, b));
}

// cov(AB) <= 1 / (|A|/|G| * |B|/|G|) on a finite group, exact rationals.
inline bool density_cover_check(const Group& gr, const SetPtr& a,
                                const SetPtr& b) {
  if (!gr.finite()) throw Unsupported("requires a finite group");
  auto w = gr.full_window();
  Rat da = rat(static_cast<long long>(realize(gr, a, w).count()),
               static_cast<long long>(gr.order()));
  Rat db = rat(static_cast<long long>(realize(gr, b, w).count()),
               static_cast<long long>(gr.order()));
  if (da == 0 || db == 0) return true;
  auto cov = covering_number(gr, set_product(a, b), static_cast<int>(gr.order()));
  if (cov.kind != CovResult::Kind::Exact) return false;
  return Rat(static_cast<long long>(cov.value)) * da * db <= 1;
}

// ---------------------------------------------------------------------------
// Partition analysis.

struct CellStats {
  uint64_t size = 0;
  Rat is12_value, iss213_value;
  PackResult pack;
  CovResult cov_diff;  // cov(A_i A_i^{-1})
};

struct PartitionReport {
  std::vector<CellStats> cells;
  bool small_cov = false;    // some cell has cov(A A^{-1}) <= n
  size_t small_cov_cell = 0;
  size_t cover_cell = 0;     // cell whose cov(A A^{-1}) is smallest
  std::vector<Elem> cover_f;
  BigInt bound;              // partition cover bound for n cells
  bool cover_within_bound = false;
  bool wr_small = false;     // some cell and E with cov((A^{-1}A)^{wr E}) <= n
  size_t wr_cell = 0;
  std::vector<Elem> wr_e;
  uint64_t wr_cov = 0;
  std::optional<bool> conj_invariant_route;  // cov <= pack <= n, when it applies
  size_t conj_route_cell = 0;
};

inline PartitionReport partition_analyze(const Group& gr,
                                         const std::vector<SetPtr>& cells,
                                         const DensityConfig& cfg = {}) {
  if (!gr.finite()) throw Unsupported("partition analysis requires a finite group");
  if (cells.empty()) throw Error("partition: no cells");
  auto w = gr.full_window();
  const size_t order = gr.order();
  std::vector<Bits> cb;
  Bits unionb(order);
  for (const auto& c : cells) {
    Bits b = realize(gr, c, w);
    if (b.none()) throw Error("partition: empty cell");
    if ((unionb & b).any()) throw Error("partition: cells overlap");
    unionb |= b;
    cb.push_back(std::move(b));
  }
  if (unionb.count() != order) throw Error("partition: cells do not cover the group");
  const int n = static_cast<int>(cells.size());

  PartitionReport rep;
  rep.bound = partition_cover_bound(n);
  uint64_t best_cov = UINT64_MAX;
  for (size_t i = 0; i < cells.size(); ++i) {
    CellStats st;
    st.size = cb[i].count();
    st.is12_value = is12(gr, cells[i], nullptr, cfg).value();
    st.iss213_value = iss213(gr, cells[i], nullptr, cfg).value();
    st.pack = packing_index(gr, cells[i], static_cast<int>(order));
    st.cov_diff =
        covering_number(gr, diff_right(cells[i]), static_cast<int>(order));
    if (st.cov_diff.kind == CovResult::Kind::Exact) {
      if (st.cov_diff.value <= (uint64_t)n && !rep.small_cov) {
        rep.small_cov = true;
        rep.small_cov_cell = i;
      }
      if (st.cov_diff.value < best_cov) {
        best_cov = st.cov_diff.value;
        rep.cover_cell = i;
        rep.cover_f = st.cov_diff.witness;
      }
    }
    rep.cells.push_back(std::move(st));
  }
  rep.cover_within_bound =
      best_cov != UINT64_MAX && BigInt(static_cast<long long>(best_cov)) <= rep.bound;

  // First E (size <= 3, canonical order) and cell with small conjugated cover.
  detail::for_each_subset(w.elems.size(), 3, 1u << 20,
                          [&](const std::vector<size_t>& pick) {
    if (rep.wr_small) return;
    std::vector<Elem> es;
    for (size_t t : pick) es.push_back(w.elems[t]);
    SetPtr e_set = make_explicit(gr, es);
    for (size_t i = 0; i < cells.size(); ++i) {
      auto cov = covering_number(gr, set_wr(diff_left(cells[i]), e_set),
                                 static_cast<int>(order));
      if (cov.kind == CovResult::Kind::Exact && cov.value <= (uint64_t)n) {
        rep.wr_small = true;
        rep.wr_cell = i;
        rep.wr_e = es;
        rep.wr_cov = cov.value;
        return;
      }
    }
  });

  // Conjugation-invariant partitions additionally admit the packing route.
  bool all_inv = true;
  for (size_t i = 0; i < cells.size() && all_inv; ++i)
    for (size_t xi = 0; xi < order && all_inv; ++xi) {
      Bits conj(order);
      for (size_t gi = 0; gi < order; ++gi)
        if (cb[i][gi]) conj.set(w.index_of(gr.conj(w.elems[gi], w.elems[xi])));
      if (conj != cb[i]) all_inv = false;
    }
  if (all_inv) {
    bool found = false;
    for (size_t i = 0; i < cells.size(); ++i) {
      const auto& st = rep.cells[i];
      if (!st.pack.at_least && st.pack.value <= (uint64_t)n &&
          st.cov_diff.kind == CovResult::Kind::Exact &&
          st.cov_diff.value <= st.pack.value) {
        found = true;
        rep.conj_route_cell = i;
        break;
      }
    }
    rep.conj_invariant_route = found;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Homotheties h(x) = a0 x a1 x ... x an.

struct Homothety {
  int degree = 1;               // number of x slots
  std::vector<Elem> constants;  // a0..an, size degree+1

  Elem apply(const Group& gr, const Elem& x) const {
    Elem acc = constants[0];
    for (int i = 1; i <= degree; ++i)
      acc = gr.mul(gr.mul(acc, x), constants[(size_t)i]);
    return acc;
  }
};

// First homothety in canonical order (degree ascending, then constants in
// carrier order) mapping F into A, if any.  Abelian groups reduce to
// h(x) = nx + a with n running over 1..exponent-1.
inline std::optional<Homothety> homothety_witness(const Group& gr, const SetPtr& a,
                                                  const std::vector<Elem>& f,
                                                  int degree_cap = 2) {
  if (!gr.finite()) throw Unsupported("homothety search requires a finite group");
  if (f.empty()) throw Error("homothety: empty test set");
  if (degree_cap < 1) throw Error("homothety: degree cap must be >= 1");
  for (const auto& x : f) gr.check_elem(x);
  auto maps_in = [&](const Homothety& h) {
    for (const auto& x : f)
      if (!set_contains(gr, a, h.apply(gr, x))) return false;
    return true;
  };
  auto carrier = gr.full_window().elems;
  if (gr.abelian()) {
    const uint64_t expn = gr.exponent();
    for (uint64_t n = 1; n < expn; ++n)
      for (const auto& shift : carrier) {
        Homothety h;
        h.degree = static_cast<int>(n);
        h.constants.assign(n + 1, gr.identity());
        h.constants[0] = shift;
        if (maps_in(h)) return h;
      }
    return std::nullopt;
  }
  for (int deg = 1; deg <= degree_cap; ++deg) {
    std::vector<size_t> idx((size_t)deg + 1, 0);
    bool done = false;
    while (!done) {
      Homothety h;
      h.degree = deg;
      for (size_t t : idx) h.constants.push_back(carrier[t]);
      if (maps_in(h)) return h;
      done = true;
      for (size_t t = idx.size(); t-- > 0;) {
        if (++idx[t] < carrier.size()) {
          done = false;
          break;
        }
        idx[t] = 0;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Folner boxes in Z^d: smallest cube [0,L)^d with |F+E \ E| < eps |E|.

struct FolnerResult {
  long long side = 1;  // E = [0, side)^d
  Rat defect;          // |F+E \ E| / |E|, exact
  BigInt boundary;     // |F+E \ E|
  BigInt volume;       // side^d
};

inline FolnerResult folner_set(size_t d, const std::vector<Elem>& f,
                               const Rat& eps) {
  if (d == 0) throw Error("folner: dimension must be positive");
  if (eps <= 0) throw Error("folner: epsilon must be positive");
  for (const auto& e : f)
    if (e.v.size() != d) throw InvalidElement("folner: wrong element dimension");
  for (long long L = 1;; ++L) {
    if (L > 1000000) throw CapacityError("folner: ladder exhausted");
    std::set<std::vector<long long>> outside;
    std::vector<long long> off(d, 0);
    while (true) {
      for (const auto& e : f) {
        std::vector<long long> p(d);
        bool in = true;
        for (size_t i = 0; i < d; ++i) {
          p[i] = e.v[i] + off[i];
          if (p[i] < 0 || p[i] >= L) in = false;
        }
        if (!in) outside.insert(std::move(p));
      }
      size_t i = 0;
      for (; i < d; ++i) {
        if (++off[i] < L) break;
        off[i] = 0;
      }
      if (i == d) break;
    }
    BigInt vol = 1;
    for (size_t i = 0; i < d; ++i) vol *= L;
    Rat defect = Rat(BigInt(static_cast<long long>(outside.size()))) / Rat(vol);
    if (defect < eps) {
      FolnerResult out;
      out.side = L;
      out.defect = defect;
      out.boundary = BigInt(static_cast<long long>(outside.size()));
      out.volume = vol;
      return out;
    }
  }
}

// ---------------------------------------------------------------------------
// Right-shift representability: first y in the window with A y inside B.

inline std::optional<Elem> finitely_representable(const Group& gr, const SetPtr& a,
                                                  const SetPtr& b,
                                                  const Window& search) {
  if (!set_enumerable(gr, a))
    throw Unsupported("representability: the shifted side must be enumerable");
  auto ae = enumerate_set(gr, a);
  for (const auto& y : search.elems) {
    bool ok = true;
    for (const auto& x : ae)
      if (!set_contains(gr, b, gr.mul(x, y))) {
        ok = false;
        break;
      }
    if (ok) return y;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Conjugated-difference covering: an E with cov((AA^{-1})^{wr E}) within the
// reciprocal of the sup-inf-sup lower bound, plus the fourfold cover.

struct ConjCoverReport {
  Rat sis_lower;
  BigInt bound;  // ceil(1 / sis_lower)
  std::vector<Elem> e_witness;
  uint64_t cov_wr = 0;
  bool ok = false;
  uint64_t cov_fourfold = 0;  // cov(A A^{-1} A A^{-1})
  std::vector<Elem> cov_fourfold_witness;
};

inline ConjCoverReport conj_cover_check(const Group& gr, const SetPtr& a,
                                        const DensityConfig& cfg = {}) {
  if (!gr.finite()) throw Unsupported("requires a finite group");
  if (auto e = detail::known_empty(gr, a); e && *e)
    throw Error("conj-cover: empty set");
  ConjCoverReport rep;
  rep.sis_lower = sis123(gr, a, cfg).lo;
  if (rep.sis_lower <= 0) throw Error("conj-cover: vanishing lower bound");
  rep.bound = rat_ceil(1 / rep.sis_lower);
  auto w = gr.full_window();
  SetPtr dd = diff_right(a);
  detail::for_each_subset(w.elems.size(), 3, 1u << 20,
                          [&](const std::vector<size_t>& pick) {
    if (rep.ok) return;
    std::vector<Elem> es;
    for (size_t t : pick) es.push_back(w.elems[t]);
    auto cov = covering_number(gr, set_wr(dd, make_explicit(gr, es)),
                               static_cast<int>(gr.order()));
    if (cov.kind == CovResult::Kind::Exact &&
        BigInt(static_cast<long long>(cov.value)) <= rep.bound) {
      rep.ok = true;
      rep.e_witness = es;
      rep.cov_wr = cov.value;
    }
  });
  auto cov4 =
      covering_number(gr, set_product(dd, dd), static_cast<int>(gr.order()));
  if (cov4.kind != CovResult::Kind::Exact)
    throw Error("conj-cover: fourfold covering did not resolve");
  rep.cov_fourfold = cov4.value;
  rep.cov_fourfold_witness = cov4.witness;
  return rep;
}

}  // namespace groupdens
