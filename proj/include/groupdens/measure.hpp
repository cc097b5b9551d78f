#pragma once

#include <map>
#include <utility>
#include <vector>

#include "groupdens/rational.hpp"
#include "groupdens/sets.hpp"

namespace groupdens {

// Finitely supported probability measure. Weights are positive exact
// rationals summing to exactly 1; zero weights are dropped at construction.
// Support is kept sorted so serialization and iteration are deterministic.
class Measure {
 public:
  static Measure dirac(const Elem& x) {
    Measure m;
    m.w_.emplace_back(x, Rat(1));
    return m;
  }

  static Measure uniform(const std::vector<Elem>& pts) {
    if (pts.empty()) throw Error("uniform measure on empty support");
    std::vector<std::pair<Elem, Rat>> w;
    Rat p(1, static_cast<long long>(pts.size()));
    for (const auto& x : pts) w.emplace_back(x, p);
    return of(std::move(w));
  }

  static Measure of(std::vector<std::pair<Elem, Rat>> w) {
    std::map<Elem, Rat> acc;
    for (auto& [x, p] : w) {
      if (p < 0) throw Error("negative weight in measure");
      if (p == 0) continue;
      acc[x] += p;
    }
    Rat total(0);
    for (const auto& [x, p] : acc) total += p;
    if (total != 1) throw Error("measure weights must sum to 1, got " + rat_str(total));
    Measure m;
    m.w_.assign(acc.begin(), acc.end());
    return m;
  }

  const std::vector<std::pair<Elem, Rat>>& weights() const { return w_; }
  size_t support_size() const { return w_.size(); }

  Rat operator()(const Group& gr, const SetPtr& s) const {
    Rat out(0);
    for (const auto& [x, p] : w_)
      if (set_contains(gr, s, x)) out += p;
    return out;
  }

  bool operator==(const Measure& o) const { return w_ == o.w_; }

 private:
  Measure() = default;
  std::vector<std::pair<Elem, Rat>> w_;
};

inline Measure convolve(const Group& gr, const Measure& a, const Measure& b) {
  std::vector<std::pair<Elem, Rat>> w;
  for (const auto& [x, p] : a.weights())
    for (const auto& [y, q] : b.weights()) w.emplace_back(gr.mul(x, y), p * q);
  return Measure::of(std::move(w));
}

// mu * delta_x (A): the translate profile appearing in every density game.
inline Rat act_mass(const Group& gr, const Measure& mu, const SetPtr& s,
                    const Elem& x) {
  Rat out(0);
  for (const auto& [g, p] : mu.weights())
    if (set_contains(gr, s, gr.mul(g, x))) out += p;
  return out;
}

// L1 distance between delta_t * mu and mu: how far the measure itself is from
// t-invariance, independent of any test set.
inline Rat shift_defect(const Group& gr, const Measure& mu, const Elem& t) {
  std::map<Elem, Rat> diff;
  for (const auto& [x, p] : mu.weights()) {
    diff[gr.mul(t, x)] += p;
    diff[x] -= p;
  }
  Rat out(0);
  for (const auto& [x, d] : diff) out += d < 0 ? -d : d;
  return out;
}

// max over the given shifts t of |mu(tA) - mu(A)|, exact.
inline Rat invariance_defect(const Group& gr, const Measure& mu, const SetPtr& s,
                             const std::vector<Elem>& shifts) {
  Rat base = mu(gr, s);
  Rat worst(0);
  for (const auto& t : shifts) {
    Elem ti = gr.inv(t);
    Rat shifted(0);
    for (const auto& [x, p] : mu.weights())
      if (set_contains(gr, s, gr.mul(ti, x))) shifted += p;
    Rat d = shifted > base ? shifted - base : base - shifted;
    if (d > worst) worst = d;
  }
  return worst;
}

}  // namespace groupdens
