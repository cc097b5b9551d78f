#pragma once

#include <string>
#include <vector>

#include "groupdens/errors.hpp"
#include "groupdens/rational.hpp"

namespace groupdens {

// ---------------------------------------------------------------------------
// Exact rational simplex for LPs in standard inequality form
//
//     maximize c.x   subject to   A x <= b,  x >= 0
//
// Dictionary tableau with Bland's smallest-index rule for both entering and
// leaving variables: no cycling, and optimal strategies (hence all reported
// witnesses) are deterministic. Phase 1 drives a single artificial variable
// out when some b_i < 0. Duals for the <= rows are read off the final
// objective row. Everything is exact; there are no tolerances anywhere.
// ---------------------------------------------------------------------------

struct LPResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Optimal;
  Rat value;
  std::vector<Rat> x;     // primal solution, size n
  std::vector<Rat> dual;  // one multiplier per constraint, size m
};

namespace detail {

class Simplex {
 public:
  Simplex(const std::vector<std::vector<Rat>>& A, const std::vector<Rat>& b,
          const std::vector<Rat>& c)
      : m_(b.size()), n_(c.size()), art_(n_ + m_),
        B_(m_), N_(n_ + 1), D_(m_ + 2, std::vector<Rat>(n_ + 2)) {
    for (size_t i = 0; i < m_; ++i) {
      if (A[i].size() != n_) throw Error("lp: ragged constraint matrix");
      for (size_t j = 0; j < n_; ++j) D_[i][j] = A[i][j];
      D_[i][n_] = -1;        // artificial column
      D_[i][n_ + 1] = b[i];  // rhs
      B_[i] = n_ + i;        // slack ids n..n+m-1
    }
    for (size_t j = 0; j < n_; ++j) {
      N_[j] = j;
      D_[m_][j] = -c[j];  // objective row, minus convention
    }
    N_[n_] = art_;
    D_[m_ + 1][n_] = 1;  // phase-1 objective: maximize -artificial
  }

  LPResult solve() {
    LPResult res;
    size_t worst = 0;
    for (size_t i = 1; i < m_; ++i)
      if (D_[i][n_ + 1] < D_[worst][n_ + 1]) worst = i;
    if (m_ > 0 && D_[worst][n_ + 1] < 0) {
      pivot(worst, n_);  // bring the artificial in; rhs becomes feasible
      if (!optimize(m_ + 1)) throw Error("lp: phase 1 unbounded");
      if (D_[m_ + 1][n_ + 1] < 0) {
        res.status = LPResult::Status::Infeasible;
        return res;
      }
      for (size_t i = 0; i < m_; ++i) {
        if (B_[i] != art_) continue;
        // artificial basic at zero; pivot it out if the row is not vacuous
        size_t s = n_ + 1;
        for (size_t j = 0; j <= n_; ++j)
          if (D_[i][j] != 0 && (s == n_ + 1 || N_[j] < N_[s])) s = j;
        if (s != n_ + 1) pivot(i, s);
      }
    }
    if (!optimize(m_)) {
      res.status = LPResult::Status::Unbounded;
      return res;
    }
    res.status = LPResult::Status::Optimal;
    res.value = D_[m_][n_ + 1];
    res.x.assign(n_, Rat(0));
    for (size_t i = 0; i < m_; ++i)
      if (B_[i] < n_) res.x[B_[i]] = D_[i][n_ + 1];
    res.dual.assign(m_, Rat(0));
    for (size_t j = 0; j <= n_; ++j)
      if (N_[j] >= n_ && N_[j] < n_ + m_) res.dual[N_[j] - n_] = D_[m_][j];
    return res;
  }

 private:
  // Bland: entering = improving column with the smallest variable id;
  // leaving = lexicographic (ratio, basic id). Returns false on unbounded.
  bool optimize(size_t obj) {
    while (true) {
      size_t s = n_ + 1;
      for (size_t j = 0; j <= n_; ++j) {
        if (N_[j] == art_ && obj == m_) continue;  // phase 2: artificial is dead
        if (D_[obj][j] < 0 && (s == n_ + 1 || N_[j] < N_[s])) s = j;
      }
      if (s == n_ + 1) return true;
      size_t r = m_;
      for (size_t i = 0; i < m_; ++i) {
        if (D_[i][s] <= 0) continue;
        if (r == m_) {
          r = i;
          continue;
        }
        Rat lhs = D_[i][n_ + 1] * D_[r][s];
        Rat rhs = D_[r][n_ + 1] * D_[i][s];
        if (lhs < rhs || (lhs == rhs && B_[i] < B_[r])) r = i;
      }
      if (r == m_) return false;
      pivot(r, s);
    }
  }

  void pivot(size_t r, size_t s) {
    Rat p = D_[r][s];
    Rat inv = Rat(1) / p;
    for (size_t i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      if (D_[i][s] == 0) continue;
      Rat f = D_[i][s] * inv;
      for (size_t j = 0; j < n_ + 2; ++j)
        if (j != s && D_[r][j] != 0) D_[i][j] -= f * D_[r][j];
      D_[i][s] = -f;
    }
    for (size_t j = 0; j < n_ + 2; ++j)
      if (j != s) D_[r][j] *= inv;
    D_[r][s] = inv;
    std::swap(B_[r], N_[s]);
  }

  size_t m_, n_, art_;
  std::vector<size_t> B_, N_;
  std::vector<std::vector<Rat>> D_;
};

}  // namespace detail

inline LPResult solve_lp(const std::vector<std::vector<Rat>>& A,
                         const std::vector<Rat>& b, const std::vector<Rat>& c) {
  if (A.size() != b.size()) throw Error("lp: |A| != |b|");
  return detail::Simplex(A, b, c).solve();
}

// ---------------------------------------------------------------------------
// Zero-sum matrix games. The row player mixes lambda to minimize the largest
// column payoff; the value is min_lambda max_j sum_i lambda_i M[i][j]. Both
// optimal strategies come out of one LP with an exact strong-duality
// certificate checked before returning.
// ---------------------------------------------------------------------------

struct GameMatrix {
  std::vector<std::vector<Rat>> a;
  std::vector<std::string> row_labels, col_labels;

  size_t rows() const { return a.size(); }
  size_t cols() const { return a.empty() ? 0 : a[0].size(); }
};

struct GameSolution {
  Rat value;
  std::vector<Rat> row_strategy, col_strategy;
  std::vector<Rat> col_payoffs;  // row_strategy against each pure column
  std::vector<Rat> row_payoffs;  // col_strategy against each pure row
};

inline GameSolution game_value(const GameMatrix& gm) {
  const size_t r = gm.rows(), c = gm.cols();
  if (r == 0 || c == 0) throw Error("game: empty matrix");
  for (const auto& row : gm.a)
    if (row.size() != c) throw Error("game: ragged matrix");
  Rat shift(0);
  for (const auto& row : gm.a)
    for (const auto& v : row)
      if (v - shift < 1) shift = v - 1;  // ensure all shifted entries >= 1
  // Scale the minimizer's strategy: u = p / v' turns min_p max_j (p^T M')_j
  // into max sum(u) s.t. M'^T u <= 1, u >= 0, with v' = 1/sum(u).  The duals
  // of the column constraints recover the maximizer's strategy.
  std::vector<std::vector<Rat>> A(c, std::vector<Rat>(r));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) A[j][i] = gm.a[i][j] - shift;
  std::vector<Rat> b(c, Rat(1)), obj(r, Rat(1));
  LPResult lp = solve_lp(A, b, obj);
  if (lp.status != LPResult::Status::Optimal || lp.value <= 0)
    throw Error("game: reduction LP failed");
  Rat vprime = Rat(1) / lp.value;
  GameSolution sol;
  sol.value = vprime + shift;
  sol.row_strategy.resize(r);
  for (size_t i = 0; i < r; ++i) sol.row_strategy[i] = lp.x[i] * vprime;
  sol.col_strategy.resize(c);
  for (size_t j = 0; j < c; ++j) sol.col_strategy[j] = lp.dual[j] * vprime;
  sol.col_payoffs.assign(c, Rat(0));
  sol.row_payoffs.assign(r, Rat(0));
  Rat rsum(0), csum(0);
  for (size_t i = 0; i < r; ++i) rsum += sol.row_strategy[i];
  for (size_t j = 0; j < c; ++j) csum += sol.col_strategy[j];
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) {
      sol.col_payoffs[j] += sol.row_strategy[i] * gm.a[i][j];
      sol.row_payoffs[i] += sol.col_strategy[j] * gm.a[i][j];
    }
  Rat worst_col = sol.col_payoffs[0], best_row = sol.row_payoffs[0];
  for (const auto& v : sol.col_payoffs) worst_col = std::max(worst_col, v);
  for (const auto& v : sol.row_payoffs) best_row = std::min(best_row, v);
  if (rsum != 1 || csum != 1 || worst_col != sol.value || best_row != sol.value)
    throw Error("game: strong duality certificate failed");
  return sol;
}

}  // namespace groupdens
