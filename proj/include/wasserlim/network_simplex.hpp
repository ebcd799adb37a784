#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wasserlim {

// Primal network simplex for the balanced transportation problem
//
//   min Σ c_ij x_ij  s.t.  Σ_j x_ij = a_i,  Σ_i x_ij = b_j,  x >= 0
//
// with integer arc costs and real masses. Pivoting works on a strongly
// feasible spanning tree rooted at an artificial node, so degenerate pivots
// cannot cycle; entering arcs are chosen by block search. All reduced-cost
// decisions are exact integer comparisons.
class TransportSimplex {
public:
  struct Flow {
    std::size_t row = 0;
    std::size_t col = 0;
    double mass = 0.0;
  };

  // cost is row-major, rows × cols. Supplies must be positive, and both
  // sides must carry the same total mass up to rounding.
  TransportSimplex(std::vector<double> supply, std::vector<double> demand,
                   std::vector<std::int64_t> cost);

  // Runs to optimality; returns the number of pivots.
  std::size_t solve();

  // Basic arcs with positive flow, ordered by (row, col).
  std::vector<Flow> flows() const;

  std::int64_t reduced_cost(std::size_t row, std::size_t col) const;

  // Nonbasic real arcs whose reduced cost is zero at the current basis:
  // each one can enter without changing the objective.
  std::vector<Flow> zero_reduced_cost_arcs() const;

  // Flow after pivoting the given arc into the basis, or an empty vector
  // when that pivot is degenerate (leaves the flow unchanged).
  std::vector<Flow> flows_after_pivot(std::size_t row, std::size_t col) const;

  // Largest leftover mass on an artificial arc (feasibility residue).
  double artificial_residue() const;

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

private:
  enum class Dir : std::uint8_t { Up, Down };

  std::size_t node_count() const noexcept { return rows_ + cols_ + 1; }
  std::size_t root() const noexcept { return rows_ + cols_; }
  std::size_t real_arcs() const noexcept { return rows_ * cols_; }
  std::size_t arc_source(std::size_t arc) const;
  std::size_t arc_target(std::size_t arc) const;
  std::int64_t arc_cost(std::size_t arc) const;

  void rebuild_tree();
  bool find_entering(std::size_t& entering);
  std::size_t find_join(std::size_t u, std::size_t v) const;
  void pivot(std::size_t entering);
  // Basic flows from the node balances, leaves first.
  void recompute_flows();

  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::int64_t> cost_;
  std::vector<double> balance_;  // supply on rows, −demand on columns
  std::int64_t artificial_cost_ = 0;

  // Arc state: flow for every arc (real arcs first, then one artificial arc
  // per non-root node) and tree membership.
  std::vector<double> flow_;
  std::vector<std::uint8_t> in_tree_;

  // Tree: per node, parent, arc to parent, its orientation, depth, potential.
  std::vector<std::vector<std::size_t>> tree_adj_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> parent_arc_;
  std::vector<Dir> dir_;
  std::vector<std::size_t> depth_;
  std::vector<std::int64_t> potential_;
  std::vector<std::size_t> order_;  // BFS order from the root

  std::size_t block_size_ = 0;
  std::size_t next_arc_ = 0;
};

}  // namespace wasserlim
