#include "wasserlim/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wasserlim/error.hpp"

namespace wasserlim {

namespace {
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();
// Up to this many nodes, flows are summed over the lighter side of each cut.
constexpr std::size_t kDirectSumNodes = 4096;
}  // namespace

TransportSimplex::TransportSimplex(std::vector<double> supply, std::vector<double> demand,
                                   std::vector<std::int64_t> cost)
    : rows_(supply.size()), cols_(demand.size()), cost_(std::move(cost)) {
  if (rows_ == 0 || cols_ == 0) throw Error(ErrorCode::InvalidArgument, "empty transport problem");
  if (cost_.size() != rows_ * cols_) throw Error(ErrorCode::SizeMismatch, "cost matrix shape");
  for (double a : supply)
    if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "supplies must be positive");
  for (double b : demand)
    if (!(b >= 0.0)) throw Error(ErrorCode::InvalidArgument, "demands must be nonnegative");

  std::int64_t max_cost = 0;
  for (std::int64_t c : cost_) {
    if (c < 0) throw Error(ErrorCode::InvalidArgument, "arc costs must be nonnegative");
    max_cost = std::max(max_cost, c);
  }
  artificial_cost_ = (max_cost + 1) * static_cast<std::int64_t>(node_count());

  const double supply_total = std::accumulate(supply.begin(), supply.end(), 0.0);
  const double demand_total = std::accumulate(demand.begin(), demand.end(), 0.0);
  if (!(demand_total > 0.0) || std::abs(supply_total - demand_total) > 1e-9 * supply_total)
    throw Error(ErrorCode::InvalidArgument, "unbalanced transport problem");
  for (double& b : demand) b *= supply_total / demand_total;
  balance_ = supply;
  for (double b : demand) balance_.push_back(-b);

  // Initial strongly feasible tree: every node hangs off the root through
  // its artificial arc, sources pointing up and sinks pointing down.
  const std::size_t arcs = real_arcs() + rows_ + cols_;
  flow_.assign(arcs, 0.0);
  in_tree_.assign(arcs, 0);
  tree_adj_.assign(node_count(), {});
  for (std::size_t v = 0; v < rows_ + cols_; ++v) {
    const std::size_t a = real_arcs() + v;
    flow_[a] = v < rows_ ? supply[v] : demand[v - rows_];
    in_tree_[a] = 1;
    tree_adj_[v].push_back(a);
    tree_adj_[root()].push_back(a);
  }
  block_size_ = std::max<std::size_t>(
      10, static_cast<std::size_t>(std::sqrt(static_cast<double>(real_arcs()))));
  rebuild_tree();
}

std::size_t TransportSimplex::arc_source(std::size_t arc) const {
  if (arc < real_arcs()) return arc / cols_;
  const std::size_t v = arc - real_arcs();
  return v < rows_ ? v : root();
}

std::size_t TransportSimplex::arc_target(std::size_t arc) const {
  if (arc < real_arcs()) return rows_ + arc % cols_;
  const std::size_t v = arc - real_arcs();
  return v < rows_ ? root() : v;
}

std::int64_t TransportSimplex::arc_cost(std::size_t arc) const {
  if (arc < real_arcs()) return cost_[arc];
  const std::size_t v = arc - real_arcs();
  return v < rows_ ? 0 : artificial_cost_;
}

void TransportSimplex::rebuild_tree() {
  const std::size_t n = node_count();
  parent_.assign(n, kNone);
  parent_arc_.assign(n, kNone);
  dir_.assign(n, Dir::Up);
  depth_.assign(n, 0);
  potential_.assign(n, 0);
  std::vector<std::size_t> queue{root()};
  queue.reserve(n);
  std::vector<std::uint8_t> seen(n, 0);
  seen[root()] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t p = queue[head];
    for (std::size_t a : tree_adj_[p]) {
      const std::size_t s = arc_source(a);
      const std::size_t t = arc_target(a);
      const std::size_t v = s == p ? t : s;
      if (seen[v]) continue;
      seen[v] = 1;
      parent_[v] = p;
      parent_arc_[v] = a;
      depth_[v] = depth_[p] + 1;
      // Tree arcs have zero reduced cost: c + π(s) − π(t) = 0.
      if (s == v) {
        dir_[v] = Dir::Up;
        potential_[v] = potential_[p] - arc_cost(a);
      } else {
        dir_[v] = Dir::Down;
        potential_[v] = potential_[p] + arc_cost(a);
      }
      queue.push_back(v);
    }
  }
  if (queue.size() != n) throw Error(ErrorCode::SolverFailure, "basis is not a spanning tree");
  order_ = std::move(queue);
}

void TransportSimplex::recompute_flows() {
  const std::size_t n = node_count();
  std::vector<double> excess(n, 0.0), weight(n, 0.0);
  for (std::size_t v = 0; v < balance_.size(); ++v) {
    excess[v] = balance_[v];
    weight[v] = std::abs(balance_[v]);
  }
  for (std::size_t k = n; k-- > 1;) {
    excess[parent_[order_[k]]] += excess[order_[k]];
    weight[parent_[order_[k]]] += weight[order_[k]];
  }
  // The mass crossing a tree arc is the balance of either side. Summing the
  // side with less absolute balance avoids cancellation in small flows.
  std::vector<std::size_t> tin(n), tout(n);
  if (n <= kDirectSumNodes) {
    std::vector<std::vector<std::size_t>> children(n);
    for (std::size_t k = 1; k < n; ++k) children[parent_[order_[k]]].push_back(order_[k]);
    std::size_t clock = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root(), 0}};
    tin[root()] = clock++;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < children[v].size()) {
        const std::size_t c = children[v][i++];
        tin[c] = clock++;
        stack.push_back({c, 0});
      } else {
        tout[v] = clock;
        stack.pop_back();
      }
    }
  }
  const double total_weight = weight[root()];
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t v = order_[k];
    double e = excess[v];
    if (n <= kDirectSumNodes && 2.0 * weight[v] > total_weight) {
      double outside = 0.0;
      for (std::size_t u = 0; u < balance_.size(); ++u)
        if (tin[u] < tin[v] || tin[u] >= tout[v]) outside += balance_[u];
      e = -outside;
    }
    const double f = dir_[v] == Dir::Up ? e : -e;
    flow_[parent_arc_[v]] = std::max(f, 0.0);
  }
}

std::int64_t TransportSimplex::reduced_cost(std::size_t row, std::size_t col) const {
  const std::size_t a = row * cols_ + col;
  return cost_[a] + potential_[row] - potential_[rows_ + col];
}

bool TransportSimplex::find_entering(std::size_t& entering) {
  const std::size_t total = real_arcs();
  std::int64_t best = 0;
  std::size_t best_arc = kNone;
  std::size_t scanned_in_block = 0;
  for (std::size_t k = 0; k < total; ++k) {
    const std::size_t a = (next_arc_ + k) % total;
    if (!in_tree_[a]) {
      const std::int64_t rc = cost_[a] + potential_[a / cols_] - potential_[rows_ + a % cols_];
      if (rc < best) {
        best = rc;
        best_arc = a;
      }
    }
    if (++scanned_in_block == block_size_) {
      scanned_in_block = 0;
      if (best_arc != kNone) {
        next_arc_ = (a + 1) % total;
        entering = best_arc;
        return true;
      }
    }
  }
  if (best_arc == kNone) return false;
  next_arc_ = (best_arc + 1) % total;
  entering = best_arc;
  return true;
}

std::size_t TransportSimplex::find_join(std::size_t u, std::size_t v) const {
  while (u != v) {
    if (depth_[u] >= depth_[v]) {
      u = parent_[u];
    } else {
      v = parent_[v];
    }
  }
  return u;
}

void TransportSimplex::pivot(std::size_t entering) {
  const std::size_t first = arc_source(entering);
  const std::size_t second = arc_target(entering);
  const std::size_t join = find_join(first, second);

  // Leaving arc: the last blocking arc met when the cycle is walked from
  // the join in the direction of the entering arc. This keeps the tree
  // strongly feasible.
  double delta = kInf;
  std::size_t leave_node = kNone;
  for (std::size_t x = first; x != join; x = parent_[x]) {
    if (dir_[x] == Dir::Up && flow_[parent_arc_[x]] < delta) {
      delta = flow_[parent_arc_[x]];
      leave_node = x;
    }
  }
  for (std::size_t x = second; x != join; x = parent_[x]) {
    if (dir_[x] == Dir::Down && flow_[parent_arc_[x]] <= delta) {
      delta = flow_[parent_arc_[x]];
      leave_node = x;
    }
  }
  if (leave_node == kNone) throw Error(ErrorCode::SolverFailure, "unbounded pivot cycle");

  if (delta > 0.0) {
    flow_[entering] += delta;
    for (std::size_t x = first; x != join; x = parent_[x]) {
      double& f = flow_[parent_arc_[x]];
      f = dir_[x] == Dir::Up ? f - delta : f + delta;
    }
    for (std::size_t x = second; x != join; x = parent_[x]) {
      double& f = flow_[parent_arc_[x]];
      f = dir_[x] == Dir::Up ? f + delta : f - delta;
    }
  }
  const std::size_t leaving = parent_arc_[leave_node];
  flow_[leaving] = 0.0;

  auto drop = [&](std::size_t node) {
    auto& list = tree_adj_[node];
    list.erase(std::find(list.begin(), list.end(), leaving));
  };
  drop(arc_source(leaving));
  drop(arc_target(leaving));
  in_tree_[leaving] = 0;
  in_tree_[entering] = 1;
  tree_adj_[first].push_back(entering);
  tree_adj_[second].push_back(entering);
  rebuild_tree();
}

std::size_t TransportSimplex::solve() {
  std::size_t pivots = 0;
  std::size_t entering = 0;
  while (find_entering(entering)) {
    pivot(entering);
    ++pivots;
  }
  recompute_flows();
  const double residue = artificial_residue();
  if (residue > 1e-9) {
    throw Error(ErrorCode::SolverFailure,
                "artificial arcs still carry mass " + std::to_string(residue));
  }
  return pivots;
}

double TransportSimplex::artificial_residue() const {
  double worst = 0.0;
  for (std::size_t v = 0; v < rows_ + cols_; ++v) worst = std::max(worst, flow_[real_arcs() + v]);
  return worst;
}

std::vector<TransportSimplex::Flow> TransportSimplex::flows() const {
  std::vector<Flow> out;
  for (std::size_t a = 0; a < real_arcs(); ++a)
    if (in_tree_[a] && flow_[a] > 0.0) out.push_back({a / cols_, a % cols_, flow_[a]});
  return out;
}

std::vector<TransportSimplex::Flow> TransportSimplex::zero_reduced_cost_arcs() const {
  std::vector<Flow> out;
  for (std::size_t a = 0; a < real_arcs(); ++a)
    if (!in_tree_[a] && reduced_cost(a / cols_, a % cols_) == 0) out.push_back({a / cols_, a % cols_, 0.0});
  return out;
}

std::vector<TransportSimplex::Flow> TransportSimplex::flows_after_pivot(std::size_t row,
                                                                        std::size_t col) const {
  const std::size_t a = row * cols_ + col;
  if (in_tree_[a]) return {};
  TransportSimplex copy = *this;
  const auto before = flows();
  copy.pivot(a);
  copy.recompute_flows();
  auto after = copy.flows();
  const bool same = before.size() == after.size() &&
                    std::equal(before.begin(), before.end(), after.begin(), [](const Flow& x, const Flow& y) {
                      return x.row == y.row && x.col == y.col && std::abs(x.mass - y.mass) <= 1e-12;
                    });
  if (same) return {};
  return after;
}

}  // namespace wasserlim
