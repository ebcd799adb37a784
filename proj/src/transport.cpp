#include "wasserlim/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wasserlim/network_simplex.hpp"

namespace wasserlim {

std::vector<double> Coupling::source_marginal() const {
  std::vector<double> m(space ? space->size() : 0, 0.0);
  for (const auto& e : plan) m[e.source] += e.mass;
  return m;
}

std::vector<double> Coupling::target_marginal() const {
  std::vector<double> m(space ? space->size() : 0, 0.0);
  for (const auto& e : plan) m[e.target] += e.mass;
  return m;
}

std::vector<std::vector<double>> Coupling::dense() const {
  const std::size_t n = space ? space->size() : 0;
  std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
  for (const auto& e : plan) g[e.source][e.target] += e.mass;
  return g;
}

namespace {

void check_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "p must be a finite real >= 1");
}

double power(double d, double p) {
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  return std::pow(d, p);
}

// Support-restricted problem shared by the solver entry points.
struct SupportProblem {
  std::vector<PointId> rows;
  std::vector<PointId> cols;
  std::vector<double> real_cost;
  TransportSimplex simplex;
};

SupportProblem build_problem(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  check_exponent(p);
  require_same_space(mu, nu);
  const auto& space = mu.space();
  auto rows = mu.support();
  auto cols = nu.support();
  std::vector<double> real_cost(rows.size() * cols.size());
  double max_cost = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double c = power(space(rows[i], cols[j]), p);
      real_cost[i * cols.size() + j] = c;
      max_cost = std::max(max_cost, c);
    }
  }
  constexpr double kCostCeiling = 1099511627776.0;  // 2^40
  double scale = 1e9;
  if (max_cost * scale > kCostCeiling) scale = kCostCeiling / max_cost;
  std::vector<std::int64_t> int_cost(real_cost.size());
  for (std::size_t k = 0; k < real_cost.size(); ++k)
    int_cost[k] = static_cast<std::int64_t>(std::llround(real_cost[k] * scale));

  std::vector<double> supply, demand;
  for (PointId x : rows) supply.push_back(mu[x]);
  for (PointId y : cols) demand.push_back(nu[y]);
  TransportSimplex simplex(std::move(supply), std::move(demand), std::move(int_cost));
  return SupportProblem{std::move(rows), std::move(cols), std::move(real_cost), std::move(simplex)};
}

Coupling to_coupling(const SupportProblem& problem, const std::vector<TransportSimplex::Flow>& flows,
                     const SpacePtr& space, double p) {
  Coupling c;
  c.space = space;
  c.p = p;
  double total = 0.0;
  for (const auto& f : flows) {
    c.plan.push_back({problem.rows[f.row], problem.cols[f.col], f.mass});
    total += f.mass * problem.real_cost[f.row * problem.cols.size() + f.col];
  }
  std::sort(c.plan.begin(), c.plan.end(), [](const PlanEntry& a, const PlanEntry& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  c.cost = std::pow(std::max(total, 0.0), 1.0 / p);
  return c;
}

}  // namespace

TransportResult wasserstein_p(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  SupportProblem problem = build_problem(mu, nu, p);
  problem.simplex.solve();
  Coupling coupling = to_coupling(problem, problem.simplex.flows(), mu.space_ptr(), p);
  coupling.alternative_optimum_possible = !problem.simplex.zero_reduced_cost_arcs().empty();
  const double d = coupling.cost;
  return TransportResult{d, std::move(coupling)};
}

std::vector<Coupling> alternate_optimal_couplings(const DiscreteMeasure& mu,
                                                  const DiscreteMeasure& nu, double p,
                                                  std::size_t max_count) {
  SupportProblem problem = build_problem(mu, nu, p);
  problem.simplex.solve();
  std::vector<Coupling> out;
  std::vector<std::vector<TransportSimplex::Flow>> seen{problem.simplex.flows()};
  auto same = [](const std::vector<TransportSimplex::Flow>& a,
                 const std::vector<TransportSimplex::Flow>& b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) {
             return x.row == y.row && x.col == y.col && x.mass == y.mass;
           });
  };
  for (const auto& arc : problem.simplex.zero_reduced_cost_arcs()) {
    if (out.size() >= max_count) break;
    auto flows = problem.simplex.flows_after_pivot(arc.row, arc.col);
    if (flows.empty()) continue;
    if (std::any_of(seen.begin(), seen.end(), [&](const auto& s) { return same(s, flows); })) continue;
    out.push_back(to_coupling(problem, flows, mu.space_ptr(), p));
    out.back().alternative_optimum_possible = true;
    seen.push_back(std::move(flows));
  }
  return out;
}

Assignment assignment_wasserstein(const UniformCloud& a, const UniformCloud& b, double p) {
  check_exponent(p);
  if (!same_space(a.space, b.space)) throw Error(ErrorCode::SpaceMismatch, "clouds on different spaces");
  if (a.size() != b.size()) {
    throw Error(ErrorCode::SizeMismatch,
                "cloud sizes " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  const std::size_t n = a.size();
  if (n == 0) throw Error(ErrorCode::NotUniformCloud, "empty cloud");
  const auto& space = *a.space;

  // Shortest augmenting path Hungarian method, 1-based potentials.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  auto cost = [&](std::size_t i, std::size_t j) { return power(space(a.atoms[i - 1], b.atoms[j - 1]), p); };
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment result;
  result.sigma.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) result.sigma[match[j] - 1] = j - 1;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += power(space(a.atoms[i], b.atoms[result.sigma[i]]), p);
  result.cost = std::pow(total / static_cast<double>(n), 1.0 / p);
  return result;
}

Assignment assignment_wasserstein(const DiscreteMeasure& a, const DiscreteMeasure& b, std::size_t n,
                                  double p) {
  return assignment_wasserstein(as_uniform_cloud(a, n), as_uniform_cloud(b, n), p);
}

double brute_force_wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  check_exponent(p);
  require_same_space(mu, nu);
  const auto rows = mu.support();
  const auto cols = nu.support();
  const std::size_t m = rows.size();
  const std::size_t n = cols.size();
  const std::size_t arcs = m * n;
  if (arcs > kBruteForceMaxArcs) {
    throw Error(ErrorCode::TooLarge, std::to_string(m) + "x" + std::to_string(n) +
                                         " supports exceed the enumeration limit");
  }
  const std::size_t basis = m + n - 1;
  std::vector<double> cost(arcs);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = power(mu.space()(rows[i], cols[j]), p);

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(basis);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  std::vector<std::size_t> uf(m + n);
  for (;;) {
    // Spanning tree test: basis arcs joining m + n nodes without a cycle.
    std::iota(uf.begin(), uf.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (uf[x] != x) x = uf[x] = uf[uf[x]];
      return x;
    };
    bool tree = true;
    for (std::size_t a : pick) {
      const std::size_t r = find(a / n);
      const std::size_t c = find(m + a % n);
      if (r == c) {
        tree = false;
        break;
      }
      uf[r] = c;
    }
    if (tree) {
      // Tree flows are forced: peel leaves.
      std::vector<double> residual(m + n);
      for (std::size_t i = 0; i < m; ++i) residual[i] = mu[rows[i]];
      for (std::size_t j = 0; j < n; ++j) residual[m + j] = nu[cols[j]];
      std::vector<std::size_t> degree(m + n, 0);
      for (std::size_t a : pick) {
        ++degree[a / n];
        ++degree[m + a % n];
      }
      std::vector<char> alive(basis, 1);
      std::vector<double> flow(basis, 0.0);
      for (std::size_t round = 0; round < basis; ++round) {
        std::size_t chosen = basis, leaf = 0;
        for (std::size_t k = 0; k < basis && chosen == basis; ++k) {
          if (!alive[k]) continue;
          const std::size_t r = pick[k] / n;
          const std::size_t c = m + pick[k] % n;
          if (degree[r] == 1) {
            chosen = k;
            leaf = r;
          } else if (degree[c] == 1) {
            chosen = k;
            leaf = c;
          }
        }
        const std::size_t r = pick[chosen] / n;
        const std::size_t c = m + pick[chosen] % n;
        const std::size_t other = leaf == r ? c : r;
        flow[chosen] = residual[leaf];
        residual[other] -= residual[leaf];
        residual[leaf] = 0.0;
        --degree[r];
        --degree[c];
        alive[chosen] = 0;
      }
      bool feasible = true;
      double total = 0.0;
      for (std::size_t k = 0; k < basis; ++k) {
        if (flow[k] < -1e-12) {
          feasible = false;
          break;
        }
        total += std::max(flow[k], 0.0) * cost[pick[k]];
      }
      if (feasible) best = std::min(best, total);
    }
    std::size_t i = basis;
    while (i > 0 && pick[i - 1] == arcs - basis + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < basis; ++j) pick[j] = pick[j - 1] + 1;
  }
  return std::pow(std::max(best, 0.0), 1.0 / p);
}

Projection nearest_atom_projection(const DiscreteMeasure& mu, const DiscreteMeasure& cloud, double p) {
  check_exponent(p);
  require_same_space(mu, cloud);
  const auto atoms = cloud.support();
  const auto& space = mu.space();
  std::vector<PointId> tau(mu.size());
  std::vector<double> pushed(mu.size(), 0.0);
  double total = 0.0;
  for (PointId x = 0; x < mu.size(); ++x) {
    PointId best = atoms.front();
    double best_cost = power(space(x, best), p);
    for (PointId y : atoms) {
      const double c = power(space(x, y), p);
      if (c < best_cost) {
        best_cost = c;
        best = y;
      }
    }
    tau[x] = best;
    pushed[best] += mu[x];
    total += mu[x] * best_cost;
  }
  return Projection{std::move(tau), DiscreteMeasure(mu.space_ptr(), std::move(pushed)),
                    std::pow(total, 1.0 / p)};
}

}  // namespace wasserlim
