#include "mwmlab/matching.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "mwmlab/error.hpp"

namespace mwmlab {

WeightMatrix::WeightMatrix(std::size_t queues, std::size_t servers)
    : queues_(queues), servers_(servers), w_(queues * servers, 0) {
  if (queues == 0 || servers == 0) throw ContractViolation("weight matrix needs at least one row and one column");
}

WeightMatrix::WeightMatrix(std::initializer_list<std::initializer_list<Weight>> rows)
    : WeightMatrix(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
  std::size_t n = 0;
  for (const auto& row : rows) {
    if (row.size() != servers_) throw ContractViolation("ragged weight matrix");
    std::size_t k = 0;
    for (Weight v : row) set(n, k++, v);
    ++n;
  }
}

void WeightMatrix::set(std::size_t n, std::size_t k, Weight value) {
  if (value < 0) throw ContractViolation("negative edge weight");
  w_[n * servers_ + k] = value;
}

Matching::Matching(std::vector<Edge> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    for (std::size_t j = i + 1; j < pairs_.size(); ++j) {
      if (pairs_[i].queue == pairs_[j].queue) throw ContractViolation("queue matched twice");
      if (pairs_[i].server == pairs_[j].server) throw ContractViolation("server matched twice");
    }
  }
}

bool Matching::contains(Edge e) const { return std::binary_search(pairs_.begin(), pairs_.end(), e); }

std::optional<std::size_t> Matching::server_of(std::size_t queue) const {
  for (const Edge& e : pairs_) {
    if (e.queue == queue) return e.server;
  }
  return std::nullopt;
}

bool Matching::fits(std::size_t queues, std::size_t servers) const {
  return std::all_of(pairs_.begin(), pairs_.end(),
                     [&](const Edge& e) { return e.queue < queues && e.server < servers; });
}

WeightMatrix weight_matrix(const QueueState& x_prev, const ConnectivityMatrix& c) {
  if (x_prev.size() != c.queues()) throw ContractViolation("queue state and connectivity disagree on N");
  WeightMatrix w(c.queues(), c.servers());
  for (std::size_t n = 0; n < c.queues(); ++n) {
    for (std::size_t k = 0; k < c.servers(); ++k) {
      if (c.at(n, k)) w.set(n, k, x_prev[n]);
    }
  }
  return w;
}

Weight matching_weight(const WeightMatrix& w, const Matching& m) {
  if (!m.fits(w.queues(), w.servers())) throw ContractViolation("matching does not fit the weight matrix");
  Weight total = 0;
  for (const Edge& e : m) total += w.at(e.queue, e.server);
  return total;
}

Weight matching_weight(const QueueState& x_prev, const ConnectivityMatrix& c, const Matching& m) {
  if (x_prev.size() != c.queues()) throw ContractViolation("queue state and connectivity disagree on N");
  if (!m.fits(c.queues(), c.servers())) throw ContractViolation("matching does not fit the connectivity matrix");
  Weight total = 0;
  for (const Edge& e : m) {
    if (c.at(e.queue, e.server)) total += x_prev[e.queue];
  }
  return total;
}

namespace {

// Dense row-major scratch matrix; rows may outnumber columns.
struct Dense {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Weight> w;

  Weight at(std::size_t i, std::size_t j) const { return w[i * cols + j]; }
};

// Hungarian method with potentials for rows <= cols. Every row is assigned a
// distinct column; with non-negative weights this is a maximum weight
// matching once zero-weight pairs are ignored. O(rows^2 * cols).
Weight assignment_optimum(const Dense& d) {
  const std::size_t n = d.rows;
  const std::size_t m = d.cols;
  constexpr Weight inf = std::numeric_limits<Weight>::max() / 4;
  // 1-based; index 0 is the virtual column used to start each augmentation.
  std::vector<Weight> u(n + 1, 0), v(m + 1, 0), minv(m + 1);
  std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      Weight delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const Weight cur = -d.at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Weight total = 0;
  for (std::size_t j = 1; j <= m; ++j) {
    if (owner[j] != 0) total += d.at(owner[j] - 1, j - 1);
  }
  return total;
}

Weight optimum(const Dense& d) {
  if (d.rows == 0 || d.cols == 0) return 0;
  if (d.rows <= d.cols) return assignment_optimum(d);
  Dense t{d.cols, d.rows, std::vector<Weight>(d.w.size())};
  for (std::size_t i = 0; i < d.rows; ++i) {
    for (std::size_t j = 0; j < d.cols; ++j) t.w[j * t.cols + i] = d.at(i, j);
  }
  return assignment_optimum(t);
}

// Optimum over the free rows/columns of `work`, optionally also removing one
// row and one column.
Weight restricted_optimum(const Dense& work, const std::vector<char>& row_free,
                          const std::vector<char>& col_free, std::size_t skip_row, std::size_t skip_col) {
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < work.rows; ++i) {
    if (row_free[i] && i != skip_row) rows.push_back(i);
  }
  for (std::size_t j = 0; j < work.cols; ++j) {
    if (col_free[j] && j != skip_col) cols.push_back(j);
  }
  Dense sub{rows.size(), cols.size(), {}};
  sub.w.reserve(rows.size() * cols.size());
  for (std::size_t i : rows) {
    for (std::size_t j : cols) sub.w.push_back(work.at(i, j));
  }
  return optimum(sub);
}

Dense to_dense(const WeightMatrix& w) {
  Dense d{w.queues(), w.servers(), std::vector<Weight>(w.queues() * w.servers())};
  for (std::size_t n = 0; n < w.queues(); ++n) {
    for (std::size_t k = 0; k < w.servers(); ++k) d.w[n * d.cols + k] = w.at(n, k);
  }
  return d;
}

}  // namespace

Weight max_weight_value(const WeightMatrix& w) { return optimum(to_dense(w)); }

Matching max_weight_matching(const WeightMatrix& w) {
  // Walk the pairs in (n, k) order and keep a pair whenever some optimal
  // matching still contains it together with everything kept so far. A pair
  // that is rejected is zeroed, which is equivalent to forbidding it. This
  // yields the lexicographically smallest optimal pair list.
  Dense work = to_dense(w);
  std::vector<char> row_free(work.rows, 1), col_free(work.cols, 1);
  Weight remaining = optimum(work);
  std::vector<Edge> chosen;

  for (std::size_t n = 0; n < work.rows && remaining > 0; ++n) {
    for (std::size_t k = 0; k < work.cols && remaining > 0; ++k) {
      if (!row_free[n]) break;
      const Weight wk = work.at(n, k);
      if (!col_free[k] || wk == 0) continue;
      if (wk <= remaining && wk + restricted_optimum(work, row_free, col_free, n, k) == remaining) {
        chosen.push_back({n, k});
        row_free[n] = 0;
        col_free[k] = 0;
        remaining -= wk;
      } else {
        work.w[n * work.cols + k] = 0;
      }
    }
  }
  return Matching(std::move(chosen));
}

std::vector<Matching> enumerate_matchings(std::size_t queues, std::size_t servers) {
  if (queues * servers > kMaxEnumerationEdges) {
    throw GuardViolation("matching enumeration limited to N*K <= " + std::to_string(kMaxEnumerationEdges) +
                         ", got " + std::to_string(queues) + "*" + std::to_string(servers));
  }
  std::vector<Matching> out;
  std::vector<Edge> current;
  std::vector<char> taken(servers, 0);
  // Queue n either stays unmatched or takes one free server.
  auto recurse = [&](auto&& self, std::size_t n) -> void {
    if (n == queues) {
      out.emplace_back(current);
      return;
    }
    self(self, n + 1);
    for (std::size_t k = 0; k < servers; ++k) {
      if (taken[k]) continue;
      taken[k] = 1;
      current.push_back({n, k});
      self(self, n + 1);
      current.pop_back();
      taken[k] = 0;
    }
  };
  recurse(recurse, 0);
  return out;
}

}  // namespace mwmlab
