// Copyright 2026 The realkit Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "realkit/metric_space.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>

#include "realkit/errors.hpp"

namespace realkit {

std::string MetricViolation::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::kSymmetry:
      out << "symmetry violated at (" << i << "," << j << ")";
      break;
    case Kind::kDiagonal:
      out << "non-zero diagonal at (" << i << "," << i << ")";
      break;
    case Kind::kPositivity:
      out << "non-positive distance at (" << i << "," << j << ")";
      break;
    case Kind::kTriangle:
      out << "triangle inequality violated at (" << i << "," << j << "," << k << ")";
      break;
  }
  return out.str();
}

MetricReport validate_metric(const std::vector<std::string>& labels, const MatrixQ& dist) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (n < 1) throw InvalidInstance("metric space needs at least one point");
  if (dist.rows() != n || dist.cols() != n)
    throw InvalidInstance("distance matrix is " + std::to_string(dist.rows()) + "x" +
                          std::to_string(dist.cols()) + " but there are " +
                          std::to_string(n) + " labels");
  MetricReport report;
  using Kind = MetricViolation::Kind;
  for (int i = 0; i < n; ++i) {
    if (dist(i, i) != 0) report.violations.push_back({Kind::kDiagonal, i, i});
    for (int j = i + 1; j < n; ++j) {
      if (dist(i, j) != dist(j, i)) report.violations.push_back({Kind::kSymmetry, i, j});
      if (dist(i, j) <= 0 || dist(j, i) <= 0) report.violations.push_back({Kind::kPositivity, i, j});
    }
  }
  const Rational slack(1, 1000000000000LL);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        if (i > k) continue;  // d(i,k) vs d(k,i) is covered by the symmetry check
        if (dist(i, k) > dist(i, j) + dist(j, k) + slack)
          report.violations.push_back({Kind::kTriangle, i, j, k});
      }
  return report;
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, MatrixQ dist)
    : labels_(std::move(labels)), dist_(std::move(dist)) {
  MetricReport report = validate_metric(labels_, dist_);
  if (!report.ok()) {
    std::string message = "invalid metric:";
    for (const auto& v : report.violations) message += " " + v.describe() + ";";
    throw InvalidInstance(message);
  }
}

FiniteMetricSpace FiniteMetricSpace::discrete(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  MatrixQ dist = MatrixQ::Constant(n, n, Rational(1));
  for (int i = 0; i < n; ++i) dist(i, i) = 0;
  return FiniteMetricSpace(std::move(labels), std::move(dist));
}

std::vector<Rational> FiniteMetricSpace::distinct_distances() const {
  std::vector<Rational> result;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j) result.push_back(dist_(i, j));
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

int FiniteMetricSpace::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

int Configuration::total_mass() const {
  return std::accumulate(multiplicity.begin(), multiplicity.end(), 0);
}

bool Configuration::is_simple() const {
  return std::all_of(multiplicity.begin(), multiplicity.end(), [](int m) { return m <= 1; });
}

std::vector<int> Configuration::support() const {
  std::vector<int> result;
  for (int i = 0; i < size(); ++i)
    if (multiplicity[static_cast<std::size_t>(i)] > 0) result.push_back(i);
  return result;
}

namespace {

class Bitset {
 public:
  explicit Bitset(int n) : words_((static_cast<std::size_t>(n) + 63) / 64, 0) {}
  void set(int i) { words_[static_cast<std::size_t>(i) / 64] |= bit(i); }
  void reset(int i) { words_[static_cast<std::size_t>(i) / 64] &= ~bit(i); }
  bool test(int i) const { return (words_[static_cast<std::size_t>(i) / 64] & bit(i)) != 0; }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  Bitset operator&(const Bitset& other) const {
    Bitset result = *this;
    for (std::size_t w = 0; w < words_.size(); ++w) result.words_[w] &= other.words_[w];
    return result;
  }
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word != 0) {
        int b = __builtin_ctzll(word);
        f(static_cast<int>(w * 64 + static_cast<std::size_t>(b)));
        word &= word - 1;
      }
    }
  }

 private:
  static std::uint64_t bit(int i) { return std::uint64_t{1} << (i % 64); }
  std::vector<std::uint64_t> words_;
};

// Maximum clique in the compatibility graph (edges where d > t), i.e. a
// maximum independent set of the conflict graph. Branch and bound with a
// greedy colouring bound over a degree-ordered vertex list.
class PackingSearch {
 public:
  PackingSearch(const FiniteMetricSpace& space, const Rational& t) : n_(space.size()) {
    std::vector<int> degree(static_cast<std::size_t>(n_), 0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (i != j && space.distance(i, j) > t) ++degree[static_cast<std::size_t>(i)];
    order_.resize(static_cast<std::size_t>(n_));
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return degree[static_cast<std::size_t>(a)] > degree[static_cast<std::size_t>(b)];
    });
    // Work in the reordered index space: vertex v is point order_[v].
    adjacency_.assign(static_cast<std::size_t>(n_), Bitset(n_));
    for (int v = 0; v < n_; ++v)
      for (int w = 0; w < n_; ++w)
        if (v != w && space.distance(order_[static_cast<std::size_t>(v)],
                                     order_[static_cast<std::size_t>(w)]) > t)
          adjacency_[static_cast<std::size_t>(v)].set(w);
  }

  std::vector<int> run() {
    greedy();
    Bitset candidates(n_);
    for (int v = 0; v < n_; ++v) candidates.set(v);
    std::vector<int> current;
    expand(current, candidates);
    std::vector<int> points;
    for (int v : best_) points.push_back(order_[static_cast<std::size_t>(v)]);
    std::sort(points.begin(), points.end());
    return points;
  }

 private:
  void greedy() {
    std::vector<int> clique;
    for (int v = 0; v < n_; ++v) {
      bool compatible = std::all_of(clique.begin(), clique.end(), [&](int w) {
        return adjacency_[static_cast<std::size_t>(v)].test(w);
      });
      if (compatible) clique.push_back(v);
    }
    best_ = clique;
  }

  void expand(std::vector<int>& current, Bitset candidates) {
    // Greedy sequential colouring of the candidates, in index order.
    std::vector<int> vertices;
    std::vector<int> colors;
    {
      Bitset uncolored = candidates;
      int color = 0;
      while (!uncolored.none()) {
        ++color;
        Bitset available = uncolored;
        while (!available.none()) {
          int v = -1;
          available.for_each([&](int u) {
            if (v < 0) v = u;
          });
          uncolored.reset(v);
          available.reset(v);
          vertices.push_back(v);
          colors.push_back(color);
          adjacency_[static_cast<std::size_t>(v)].for_each([&](int u) { available.reset(u); });
        }
      }
    }
    for (auto idx = static_cast<std::ptrdiff_t>(vertices.size()) - 1; idx >= 0; --idx) {
      const auto uidx = static_cast<std::size_t>(idx);
      if (static_cast<int>(current.size()) + colors[uidx] <= static_cast<int>(best_.size())) return;
      int v = vertices[uidx];
      current.push_back(v);
      Bitset next = candidates & adjacency_[static_cast<std::size_t>(v)];
      if (next.none()) {
        if (current.size() > best_.size()) best_ = current;
      } else {
        expand(current, next);
      }
      current.pop_back();
      candidates.reset(v);
    }
  }

  int n_;
  std::vector<int> order_;
  std::vector<Bitset> adjacency_;
  std::vector<int> best_;
};

}  // namespace

std::vector<int> maximum_packing(const FiniteMetricSpace& space, const Rational& t) {
  if (t < 0) throw InvalidInstance("packing radius must be non-negative");
  return PackingSearch(space, t).run();
}

int packing_number(const FiniteMetricSpace& space, const Rational& t) {
  return static_cast<int>(maximum_packing(space, t).size());
}

long close_pair_count(const FiniteMetricSpace& space, const Configuration& config,
                      const Rational& t) {
  long count = 0;
  const int n = config.size();
  for (int i = 0; i < n; ++i) {
    const long mi = config[i];
    if (mi == 0) continue;
    count += mi * (mi - 1);
    for (int j = 0; j < n; ++j)
      if (j != i && config[j] > 0 && space.distance(i, j) <= t) count += mi * config[j];
  }
  return count;
}

long gamma_min_pairs(const FiniteMetricSpace& space, int n, const Rational& t, int mass_cap) {
  if (n < 0) throw InvalidInstance("total mass must be non-negative");
  if (n > mass_cap)
    throw CapExceeded("gamma_min_pairs: total mass " + std::to_string(n) + " exceeds cap " +
                      std::to_string(mass_cap) + "; use lemma_bounds instead");
  const int points = space.size();
  Configuration config = Configuration::empty(points);
  long best = -1;
  // Compositions of n into `points` non-negative parts.
  auto recurse = [&](auto&& self, int index, int remaining) -> void {
    if (index == points - 1) {
      config.multiplicity[static_cast<std::size_t>(index)] = remaining;
      long value = close_pair_count(space, config, t);
      if (best < 0 || value < best) best = value;
      return;
    }
    for (int m = 0; m <= remaining; ++m) {
      config.multiplicity[static_cast<std::size_t>(index)] = m;
      self(self, index + 1, remaining - m);
    }
  };
  recurse(recurse, 0, n);
  return best;
}

LemmaBounds lemma_bounds(int n, int packing) {
  if (n < 0 || packing < 1) throw InvalidInstance("lemma_bounds needs n >= 0 and packing >= 1");
  Rational nq(n);
  Rational ratio = nq / Rational(packing);
  return {nq * (ratio - 1), nq * (ratio + 1)};
}

LemmaBounds lemma_bounds(const FiniteMetricSpace& space, int n, const Rational& t) {
  return lemma_bounds(n, packing_number(space, t));
}

Configuration spread_mass(const FiniteMetricSpace& space, int n, const Rational& t) {
  std::vector<int> net = maximum_packing(space, t);
  const int q = static_cast<int>(net.size());
  Configuration config = Configuration::empty(space.size());
  for (int k = 0; k < q; ++k)
    config.multiplicity[static_cast<std::size_t>(net[static_cast<std::size_t>(k)])] =
        n / q + (k < n % q ? 1 : 0);
  return config;
}

MassTransferResult mass_transfer_reduce(const FiniteMetricSpace& space, Configuration config,
                                        const Rational& t) {
  if (config.size() != space.size())
    throw InvalidInstance("configuration length does not match the space");
  const int n = space.size();
  auto neighbourhood = [&](int x) {
    long count = -1;
    for (int j = 0; j < n; ++j)
      if (space.distance(x, j) <= t) count += config[j];
    return count;
  };
  MassTransferResult result;
  while (true) {
    int first = -1, second = -1;
    for (int i = 0; i < n && first < 0; ++i) {
      if (config[i] == 0) continue;
      for (int j = i + 1; j < n; ++j)
        if (config[j] > 0 && space.distance(i, j) <= t) {
          first = i;
          second = j;
          break;
        }
    }
    if (first < 0) break;
    // Recipient has the smaller neighbourhood count; ties go to the smaller index.
    int recipient = first, donor = second;
    if (neighbourhood(second) < neighbourhood(first)) std::swap(recipient, donor);
    while (config[donor] > 0) {
      long before = close_pair_count(space, config, t);
      --config.multiplicity[static_cast<std::size_t>(donor)];
      ++config.multiplicity[static_cast<std::size_t>(recipient)];
      result.trace.push_back({donor, recipient, before, close_pair_count(space, config, t)});
    }
  }
  result.final = std::move(config);
  return result;
}

}  // namespace realkit
