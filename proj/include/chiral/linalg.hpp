#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "form.hpp"

namespace chiral {

template <class V>
using SparseVec = std::map<std::size_t, V>;

template <class V>
bool negligible(const V& v, double tol) {
  if constexpr (scalar_traits<V>::exact) {
    (void)tol;
    return is_zero(v);
  } else {
    return magnitude(v) <= tol;
  }
}

// Incremental row echelon form that remembers how each row was built from the inputs.
// In floating point, entries below tol times the input's largest entry count as zero and the
// largest remaining entry is the pivot.
template <class V>
class SpanSolver {
 public:
  explicit SpanSolver(double tol = 1e-10) : tol_(tol) {}

  std::size_t size() const { return inputs_; }
  std::size_t rank() const { return rows_.size(); }

  // Returns true when the vector is independent of the previous ones.
  bool add(const SparseVec<V>& v) {
    std::size_t id = inputs_++;
    double thr = threshold(v);
    auto [res, combo] = reduce(v, thr);
    combo.resize(inputs_, from_rational<V>(0));
    for (auto& c : combo) c = -c;
    combo[id] = from_rational<V>(1);
    prune(res, thr);
    if (res.empty()) return false;
    std::size_t pivot = pick_pivot(res);
    V inv = scalar_traits<V>::inverse(res.at(pivot));
    for (auto& [k, x] : res) x = x * inv;
    for (auto& c : combo) c = c * inv;
    rows_.push_back({pivot, std::move(res), std::move(combo)});
    return true;
  }

  // Coefficients c with v = sum_i c_i input_i, or nullopt if v is outside the span. `scale` raises
  // the float threshold for vectors that are rounding noise of something larger.
  std::optional<std::vector<V>> solve(const SparseVec<V>& v, double scale = 0) const {
    double thr = std::max(threshold(v), tol_ * scale);
    auto [res, combo] = reduce(v, thr);
    prune(res, thr);
    if (!res.empty()) return std::nullopt;
    combo.resize(inputs_, from_rational<V>(0));
    return combo;
  }

  double residual_norm(const SparseVec<V>& v) const {
    auto [res, combo] = reduce(v, threshold(v));
    double m = 0;
    for (const auto& [k, x] : res) m = std::max(m, magnitude(x));
    return m;
  }

 private:
  struct Row {
    std::size_t pivot;
    SparseVec<V> vec;
    std::vector<V> combo;
  };

  double threshold(const SparseVec<V>& v) const {
    if constexpr (scalar_traits<V>::exact) {
      (void)v;
      return 0;
    } else {
      double m = 1;
      for (const auto& [k, x] : v) m = std::max(m, magnitude(x));
      return tol_ * m;
    }
  }

  static std::size_t pick_pivot(const SparseVec<V>& v) {
    if constexpr (scalar_traits<V>::exact) {
      return v.begin()->first;
    } else {
      auto best = v.begin();
      for (auto it = v.begin(); it != v.end(); ++it)
        if (magnitude(it->second) > magnitude(best->second)) best = it;
      return best->first;
    }
  }

  static void prune(SparseVec<V>& v, double thr) {
    for (auto it = v.begin(); it != v.end();) {
      if (negligible(it->second, thr))
        it = v.erase(it);
      else
        ++it;
    }
  }

  std::pair<SparseVec<V>, std::vector<V>> reduce(SparseVec<V> v, double thr) const {
    std::vector<V> combo(inputs_, from_rational<V>(0));
    for (const auto& row : rows_) {
      auto it = v.find(row.pivot);
      if (it == v.end()) continue;
      V f = it->second;
      if (negligible(f, thr)) {
        v.erase(it);
        continue;
      }
      for (const auto& [k, x] : row.vec) {
        V nv = v.count(k) ? V(v[k] - f * x) : V(-(f * x));
        if (is_zero(nv))
          v.erase(k);
        else
          v[k] = nv;
      }
      v.erase(row.pivot);
      for (std::size_t i = 0; i < row.combo.size(); ++i) combo[i] = combo[i] + f * row.combo[i];
    }
    return {std::move(v), std::move(combo)};
  }

  double tol_;
  std::size_t inputs_ = 0;
  std::vector<Row> rows_;
};

// Coordinates of forms in a shared monomial basis on a common refinement of their grids.
template <class V>
class FormVectorizer {
 public:
  explicit FormVectorizer(const std::vector<const Form<V>*>& forms) {
    for (const auto* f : forms)
      for (const auto& [m, c] : f->components())
        for (int d = 0; d < 3; ++d) grid_[d].insert(grid_[d].end(), c.knots()[d].begin(), c.knots()[d].end());
    for (auto& g : grid_) {
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
    }
  }

  SparseVec<V> operator()(const Form<V>& f) {
    SparseVec<V> out;
    for (const auto& [m, c] : f.components()) {
      auto r = c.refined(grid_);
      for (std::size_t cell = 0; cell < r.cell_count(); ++cell)
        for (const auto& [key, v] : r.cell(cell)) {
          auto k = std::make_tuple(static_cast<std::uint64_t>(f.degree()), static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(cell), static_cast<std::uint64_t>(key));
          auto it = index_.find(k);
          std::size_t idx;
          if (it == index_.end()) {
            idx = index_.size();
            index_.emplace(k, idx);
          } else {
            idx = it->second;
          }
          out[idx] = v;
        }
    }
    return out;
  }

 private:
  std::array<std::vector<Rational>, 3> grid_;
  std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>, std::size_t> index_;
};

// Rank of a dense matrix given by rows.
template <class V>
std::size_t matrix_rank(const std::vector<std::vector<V>>& rows, double tol = 1e-10) {
  SpanSolver<V> s(tol);
  std::size_t r = 0;
  for (const auto& row : rows) {
    SparseVec<V> v;
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!is_zero(row[j])) v[j] = row[j];
    if (s.add(v)) ++r;
  }
  return r;
}

}  // namespace chiral
