#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "form.hpp"

namespace chiral {

struct CheckRecord {
  std::string identity;
  std::size_t sample = 0;
  double residual = 0;
  bool pass = true;
  std::string detail;
  std::string value;  // computed quantity, when the check compares one against a closed form
};

// Per-identity residual records for a batch of samples.
struct Report {
  std::vector<CheckRecord> records;

  void add(CheckRecord r) { records.push_back(std::move(r)); }
  void add(const std::string& identity, std::size_t sample, double residual, bool pass, std::string detail = {}) {
    records.push_back({identity, sample, residual, pass, std::move(detail), {}});
  }
  void merge(const Report& o) { records.insert(records.end(), o.records.begin(), o.records.end()); }

  bool pass() const {
    return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
  }
  double max_residual() const {
    double m = 0;
    for (const auto& r : records) m = std::max(m, r.residual);
    return m;
  }
  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const CheckRecord& r) { return !r.pass; }));
  }
};

// Residual of a form that should vanish: exact backends require literal zero. Float residuals are
// divided by the coefficient scale of the inputs (at least 1).
template <class V>
CheckRecord zero_check(const std::string& identity, std::size_t sample, const Form<V>& residual, double tol, double scale = 1) {
  double r = residual.max_abs();
  if (!scalar_traits<V>::exact) r /= std::max(1.0, scale);
  bool ok = scalar_traits<V>::exact ? residual.is_zero() : r <= tol;
  return {identity, sample, r, ok, {}, {}};
}

template <class V>
CheckRecord scalar_check(const std::string& identity, std::size_t sample, const V& residual, double tol, double scale = 1) {
  double r = magnitude(residual);
  if (!scalar_traits<V>::exact) r /= std::max(1.0, scale);
  bool ok = scalar_traits<V>::exact ? is_zero(residual) : r <= tol;
  return {identity, sample, r, ok, {}, {}};
}

}  // namespace chiral
