#include "pcurl/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pcurl/util.hpp"

namespace pcurl {

namespace {

void validate_item(double value, double weight) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw std::invalid_argument(
        "MeasuredSample: values must be nonnegative (pass magnitudes)");
  if (!(weight > 0.0) || !std::isfinite(weight))
    throw std::invalid_argument("MeasuredSample: weights must be positive");
}

// Descending by value; stable so tied values keep insertion order and the
// tie-merged rearrangement accumulates weights in the same order as a
// sorted traversal of the raw sample.
std::vector<MeasuredSample::Item> sorted_desc(const MeasuredSample& s) {
  std::vector<MeasuredSample::Item> v = s.items;
  std::stable_sort(v.begin(), v.end(),
                   [](const MeasuredSample::Item& a,
                      const MeasuredSample::Item& b) { return a.value > b.value; });
  return v;
}

void check_m(double m) {
  if (!(m >= 1.0) || !std::isfinite(m))
    throw std::invalid_argument(
        "lorentz_norm: first index m must satisfy 1 <= m < infinity");
}

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("lorentz norm exponent p must satisfy 1 <= p < infinity");
}

}  // namespace

MeasuredSample::MeasuredSample(std::vector<Item> it) : items(std::move(it)) {
  for (const Item& x : items) validate_item(x.value, x.weight);
}

void MeasuredSample::push(double value, double weight) {
  validate_item(value, weight);
  items.push_back({value, weight});
}

double MeasuredSample::total_measure() const {
  KahanSum s;
  for (const Item& x : items) s.add(x.weight);
  return s.value();
}

double distribution_function(const MeasuredSample& s, double level) {
  if (!(level >= 0.0))
    throw std::invalid_argument("distribution_function: level must be >= 0");
  std::vector<MeasuredSample::Item> v = sorted_desc(s);
  KahanSum acc;
  for (const MeasuredSample::Item& x : v) {
    if (!(x.value > level)) break;
    acc.add(x.weight);
  }
  return acc.value();
}

std::vector<RearrangementStep> rearrangement(const MeasuredSample& s) {
  if (s.empty())
    throw std::invalid_argument("rearrangement: sample must be nonempty");
  std::vector<MeasuredSample::Item> v = sorted_desc(s);
  std::vector<RearrangementStep> steps;
  KahanSum t;
  std::size_t i = 0;
  while (i < v.size()) {
    const double value = v[i].value;
    while (i < v.size() && v[i].value == value) {
      t.add(v[i].weight);
      ++i;
    }
    steps.push_back({value, t.value()});
  }
  return steps;
}

double evaluate_rearrangement(const std::vector<RearrangementStep>& steps,
                              double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("evaluate_rearrangement: t < 0");
  for (const RearrangementStep& st : steps)
    if (t < st.t_end) return st.value;
  return 0.0;
}

double lorentz_norm(const MeasuredSample& s, double m, double p) {
  check_m(m);
  check_p(p);
  std::vector<RearrangementStep> steps = rearrangement(s);
  // integral = sum_i v_i^p * (m/p) * (t_i^{p/m} - t_{i-1}^{p/m})
  const double e = p / m;
  KahanSum acc;
  double tp_prev = 0.0;
  for (const RearrangementStep& st : steps) {
    const double tp = std::pow(st.t_end, e);
    if (st.value > 0.0)
      acc.add(std::pow(st.value, p) * (m / p) * (tp - tp_prev));
    tp_prev = tp;
  }
  return std::pow(acc.value(), 1.0 / p);
}

double lorentz_norm_inf(const MeasuredSample& s, double m) {
  check_m(m);
  std::vector<RearrangementStep> steps = rearrangement(s);
  double best = 0.0;
  for (const RearrangementStep& st : steps)
    best = std::max(best, std::pow(st.t_end, 1.0 / m) * st.value);
  return best;
}

double lp_norm(const MeasuredSample& s, double p) {
  check_p(p);
  KahanSum acc;
  for (const MeasuredSample::Item& x : s.items)
    acc.add(std::pow(x.value, p) * x.weight);
  return std::pow(acc.value(), 1.0 / p);
}

double lp_norm_inf(const MeasuredSample& s) {
  double m = 0.0;
  for (const MeasuredSample::Item& x : s.items) m = std::max(m, x.value);
  return m;
}

}  // namespace pcurl
