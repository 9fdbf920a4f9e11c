#ifndef PCURL_LORENTZ_HPP
#define PCURL_LORENTZ_HPP

#include <cstddef>
#include <vector>

namespace pcurl {

// A nonnegative simple function on a finite measure space: (value, weight)
// pairs, weight = measure of the set where the function takes that value.
// Negative values are rejected up front -- callers pass magnitudes.
struct MeasuredSample {
  struct Item {
    double value;
    double weight;
  };
  std::vector<Item> items;

  MeasuredSample() = default;
  explicit MeasuredSample(std::vector<Item> it);

  void push(double value, double weight);
  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  double total_measure() const;
};

// mu({ f > level }).  Computed over a canonically sorted copy so that a
// sample and its rearrangement produce bitwise-identical answers.
double distribution_function(const MeasuredSample& s, double level);

// The non-increasing rearrangement f* as a right-continuous step function:
// value steps[i].value on [ steps[i-1].t_end, steps[i].t_end ).  Ties in
// value are merged.  Errors on an empty sample.
struct RearrangementStep {
  double value;
  double t_end;  // cumulative measure up to and including this step
};
std::vector<RearrangementStep> rearrangement(const MeasuredSample& s);

// Evaluate f*(t) for t in [0, total measure); zero beyond.
double evaluate_rearrangement(const std::vector<RearrangementStep>& steps,
                              double t);

// Lorentz quasi-norm L(m, p), 1 <= m < infinity, 1 <= p < infinity:
//   ( integral_0^inf ( t^{1/m} f*(t) )^p dt/t )^{1/p}
// evaluated in closed form on the rearrangement's step structure.
double lorentz_norm(const MeasuredSample& s, double m, double p);

// Weak norm L(m, infinity) = sup_t t^{1/m} f*(t); the sup is attained at a
// right endpoint of a rearrangement step.
double lorentz_norm_inf(const MeasuredSample& s, double m);

// Plain Lebesgue norm on the same measure data; p may be infinity
// (use lp_norm_inf) for the essential sup.
double lp_norm(const MeasuredSample& s, double p);
double lp_norm_inf(const MeasuredSample& s);

}  // namespace pcurl

#endif
