#pragma once

#include <functional>
#include <string>
#include <vector>

namespace greencolloc {

/// A pointwise-evaluable real function on [0, 1] together with its
/// declared kink set: the sorted breakpoints where smoothness may fail
/// (derivative jumps or outright discontinuities). Quadrature routines
/// split their segments at these points. Instances are immutable and
/// cheap to copy (the callable is shared).
class EvaluableFunction {
 public:
  EvaluableFunction() = default;
  EvaluableFunction(std::function<double(double)> eval,
                    std::vector<double> kinks = {}, std::string tag = {});

  double operator()(double s) const { return eval_(s); }

  const std::vector<double>& kinks() const { return kinks_; }
  const std::string& tag() const { return tag_; }

  /// Same function with additional declared kinks (merged, sorted,
  /// deduplicated).
  EvaluableFunction with_kinks(const std::vector<double>& extra) const;

  /// Semantically identical function that caches evaluations keyed by
  /// abscissa. The cache is internally synchronized.
  EvaluableFunction memoized() const;

 private:
  std::function<double(double)> eval_;
  std::vector<double> kinks_;
  std::string tag_;
};

EvaluableFunction constant_fn(double c);

/// a*f + b*g; kink sets are merged.
EvaluableFunction linear_combination(double a, const EvaluableFunction& f,
                                     double b, const EvaluableFunction& g);

}  // namespace greencolloc
