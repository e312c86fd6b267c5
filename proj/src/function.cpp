#include "greencolloc/function.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>

namespace greencolloc {

namespace {

std::vector<double> merge_kinks(std::vector<double> a,
                                const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

EvaluableFunction::EvaluableFunction(std::function<double(double)> eval,
                                     std::vector<double> kinks,
                                     std::string tag)
    : eval_(std::move(eval)), kinks_(std::move(kinks)), tag_(std::move(tag)) {
  std::sort(kinks_.begin(), kinks_.end());
  kinks_.erase(std::unique(kinks_.begin(), kinks_.end()), kinks_.end());
}

EvaluableFunction EvaluableFunction::with_kinks(
    const std::vector<double>& extra) const {
  return EvaluableFunction(eval_, merge_kinks(kinks_, extra), tag_);
}

EvaluableFunction EvaluableFunction::memoized() const {
  struct Cache {
    std::mutex mutex;
    std::unordered_map<double, double> values;
  };
  auto cache = std::make_shared<Cache>();
  auto inner = eval_;
  auto fn = [cache, inner](double s) {
    {
      std::lock_guard<std::mutex> lock(cache->mutex);
      auto it = cache->values.find(s);
      if (it != cache->values.end()) return it->second;
    }
    const double v = inner(s);
    std::lock_guard<std::mutex> lock(cache->mutex);
    cache->values.emplace(s, v);
    return v;
  };
  return EvaluableFunction(fn, kinks_, tag_);
}

EvaluableFunction constant_fn(double c) {
  return EvaluableFunction([c](double) { return c; }, {}, "const");
}

EvaluableFunction linear_combination(double a, const EvaluableFunction& f,
                                     double b, const EvaluableFunction& g) {
  auto fn = [a, f, b, g](double s) { return a * f(s) + b * g(s); };
  return EvaluableFunction(fn, merge_kinks(f.kinks(), g.kinks()),
                           "lincomb");
}

}  // namespace greencolloc
