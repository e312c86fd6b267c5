#include "greencolloc/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "greencolloc/quadrature.hpp"

namespace greencolloc {

double apply_K(const GreensKernel& kernel, const EvaluableFunction& x,
               double s, int q) {
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("apply_K: s outside [0, 1]");
  const auto& k1 = kernel.kappa1;
  const auto& k2 = kernel.kappa2;
  double lower = 0.0;
  if (s > 0.0) {
    lower = integrate_split([&](double t) { return k1(s, t) * x(t); }, 0.0, s,
                            x.kinks(), q);
  }
  double upper = 0.0;
  if (s < 1.0) {
    upper = integrate_split([&](double t) { return k2(s, t) * x(t); }, s, 1.0,
                            x.kinks(), q);
  }
  return lower + upper;
}

double apply_K_ds(const GreensKernel& kernel, const EvaluableFunction& x,
                  double s, int q) {
  if (!kernel.has_derivatives()) {
    throw std::invalid_argument(
        "apply_K_ds: kernel '" + kernel.name +
        "' provides no partial-derivative evaluators");
  }
  const auto& d1 = kernel.d10_kappa1;
  const auto& d2 = kernel.d10_kappa2;
  double lower = 0.0;
  if (s > 0.0) {
    lower = integrate_split([&](double t) { return d1(s, t) * x(t); }, 0.0, s,
                            x.kinks(), q);
  }
  double upper = 0.0;
  if (s < 1.0) {
    upper = integrate_split([&](double t) { return d2(s, t) * x(t); }, s, 1.0,
                            x.kinks(), q);
  }
  return lower + upper;
}

EvaluableFunction apply_K_fn(const GreensKernel& kernel,
                             const EvaluableFunction& x, int q) {
  auto fn = [kernel, x, q](double s) { return apply_K(kernel, x, s, q); };
  return EvaluableFunction(fn, {}, "K[" + x.tag() + "]").memoized();
}

namespace {

constexpr double kFdStep = 1e-5;

// D^(j,0) of a kernel piece in s, analytic first derivative when
// available, centered finite differences otherwise.
double partial_s(const KernelPiece& piece, const KernelPiece& d10, int order,
                 double s, double t) {
  switch (order) {
    case 0:
      return piece(s, t);
    case 1:
      if (d10) return d10(s, t);
      return (piece(s + kFdStep, t) - piece(s - kFdStep, t)) / (2.0 * kFdStep);
    case 2:
      if (d10) {
        return (d10(s + kFdStep, t) - d10(s - kFdStep, t)) / (2.0 * kFdStep);
      }
      return (piece(s + kFdStep, t) - 2.0 * piece(s, t) +
              piece(s - kFdStep, t)) /
             (kFdStep * kFdStep);
    default:
      throw std::invalid_argument("partial_s: order > 2");
  }
}

double partial_st(const KernelPiece& piece, const KernelPiece& d10, int js,
                  int kt, double s, double t) {
  if (kt == 0) return partial_s(piece, d10, js, s, t);
  if (kt == 1) {
    return (partial_s(piece, d10, js, s, t + kFdStep) -
            partial_s(piece, d10, js, s, t - kFdStep)) /
           (2.0 * kFdStep);
  }
  return (partial_s(piece, d10, js, s, t + kFdStep) -
          2.0 * partial_s(piece, d10, js, s, t) +
          partial_s(piece, d10, js, s, t - kFdStep)) /
         (kFdStep * kFdStep);
}

}  // namespace

SmoothnessBounds sample_bounds(const GreensKernel& kernel,
                               const UniformMesh& mesh, int density) {
  if (density < 2) throw std::invalid_argument("sample_bounds: density < 2");
  SmoothnessBounds bounds;
  // C1 over the full triangles.
  for (int piece = 0; piece < 2; ++piece) {
    const auto& k = piece == 0 ? kernel.kappa1 : kernel.kappa2;
    const auto& d = piece == 0 ? kernel.d10_kappa1 : kernel.d10_kappa2;
    for (int i = 0; i < density; ++i) {
      for (int l = 0; l < density; ++l) {
        const double a = static_cast<double>(i) / (density - 1);
        const double b = static_cast<double>(l) / (density - 1);
        // Omega_1: t <= s; Omega_2: s <= t.
        const double s = piece == 0 ? std::max(a, b) : std::min(a, b);
        const double t = piece == 0 ? std::min(a, b) : std::max(a, b);
        for (int js = 0; js <= 2; ++js) {
          for (int kt = 0; kt <= 2; ++kt) {
            bounds.C1 = std::max(bounds.C1,
                                 std::abs(partial_st(k, d, js, kt, s, t)));
          }
        }
      }
    }
  }
  // M1, M2 over the diagonal subinterval blocks.
  for (int cell = 0; cell < mesh.n; ++cell) {
    const double lo = mesh.breakpoints[cell];
    const double hi = mesh.breakpoints[cell + 1];
    for (int i = 0; i < density; ++i) {
      for (int l = 0; l < density; ++l) {
        const double a = lo + (hi - lo) * i / (density - 1);
        const double b = lo + (hi - lo) * l / (density - 1);
        const double s1 = std::max(a, b), t1 = std::min(a, b);  // t <= s
        const double s2 = std::min(a, b), t2 = std::max(a, b);  // s <= t
        bounds.M1 = std::max(
            {bounds.M1,
             std::abs(partial_s(kernel.kappa1, kernel.d10_kappa1, 1, s1, t1)),
             std::abs(partial_s(kernel.kappa2, kernel.d10_kappa2, 1, s2, t2))});
        bounds.M2 = std::max(
            {bounds.M2,
             std::abs(partial_s(kernel.kappa1, kernel.d10_kappa1, 2, s1, t1)),
             std::abs(partial_s(kernel.kappa2, kernel.d10_kappa2, 2, s2, t2))});
      }
    }
  }
  return bounds;
}

const std::vector<GreensKernel>& builtin_kernels() {
  static const std::vector<GreensKernel> catalog = [] {
    std::vector<GreensKernel> ks;
    // Green's function of -u'' = g, u(0) = u(1) = 0.
    ks.push_back(GreensKernel{
        "bvp_green", 4,
        [](double s, double t) { return t * (1.0 - s); },
        [](double s, double t) { return s * (1.0 - t); },
        [](double, double t) { return -t; },
        [](double, double t) { return 1.0 - t; }});
    // Smooth rank-one kernel kappa(s, t) = s.
    ks.push_back(GreensKernel{
        "rank_one", 8,
        [](double s, double) { return s; },
        [](double s, double) { return s; },
        [](double, double) { return 1.0; },
        [](double, double) { return 1.0; }});
    // exp(-|s - t|): diagonal-continuous with a derivative jump.
    ks.push_back(GreensKernel{
        "abs_exp", 8,
        [](double s, double t) { return std::exp(t - s); },
        [](double s, double t) { return std::exp(s - t); },
        [](double s, double t) { return -std::exp(t - s); },
        [](double s, double t) { return std::exp(s - t); }});
    ks.push_back(GreensKernel{
        "zero", 8,
        [](double, double) { return 0.0; },
        [](double, double) { return 0.0; },
        [](double, double) { return 0.0; },
        [](double, double) { return 0.0; }});
    return ks;
  }();
  return catalog;
}

const GreensKernel& kernel_by_name(const std::string& name) {
  for (const auto& k : builtin_kernels()) {
    if (k.name == name) return k;
  }
  throw std::invalid_argument("unknown kernel '" + name + "'");
}

GreensKernel counted_kernel(const GreensKernel& kernel,
                            std::shared_ptr<long> counter) {
  GreensKernel wrapped = kernel;
  auto wrap = [counter](KernelPiece piece) -> KernelPiece {
    if (!piece) return piece;
    return [counter, piece](double s, double t) {
      ++*counter;
      return piece(s, t);
    };
  };
  wrapped.kappa1 = wrap(kernel.kappa1);
  wrapped.kappa2 = wrap(kernel.kappa2);
  wrapped.d10_kappa1 = wrap(kernel.d10_kappa1);
  wrapped.d10_kappa2 = wrap(kernel.d10_kappa2);
  return wrapped;
}

}  // namespace greencolloc
