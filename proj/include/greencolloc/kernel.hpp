#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "greencolloc/function.hpp"
#include "greencolloc/mesh.hpp"

namespace greencolloc {

using KernelPiece = std::function<double(double, double)>;

/// Green's-function-type kernel: two smooth pieces kappa1 on
/// {0 <= t <= s <= 1} and kappa2 on {0 <= s <= t <= 1} that agree on
/// the diagonal. Partial s-derivative evaluators are optional; when
/// absent, centered finite differences (step 1e-5) stand in.
struct GreensKernel {
  std::string name;
  int alpha = 2;  // declared smoothness order of each piece
  KernelPiece kappa1;
  KernelPiece kappa2;
  KernelPiece d10_kappa1;  // may be empty
  KernelPiece d10_kappa2;

  bool has_derivatives() const {
    return static_cast<bool>(d10_kappa1) && static_cast<bool>(d10_kappa2);
  }
};

/// Sampled surrogates for the kernel smoothness constants; lower bounds
/// of the true suprema.
struct SmoothnessBounds {
  double C1 = 0.0;  // max over partials of order <= 2 in each variable
  double M1 = 0.0;  // per-subinterval max of |D^(1,0) kappa_i|
  double M2 = 0.0;  // per-subinterval max of |D^(2,0) kappa_i|
};

struct FredholmProblem {
  GreensKernel kernel;
  EvaluableFunction f;
  std::optional<EvaluableFunction> exact_solution;
};

/// (Kx)(s): the two smooth pieces are integrated separately so the
/// diagonal derivative jump never crosses a quadrature segment; x's
/// declared kinks split the segments further.
double apply_K(const GreensKernel& kernel, const EvaluableFunction& x,
               double s, int q = 20);

/// (Kx)'(s) by the Leibnitz rule; the kappa1(s,s) = kappa2(s,s)
/// boundary terms cancel. Requires derivative evaluators.
double apply_K_ds(const GreensKernel& kernel, const EvaluableFunction& x,
                  double s, int q = 20);

/// Kx as an EvaluableFunction. The image of K is C^1, so no kinks are
/// declared. The result is memoized.
EvaluableFunction apply_K_fn(const GreensKernel& kernel,
                             const EvaluableFunction& x, int q = 20);

/// Maxima of kernel partials over a density x density grid per
/// triangle (C1) and per diagonal subinterval block (M1, M2).
SmoothnessBounds sample_bounds(const GreensKernel& kernel,
                               const UniformMesh& mesh, int density);

/// Built-in kernel catalog: bvp_green, rank_one, abs_exp, zero.
const std::vector<GreensKernel>& builtin_kernels();
const GreensKernel& kernel_by_name(const std::string& name);

/// Copy of `kernel` whose piece evaluations bump `counter`; used for
/// assembly statistics.
GreensKernel counted_kernel(const GreensKernel& kernel,
                            std::shared_ptr<long> counter);

}  // namespace greencolloc
