#pragma once

#include <optional>
#include <vector>

namespace greencolloc {

/// Uniform partition 0 = t_0 < t_1 < ... < t_n = 1 with t_j = j/n.
struct UniformMesh {
  int n = 0;
  double h = 0.0;
  std::vector<double> breakpoints;
};

UniformMesh make_mesh(int n);

/// Collocation node layout on a uniform mesh: 2r+1 relative offsets
/// zeta_0 < ... < zeta_{2r} in [0, 1], replicated into every
/// subinterval as tau_j^k = t_{j-1} + h * zeta_k.
///
/// Defaults: zeta_k = k / (2r) for r >= 1 (equidistant including both
/// endpoints). For r = 0 the formula degenerates; the default is the
/// subinterval midpoint, which is the only single-node layout whose
/// nodal polynomial has vanishing mean. Other layouts (left endpoint,
/// the offset 1/3 used by the non-superconvergence example) are
/// available through explicit offsets.
class CollocationGrid {
 public:
  CollocationGrid(UniformMesh mesh, int r,
                  std::optional<std::vector<double>> offsets = std::nullopt);

  const UniformMesh& mesh() const { return mesh_; }
  int r() const { return r_; }
  int nodes_per_cell() const { return 2 * r_ + 1; }
  int cell_count() const { return mesh_.n; }
  int dimension() const { return mesh_.n * nodes_per_cell(); }
  const std::vector<double>& offsets() const { return offsets_; }

  /// Node tau_j^k, 0-based: j in [0, n), k in [0, 2r].
  double node(int j, int k) const {
    return nodes_[static_cast<std::size_t>(j) * nodes_per_cell() + k];
  }
  const std::vector<double>& nodes() const { return nodes_; }

  int flatten(int j, int k) const { return j * nodes_per_cell() + k; }

  /// Subinterval index containing t, with the left-limit convention at
  /// interior breakpoints: t in (t_j, t_{j+1}] maps to j, and t = 0
  /// maps to 0.
  int cell_of(double t) const;

 private:
  UniformMesh mesh_;
  int r_;
  std::vector<double> offsets_;
  std::vector<double> nodes_;
};

/// Element of X_n in local Lagrange representation: values(j, k) is the
/// value at node tau_j^k, and the restriction to each subinterval is
/// the unique degree <= 2r interpolant of its nodal values.
struct PiecewisePolynomial {
  CollocationGrid grid;
  std::vector<double> values;  // flattened (j, k), row-major

  double value_at(int j, int k) const {
    return values[static_cast<std::size_t>(grid.flatten(j, k))];
  }
};

/// Local Lagrange evaluation. At interior breakpoints the left
/// subinterval's polynomial is used. Throws for t outside [0, 1].
double pp_eval(const PiecewisePolynomial& p, double t);

/// One interpolation datum for a (possibly confluent) divided
/// difference: an abscissa, the function value there, and, when the
/// abscissa repeats, the first derivative.
struct ConfluentPoint {
  double x;
  double value;
  std::optional<double> derivative;
};

/// Leading Newton coefficient over the given point multiset. Repeated
/// points must be adjacent and carry derivative data; multiplicity is
/// limited to 2.
double divided_difference(const std::vector<ConfluentPoint>& points);

}  // namespace greencolloc
