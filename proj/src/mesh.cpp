#include "greencolloc/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace greencolloc {

UniformMesh make_mesh(int n) {
  if (n < 1) throw std::invalid_argument("make_mesh: n must be positive");
  UniformMesh mesh;
  mesh.n = n;
  mesh.h = 1.0 / n;
  mesh.breakpoints.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    mesh.breakpoints[j] = static_cast<double>(j) / n;
  }
  return mesh;
}

CollocationGrid::CollocationGrid(UniformMesh mesh, int r,
                                 std::optional<std::vector<double>> offsets)
    : mesh_(std::move(mesh)), r_(r) {
  if (r_ < 0) throw std::invalid_argument("CollocationGrid: r must be >= 0");
  const int m = 2 * r_ + 1;
  if (offsets) {
    offsets_ = std::move(*offsets);
  } else if (r_ == 0) {
    offsets_ = {0.5};
  } else {
    offsets_.resize(m);
    for (int k = 0; k < m; ++k) {
      offsets_[k] = static_cast<double>(k) / (2 * r_);
    }
  }
  if (static_cast<int>(offsets_.size()) != m) {
    throw std::invalid_argument(
        "CollocationGrid: expected " + std::to_string(m) + " offsets, got " +
        std::to_string(offsets_.size()));
  }
  for (int k = 0; k < m; ++k) {
    if (offsets_[k] < 0.0 || offsets_[k] > 1.0) {
      throw std::invalid_argument("CollocationGrid: offset out of [0, 1]");
    }
    if (k > 0 && offsets_[k] <= offsets_[k - 1]) {
      throw std::invalid_argument(
          "CollocationGrid: offsets must be strictly increasing");
    }
  }
  nodes_.resize(static_cast<std::size_t>(mesh_.n) * m);
  for (int j = 0; j < mesh_.n; ++j) {
    for (int k = 0; k < m; ++k) {
      nodes_[static_cast<std::size_t>(j) * m + k] =
          mesh_.breakpoints[j] + mesh_.h * offsets_[k];
    }
  }
}

int CollocationGrid::cell_of(double t) const {
  int j = static_cast<int>(std::ceil(t * mesh_.n)) - 1;
  if (j < 0) j = 0;
  if (j >= mesh_.n) j = mesh_.n - 1;
  return j;
}

double pp_eval(const PiecewisePolynomial& p, double t) {
  if (t < 0.0 || t > 1.0) {
    throw std::invalid_argument("pp_eval: t outside [0, 1]");
  }
  const CollocationGrid& grid = p.grid;
  const int j = grid.cell_of(t);
  const int m = grid.nodes_per_cell();
  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    double basis = 1.0;
    const double xk = grid.node(j, k);
    for (int l = 0; l < m; ++l) {
      if (l == k) continue;
      const double xl = grid.node(j, l);
      basis *= (t - xl) / (xk - xl);
    }
    total += p.value_at(j, k) * basis;
  }
  return total;
}

double divided_difference(const std::vector<ConfluentPoint>& points) {
  const int m = static_cast<int>(points.size());
  if (m == 0) throw std::invalid_argument("divided_difference: no points");
  // Repeated abscissae must be adjacent and of multiplicity <= 2.
  for (int i = 0; i < m; ++i) {
    for (int k = i + 2; k < m; ++k) {
      if (points[i].x == points[k].x) {
        throw std::invalid_argument(
            "divided_difference: repeated points must be adjacent with "
            "multiplicity at most 2");
      }
    }
  }
  std::vector<double> table(m);
  for (int i = 0; i < m; ++i) table[i] = points[i].value;
  for (int level = 1; level < m; ++level) {
    for (int i = 0; i + level < m; ++i) {
      const double dx = points[i + level].x - points[i].x;
      if (dx == 0.0) {
        // Only reachable at level 1 after the multiplicity check.
        if (!points[i + 1].derivative && !points[i].derivative) {
          throw std::invalid_argument(
              "divided_difference: repeated point lacks derivative data");
        }
        table[i] = points[i + 1].derivative ? *points[i + 1].derivative
                                            : *points[i].derivative;
      } else {
        table[i] = (table[i + 1] - table[i]) / dx;
      }
    }
  }
  return table[0];
}

}  // namespace greencolloc
