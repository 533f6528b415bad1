#pragma once

#include <string>
#include <vector>

namespace hpr {

/// Partition of an interval into N elements with a per-element polynomial
/// degree. Elements are indexed 0..N-1 left to right; element j spans
/// (breakpoints[j], breakpoints[j+1]). Immutable by convention: refinement
/// produces a new mesh.
struct HpMesh {
  std::vector<double> breakpoints;  // size N+1, strictly increasing
  std::vector<int> degrees;         // size N, all >= 1

  int num_elements() const { return static_cast<int>(degrees.size()); }
  double x_left(int j) const { return breakpoints[j]; }
  double x_right(int j) const { return breakpoints[j + 1]; }
  double length(int j) const { return breakpoints[j + 1] - breakpoints[j]; }
  int max_degree() const;

  bool operator==(const HpMesh&) const = default;
};

enum class RefinementKind { Bisect, RaiseDegree };

struct RefinementDecision {
  int element;
  RefinementKind kind;
};

/// Equispaced mesh of n_elements on (a,b), constant degree.
HpMesh uniform_mesh(double a, double b, int n_elements, int degree);

/// Element indices of the patch of element j: {j-1, j, j+1} clipped to range.
std::vector<int> patch(const HpMesh& mesh, int j);

/// Smallest mu >= 1 with mu^-1 h_{j+1} <= h_j <= mu h_{j+1} and the same
/// for degrees, over all neighbor pairs.
double shape_regularity(const HpMesh& mesh);

/// Apply bisections (midpoint split, degree inherited by both children) and
/// degree raises; at most one decision per element. Output elements are
/// renumbered left to right.
HpMesh apply_refinements(const HpMesh& mesh,
                         const std::vector<RefinementDecision>& decisions);

/// Snapshot serialization: one CSV record (x_left, x_right, degree) per
/// element, the plot data for hp-mesh figures.
void write_mesh_csv(const HpMesh& mesh, const std::string& path);

}  // namespace hpr
