#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hpr/mesh.hpp"
#include "hpr/polybasis.hpp"
#include "hpr/problem.hpp"

namespace hpr {

/// Square banded matrix in LAPACK general band storage (column-major,
/// ldab = 2*kl + ku + 1; the extra kl rows hold factorization fill-in).
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(int n, int kl, int ku);

  int size() const { return n_; }
  int lower_bandwidth() const { return kl_; }
  int upper_bandwidth() const { return ku_; }

  double at(int i, int j) const;
  void add(int i, int j, double value);

  /// y = A x.
  std::vector<double> apply(const std::vector<double>& x) const;

  double one_norm() const;
  /// max_ij |A_ij - A_ji|.
  double asymmetry() const;

  double* storage() { return data_.data(); }
  const double* storage() const { return data_.data(); }
  int ldab() const { return 2 * kl_ + ku_ + 1; }

 private:
  bool in_band(int i, int j) const {
    return i >= 0 && j >= 0 && i < n_ && j < n_ && i - j <= kl_ && j - i <= ku_;
  }

  int n_ = 0, kl_ = 0, ku_ = 0;
  std::vector<double> data_;
};

/// Element-local to global DOF numbering. Local basis order follows
/// shape_functions: 0 = left vertex, 1 = right vertex, 2..p = bubbles.
/// Vertex DOFs at the two domain endpoints are eliminated (index -1).
struct DofMap {
  std::vector<int> vertex_dof;     // size N+1; -1 at the boundary
  std::vector<int> bubble_offset;  // size N; first bubble DOF of element j
  int total = 0;

  int operator()(int element, int local) const {
    if (local == 0) return vertex_dof[element];
    if (local == 1) return vertex_dof[element + 1];
    return bubble_offset[element] + (local - 2);
  }
};

DofMap build_dof_map(const HpMesh& mesh);

struct ElementSystem {
  std::vector<std::vector<double>> matrix;  // (p+1) x (p+1)
  std::vector<double> load;                 // p+1
  double min_d_sample = 0.0;
};

/// Local matrix eps*int N_i' N_k' + int d N_i N_k and load int f N_i over
/// the element (x_left, x_right), via the given reference rule.
ElementSystem element_system(double x_left, double x_right, int degree,
                             const ProblemSpec& problem,
                             const QuadratureRule& quad);

struct GlobalSystem {
  BandMatrix matrix;
  std::vector<double> rhs;
  DofMap dofs;
  bool spd_hint = false;  // d sampled nonnegative at all quadrature points
};

/// Assemble the discrete variational problem over the mesh; Dirichlet rows
/// and columns never enter the system. Quadrature: p_j + 10 points.
GlobalSystem assemble(const HpMesh& mesh, const ProblemSpec& problem);

enum class FactorizationKind { Cholesky, PivotedLU };

/// Piecewise-polynomial solution: per-element Legendre coefficients of
/// u_hp restricted to the element, in reference coordinates.
struct HpSolution {
  HpMesh mesh;
  std::vector<LegendreCoeffs> element_coeffs;

  // solve diagnostics
  double rcond = 1.0;
  double algebraic_residual = 0.0;
  FactorizationKind factorization = FactorizationKind::Cholesky;

  int find_element(double x) const;
  double value_local(int element, double xi) const;
  /// du/dx at reference coordinate xi (chain rule 2/h applied).
  double deriv_local(int element, double xi) const;
  double operator()(double x) const;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& message, double rcond_estimate)
      : std::runtime_error(message), rcond(rcond_estimate) {}

  double rcond;
  int iteration = -1;  // attached by the adaptive loop
};

/// Direct banded solve: Cholesky when d was sampled nonnegative, pivoted LU
/// otherwise. Throws SolverError (with a condition estimate) on singular or
/// near-singular systems; checks the algebraic residual against 1e-10.
HpSolution solve_system(const GlobalSystem& system, const HpMesh& mesh);

/// Convenience: assemble + solve.
HpSolution solve(const HpMesh& mesh, const ProblemSpec& problem);

}  // namespace hpr
