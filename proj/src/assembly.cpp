#include "hpr/assembly.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hpr {

BandMatrix::BandMatrix(int n, int kl, int ku) : n_(n), kl_(kl), ku_(ku) {
  data_.assign(static_cast<std::size_t>(ldab()) * n, 0.0);
}

double BandMatrix::at(int i, int j) const {
  if (!in_band(i, j)) return 0.0;
  return data_[static_cast<std::size_t>(j) * ldab() + (kl_ + ku_ + i - j)];
}

void BandMatrix::add(int i, int j, double value) {
  if (!in_band(i, j)) throw std::logic_error("BandMatrix::add outside band");
  data_[static_cast<std::size_t>(j) * ldab() + (kl_ + ku_ + i - j)] += value;
}

std::vector<double> BandMatrix::apply(const std::vector<double>& x) const {
  std::vector<double> y(n_, 0.0);
  for (int j = 0; j < n_; ++j) {
    const int ilo = std::max(0, j - ku_);
    const int ihi = std::min(n_ - 1, j + kl_);
    for (int i = ilo; i <= ihi; ++i) y[i] += at(i, j) * x[j];
  }
  return y;
}

double BandMatrix::one_norm() const {
  double norm = 0.0;
  for (int j = 0; j < n_; ++j) {
    double col = 0.0;
    const int ilo = std::max(0, j - ku_);
    const int ihi = std::min(n_ - 1, j + kl_);
    for (int i = ilo; i <= ihi; ++i) col += std::abs(at(i, j));
    norm = std::max(norm, col);
  }
  return norm;
}

double BandMatrix::asymmetry() const {
  double worst = 0.0;
  for (int j = 0; j < n_; ++j) {
    const int ihi = std::min(n_ - 1, j + std::max(kl_, ku_));
    for (int i = j; i <= ihi; ++i)
      worst = std::max(worst, std::abs(at(i, j) - at(j, i)));
  }
  return worst;
}

DofMap build_dof_map(const HpMesh& mesh) {
  const int n_elems = mesh.num_elements();
  DofMap map;
  map.vertex_dof.assign(n_elems + 1, -1);
  map.bubble_offset.assign(n_elems, 0);

  // Interleaved ordering: bubbles of element 0, vertex 1, bubbles of
  // element 1, vertex 2, ... keeps the bandwidth at max_j p_j.
  int next = 0;
  for (int j = 0; j < n_elems; ++j) {
    map.bubble_offset[j] = next;
    next += mesh.degrees[j] - 1;
    if (j + 1 < n_elems) map.vertex_dof[j + 1] = next++;
  }
  map.total = next;
  return map;
}

ElementSystem element_system(double x_left, double x_right, int degree,
                             const ProblemSpec& problem,
                             const QuadratureRule& quad) {
  if (quad.size() < degree + 1)
    throw std::invalid_argument("element_system: quadrature rule too short");
  const int n_basis = degree + 1;
  const double h = x_right - x_left;
  const double mid = 0.5 * (x_left + x_right);

  ElementSystem sys;
  sys.matrix.assign(n_basis, std::vector<double>(n_basis, 0.0));
  sys.load.assign(n_basis, 0.0);
  sys.min_d_sample = std::numeric_limits<double>::infinity();

  for (int q = 0; q < quad.size(); ++q) {
    const double xi = quad.nodes[q];
    const double w = quad.weights[q];
    const double x = mid + 0.5 * h * xi;
    const auto shapes = shape_functions(degree, xi);
    const double dval = problem.d(x);
    const double fval = problem.f(x);
    sys.min_d_sample = std::min(sys.min_d_sample, dval);

    const double w_stiff = problem.epsilon * (2.0 / h) * w;
    const double w_mass = 0.5 * h * w * dval;
    const double w_load = 0.5 * h * w * fval;
    for (int i = 0; i < n_basis; ++i) {
      sys.load[i] += w_load * shapes.value[i];
      for (int k = i; k < n_basis; ++k) {
        const double a = w_stiff * shapes.deriv[i] * shapes.deriv[k] +
                         w_mass * shapes.value[i] * shapes.value[k];
        sys.matrix[i][k] += a;
      }
    }
  }
  for (int i = 0; i < n_basis; ++i)
    for (int k = 0; k < i; ++k) sys.matrix[i][k] = sys.matrix[k][i];
  return sys;
}

GlobalSystem assemble(const HpMesh& mesh, const ProblemSpec& problem) {
  const int n_elems = mesh.num_elements();
  GlobalSystem global;
  global.dofs = build_dof_map(mesh);

  // Exact bandwidth: widest index spread inside any single element.
  int bw = 0;
  for (int j = 0; j < n_elems; ++j) {
    int lo = global.dofs.total, hi = -1;
    for (int i = 0; i <= mesh.degrees[j]; ++i) {
      const int g = global.dofs(j, i);
      if (g < 0) continue;
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    if (hi >= lo) bw = std::max(bw, hi - lo);
  }

  global.matrix = BandMatrix(global.dofs.total, bw, bw);
  global.rhs.assign(global.dofs.total, 0.0);

  double min_d = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n_elems; ++j) {
    const int p = mesh.degrees[j];
    const auto quad = gauss_legendre(default_quad_points(p));
    const auto local =
        element_system(mesh.x_left(j), mesh.x_right(j), p, problem, quad);
    min_d = std::min(min_d, local.min_d_sample);

    for (int i = 0; i <= p; ++i) {
      const int gi = global.dofs(j, i);
      if (gi < 0) continue;
      global.rhs[gi] += local.load[i];
      for (int k = 0; k <= p; ++k) {
        const int gk = global.dofs(j, k);
        if (gk < 0) continue;
        global.matrix.add(gi, gk, local.matrix[i][k]);
      }
    }
  }
  global.spd_hint = min_d >= 0.0;
  return global;
}

int HpSolution::find_element(double x) const {
  const auto& bp = mesh.breakpoints;
  if (x <= bp.front()) return 0;
  if (x >= bp.back()) return mesh.num_elements() - 1;
  const auto it = std::upper_bound(bp.begin(), bp.end(), x);
  return static_cast<int>(it - bp.begin()) - 1;
}

double HpSolution::value_local(int element, double xi) const {
  return legendre_sum(element_coeffs[element], xi);
}

double HpSolution::deriv_local(int element, double xi) const {
  const auto dc = legendre_differentiate(element_coeffs[element]);
  return (2.0 / mesh.length(element)) * legendre_sum(dc, xi);
}

double HpSolution::operator()(double x) const {
  const int j = find_element(x);
  const double xi = (2.0 * x - mesh.x_left(j) - mesh.x_right(j)) / mesh.length(j);
  return value_local(j, std::clamp(xi, -1.0, 1.0));
}

namespace {

// Factor + condition estimate + solve through LAPACK banded routines.
// Returns the solution vector; throws SolverError on (near-)singularity.
std::vector<double> banded_solve(const GlobalSystem& system,
                                 FactorizationKind* used, double* rcond_out) {
  const BandMatrix& A = system.matrix;
  const int n = A.size();
  const int kl = A.lower_bandwidth();
  const int ku = A.upper_bandwidth();
  const double anorm = A.one_norm();
  std::vector<double> x = system.rhs;
  *rcond_out = 1.0;
  if (n == 0) return x;

  if (system.spd_hint) {
    // Symmetric positive definite path: packed upper band storage.
    const int kd = ku;
    const int ldab = kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
    for (int j = 0; j < n; ++j)
      for (int i = std::max(0, j - kd); i <= j; ++i)
        ab[static_cast<std::size_t>(j) * ldab + (kd + i - j)] = A.at(i, j);

    lapack_int info = LAPACKE_dpbtrf(LAPACK_COL_MAJOR, 'U', n, kd, ab.data(), ldab);
    if (info == 0) {
      double rcond = 0.0;
      LAPACKE_dpbcon(LAPACK_COL_MAJOR, 'U', n, kd, ab.data(), ldab, anorm, &rcond);
      if (rcond < 1e-15)
        throw SolverError("banded Cholesky: matrix numerically singular", rcond);
      LAPACKE_dpbtrs(LAPACK_COL_MAJOR, 'U', n, kd, 1, ab.data(), ldab, x.data(), n);
      *used = FactorizationKind::Cholesky;
      *rcond_out = rcond;
      return x;
    }
    // Not numerically positive definite after all; fall through to LU.
  }

  const int ldab = 2 * kl + ku + 1;
  std::vector<double> ab(A.storage(), A.storage() + static_cast<std::size_t>(ldab) * n);
  std::vector<lapack_int> ipiv(n);
  lapack_int info =
      LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku, ab.data(), ldab, ipiv.data());
  double rcond = 0.0;
  if (info == 0)
    LAPACKE_dgbcon(LAPACK_COL_MAJOR, '1', n, kl, ku, ab.data(), ldab, ipiv.data(),
                   anorm, &rcond);
  if (info > 0)
    throw SolverError("banded LU: exact zero pivot at row " + std::to_string(info),
                      0.0);
  // Diagonal of U lives in row kl+ku of the factored band storage.
  for (int j = 0; j < n; ++j) {
    const double pivot = std::abs(ab[static_cast<std::size_t>(j) * ldab + kl + ku]);
    if (pivot < 1e-14 * anorm)
      throw SolverError("banded LU: near-singular system (pivot " +
                            std::to_string(pivot) + " vs norm " +
                            std::to_string(anorm) + ")",
                        rcond);
  }
  LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, 1, ab.data(), ldab, ipiv.data(),
                 x.data(), n);
  *used = FactorizationKind::PivotedLU;
  *rcond_out = rcond;
  return x;
}

}  // namespace

HpSolution solve_system(const GlobalSystem& system, const HpMesh& mesh) {
  if (build_dof_map(mesh).total != system.dofs.total ||
      system.matrix.size() != system.dofs.total)
    throw std::invalid_argument("solve_system: mesh and system disagree");

  FactorizationKind used = FactorizationKind::Cholesky;
  double rcond = 1.0;
  const std::vector<double> x = banded_solve(system, &used, &rcond);

  // Algebraic residual check against the assembled operator.
  double res_sq = 0.0, rhs_sq = 0.0;
  const auto ax = system.matrix.apply(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = ax[i] - system.rhs[i];
    res_sq += r * r;
    rhs_sq += system.rhs[i] * system.rhs[i];
  }
  const double residual =
      rhs_sq > 0.0 ? std::sqrt(res_sq / rhs_sq) : std::sqrt(res_sq);
  if (residual > 1e-10)
    throw SolverError("banded solve: residual " + std::to_string(residual) +
                          " exceeds 1e-10",
                      0.0);

  HpSolution solution;
  solution.mesh = mesh;
  solution.factorization = used;
  solution.rcond = rcond;
  solution.algebraic_residual = residual;
  solution.element_coeffs.reserve(mesh.num_elements());
  for (int j = 0; j < mesh.num_elements(); ++j) {
    const int p = mesh.degrees[j];
    const int gl = system.dofs(j, 0);
    const int gr = system.dofs(j, 1);
    const double v_left = gl >= 0 ? x[gl] : 0.0;
    const double v_right = gr >= 0 ? x[gr] : 0.0;
    std::vector<double> bubbles(p - 1);
    for (int k = 2; k <= p; ++k) bubbles[k - 2] = x[system.dofs(j, k)];
    solution.element_coeffs.push_back(shape_to_legendre(v_left, v_right, bubbles));
  }
  return solution;
}

HpSolution solve(const HpMesh& mesh, const ProblemSpec& problem) {
  return solve_system(assemble(mesh, problem), mesh);
}

}  // namespace hpr
