#include "hpr/mesh.hpp"

#include <algorithm>
#include <limits>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hpr {

int HpMesh::max_degree() const {
  return *std::max_element(degrees.begin(), degrees.end());
}

HpMesh uniform_mesh(double a, double b, int n_elements, int degree) {
  if (!(a < b)) throw std::domain_error("uniform_mesh: need a < b");
  if (n_elements < 1) throw std::invalid_argument("uniform_mesh: need N >= 1");
  if (degree < 1) throw std::invalid_argument("uniform_mesh: need degree >= 1");

  HpMesh mesh;
  mesh.breakpoints.resize(n_elements + 1);
  for (int i = 0; i <= n_elements; ++i)
    mesh.breakpoints[i] = a + (b - a) * i / n_elements;
  mesh.breakpoints.front() = a;
  mesh.breakpoints.back() = b;
  mesh.degrees.assign(n_elements, degree);
  return mesh;
}

std::vector<int> patch(const HpMesh& mesh, int j) {
  const int n = mesh.num_elements();
  if (j < 0 || j >= n) throw std::out_of_range("patch: element index");
  std::vector<int> elements;
  for (int i = j - 1; i <= j + 1; ++i)
    if (i >= 0 && i < n) elements.push_back(i);
  return elements;
}

double shape_regularity(const HpMesh& mesh) {
  // Length ratios within a few ulps of 1 are rounding noise from the
  // breakpoint arithmetic, not genuine grading.
  constexpr double snap = 1.0 + 8.0 * std::numeric_limits<double>::epsilon();
  double mu = 1.0;
  for (int j = 0; j + 1 < mesh.num_elements(); ++j) {
    const double hr = mesh.length(j) / mesh.length(j + 1);
    double worst = std::max({hr, 1.0 / hr});
    if (worst <= snap) worst = 1.0;
    const double pr = static_cast<double>(mesh.degrees[j]) / mesh.degrees[j + 1];
    mu = std::max({mu, worst, pr, 1.0 / pr});
  }
  return mu;
}

HpMesh apply_refinements(const HpMesh& mesh,
                         const std::vector<RefinementDecision>& decisions) {
  const int n = mesh.num_elements();
  std::vector<int> action(n, -1);  // -1 none, else index into decisions
  for (std::size_t k = 0; k < decisions.size(); ++k) {
    const int j = decisions[k].element;
    if (j < 0 || j >= n)
      throw std::invalid_argument("apply_refinements: element index out of range");
    if (action[j] != -1)
      throw std::invalid_argument("apply_refinements: duplicate decision for element");
    action[j] = static_cast<int>(k);
  }

  HpMesh out;
  out.breakpoints.push_back(mesh.breakpoints.front());
  for (int j = 0; j < n; ++j) {
    const int p = mesh.degrees[j];
    if (action[j] >= 0 && decisions[action[j]].kind == RefinementKind::Bisect) {
      const double mid = 0.5 * (mesh.x_left(j) + mesh.x_right(j));
      out.breakpoints.push_back(mid);
      out.breakpoints.push_back(mesh.x_right(j));
      out.degrees.push_back(p);
      out.degrees.push_back(p);
    } else {
      out.breakpoints.push_back(mesh.x_right(j));
      out.degrees.push_back(action[j] >= 0 ? p + 1 : p);
    }
  }
  return out;
}

void write_mesh_csv(const HpMesh& mesh, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("write_mesh_csv: cannot open " + path);
  file << "x_left,x_right,degree\n";
  char buf[128];
  for (int j = 0; j < mesh.num_elements(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d\n", mesh.x_left(j),
                  mesh.x_right(j), mesh.degrees[j]);
    file << buf;
  }
}

}  // namespace hpr
