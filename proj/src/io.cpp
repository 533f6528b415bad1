#include "hpr/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hpr {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::optional<double> parse_optional(const std::string& field) {
  if (field.empty()) return std::nullopt;
  return std::strtod(field.c_str(), nullptr);
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::vector<TraceRow> trace_rows(const AdaptiveTrace& trace) {
  std::vector<TraceRow> rows;
  rows.reserve(trace.entries.size());
  for (const auto& e : trace.entries)
    rows.push_back({e.iteration, e.n_elements, e.n_dofs, e.max_degree,
                    e.eta_total, e.true_error, e.efficiency});
  return rows;
}

void write_trace_csv(const AdaptiveTrace& trace, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("write_trace_csv: cannot open " + path);
  file << "iter,n_elem,n_dof,max_p,eta_total,true_error,efficiency\n";
  for (const auto& e : trace.entries) {
    file << e.iteration << ',' << e.n_elements << ',' << e.n_dofs << ','
         << e.max_degree << ',' << format_double(e.eta_total) << ',';
    if (e.true_error) file << format_double(*e.true_error);
    file << ',';
    if (e.efficiency) file << format_double(*e.efficiency);
    file << '\n';
  }
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("read_trace_csv: cannot open " + path);

  std::string line;
  std::getline(file, line);  // header
  std::vector<TraceRow> rows;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 7)
      throw std::runtime_error("read_trace_csv: malformed row: " + line);
    TraceRow row;
    row.iteration = std::atoi(fields[0].c_str());
    row.n_elements = std::atoi(fields[1].c_str());
    row.n_dofs = std::atoi(fields[2].c_str());
    row.max_degree = std::atoi(fields[3].c_str());
    row.eta_total = std::strtod(fields[4].c_str(), nullptr);
    row.true_error = parse_optional(fields[5]);
    row.efficiency = parse_optional(fields[6]);
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::pair<double, double>> solution_samples(
    const HpSolution& solution, int per_element) {
  std::vector<std::pair<double, double>> samples;
  const HpMesh& mesh = solution.mesh;
  samples.reserve(static_cast<std::size_t>(mesh.num_elements()) * per_element);
  for (int j = 0; j < mesh.num_elements(); ++j) {
    const double mid = 0.5 * (mesh.x_left(j) + mesh.x_right(j));
    for (int k = 0; k < per_element; ++k) {
      const double xi = -1.0 + 2.0 * k / (per_element - 1);
      samples.emplace_back(mid + 0.5 * mesh.length(j) * xi,
                           solution.value_local(j, xi));
    }
  }
  return samples;
}

void write_solution_csv(const HpSolution& solution, const std::string& path,
                        int per_element) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("write_solution_csv: cannot open " + path);
  file << "x,u\n";
  for (const auto& [x, u] : solution_samples(solution, per_element))
    file << format_double(x) << ',' << format_double(u) << '\n';
}

void write_diagnostics_csv(const EfficiencyDiagnostics& diagnostics,
                           const std::string& path) {
  std::ofstream file(path);
  if (!file)
    throw std::runtime_error("write_diagnostics_csv: cannot open " + path);
  file << "kind,index,value\n";
  for (std::size_t i = 0; i < diagnostics.oscillation.size(); ++i)
    file << "osc_R," << i << ',' << format_double(diagnostics.oscillation[i])
         << '\n';
  for (std::size_t i = 0; i < diagnostics.rho_volume.size(); ++i) {
    file << "rho_vol," << i << ',';
    if (diagnostics.rho_volume[i]) file << format_double(*diagnostics.rho_volume[i]);
    file << '\n';
  }
  for (std::size_t i = 0; i < diagnostics.rho_jump.size(); ++i) {
    file << "rho_jump," << i + 1 << ',';
    if (diagnostics.rho_jump[i]) file << format_double(*diagnostics.rho_jump[i]);
    file << '\n';
  }
}

}  // namespace hpr
