#include "specden/csv.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "specden/numfmt.hpp"

namespace specden::csv {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::vector<std::vector<std::string>> read_rows(const std::string& path,
                                                const std::string& header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
  if (line != header)
    throw std::runtime_error("unexpected header in " + path + ": " + line);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

void write_correction(const std::string& path, const CorrectionTable& table) {
  auto out = open_out(path);
  out << "s,F,dF,flag\n";
  for (std::size_t i = 0; i < table.grid.size(); ++i) {
    out << format_double(table.grid[i]) << ',' << format_double(table.F_values[i])
        << ',' << format_double(table.dF_values[i]) << ','
        << (table.flags[i] ? "singular" : "ok") << '\n';
  }
}

CorrectionTable read_correction(const std::string& path) {
  CorrectionTable t;
  for (const auto& row : read_rows(path, "s,F,dF,flag")) {
    if (row.size() != 4) throw std::runtime_error("bad row in " + path);
    t.grid.push_back(parse_double(row[0]));
    t.F_values.push_back(parse_double(row[1]));
    t.dF_values.push_back(parse_double(row[2]));
    t.flags.push_back(row[3] == "singular" ? 1 : 0);
  }
  return t;
}

void write_density(const std::string& path, const DensityTable& table) {
  auto out = open_out(path);
  out << "s,density,cdf\n";
  for (std::size_t i = 0; i < table.s.size(); ++i) {
    out << format_double(table.s[i]) << ',' << format_double(table.density[i])
        << ',' << format_double(table.cdf[i]) << '\n';
  }
}

DensityTable read_density(const std::string& path) {
  DensityTable t;
  for (const auto& row : read_rows(path, "s,density,cdf")) {
    if (row.size() != 3) throw std::runtime_error("bad row in " + path);
    t.s.push_back(parse_double(row[0]));
    t.density.push_back(parse_double(row[1]));
    t.cdf.push_back(parse_double(row[2]));
  }
  return t;
}

void write_eigenvalues(const std::string& path,
                       const std::vector<EnsembleSample>& samples) {
  auto out = open_out(path);
  out << "replicate_id,index,lambda\n";
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
      out << s.replicate_id << ',' << i << ','
          << format_double(s.eigenvalues[i]) << '\n';
    }
  }
}

std::vector<EnsembleSample> read_eigenvalues(const std::string& path) {
  std::map<int, EnsembleSample> by_id;
  for (const auto& row : read_rows(path, "replicate_id,index,lambda")) {
    if (row.size() != 3) throw std::runtime_error("bad row in " + path);
    int id = std::stoi(row[0]);
    auto& s = by_id[id];
    s.replicate_id = id;
    s.eigenvalues.push_back(parse_double(row[2]));
  }
  std::vector<EnsembleSample> out;
  for (auto& [id, s] : by_id) {
    s.n = int(s.eigenvalues.size());
    out.push_back(std::move(s));
  }
  return out;
}

void write_shift(const std::string& path, const AveragedShift& shift,
                 const std::vector<double>& f_theory) {
  auto out = open_out(path);
  out << "s,shift_mean,shift_stderr,F_theory\n";
  for (std::size_t i = 0; i < shift.s.size(); ++i) {
    out << format_double(shift.s[i]) << ',' << format_double(shift.mean[i]) << ','
        << format_double(shift.stderr_[i]) << ',' << format_double(f_theory[i])
        << '\n';
  }
}

AveragedShift read_shift(const std::string& path, std::vector<double>* f_theory) {
  AveragedShift t;
  if (f_theory) f_theory->clear();
  for (const auto& row : read_rows(path, "s,shift_mean,shift_stderr,F_theory")) {
    if (row.size() != 4) throw std::runtime_error("bad row in " + path);
    t.s.push_back(parse_double(row[0]));
    t.mean.push_back(parse_double(row[1]));
    t.stderr_.push_back(parse_double(row[2]));
    if (f_theory) f_theory->push_back(parse_double(row[3]));
  }
  return t;
}

void write_residual(const std::string& path, const ResidualTable& table) {
  auto out = open_out(path);
  out << "s,t,residual\n";
  for (std::size_t i = 0; i < table.s.size(); ++i) {
    out << format_double(table.s[i]) << ',' << format_double(table.t[i]) << ','
        << format_double(table.residual[i]) << '\n';
  }
}

ResidualTable read_residual(const std::string& path) {
  ResidualTable t;
  for (const auto& row : read_rows(path, "s,t,residual")) {
    if (row.size() != 3) throw std::runtime_error("bad row in " + path);
    t.s.push_back(parse_double(row[0]));
    t.t.push_back(parse_double(row[1]));
    t.residual.push_back(parse_double(row[2]));
  }
  return t;
}

void write_semigroup(const std::string& path, const std::vector<double>& s,
                     const std::vector<double>& solver,
                     const std::vector<double>& closed_form) {
  auto out = open_out(path);
  out << "s,solver_density,closed_form,abs_error\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << format_double(s[i]) << ',' << format_double(solver[i]) << ','
        << format_double(closed_form[i]) << ','
        << format_double(std::abs(solver[i] - closed_form[i])) << '\n';
  }
}

}  // namespace specden::csv
