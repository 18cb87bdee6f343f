#pragma once

#include <string>
#include <vector>

#include "specden/burgers.hpp"
#include "specden/cauchy.hpp"
#include "specden/correction.hpp"
#include "specden/matrix_sim.hpp"

namespace specden::csv {

// All writers emit a header row and shortest-round-trip numbers, so repeated
// runs produce byte-identical files.

void write_correction(const std::string& path, const CorrectionTable& table);
CorrectionTable read_correction(const std::string& path);

void write_density(const std::string& path, const DensityTable& table);
DensityTable read_density(const std::string& path);

void write_eigenvalues(const std::string& path,
                       const std::vector<EnsembleSample>& samples);
std::vector<EnsembleSample> read_eigenvalues(const std::string& path);

// s,shift_mean,shift_stderr,F_theory
void write_shift(const std::string& path, const AveragedShift& shift,
                 const std::vector<double>& f_theory);
AveragedShift read_shift(const std::string& path, std::vector<double>* f_theory);

void write_residual(const std::string& path, const ResidualTable& table);
ResidualTable read_residual(const std::string& path);

// s,solver_density,closed_form,abs_error
void write_semigroup(const std::string& path, const std::vector<double>& s,
                     const std::vector<double>& solver,
                     const std::vector<double>& closed_form);

}  // namespace specden::csv
