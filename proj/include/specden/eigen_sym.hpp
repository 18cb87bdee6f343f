#pragma once

#include <vector>

namespace specden {

// Householder reduction of a real symmetric matrix to tridiagonal form
// (eigenvalues only, no transform accumulation). `a` is n x n row-major;
// only the lower triangle is referenced, and it is destroyed. On return
// d[0..n-1] holds the diagonal and e[1..n-1] the subdiagonal.
void sym_tridiagonalize(double* a, int n, double* d, double* e);

// Implicit-shift QL with Wilkinson shifts on a tridiagonal matrix; d is
// replaced by the eigenvalues (unsorted), e is destroyed. Throws
// numerical_error if an eigenvalue fails to deflate within the sweep cap.
void tql_eigenvalues(double* d, double* e, int n);

// Eigenvalues of a symmetric matrix, sorted ascending. Destroys `a`.
std::vector<double> sym_eigenvalues_inplace(double* a, int n);

}  // namespace specden
