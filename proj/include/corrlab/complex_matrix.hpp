#pragma once

#include <complex>
#include <vector>

#include "corrlab/rational.hpp"

namespace corrlab {

using Complex = std::complex<double>;

/// Dense row-major complex matrix; the carrier for states, effects and
/// source operators.
struct ComplexMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Complex> data;

  ComplexMatrix() = default;
  ComplexMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}

  static ComplexMatrix identity(int n);

  Complex& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const Complex& at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex scale);
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest |A_ij - B_ij|.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hermiticity residual max |A - A^dagger| relative to max |A|.
bool is_hermitian(const ComplexMatrix& m, double relative_tol = 1e-12);

/// Kronecker product with row-major subsystem ordering.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor_all(const std::vector<ComplexMatrix>& factors);

/// tr(A B); pairs with tensor products to evaluate Born probabilities.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Partial trace over the listed subsystems (0-based, strictly increasing);
/// kept subsystems retain their order.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& traced);

/// Transpose of one subsystem's indices.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<int>& dims,
                                int subsystem);

/// Eigenvalues of a Hermitian matrix, ascending, via cyclic Jacobi sweeps on
/// the real symmetric embedding [[Re, -Im], [Im, Re]].
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

double min_eigenvalue(const ComplexMatrix& m);

/// Max |eigenvalue| of a Hermitian matrix.
double operator_norm(const ComplexMatrix& m);

}  // namespace corrlab
