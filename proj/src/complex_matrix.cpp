#include "corrlab/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace corrlab {

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out.at(j, i) = std::conj(at(i, j));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (int i = 0; i < std::min(rows, cols); ++i) t += at(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& x : data) m = std::max(m, std::abs(x));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows != o.rows || cols != o.cols) throw InputError("matrix shape mismatch");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows != o.rows || cols != o.cols) throw InputError("matrix shape mismatch");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (Complex& x : data) x *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols != b.rows) throw InputError("matmul shape mismatch");
  ComplexMatrix out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const Complex aik = a.at(i, k);
      if (aik == Complex(0.0)) continue;
      for (int j = 0; j < b.cols; ++j) out.at(i, j) += aik * b.at(k, j);
    }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw InputError("matrix shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

bool is_hermitian(const ComplexMatrix& m, double relative_tol) {
  if (m.rows != m.cols) return false;
  const double tol = relative_tol * std::max(1.0, m.max_abs());
  for (int i = 0; i < m.rows; ++i)
    for (int j = i; j < m.cols; ++j)
      if (std::abs(m.at(i, j) - std::conj(m.at(j, i))) > tol) return false;
  return true;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows * b.rows, a.cols * b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) {
      const Complex aij = a.at(i, j);
      if (aij == Complex(0.0)) continue;
      for (int k = 0; k < b.rows; ++k)
        for (int l = 0; l < b.cols; ++l)
          out.at(i * b.rows + k, j * b.cols + l) = aij * b.at(k, l);
    }
  return out;
}

ComplexMatrix tensor_all(const std::vector<ComplexMatrix>& factors) {
  if (factors.empty()) throw InputError("tensor_all: no factors");
  ComplexMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols != b.rows || a.rows != b.cols) throw InputError("trace_product shape mismatch");
  Complex t = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) t += a.at(i, k) * b.at(k, i);
  return t;
}

namespace {

long total_dim(const std::vector<int>& dims) {
  long n = 1;
  for (int d : dims) {
    if (d < 1) throw InputError("subsystem dimension must be positive");
    n *= d;
  }
  return n;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& traced) {
  const long n = total_dim(dims);
  if (m.rows != n || m.cols != n) throw InputError("partial_trace: dims do not match matrix");
  std::vector<bool> is_traced(dims.size(), false);
  for (std::size_t i = 0; i < traced.size(); ++i) {
    const int t = traced[i];
    if (t < 0 || t >= static_cast<int>(dims.size()))
      throw InputError("partial_trace: bad subsystem index");
    if (i > 0 && t <= traced[i - 1])
      throw InputError("partial_trace: subsystems must be strictly increasing");
    is_traced[t] = true;
  }
  std::vector<int> kept;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (!is_traced[i]) kept.push_back(static_cast<int>(i));

  long kept_dim = 1, traced_dim = 1;
  for (int k : kept) kept_dim *= dims[k];
  for (int t : traced) traced_dim *= dims[t];

  // Strides of each subsystem within the full row-major index.
  std::vector<long> stride(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    stride[i] = stride[i + 1] * dims[i + 1];

  ComplexMatrix out(static_cast<int>(kept_dim), static_cast<int>(kept_dim));
  for (long a = 0; a < kept_dim; ++a) {
    for (long b = 0; b < kept_dim; ++b) {
      long base_row = 0, base_col = 0;
      long ra = a, rb = b;
      for (int i = static_cast<int>(kept.size()) - 1; i >= 0; --i) {
        base_row += (ra % dims[kept[i]]) * stride[kept[i]];
        base_col += (rb % dims[kept[i]]) * stride[kept[i]];
        ra /= dims[kept[i]];
        rb /= dims[kept[i]];
      }
      Complex sum = 0.0;
      for (long tt = 0; tt < traced_dim; ++tt) {
        long off = 0, rt = tt;
        for (int i = static_cast<int>(traced.size()) - 1; i >= 0; --i) {
          off += (rt % dims[traced[i]]) * stride[traced[i]];
          rt /= dims[traced[i]];
        }
        sum += m.at(static_cast<int>(base_row + off), static_cast<int>(base_col + off));
      }
      out.at(static_cast<int>(a), static_cast<int>(b)) = sum;
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<int>& dims,
                                int subsystem) {
  const long n = total_dim(dims);
  if (m.rows != n || m.cols != n) throw InputError("partial_transpose: dims do not match matrix");
  if (subsystem < 0 || subsystem >= static_cast<int>(dims.size()))
    throw InputError("partial_transpose: bad subsystem index");
  std::vector<long> stride(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    stride[i] = stride[i + 1] * dims[i + 1];
  const long s = stride[subsystem];
  const int d = dims[subsystem];

  ComplexMatrix out(m.rows, m.cols);
  for (long i = 0; i < n; ++i) {
    const int di = static_cast<int>((i / s) % d);
    for (long j = 0; j < n; ++j) {
      const int dj = static_cast<int>((j / s) % d);
      const long ti = i + static_cast<long>(dj - di) * s;
      const long tj = j + static_cast<long>(di - dj) * s;
      out.at(static_cast<int>(ti), static_cast<int>(tj)) =
          m.at(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return out;
}

namespace {

constexpr double kEigTolerance = 1e-12;
constexpr int kMaxSweeps = 100;

// Cyclic Jacobi on a dense real symmetric matrix; returns the diagonal.
std::vector<double> jacobi_symmetric_eigenvalues(std::vector<double>& a, int n) {
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::abs(a[p * n + q]);
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[i * n + i]));
    if (off <= kEigTolerance * std::max(1.0, scale)) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p], aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = a[i * n + i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (!is_hermitian(m)) throw InputError("hermitian_eigenvalues: matrix is not Hermitian");
  const int n = m.rows;
  // Real symmetric embedding [[Re, -Im], [Im, Re]]; each eigenvalue of the
  // input appears twice.
  std::vector<double> a(static_cast<std::size_t>(2 * n) * (2 * n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = m.at(i, j).real(), im = m.at(i, j).imag();
      a[i * 2 * n + j] = re;
      a[(i + n) * 2 * n + (j + n)] = re;
      a[i * 2 * n + (j + n)] = -im;
      a[(i + n) * 2 * n + j] = im;
    }
  const auto doubled = jacobi_symmetric_eigenvalues(a, 2 * n);
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
  return eig;
}

double min_eigenvalue(const ComplexMatrix& m) { return hermitian_eigenvalues(m).front(); }

double operator_norm(const ComplexMatrix& m) {
  const auto eig = hermitian_eigenvalues(m);
  return std::max(std::abs(eig.front()), std::abs(eig.back()));
}

}  // namespace corrlab
