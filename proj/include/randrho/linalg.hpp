#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "randrho/errors.hpp"

namespace randrho {

using Complex = std::complex<double>;

// Dense row-major complex matrix: the single carrier for states, unitaries
// and Gaussian samples.  Eigen supplies the O(N^3) kernels (products, QR,
// Hermitian eigensolver); everything quantum-specific lives below.
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kHermTol = 1e-10;   // max-abs Hermiticity deviation
constexpr double kEigClampTol = 1e-12;  // negative-eigenvalue roundoff budget

// Real eigenvalues sorted descending.  trace_normalized marks spectra of
// density matrices, whose entries are probability weights (clamped at 0).
struct Spectrum {
  Eigen::Index n = 0;
  std::vector<double> lambdas;
  bool trace_normalized = false;
};

inline double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = kHermTol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(ComplexMatrix(a - a.adjoint())) < tol;
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw numeric_error("matmul: dimension mismatch (" +
                        std::to_string(a.cols()) + " vs " +
                        std::to_string(b.rows()) + ")");
  return a * b;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct QrResult {
  ComplexMatrix q;
  ComplexMatrix r;
};

// QR factorization normalized so R has a positive real diagonal, which makes
// the decomposition unique.  With a Ginibre input the resulting Q is exactly
// Haar distributed (Mezzadri, Notices AMS 54 (2007) 592).
inline QrResult qr_unitary(const ComplexMatrix& a) {
  if (a.rows() != a.cols())
    throw numeric_error("qr_unitary: matrix must be square");
  const Eigen::Index n = a.rows();
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  const double scale = std::sqrt(a.cwiseAbs2().sum());
  for (Eigen::Index j = 0; j < n; ++j) {
    const double m = std::abs(r(j, j));
    if (m <= 1e-14 * scale)
      throw numeric_error("qr_unitary: rank-deficient pivot at column " +
                          std::to_string(j));
    const Complex phase = r(j, j) / m;
    q.col(j) *= phase;
    r.row(j) *= std::conj(phase);
  }
  return {std::move(q), std::move(r)};
}

// Eigenvalues of a Hermitian matrix, descending.  Input farther than
// kHermTol from Hermitian is rejected.
inline Spectrum hermitian_eigenvalues(const ComplexMatrix& h) {
  if (h.rows() != h.cols())
    throw numeric_error("hermitian_eigenvalues: matrix must be square");
  if (!is_hermitian(h))
    throw numeric_error("hermitian_eigenvalues: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h,
                                                      Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw numeric_error("hermitian_eigenvalues: eigensolver did not converge");
  Spectrum spec;
  spec.n = h.rows();
  spec.lambdas.assign(solver.eigenvalues().data(),
                      solver.eigenvalues().data() + h.rows());
  std::sort(spec.lambdas.begin(), spec.lambdas.end(), std::greater<>());
  return spec;
}

enum class Keep { A, B };

// Partial trace of a state on H_A (x) H_B, row-major composite index
// (i,j) = i*dimB + j.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, Eigen::Index dim_a,
                                   Eigen::Index dim_b, Keep keep) {
  if (dim_a < 1 || dim_b < 1 || rho.rows() != rho.cols() ||
      rho.rows() != dim_a * dim_b)
    throw numeric_error("partial_trace: size is not dimA*dimB");
  if (keep == Keep::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i)
      for (Eigen::Index ip = 0; ip < dim_a; ++ip) {
        Complex acc = 0.0;
        for (Eigen::Index j = 0; j < dim_b; ++j)
          acc += rho(i * dim_b + j, ip * dim_b + j);
        out(i, ip) = acc;
      }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (Eigen::Index j = 0; j < dim_b; ++j)
    for (Eigen::Index jp = 0; jp < dim_b; ++jp) {
      Complex acc = 0.0;
      for (Eigen::Index i = 0; i < dim_a; ++i)
        acc += rho(i * dim_b + j, i * dim_b + jp);
      out(j, jp) = acc;
    }
  return out;
}

// Reshuffle of an N^2 x N^2 matrix: the entry at block index (i,j;k,l)
// moves to (i,k;j,l), i.e. out[(i,k),(j,l)] = in[(i,j),(k,l)].  This is an
// involution and maps a Choi matrix onto its superoperator (up to a factor
// N, see channels.hpp).
inline ComplexMatrix reshuffle(const ComplexMatrix& sigma, Eigen::Index n) {
  if (n < 1 || sigma.rows() != sigma.cols() || sigma.rows() != n * n)
    throw numeric_error("reshuffle: size is not N^2");
  ComplexMatrix out(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l)
          out(i * n + k, j * n + l) = sigma(i * n + j, k * n + l);
  return out;
}

}  // namespace randrho
