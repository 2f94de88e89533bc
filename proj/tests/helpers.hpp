#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "randrho/ensembles.hpp"
#include "randrho/linalg.hpp"
#include "randrho/rng.hpp"
#include "randrho/stats.hpp"

namespace test_helpers {

using randrho::Complex;
using randrho::ComplexMatrix;

// chi-square critical value at the 1% level for 15 degrees of freedom
inline constexpr double kChi2_15dof_1pct = 30.57791416689249;

inline ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols,
                                   randrho::SeededStream& rng) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = rng.next_complex_gaussian();
  return m;
}

inline ComplexMatrix random_hermitian(Eigen::Index n,
                                      randrho::SeededStream& rng) {
  ComplexMatrix a = random_matrix(n, n, rng);
  return ComplexMatrix(0.5 * (a + a.adjoint().eval()));
}

// |Psi+><Psi+| on an N x N system.
inline ComplexMatrix bell_projector(Eigen::Index n) {
  ComplexMatrix rho = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k)
      rho(i * n + i, k * n + k) = 1.0 / static_cast<double>(n);
  return rho;
}

// Eigenphases of a unitary matrix in [0, 2pi), via the general-purpose
// complex Schur solver (independent of the library's Hermitian path).
inline std::vector<double> eigenphases(const ComplexMatrix& u) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u, false);
  std::vector<double> phases;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    double phi = std::arg(solver.eigenvalues()(i));
    if (phi < 0.0) phi += 2.0 * M_PI;
    phases.push_back(phi);
  }
  return phases;
}

// Characteristic polynomial coefficients p(x) = x^n + c[n-1] x^(n-1) + ...
// + c[0] by the Faddeev-LeVerrier recursion (real coefficients for
// Hermitian input).
inline std::vector<double> char_poly(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[static_cast<std::size_t>(n)] = 1.0;
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = ComplexMatrix(h * m);
    m += c[static_cast<std::size_t>(n - k + 1)] *
         ComplexMatrix::Identity(n, n);
    const Complex trace = (h * m).trace();
    c[static_cast<std::size_t>(n - k)] = -trace.real() / static_cast<double>(k);
  }
  return c;
}

inline double eval_poly(const std::vector<double>& c, double x) {
  double value = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) value = value * x + c[i];
  return value;
}

// Roots of the characteristic polynomial by grid scan plus bisection;
// assumes distinct real roots (true almost surely for random Hermitian
// matrices).  Returns descending roots.
inline std::vector<double> char_poly_roots(const ComplexMatrix& h) {
  const std::vector<double> c = char_poly(h);
  // Gershgorin bound
  double bound = 0.0;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < h.cols(); ++j) row += std::abs(h(i, j));
    bound = std::max(bound, row);
  }
  bound += 1.0;
  const int grid = 200000;
  std::vector<double> roots;
  double prev_x = -bound;
  double prev_f = eval_poly(c, prev_x);
  for (int i = 1; i <= grid; ++i) {
    const double x = -bound + 2.0 * bound * i / grid;
    const double f = eval_poly(c, x);
    if (prev_f == 0.0) roots.push_back(prev_x);
    if (prev_f * f < 0.0) {
      double a = prev_x, b = x, fa = prev_f;
      for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (a + b);
        const double fm = eval_poly(c, mid);
        if (fa * fm <= 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_f = f;
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

// Pooled rescaled eigenvalues of `samples` draws from an ensemble, one
// stream per sample.
inline std::vector<double> pooled_x(const randrho::EnsembleSpec& spec,
                                    int samples, std::uint64_t seed) {
  std::vector<double> xs;
  for (int i = 0; i < samples; ++i) {
    randrho::SeededStream rng(seed, static_cast<std::uint64_t>(i));
    const randrho::DensityMatrix rho = randrho::sample(spec, rng);
    const randrho::Spectrum sp = randrho::spectrum_of(rho);
    for (double l : sp.lambdas) xs.push_back(spec.n * l);
  }
  return xs;
}

inline randrho::SpectrumBatch make_batch(const randrho::EnsembleSpec& spec,
                                         int samples, std::uint64_t seed) {
  randrho::SpectrumBatch batch;
  batch.n = spec.n;
  batch.spec = spec;
  batch.seed = seed;
  for (int i = 0; i < samples; ++i) {
    randrho::SeededStream rng(seed, static_cast<std::uint64_t>(i));
    batch.entries.push_back(
        {static_cast<std::uint64_t>(i),
         randrho::spectrum_of(randrho::sample(spec, rng))});
  }
  return batch;
}

}  // namespace test_helpers
