#pragma once

#include <cmath>
#include <string>

#include "randrho/ensembles.hpp"
#include "randrho/errors.hpp"
#include "randrho/linalg.hpp"

namespace randrho {

// State representation of a quantum operation on dimension N: a density
// matrix sigma on H_N (x) H_N satisfying the trace-preservation condition
// Tr_A sigma = I/N.  Complete positivity is equivalent to sigma >= 0.
struct ChoiState {
  ComplexMatrix sigma;  // N^2 x N^2
  int n = 1;
};

inline double tp_deviation(const ChoiState& choi) {
  const ComplexMatrix reduced =
      partial_trace(choi.sigma, choi.n, choi.n, Keep::B);
  const ComplexMatrix target =
      ComplexMatrix::Identity(choi.n, choi.n) / static_cast<double>(choi.n);
  return max_abs(ComplexMatrix(reduced - target));
}

// Imposes the trace-preservation condition on an arbitrary bipartite state
// omega:  sigma = (1/N) (I (x) Y^(-1/2)) omega (I (x) Y^(-1/2)) with
// Y = Tr_A omega.  States whose environment marginal Y is singular are
// rejected outright; regularizing them would silently distort the measure.
inline ChoiState to_channel_state(const ComplexMatrix& omega, int n) {
  if (n < 1 || omega.rows() != omega.cols() ||
      omega.rows() != static_cast<Eigen::Index>(n) * n)
    throw config_error("to_channel_state: omega must be N^2 x N^2");
  const ComplexMatrix y = partial_trace(omega, n, n, Keep::B);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(y);
  if (eig.info() != Eigen::Success)
    throw numeric_error("to_channel_state: eigensolver failed on Y");
  if (!(eig.eigenvalues().minCoeff() > 1e-12))
    throw numeric_error("to_channel_state: environment-deficient state");
  Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  const ComplexMatrix y_inv_sqrt = eig.eigenvectors() *
                                   inv_sqrt.asDiagonal() *
                                   eig.eigenvectors().adjoint();
  const ComplexMatrix corr =
      kron(ComplexMatrix::Identity(n, n), y_inv_sqrt);
  ComplexMatrix sigma = corr * omega * corr / static_cast<double>(n);
  sigma = Complex(0.5, 0.0) * (sigma + sigma.adjoint().eval());
  ChoiState choi{std::move(sigma), n};
  if (tp_deviation(choi) > kHermTol)
    throw numeric_error("to_channel_state: trace condition violated");
  return choi;
}

// Superoperator matrix acting on row-major vectorized density matrices:
// S = N * reshuffle(sigma), i.e. S[(i,j),(k,l)] = N * sigma[(i,k),(j,l)].
// Worked 2x2 example: for the identity channel sigma is the maximally
// entangled projector with sigma[(i,i),(k,k)] = 1/N, whose reshuffle is
// I/N, so S = I as it must be.
inline ComplexMatrix superoperator(const ChoiState& choi) {
  return static_cast<double>(choi.n) * reshuffle(choi.sigma, choi.n);
}

// Direct action Phi(rho)_(i,j) = N sum_{k,l} sigma[(i,k),(j,l)] rho_(k,l).
inline ComplexMatrix apply_channel(const ChoiState& choi,
                                   const ComplexMatrix& rho) {
  const int n = choi.n;
  if (rho.rows() != n || rho.cols() != n)
    throw config_error("apply_channel: state dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          acc += choi.sigma(i * n + k, j * n + l) * rho(k, l);
      out(i, j) = static_cast<double>(n) * acc;
    }
  return out;
}

// A random quantum operation: sample omega on dimension N^2 from the given
// ensemble, then project onto the trace-preserving family.  The flat measure
// over operations corresponds to the induced ensemble with K = N^2.
inline ChoiState random_operation(int n, const EnsembleSpec& ensemble,
                                  SeededStream& rng) {
  if (ensemble.n != n * n)
    throw config_error("random_operation: ensemble dimension must be N^2");
  const DensityMatrix omega = sample(ensemble, rng);
  return to_channel_state(omega.matrix, n);
}

inline ChoiState random_operation_flat(int n, SeededStream& rng) {
  EnsembleSpec spec = EnsembleSpec::make(EnsembleKind::induced, n * n);
  spec.k = n * n;
  return random_operation(n, spec, rng);
}

}  // namespace randrho
