#pragma once

#include "randrho/errors.hpp"
#include "randrho/linalg.hpp"
#include "randrho/rng.hpp"

namespace randrho {

enum class Field { complex_field, real_field };

struct GinibreSpec {
  Eigen::Index rows = 1;
  Eigen::Index cols = 1;
  Field field = Field::complex_field;
};

// Matrix of i.i.d. Gaussian entries.  Complex entries have independent
// N(0, 1/2) real and imaginary parts (unit entry variance); real entries are
// standard normals.  The overall scale cancels in every normalized state, so
// only the shape of the law matters downstream.
inline ComplexMatrix ginibre(const GinibreSpec& spec, SeededStream& rng) {
  if (spec.rows < 1 || spec.cols < 1)
    throw config_error("ginibre: dimensions must be >= 1");
  ComplexMatrix g(spec.rows, spec.cols);
  if (spec.field == Field::complex_field) {
    for (Eigen::Index i = 0; i < spec.rows; ++i)
      for (Eigen::Index j = 0; j < spec.cols; ++j)
        g(i, j) = rng.next_complex_gaussian();
  } else {
    for (Eigen::Index i = 0; i < spec.rows; ++i)
      for (Eigen::Index j = 0; j < spec.cols; ++j)
        g(i, j) = Complex(rng.next_gaussian(), 0.0);
  }
  return g;
}

inline ComplexMatrix ginibre_complex(Eigen::Index n, Eigen::Index m,
                                     SeededStream& rng) {
  return ginibre({n, m, Field::complex_field}, rng);
}

inline ComplexMatrix ginibre_real(Eigen::Index n, Eigen::Index m,
                                  SeededStream& rng) {
  return ginibre({n, m, Field::real_field}, rng);
}

// Haar-distributed unitary: QR of a complex Ginibre matrix with the
// positive-diagonal-R phase normalization, which makes the factor exactly
// Haar rather than merely unitary.
inline ComplexMatrix haar_unitary(Eigen::Index n, SeededStream& rng) {
  if (n < 1) throw config_error("haar_unitary: N must be >= 1");
  return qr_unitary(ginibre_complex(n, n, rng)).q;
}

// Haar-distributed orthogonal matrix (real entries, sign-normalized QR).
inline ComplexMatrix haar_orthogonal(Eigen::Index n, SeededStream& rng) {
  if (n < 1) throw config_error("haar_orthogonal: N must be >= 1");
  return qr_unitary(ginibre_real(n, n, rng)).q;
}

}  // namespace randrho
