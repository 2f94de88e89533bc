#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "randrho/errors.hpp"
#include "randrho/linalg.hpp"
#include "randrho/sampling.hpp"

namespace randrho {

enum class EnsembleKind {
  induced,
  hilbert_schmidt,
  bures,
  arcsine,
  k_entangled,
  ginibre_product,
  generalized,
  real_orthogonal_sum,
  real_ginibre_product,
  unit_interpolation,
  bures_hs_interpolation,
};

inline const char* to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::induced: return "induced";
    case EnsembleKind::hilbert_schmidt: return "hilbert_schmidt";
    case EnsembleKind::bures: return "bures";
    case EnsembleKind::arcsine: return "arcsine";
    case EnsembleKind::k_entangled: return "k_entangled";
    case EnsembleKind::ginibre_product: return "ginibre_product";
    case EnsembleKind::generalized: return "generalized";
    case EnsembleKind::real_orthogonal_sum: return "real_orthogonal_sum";
    case EnsembleKind::real_ginibre_product: return "real_ginibre_product";
    case EnsembleKind::unit_interpolation: return "unit_interpolation";
    case EnsembleKind::bures_hs_interpolation: return "bures_hs_interpolation";
  }
  return "?";
}

inline EnsembleKind ensemble_kind_from_string(const std::string& s) {
  for (EnsembleKind k :
       {EnsembleKind::induced, EnsembleKind::hilbert_schmidt,
        EnsembleKind::bures, EnsembleKind::arcsine, EnsembleKind::k_entangled,
        EnsembleKind::ginibre_product, EnsembleKind::generalized,
        EnsembleKind::real_orthogonal_sum, EnsembleKind::real_ginibre_product,
        EnsembleKind::unit_interpolation,
        EnsembleKind::bures_hs_interpolation})
    if (s == to_string(k)) return k;
  throw config_error("unknown ensemble kind: " + s);
}

// Declarative description of a random-density-matrix ensemble.  Every
// ensemble reduces to rho = W W^dag / Tr(W W^dag) for an ensemble-specific W.
//
// Field roles by kind:
//   n        principal dimension (all kinds)
//   k        number of unitary/orthogonal summands; for kind=induced it is
//            the environment dimension K instead (the CLI and the key-value
//            form expose a single "k")
//   s        number of Ginibre factors in the product chain
//   weights  probability vector p over the k summands (uniform by default)
//   dims     ratios c_i = M_i / n for a rectangular factor chain; factor G_i
//            has shape N_i x M_i with M_i = N_{i+1} and N_1 = n
//   a        interpolation parameter (unit / Bures-HS families)
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::hilbert_schmidt;
  int n = 2;
  int k = 1;
  int s = 0;
  std::vector<double> weights;
  std::vector<double> dims;
  double a = 0.0;
  Field field = Field::complex_field;

  static EnsembleSpec make(EnsembleKind kind, int n) {
    EnsembleSpec spec;
    spec.kind = kind;
    spec.n = n;
    return spec;
  }
};

inline std::vector<double> uniform_weights(int k) {
  return std::vector<double>(static_cast<std::size_t>(k), 1.0 / k);
}

// Rounded integer column dimensions of the factor chain G_1..G_s.
inline std::vector<Eigen::Index> chain_dims(int n, int s,
                                            const std::vector<double>& ratios) {
  std::vector<Eigen::Index> cols(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    const double c = ratios.empty() ? 1.0 : ratios[static_cast<std::size_t>(i)];
    cols[static_cast<std::size_t>(i)] =
        std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::lround(c * n)));
  }
  return cols;
}

inline void validate(const EnsembleSpec& spec) {
  if (spec.n < 1) throw config_error("ensemble: n must be >= 1");
  switch (spec.kind) {
    case EnsembleKind::induced:
      if (spec.k < 1) throw config_error("induced: environment dimension K must be >= 1");
      break;
    case EnsembleKind::arcsine:
      if (spec.n < 2) throw config_error("arcsine: n must be >= 2");
      break;
    case EnsembleKind::k_entangled:
    case EnsembleKind::real_orthogonal_sum:
      if (spec.k < 1) throw config_error("ensemble: k must be >= 1");
      break;
    case EnsembleKind::ginibre_product:
    case EnsembleKind::real_ginibre_product:
      if (spec.s < 1) throw config_error("ensemble: s must be >= 1");
      break;
    case EnsembleKind::generalized:
      if (spec.k < 1) throw config_error("generalized: k must be >= 1");
      if (spec.s < 0) throw config_error("generalized: s must be >= 0");
      break;
    case EnsembleKind::unit_interpolation:
      if (!(spec.a >= 0.0 && spec.a <= 1.0))
        throw config_error("unit_interpolation: a must lie in [0,1]");
      break;
    case EnsembleKind::bures_hs_interpolation:
      if (!(spec.a >= 0.0 && spec.a <= 0.5))
        throw config_error("bures_hs_interpolation: a must lie in [0,1/2]");
      break;
    default:
      break;
  }
  if (!spec.weights.empty()) {
    if (spec.weights.size() != static_cast<std::size_t>(spec.k))
      throw config_error("ensemble: weights length must equal k");
    double sum = 0.0;
    for (double w : spec.weights) {
      if (w < 0.0) throw config_error("ensemble: weights must be nonnegative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw config_error("ensemble: weights must sum to 1");
  }
  if (!spec.dims.empty()) {
    if (spec.dims.size() != static_cast<std::size_t>(spec.s))
      throw config_error("ensemble: dims length must equal s");
    for (double c : spec.dims)
      if (!(c > 0.0)) throw config_error("ensemble: dims ratios must be > 0");
  }
}

// Flat key-value form used by the CLI and in JSON sidecars,
// e.g. "kind=bures n=256 k=1 s=0 a=0 field=complex".
inline std::string to_kv(const EnsembleSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  out << "kind=" << to_string(spec.kind) << " n=" << spec.n << " k=" << spec.k
      << " s=" << spec.s;
  if (!spec.weights.empty()) {
    out << " weights=";
    for (std::size_t i = 0; i < spec.weights.size(); ++i)
      out << (i ? "," : "") << spec.weights[i];
  }
  if (!spec.dims.empty()) {
    out << " dims=";
    for (std::size_t i = 0; i < spec.dims.size(); ++i)
      out << (i ? "," : "") << spec.dims[i];
  }
  out << " a=" << spec.a
      << " field=" << (spec.field == Field::real_field ? "real" : "complex");
  return out.str();
}

inline std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) values.push_back(std::stod(item));
  return values;
}

inline EnsembleSpec ensemble_from_kv(const std::string& text) {
  EnsembleSpec spec;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos)
      throw config_error("ensemble kv: expected key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "kind") spec.kind = ensemble_kind_from_string(value);
    else if (key == "n") spec.n = std::stoi(value);
    else if (key == "k") spec.k = std::stoi(value);
    else if (key == "s") spec.s = std::stoi(value);
    else if (key == "weights") spec.weights = parse_double_list(value);
    else if (key == "dims") spec.dims = parse_double_list(value);
    else if (key == "a") spec.a = std::stod(value);
    else if (key == "field")
      spec.field = (value == "real") ? Field::real_field : Field::complex_field;
    else throw config_error("ensemble kv: unknown key '" + key + "'");
  }
  validate(spec);
  return spec;
}

struct DensityMatrix {
  ComplexMatrix matrix;
  EnsembleSpec spec;
};

// rho = W W^dag / Tr(W W^dag).  Hermitian and unit trace by construction;
// any scalar rescaling of W cancels.
inline ComplexMatrix wishart_normalized(const ComplexMatrix& w) {
  ComplexMatrix rho = w * w.adjoint();
  rho = Complex(0.5, 0.0) * (rho + rho.adjoint().eval());  // scrub roundoff
  const double trace = rho.trace().real();
  if (!(trace > 0.0))
    throw numeric_error("wishart_normalized: Tr(W W^dag) must be positive");
  rho /= trace;
  return rho;
}

// --- individual constructors ------------------------------------------------

// Reduction of a Haar-random pure state on an N x K system: rho = X X^dag
// normalized, X an N x K Ginibre matrix.  Rank is at most min(N, K).
inline DensityMatrix sample_induced(int n, int env_dim, SeededStream& rng) {
  if (n < 1 || env_dim < 1) throw config_error("induced: n, K must be >= 1");
  EnsembleSpec spec = EnsembleSpec::make(EnsembleKind::induced, n);
  spec.k = env_dim;
  return {wishart_normalized(ginibre_complex(n, env_dim, rng)), spec};
}

inline DensityMatrix sample_hilbert_schmidt(int n, SeededStream& rng) {
  EnsembleSpec spec = EnsembleSpec::make(EnsembleKind::hilbert_schmidt, n);
  spec.k = n;
  return {wishart_normalized(ginibre_complex(n, n, rng)), spec};
}

// Symmetric superposition of two random maximally entangled states reduced
// over one party: rho = (2*I + U + U^dag) / (2N + Tr(U + U^dag)) with U Haar.
// The trace term in the denominator is kept exactly; it only becomes
// negligible asymptotically.
inline DensityMatrix sample_arcsine(int n, SeededStream& rng) {
  if (n < 2) throw config_error("arcsine: n must be >= 2");
  const ComplexMatrix u = haar_unitary(n, rng);
  const ComplexMatrix w = ComplexMatrix::Identity(n, n) + u;
  return {wishart_normalized(w),
          EnsembleSpec::make(EnsembleKind::arcsine, n)};
}

// Weighted superposition of k random maximally entangled states:
// W = sum_i p_i U_i.  Uniform weights reproduce the plain k-sum ensemble
// (the overall 1/k cancels in the normalization).
inline DensityMatrix sample_k_entangled(int n, int k, std::vector<double> p,
                                        SeededStream& rng) {
  if (k < 1) throw config_error("k_entangled: k must be >= 1");
  if (p.empty()) p = uniform_weights(k);
  EnsembleSpec spec = EnsembleSpec::make(EnsembleKind::k_entangled, n);
  spec.k = k;
  spec.weights = p;
  validate(spec);
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < k; ++i)
    w += p[static_cast<std::size_t>(i)] * haar_unitary(n, rng);
  return {wishart_normalized(w), spec};
}

// W = (I + U) G with U Haar and G Ginibre.
inline DensityMatrix sample_bures(int n, SeededStream& rng) {
  const ComplexMatrix u = haar_unitary(n, rng);
  const ComplexMatrix g = ginibre_complex(n, n, rng);
  const ComplexMatrix w = (ComplexMatrix::Identity(n, n) + u) * g;
  return {wishart_normalized(w), EnsembleSpec::make(EnsembleKind::bures, n)};
}

// W = G_1 G_2 ... G_s, a rectangular chain N x M_1, M_1 x M_2, ...
inline DensityMatrix sample_ginibre_product(int n, int s,
                                            std::vector<double> ratios,
                                            SeededStream& rng) {
  if (s < 1) throw config_error("ginibre_product: s must be >= 1");
  EnsembleSpec spec = EnsembleSpec::make(EnsembleKind::ginibre_product, n);
  spec.s = s;
  spec.dims = ratios;
  validate(spec);
  const auto cols = chain_dims(n, s, ratios);
  Eigen::Index rows = n;
  ComplexMatrix w = ComplexMatrix::Identity(n, n);
  for (int i = 0; i < s; ++i) {
    w = ComplexMatrix(w * ginibre_complex(rows, cols[static_cast<std::size_t>(i)], rng));
    rows = cols[static_cast<std::size_t>(i)];
  }
  return {wishart_normalized(w), spec};
}

// --- explicit multipartite construction (oracle for the product form) -------

// Applies |Psi+><Psi+| on the adjacent subsystem pair (t, t+1) of a
// 2s-partite amplitude tensor, all subsystems of dimension n.
inline void project_bell_pair(std::vector<Complex>& psi, int num_subsystems,
                              int n, int t) {
  // index = sum_j i_j * n^(num_subsystems-1-j); pair occupies positions t, t+1
  std::int64_t right = 1;
  for (int j = t + 2; j < num_subsystems; ++j) right *= n;
  const std::int64_t pair_stride = right * (n + 1);  // step for i_t = i_{t+1} += 1
  const std::int64_t block = right * n * n;          // size spanned by the pair
  const std::int64_t total = static_cast<std::int64_t>(psi.size());
  for (std::int64_t left = 0; left < total; left += block) {
    for (std::int64_t r = 0; r < right; ++r) {
      Complex sum = 0.0;
      for (int mu = 0; mu < n; ++mu) sum += psi[left + r + mu * pair_stride];
      sum /= static_cast<double>(n);
      for (std::int64_t inner = 0; inner < n * static_cast<std::int64_t>(n); ++inner) {
        const std::int64_t idx = left + r + inner * right;
        psi[idx] = 0.0;
      }
      for (int mu = 0; mu < n; ++mu) psi[left + r + mu * pair_stride] = sum;
    }
  }
}

// Builds the 2s-partite state with amplitudes prod_j (G_j)_{i_{2j-1}, i_{2j}},
// projects the middle pairs (2,3), (4,5), ..., (2s-2,2s-1) onto maximally
// entangled states, normalizes and reduces to the first subsystem.  Produces
// exactly W W^dag / Tr(...) with W = G_1...G_s, so it serves as an
// independent cross-check of sample_ginibre_product.
inline ComplexMatrix projected_multipartite_from_factors(
    const std::vector<ComplexMatrix>& factors, int n) {
  const int s = static_cast<int>(factors.size());
  if (s < 1) throw config_error("projected multipartite: need s >= 1 factors");
  const int num_subsystems = 2 * s;
  double log_size = num_subsystems * std::log2(static_cast<double>(n));
  if (log_size > 20.0 + 1e-9)
    throw config_error("projected multipartite: N^(2s) exceeds the 2^20 guard");
  std::int64_t total = 1;
  for (int j = 0; j < num_subsystems; ++j) total *= n;

  std::vector<Complex> psi(static_cast<std::size_t>(total));
  for (std::int64_t idx = 0; idx < total; ++idx) {
    Complex amp = 1.0;
    std::int64_t rem = idx;
    // decode subsystem indices most-significant first
    std::int64_t div = total / n;
    int sub[64];
    for (int j = 0; j < num_subsystems; ++j) {
      sub[j] = static_cast<int>(rem / div);
      rem %= div;
      if (j + 1 < num_subsystems) div /= n;
    }
    for (int j = 0; j < s; ++j) amp *= factors[static_cast<std::size_t>(j)](sub[2 * j], sub[2 * j + 1]);
    psi[static_cast<std::size_t>(idx)] = amp;
  }

  for (int m = 1; m < s; ++m) project_bell_pair(psi, num_subsystems, n, 2 * m - 1);

  double norm2 = 0.0;
  for (const Complex& c : psi) norm2 += std::norm(c);
  if (!(norm2 > 0.0))
    throw numeric_error("projected multipartite: projected state vanished");

  const std::int64_t rest = total / n;
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int ip = 0; ip < n; ++ip) {
      Complex acc = 0.0;
      for (std::int64_t r = 0; r < rest; ++r)
        acc += psi[static_cast<std::size_t>(i * rest + r)] *
               std::conj(psi[static_cast<std::size_t>(ip * rest + r)]);
      rho(i, ip) = acc / norm2;
    }
  return rho;
}

// Draws the s bipartite factors as first columns of Haar unitaries on n^2
// (each reshaped to n x n) and runs the explicit construction above.
inline DensityMatrix sample_projected_multipartite(int n, int s,
                                                   SeededStream& rng) {
  if (n < 1 || s < 1)
    throw config_error("projected multipartite: n, s must be >= 1");
  std::vector<ComplexMatrix> factors;
  factors.reserve(static_cast<std::size_t>(s));
  for (int j = 0; j < s; ++j) {
    const ComplexMatrix u = haar_unitary(static_cast<Eigen::Index>(n) * n, rng);
    ComplexMatrix g(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) g(a, b) = u(a * n + b, 0);
    factors.push_back(std::move(g));
  }
  EnsembleSpec spec = EnsembleSpec::make(EnsembleKind::ginibre_product, n);
  spec.s = s;
  return {projected_multipartite_from_factors(factors, n), spec};
}

// --- real ensembles ----------------------------------------------------------

inline DensityMatrix sample_real_orthogonal_sum(int n, int k,
                                                SeededStream& rng) {
  if (k < 1) throw config_error("real_orthogonal_sum: k must be >= 1");
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < k; ++i) w += haar_orthogonal(n, rng);
  EnsembleSpec spec = EnsembleSpec::make(EnsembleKind::real_orthogonal_sum, n);
  spec.k = k;
  spec.field = Field::real_field;
  return {wishart_normalized(w), spec};
}

inline DensityMatrix sample_real_ginibre_product(int n, int s,
                                                 SeededStream& rng) {
  if (s < 1) throw config_error("real_ginibre_product: s must be >= 1");
  ComplexMatrix w = ComplexMatrix::Identity(n, n);
  for (int i = 0; i < s; ++i) w = ComplexMatrix(w * ginibre_real(n, n, rng));
  EnsembleSpec spec = EnsembleSpec::make(EnsembleKind::real_ginibre_product, n);
  spec.s = s;
  spec.field = Field::real_field;
  return {wishart_normalized(w), spec};
}

// --- interpolating families --------------------------------------------------

// W_a = a*I + (1-a)*U.  Dirac mass at both endpoints, arcsine at a = 1/2.
inline DensityMatrix sample_unit_interpolation(int n, double a,
                                               SeededStream& rng) {
  if (!(a >= 0.0 && a <= 1.0))
    throw config_error("unit_interpolation: a must lie in [0,1]");
  const ComplexMatrix u = haar_unitary(n, rng);
  const ComplexMatrix w = a * ComplexMatrix::Identity(n, n) + (1.0 - a) * u;
  EnsembleSpec spec = EnsembleSpec::make(EnsembleKind::unit_interpolation, n);
  spec.a = a;
  return {wishart_normalized(w), spec};
}

// W = (a*I + (1-a)*U) G, a in [0, 1/2].  At a = 1/2 the two terms carry
// equal weight and W is proportional to (I + U)G, the Bures construction;
// at a = 0, W = UG is Ginibre-distributed, giving the Hilbert-Schmidt law.
inline DensityMatrix sample_bures_hs_interpolation(int n, double a,
                                                   SeededStream& rng) {
  if (!(a >= 0.0 && a <= 0.5))
    throw config_error("bures_hs_interpolation: a must lie in [0,1/2]");
  const ComplexMatrix u = haar_unitary(n, rng);
  const ComplexMatrix g = ginibre_complex(n, n, rng);
  const ComplexMatrix w =
      (a * ComplexMatrix::Identity(n, n) + (1.0 - a) * u) * g;
  EnsembleSpec spec =
      EnsembleSpec::make(EnsembleKind::bures_hs_interpolation, n);
  spec.a = a;
  return {wishart_normalized(w), spec};
}

// W = (p_1 U_1 + ... + p_k U_k) G_1 ... G_s: the two-parameter family that
// contains every ensemble above as a special case.
inline DensityMatrix sample_generalized(int n, int k, int s,
                                        std::vector<double> p,
                                        SeededStream& rng) {
  if (k < 1) throw config_error("generalized: k must be >= 1");
  if (s < 0) throw config_error("generalized: s must be >= 0");
  if (p.empty()) p = uniform_weights(k);
  EnsembleSpec spec = EnsembleSpec::make(EnsembleKind::generalized, n);
  spec.k = k;
  spec.s = s;
  spec.weights = p;
  validate(spec);
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < k; ++i)
    w += p[static_cast<std::size_t>(i)] * haar_unitary(n, rng);
  for (int j = 0; j < s; ++j) w = ComplexMatrix(w * ginibre_complex(n, n, rng));
  return {wishart_normalized(w), spec};
}

// --- dispatcher ---------------------------------------------------------------

inline DensityMatrix sample(const EnsembleSpec& spec, SeededStream& rng) {
  validate(spec);
  switch (spec.kind) {
    case EnsembleKind::induced:
      return sample_induced(spec.n, spec.k, rng);
    case EnsembleKind::hilbert_schmidt:
      return sample_hilbert_schmidt(spec.n, rng);
    case EnsembleKind::bures:
      return sample_bures(spec.n, rng);
    case EnsembleKind::arcsine:
      return sample_arcsine(spec.n, rng);
    case EnsembleKind::k_entangled:
      return sample_k_entangled(spec.n, spec.k, spec.weights, rng);
    case EnsembleKind::ginibre_product:
      return sample_ginibre_product(spec.n, spec.s, spec.dims, rng);
    case EnsembleKind::generalized:
      return sample_generalized(spec.n, spec.k, spec.s, spec.weights, rng);
    case EnsembleKind::real_orthogonal_sum:
      return sample_real_orthogonal_sum(spec.n, spec.k, rng);
    case EnsembleKind::real_ginibre_product:
      return sample_real_ginibre_product(spec.n, spec.s, rng);
    case EnsembleKind::unit_interpolation:
      return sample_unit_interpolation(spec.n, spec.a, rng);
    case EnsembleKind::bures_hs_interpolation:
      return sample_bures_hs_interpolation(spec.n, spec.a, rng);
  }
  throw config_error("sample: unhandled ensemble kind");
}

// --- spectra ------------------------------------------------------------------

// Eigenvalues of a density matrix as probability weights: descending,
// roundoff negatives within kEigClampTol clamped to zero.
inline Spectrum spectrum_of(const DensityMatrix& rho) {
  Spectrum spec = hermitian_eigenvalues(rho.matrix);
  spec.trace_normalized = true;
  for (double& lambda : spec.lambdas) {
    if (lambda < -kEigClampTol)
      throw numeric_error("spectrum_of: eigenvalue below -1e-12: " +
                          std::to_string(lambda));
    if (lambda < 0.0) lambda = 0.0;
  }
  return spec;
}

// Rescaled eigenvalues x = N * lambda.
inline std::vector<double> rescaled(const Spectrum& spec, int n) {
  std::vector<double> xs;
  xs.reserve(spec.lambdas.size());
  for (double lambda : spec.lambdas) xs.push_back(n * lambda);
  return xs;
}

}  // namespace randrho
