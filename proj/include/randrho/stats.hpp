#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "randrho/ensembles.hpp"
#include "randrho/errors.hpp"
#include "randrho/laws.hpp"

namespace randrho {

// ---------------------------------------------------------------------------
// Entropy and purity functionals on trace-normalized spectra
// ---------------------------------------------------------------------------

inline void require_trace_normalized(const Spectrum& spec,
                                     const char* caller) {
  if (!spec.trace_normalized)
    throw config_error(std::string(caller) +
                       ": spectrum must be trace-normalized");
}

// von Neumann entropy -sum lambda ln lambda, with 0 ln 0 = 0.
inline double von_neumann_entropy(const Spectrum& spec) {
  require_trace_normalized(spec, "von_neumann_entropy");
  double s = 0.0;
  for (double l : spec.lambdas)
    if (l > 0.0) s -= l * std::log(l);
  return s;
}

inline double purity(const Spectrum& spec) {
  require_trace_normalized(spec, "purity");
  double p = 0.0;
  for (double l : spec.lambdas) p += l * l;
  return p;
}

// Chebyshev entropy -ln lambda_max; equals the geometric measure of
// entanglement of the purification and the q -> inf Renyi limit.
inline double chebyshev_entropy(const Spectrum& spec) {
  require_trace_normalized(spec, "chebyshev_entropy");
  if (spec.lambdas.empty() || !(spec.lambdas.front() > 0.0))
    throw numeric_error("chebyshev_entropy: empty or zero spectrum");
  return -std::log(spec.lambdas.front());
}

inline double geometric_measure(const Spectrum& spec) {
  return chebyshev_entropy(spec);
}

// Renyi entropy (1/(1-q)) ln sum lambda^q, computed in log space so large q
// does not underflow.  q = 1 falls back to von Neumann.
inline double renyi_entropy(const Spectrum& spec, double q) {
  require_trace_normalized(spec, "renyi_entropy");
  if (!(q > 0.0)) throw config_error("renyi_entropy: q must be > 0");
  if (q == 1.0) return von_neumann_entropy(spec);
  const double lmax = spec.lambdas.front();
  if (!(lmax > 0.0)) throw numeric_error("renyi_entropy: zero spectrum");
  double sum = 0.0;
  for (double l : spec.lambdas)
    if (l > 0.0) sum += std::exp(q * (std::log(l) - std::log(lmax)));
  return (q * std::log(lmax) + std::log(sum)) / (1.0 - q);
}

// ---------------------------------------------------------------------------
// Batches
// ---------------------------------------------------------------------------

struct BatchEntry {
  std::uint64_t sample_id = 0;
  Spectrum spectrum;
};

struct SpectrumBatch {
  int n = 0;
  std::vector<BatchEntry> entries;
  EnsembleSpec spec;
  std::uint64_t seed = 0;
};

// Merging is concatenation; every reduction below first sorts by sample id,
// so reports are identical however the batch was assembled or split across
// workers.
inline SpectrumBatch merge(SpectrumBatch left, const SpectrumBatch& right) {
  if (left.n != right.n)
    throw config_error("merge: batches have different N");
  left.entries.insert(left.entries.end(), right.entries.begin(),
                      right.entries.end());
  return left;
}

inline std::vector<const BatchEntry*> entries_by_id(
    const SpectrumBatch& batch) {
  std::vector<const BatchEntry*> ptrs;
  ptrs.reserve(batch.entries.size());
  for (const BatchEntry& e : batch.entries) ptrs.push_back(&e);
  std::sort(ptrs.begin(), ptrs.end(),
            [](const BatchEntry* a, const BatchEntry* b) {
              return a->sample_id < b->sample_id;
            });
  return ptrs;
}

// Kahan compensated accumulator; keeps batch reductions deterministic.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// Pooled rescaled eigenvalues x = N*lambda in sample-id order.
inline std::vector<double> pooled_rescaled(const SpectrumBatch& batch) {
  std::vector<double> xs;
  for (const BatchEntry* e : entries_by_id(batch)) {
    for (double l : e->spectrum.lambdas) xs.push_back(batch.n * l);
  }
  return xs;
}

inline double empirical_moment(const SpectrumBatch& batch, int p) {
  if (batch.entries.empty())
    throw config_error("empirical_moment: empty batch");
  KahanSum acc;
  std::size_t count = 0;
  for (const BatchEntry* e : entries_by_id(batch))
    for (double l : e->spectrum.lambdas) {
      acc.add(std::pow(batch.n * l, p));
      ++count;
    }
  return acc.sum / static_cast<double>(count);
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov distances
// ---------------------------------------------------------------------------

// Continuous-part CDF at every point of a sorted sample, by one anchoring
// quadrature plus incremental integration between consecutive points.  Far
// cheaper than an independent adaptive quadrature per point.
inline std::vector<double> law_cdf_continuous_at_sorted(
    const SpectralLaw& law, const std::vector<double>& sorted_xs) {
  const double continuous_mass = 1.0 - law.atom_mass;
  auto dens = [&law](double t) { return law.density(t); };
  std::vector<double> f(sorted_xs.size(), 0.0);
  double acc = 0.0;
  bool anchored = false;
  double prev = law.lo;
  for (std::size_t i = 0; i < sorted_xs.size(); ++i) {
    const double x = sorted_xs[i];
    if (x <= law.lo) continue;
    const double cur = std::min(x, law.hi);
    if (!anchored) {
      acc = law.cdf_continuous(cur);
      anchored = true;
    } else if (cur > prev) {
      if (cur >= law.hi)
        acc += integrate_to_sqrt_hi(dens, prev, law.hi, 1e-12);
      else
        acc += integrate_adaptive(dens, prev, cur, 1e-12);
    }
    prev = std::max(prev, cur);
    f[i] = std::min(acc, continuous_mass);
  }
  return f;
}

// sup_x |F_n(x) - F(x)| for a sorted sample against the continuous part of
// a law, renormalized to total mass 1 (atoms are matched separately).
// Within-sample eigenvalue correlations make the classical p-value invalid
// here, so this is used as a distance against fixed thresholds, not as a
// formal test.
inline double ks_distance_sorted(const std::vector<double>& sorted_xs,
                                 const SpectralLaw& law) {
  const std::size_t n = sorted_xs.size();
  if (n == 0) throw config_error("ks_distance: no samples");
  // tied samples form a single jump of the empirical CDF, so both one-sided
  // limits are compared per distinct value, not per sample
  double d = 0.0;
  if (law.kind == LawKind::dirac_one) {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j < n && sorted_xs[j] == sorted_xs[i]) ++j;
      const double x = sorted_xs[i];
      d = std::max(d, std::abs(law.cdf(x) - static_cast<double>(j) / n));
      d = std::max(d, std::abs(law.cdf(x) - law.atom_at(x) -
                               static_cast<double>(i) / n));
      i = j;
    }
    return d;
  }
  const double continuous_mass = 1.0 - law.atom_mass;
  const std::vector<double> f = law_cdf_continuous_at_sorted(law, sorted_xs);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && sorted_xs[j] == sorted_xs[i]) ++j;
    const double fi = f[i] / continuous_mass;
    d = std::max(d, std::abs(fi - static_cast<double>(j) / n));
    d = std::max(d, std::abs(fi - static_cast<double>(i) / n));
    i = j;
  }
  return d;
}

inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw config_error("two_sample_ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

// Asymptotic critical coefficient: D* = c(alpha) sqrt((n+m)/(nm)), with
// c(0.01) = 1.6276.
inline constexpr double kKsCoeff1Percent = 1.6276236307187293;

inline double two_sample_ks_threshold_1pct(std::size_t n, std::size_t m) {
  return kKsCoeff1Percent *
         std::sqrt(static_cast<double>(n + m) /
                   (static_cast<double>(n) * static_cast<double>(m)));
}

// ---------------------------------------------------------------------------
// Empirical-vs-analytic comparison
// ---------------------------------------------------------------------------

struct MomentDiff {
  int order = 0;
  double empirical = 0.0;
  double predicted = 0.0;
  double abs_diff = 0.0;
};

struct ComparisonReport {
  std::string law;
  double ks_distance = 0.0;
  std::vector<MomentDiff> moment_diffs;  // orders 1..4
  double entropy_offset_empirical = 0.0;  // <S> - ln N
  double entropy_offset_predicted = 0.0;
  double support_edge_empirical = 0.0;  // mean N * lambda_max
  double support_edge_predicted = 0.0;
  double zero_fraction = 0.0;   // pooled eigenvalues at the origin atom
  double atom_mass = 0.0;
  std::size_t sample_count = 0;
  int n = 0;
};

// Eigenvalues this close to zero (in x units) belong to the point mass at
// the origin, not to the continuous law.
inline constexpr double kZeroEigenvalueX = 1e-8;

inline ComparisonReport compare(const SpectrumBatch& batch,
                                const SpectralLaw& law) {
  if (batch.entries.empty()) throw config_error("compare: empty batch");
  ComparisonReport report;
  report.law = law.id();
  report.n = batch.n;
  report.sample_count = batch.entries.size();
  report.atom_mass = law.atom_mass;
  report.support_edge_predicted = law.hi;
  report.entropy_offset_predicted = law.mean_entropy();

  const auto ordered = entries_by_id(batch);
  std::vector<double> xs;
  KahanSum entropy_acc, edge_acc;
  KahanSum moment_acc[4];
  std::size_t pooled = 0, zeros = 0;
  for (const BatchEntry* e : ordered) {
    entropy_acc.add(von_neumann_entropy(e->spectrum));
    edge_acc.add(batch.n * e->spectrum.lambdas.front());
    for (double l : e->spectrum.lambdas) {
      const double x = batch.n * l;
      ++pooled;
      double xp = 1.0;
      for (int p = 0; p < 4; ++p) {
        xp *= x;
        moment_acc[p].add(xp);
      }
      if (x <= kZeroEigenvalueX) {
        ++zeros;
        continue;
      }
      xs.push_back(x);
    }
  }
  const double n_samples = static_cast<double>(ordered.size());
  report.entropy_offset_empirical =
      entropy_acc.sum / n_samples - std::log(static_cast<double>(batch.n));
  report.support_edge_empirical = edge_acc.sum / n_samples;
  report.zero_fraction = static_cast<double>(zeros) / pooled;
  for (int p = 0; p < 4; ++p) {
    MomentDiff diff;
    diff.order = p + 1;
    diff.empirical = moment_acc[p].sum / static_cast<double>(pooled);
    diff.predicted = law.moment(p + 1);
    diff.abs_diff = std::abs(diff.empirical - diff.predicted);
    report.moment_diffs.push_back(diff);
  }

  // KS over the continuous part: exact zeros are matched against the atom
  // mass separately, and the continuous CDF is renormalized accordingly.
  std::sort(xs.begin(), xs.end());
  if (law.kind == LawKind::dirac_one) {
    std::vector<double> all = pooled_rescaled(batch);
    std::sort(all.begin(), all.end());
    report.ks_distance = ks_distance_sorted(all, law);
  } else if (!xs.empty()) {
    report.ks_distance = ks_distance_sorted(xs, law);
  } else {
    report.ks_distance = 1.0;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Histograms over pooled rescaled eigenvalues
// ---------------------------------------------------------------------------

struct Histogram {
  std::vector<double> edges;   // bins + 1 entries
  std::vector<double> masses;  // sums to 1 over in-range values
};

// Counts pooled x = N*lambda into uniform bins over [lo, hi].  Exact zeros
// belong to the origin atom and are excluded, so the masses describe the
// continuous part; the top edge is inclusive.
inline Histogram histogram(const SpectrumBatch& batch, int bins, double lo,
                           double hi) {
  if (bins < 1) throw config_error("histogram: bins must be >= 1");
  if (!(hi > lo)) throw config_error("histogram: empty range");
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i)
    h.edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  std::size_t total = 0;
  for (const BatchEntry* e : entries_by_id(batch))
    for (double l : e->spectrum.lambdas) {
      const double x = batch.n * l;
      if (x <= kZeroEigenvalueX) continue;
      if (x < lo || x > hi) continue;
      int bin = static_cast<int>((x - lo) / (hi - lo) * bins);
      if (bin == bins) bin = bins - 1;  // top edge inclusive
      ++counts[static_cast<std::size_t>(bin)];
      ++total;
    }
  h.masses.resize(static_cast<std::size_t>(bins), 0.0);
  if (total > 0)
    for (int i = 0; i < bins; ++i)
      h.masses[static_cast<std::size_t>(i)] =
          static_cast<double>(counts[static_cast<std::size_t>(i)]) / total;
  return h;
}

}  // namespace randrho
