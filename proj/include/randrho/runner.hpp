#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "randrho/channels.hpp"
#include "randrho/ensembles.hpp"
#include "randrho/errors.hpp"
#include "randrho/laws.hpp"
#include "randrho/stats.hpp"

namespace randrho {

using json = nlohmann::json;

enum class Command { sample, density, moments, compare, table1, channel };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::sample: return "sample";
    case Command::density: return "density";
    case Command::moments: return "moments";
    case Command::compare: return "compare";
    case Command::table1: return "table1";
    case Command::channel: return "channel";
  }
  return "?";
}

struct RunConfig {
  Command command = Command::sample;
  EnsembleSpec ensemble;
  int n_samples = 100;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out;             // empty = stdout
  std::string format = "csv";  // csv | json
  int bins = 0;                // 0 = no histogram; grid size for density
  std::string law;             // optional law override: dirac|arcsine|nu_k|mp|bures|fc
  double law_c = 1.0;          // mp ratio when law=mp
  int max_order = 4;           // moments command
};

// 17 significant digits: enough for exact double round-trips.
inline std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline json config_to_json(const RunConfig& config) {
  json j;
  j["command"] = to_string(config.command);
  j["ensemble"] = to_kv(config.ensemble);
  j["n_samples"] = config.n_samples;
  j["seed"] = config.seed;
  j["workers"] = config.workers;
  j["format"] = config.format;
  j["bins"] = config.bins;
  if (!config.law.empty()) {
    j["law"] = config.law;
    j["law_c"] = config.law_c;
  }
  j["max_order"] = config.max_order;
  return j;
}

inline void validate(const RunConfig& config) {
  if (config.n_samples < 1) throw config_error("n_samples must be >= 1");
  if (config.workers < 1) throw config_error("workers must be >= 1");
  if (config.format != "csv" && config.format != "json")
    throw config_error("format must be csv or json");
  validate(config.ensemble);
}

// ---------------------------------------------------------------------------
// Output plumbing: data goes to --out (with a <out>.meta.json sidecar) or to
// stdout with the config embedded as a leading comment line.
// ---------------------------------------------------------------------------

struct OutputTarget {
  std::string path;  // empty = stdout

  void write(const std::string& payload, const RunConfig& config,
             bool comment_header) const {
    if (path.empty()) {
      if (comment_header)
        std::cout << "# config: " << config_to_json(config).dump() << "\n";
      std::cout << payload;
      std::cout.flush();
      return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw config_error("cannot open output file: " + path);
    file << payload;
    std::ofstream meta(path + ".meta.json", std::ios::binary);
    meta << config_to_json(config).dump(2) << "\n";
  }
};

// ---------------------------------------------------------------------------
// Batch generation: one stream per sample (stream id = sample id), workers
// partition the id range, so results do not depend on the worker count.
// ---------------------------------------------------------------------------

inline SpectrumBatch generate_batch(const EnsembleSpec& spec, int n_samples,
                                    std::uint64_t seed, int workers) {
  SpectrumBatch batch;
  batch.n = spec.n;
  batch.spec = spec;
  batch.seed = seed;
  batch.entries.resize(static_cast<std::size_t>(n_samples));
  auto work = [&](int worker) {
    for (int i = worker; i < n_samples; i += workers) {
      SeededStream rng(seed, static_cast<std::uint64_t>(i));
      const DensityMatrix rho = sample(spec, rng);
      batch.entries[static_cast<std::size_t>(i)] = {
          static_cast<std::uint64_t>(i), spectrum_of(rho)};
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }
  return batch;
}

// ---------------------------------------------------------------------------
// Law selection
// ---------------------------------------------------------------------------

inline SpectralLaw law_from_name(const std::string& name,
                                 const RunConfig& config) {
  if (name == "dirac" || name == "dirac_one") return law_dirac();
  if (name == "arcsine") return law_arcsine();
  if (name == "nu_k") return law_nu_k(config.ensemble.k);
  if (name == "mp") return law_mp(config.law_c);
  if (name == "bures") return law_bures();
  if (name == "fc" || name == "fuss_catalan")
    return law_fuss_catalan(config.ensemble.s);
  throw config_error("unknown law: " + name);
}

inline SpectralLaw comparison_law(const RunConfig& config) {
  if (!config.law.empty()) return law_from_name(config.law, config);
  const auto law = asymptotic_law(config.ensemble);
  if (!law)
    throw config_error(
        "no asymptotic law is tabulated for this ensemble; pass --law");
  return *law;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

inline int run_sample(const RunConfig& config) {
  const SpectrumBatch batch = generate_batch(config.ensemble, config.n_samples,
                                             config.seed, config.workers);
  std::ostringstream out;
  if (config.format == "json") {
    json rows = json::array();
    for (const BatchEntry* e : entries_by_id(batch))
      for (std::size_t idx = 0; idx < e->spectrum.lambdas.size(); ++idx) {
        const double lambda = e->spectrum.lambdas[idx];
        rows.push_back({{"sample_id", e->sample_id},
                        {"eig_index", idx},
                        {"lambda", lambda},
                        {"x", batch.n * lambda}});
      }
    json j;
    j["config"] = config_to_json(config);
    j["rows"] = rows;
    out << j.dump(2) << "\n";
  } else {
    out << "sample_id,eig_index,lambda,x\n";
    for (const BatchEntry* e : entries_by_id(batch))
      for (std::size_t idx = 0; idx < e->spectrum.lambdas.size(); ++idx) {
        const double lambda = e->spectrum.lambdas[idx];
        out << e->sample_id << "," << idx << "," << fmt17(lambda) << ","
            << fmt17(batch.n * lambda) << "\n";
      }
  }
  OutputTarget{config.out}.write(out.str(), config, config.format == "csv");
  return 0;
}

inline int run_density(const RunConfig& config) {
  if (config.law.empty()) throw config_error("density: --law is required");
  const SpectralLaw law = law_from_name(config.law, config);
  const int points = config.bins > 0 ? config.bins : 512;
  std::ostringstream out;
  out << "x,density\n";
  // midpoint grid strictly inside the support; endpoint singularities are
  // never evaluated
  for (int i = 0; i < points; ++i) {
    const double x = law.lo + (law.hi - law.lo) * (i + 0.5) / points;
    out << fmt17(x) << "," << fmt17(law.density(x)) << "\n";
  }
  RunConfig annotated = config;
  OutputTarget{config.out}.write(out.str(), annotated, true);
  if (!config.out.empty()) {
    // the sidecar written by OutputTarget lacks law/atom details; extend it
    json meta = config_to_json(config);
    meta["law_id"] = law.id();
    meta["support"] = {law.lo, law.hi};
    meta["atom"] = {{"location", law.kind == LawKind::dirac_one ? 1.0 : 0.0},
                    {"mass", law.kind == LawKind::dirac_one ? 1.0
                                                            : law.atom_mass}};
    std::ofstream metafile(config.out + ".meta.json", std::ios::binary);
    metafile << meta.dump(2) << "\n";
  }
  return 0;
}

inline int run_moments(const RunConfig& config) {
  if (config.law.empty()) throw config_error("moments: --law is required");
  if (config.max_order < 0) throw config_error("moments: max order >= 0");
  json j;
  j["config"] = config_to_json(config);
  json values = json::array();
  if (config.law == "fc" || config.law == "fuss_catalan") {
    j["law"] = "fuss_catalan(s=" + std::to_string(config.ensemble.s) + ")";
    for (int m = 0; m <= config.max_order; ++m)
      values.push_back(fc_moment(config.ensemble.s, m));
  } else if (config.law == "nu_k") {
    j["law"] = "nu_k(k=" + std::to_string(config.ensemble.k) + ")";
    for (int m = 0; m <= config.max_order; ++m)
      values.push_back(nu_k_moment(m, config.ensemble.k));
  } else {
    const SpectralLaw law = law_from_name(config.law, config);
    j["law"] = law.id();
    for (int m = 0; m <= config.max_order; ++m)
      values.push_back(law.moment(m));
  }
  j["moments"] = values;
  OutputTarget{config.out}.write(j.dump(2) + "\n", config, false);
  return 0;
}

inline json report_to_json(const ComparisonReport& report) {
  json j;
  j["law"] = report.law;
  j["ks_distance"] = report.ks_distance;
  for (const MomentDiff& m : report.moment_diffs) {
    const std::string key = "m" + std::to_string(m.order);
    j[key + "_empirical"] = m.empirical;
    j[key + "_predicted"] = m.predicted;
    j[key + "_abs_diff"] = m.abs_diff;
  }
  j["entropy_offset_empirical"] = report.entropy_offset_empirical;
  j["entropy_offset_predicted"] = report.entropy_offset_predicted;
  j["support_edge_empirical"] = report.support_edge_empirical;
  j["support_edge_predicted"] = report.support_edge_predicted;
  j["zero_fraction"] = report.zero_fraction;
  j["atom_mass"] = report.atom_mass;
  j["sample_count"] = report.sample_count;
  j["n"] = report.n;
  return j;
}

inline int run_compare(const RunConfig& config) {
  const SpectralLaw law = comparison_law(config);
  if (config.bins > 0 && config.out.empty())
    throw config_error("compare: --bins requires --out for the histogram CSV");
  const SpectrumBatch batch = generate_batch(config.ensemble, config.n_samples,
                                             config.seed, config.workers);
  const ComparisonReport report = compare(batch, law);
  json j = report_to_json(report);
  j["config"] = config_to_json(config);
  OutputTarget{config.out}.write(j.dump(2) + "\n", config, false);
  if (config.bins > 0) {
    const Histogram h = histogram(batch, config.bins, law.lo, law.hi);
    std::ostringstream hist;
    hist << "bin_lo,bin_hi,mass\n";
    for (int i = 0; i < config.bins; ++i)
      hist << fmt17(h.edges[static_cast<std::size_t>(i)]) << ","
           << fmt17(h.edges[static_cast<std::size_t>(i) + 1]) << ","
           << fmt17(h.masses[static_cast<std::size_t>(i)]) << "\n";
    std::ofstream file(config.out + ".hist.csv", std::ios::binary);
    if (!file) throw config_error("cannot open histogram output");
    file << hist.str();
  }
  return 0;
}

// ---------------------------------------------------------------------------
// table1: predicted vs empirical spectral statistics for the standard rows
// of the generalized (k, s) family
// ---------------------------------------------------------------------------

struct Table1Row {
  int k;
  int s;
  std::string w_label;
  std::string p_label;
  std::string singularity;
};

inline std::vector<Table1Row> table1_rows() {
  return {
      {1, 0, "U1", "dirac_one", "--"},
      {2, 0, "U1+U2", "arcsine", "x^-1/2"},
      {3, 0, "U1+U2+U3", "nu_3", "x^-1/2"},
      {4, 0, "U1+..+U4", "nu_4", "x^-1/2"},
      {1, 1, "G", "mp", "x^-1/2"},
      {2, 1, "(U1+U2)G", "bures", "x^-2/3"},
      {1, 2, "G1G2", "fc_2", "x^-2/3"},
      {1, 3, "G1G2G3", "fc_3", "x^-3/4"},
  };
}

inline int run_table1(const RunConfig& config) {
  json rows_json = json::array();
  std::ostringstream text;
  char line[256];
  std::snprintf(line, sizeof(line), "%-2s %-2s %-11s %-10s | %9s %9s | %7s %7s | %8s %8s | %7s\n",
                "k", "s", "W", "P(x)", "edge_pred", "edge_emp", "M2_pred",
                "M2_emp", "ent_pred", "ent_emp", "ks");
  text << line;
  for (const Table1Row& row : table1_rows()) {
    EnsembleSpec spec = EnsembleSpec::make(EnsembleKind::generalized, config.ensemble.n);
    spec.k = row.k;
    spec.s = row.s;
    const SpectralLaw law = *asymptotic_law(spec);
    const SpectrumBatch batch =
        generate_batch(spec, config.n_samples, config.seed, config.workers);
    const ComparisonReport report = compare(batch, law);
    // second moments in closed form: nu_k rows give 2 - 1/k, products s + 1
    const double m2_pred =
        row.s == 0 ? (row.k == 1 ? 1.0 : 2.0 - 1.0 / row.k)
                   : (row.k == 2 ? 2.5 : row.s + 1.0);
    json r;
    r["k"] = row.k;
    r["s"] = row.s;
    r["w"] = row.w_label;
    r["law"] = law.id();
    r["singularity"] = row.singularity;
    r["support_edge_predicted"] = report.support_edge_predicted;
    r["support_edge_empirical"] = report.support_edge_empirical;
    r["m2_predicted"] = m2_pred;
    r["m2_empirical"] = report.moment_diffs[1].empirical;
    r["entropy_offset_predicted"] = report.entropy_offset_predicted;
    r["entropy_offset_empirical"] = report.entropy_offset_empirical;
    r["ks_distance"] = report.ks_distance;
    if (row.k == 4 && row.s == 0)
      r["note"] = "M2 = 2 - 1/k = 7/4";
    rows_json.push_back(r);
    std::snprintf(line, sizeof(line),
                  "%-2d %-2d %-11s %-10s | %9.4f %9.4f | %7.4f %7.4f | %8.4f %8.4f | %7.4f\n",
                  row.k, row.s, row.w_label.c_str(), row.p_label.c_str(),
                  report.support_edge_predicted, report.support_edge_empirical,
                  m2_pred, report.moment_diffs[1].empirical,
                  report.entropy_offset_predicted,
                  report.entropy_offset_empirical, report.ks_distance);
    text << line;
  }
  json j;
  j["config"] = config_to_json(config);
  j["rows"] = rows_json;
  if (config.out.empty()) {
    if (config.format == "json")
      std::cout << j.dump(2) << "\n";
    else
      std::cout << text.str();
    std::cout.flush();
  } else {
    OutputTarget{config.out}.write(j.dump(2) + "\n", config, false);
    std::cout << text.str();
    std::cout.flush();
  }
  return 0;
}

inline int run_channel(const RunConfig& config) {
  const int n = config.ensemble.n;
  EnsembleSpec omega_spec = config.ensemble;
  omega_spec.n = n * n;
  if (omega_spec.kind == EnsembleKind::induced && config.ensemble.k == 1)
    omega_spec.k = n * n;  // flat measure over operations by default
  validate(omega_spec);
  SeededStream rng(config.seed, 0);
  const ChoiState choi = random_operation(n, omega_spec, rng);

  std::ostringstream out;
  for (Eigen::Index i = 0; i < choi.sigma.rows(); ++i) {
    for (Eigen::Index j = 0; j < choi.sigma.cols(); ++j) {
      if (j) out << ",";
      out << fmt17(choi.sigma(i, j).real()) << ","
          << fmt17(choi.sigma(i, j).imag());
    }
    out << "\n";
  }
  OutputTarget{config.out}.write(out.str(), config, true);

  const Spectrum spectrum = hermitian_eigenvalues(choi.sigma);
  json report;
  report["config"] = config_to_json(config);
  report["n"] = n;
  report["omega_ensemble"] = to_kv(omega_spec);
  report["lambda_min"] = spectrum.lambdas.back();
  report["tp_deviation"] = tp_deviation(choi);
  report["cptp"] = spectrum.lambdas.back() >= -1e-10 &&
                   tp_deviation(choi) < 1e-10;
  const std::string report_path =
      config.out.empty() ? "" : config.out + ".report.json";
  if (report_path.empty()) {
    std::cout << report.dump(2) << "\n";
    std::cout.flush();
  } else {
    std::ofstream file(report_path, std::ios::binary);
    if (!file) throw config_error("cannot open report output");
    file << report.dump(2) << "\n";
  }
  return 0;
}

inline int run(const RunConfig& config) {
  validate(config);
  switch (config.command) {
    case Command::sample: return run_sample(config);
    case Command::density: return run_density(config);
    case Command::moments: return run_moments(config);
    case Command::compare: return run_compare(config);
    case Command::table1: return run_table1(config);
    case Command::channel: return run_channel(config);
  }
  throw config_error("unknown command");
}

// Maps library exceptions onto the CLI exit-code contract:
// 0 success, 2 configuration error, 3 numerical-invariant failure.
inline int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const config_error*>(&error)) return 2;
  return 3;
}

}  // namespace randrho
