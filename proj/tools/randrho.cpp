// Command-line front end: sampling runs, density tabulation, moment tables,
// empirical-vs-analytic comparison reports, the standard-row summary table
// and random-channel generation.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "randrho/runner.hpp"

namespace {

void add_ensemble_flags(CLI::App* cmd, randrho::RunConfig& config,
                        std::string& kind, std::string& weights,
                        std::string& dims, std::string& field) {
  cmd->add_option("--kind", kind,
                  "ensemble kind (induced, hilbert_schmidt, bures, arcsine, "
                  "k_entangled, ginibre_product, generalized, "
                  "real_orthogonal_sum, real_ginibre_product, "
                  "unit_interpolation, bures_hs_interpolation)");
  cmd->add_option("--n", config.ensemble.n, "principal dimension N");
  cmd->add_option("--k", config.ensemble.k,
                  "number of unitary summands; environment dimension K for "
                  "kind=induced");
  cmd->add_option("--s", config.ensemble.s, "number of Ginibre factors");
  cmd->add_option("--weights", weights,
                  "comma-separated probability vector over the k summands");
  cmd->add_option("--dims", dims,
                  "comma-separated ratios c_i = M_i/N of the factor chain");
  cmd->add_option("--a", config.ensemble.a, "interpolation parameter");
  cmd->add_option("--field", field, "complex or real");
}

void add_run_flags(CLI::App* cmd, randrho::RunConfig& config) {
  cmd->add_option("--samples", config.n_samples, "number of samples");
  cmd->add_option("--seed", config.seed, "base seed");
  cmd->add_option("--workers", config.workers, "worker threads");
  cmd->add_option("--bins", config.bins, "histogram bins / grid points");
  cmd->add_option("--format", config.format, "csv or json");
  cmd->add_option("--out", config.out, "output path (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  randrho::RunConfig config;
  std::string kind = "hilbert_schmidt";
  std::string weights, dims, field = "complex";

  CLI::App app{"random density matrix laboratory"};
  app.require_subcommand(1);

  CLI::App* sample = app.add_subcommand("sample", "sample spectra to CSV");
  CLI::App* density =
      app.add_subcommand("density", "tabulate an analytic spectral density");
  CLI::App* moments =
      app.add_subcommand("moments", "analytic moment table (fc, nu_k)");
  CLI::App* compare = app.add_subcommand(
      "compare", "sample an ensemble and compare against its asymptotic law");
  CLI::App* table1 = app.add_subcommand(
      "table1", "predicted vs empirical summary for the standard (k,s) rows");
  CLI::App* channel =
      app.add_subcommand("channel", "generate a random quantum operation");

  for (CLI::App* cmd : {sample, compare, channel})
    add_ensemble_flags(cmd, config, kind, weights, dims, field);
  for (CLI::App* cmd : {sample, compare, table1, channel})
    add_run_flags(cmd, config);
  table1->add_option("--n", config.ensemble.n, "principal dimension N");

  for (CLI::App* cmd : {density, moments, compare}) {
    cmd->add_option("--law", config.law,
                    "law name: dirac, arcsine, nu_k, mp, bures, fc");
    cmd->add_option("--c", config.law_c, "ratio parameter for --law mp");
  }
  for (CLI::App* cmd : {density, moments}) {
    cmd->add_option("--k", config.ensemble.k, "k parameter for --law nu_k");
    cmd->add_option("--s", config.ensemble.s, "s parameter for --law fc");
  }
  for (CLI::App* cmd : {density, moments}) {
    cmd->add_option("--bins", config.bins, "grid points (density)");
    cmd->add_option("--format", config.format, "csv or json");
    cmd->add_option("--out", config.out, "output path (default: stdout)");
  }
  moments->add_option("--max-order", config.max_order,
                      "highest moment order to tabulate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    nlohmann::json err{{"error", e.what()}, {"code", 2}};
    std::cerr << err.dump() << "\n";
    return 2;
  }

  try {
    if (sample->parsed()) config.command = randrho::Command::sample;
    if (density->parsed()) config.command = randrho::Command::density;
    if (moments->parsed()) config.command = randrho::Command::moments;
    if (compare->parsed()) config.command = randrho::Command::compare;
    if (table1->parsed()) config.command = randrho::Command::table1;
    if (channel->parsed()) config.command = randrho::Command::channel;
    config.ensemble.kind = randrho::ensemble_kind_from_string(kind);
    if (!weights.empty())
      config.ensemble.weights = randrho::parse_double_list(weights);
    if (!dims.empty()) config.ensemble.dims = randrho::parse_double_list(dims);
    if (field == "real")
      config.ensemble.field = randrho::Field::real_field;
    else if (field != "complex")
      throw randrho::config_error("field must be complex or real");
    return randrho::run(config);
  } catch (const std::exception& e) {
    const int code = randrho::exit_code_for(e);
    nlohmann::json err{{"error", e.what()}, {"code", code}};
    std::cerr << err.dump() << "\n";
    return code;
  }
}
