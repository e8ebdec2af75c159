#include <CLI11.hpp>

#include <iostream>

#include "census/errors.hpp"
#include "commands.hpp"

using census::cli::Options;

namespace {

const char* kPolyHelp =
    "F as comma-separated coefficient labels, constant term first. The leading 1 is implicit; "
    "a trailing 1 in a list of 6 or more labels is read as the leading coefficient unless --gamma says otherwise. "
    "Over F_{p^e} the label of c_0 + c_1 t + ... is c_0 + c_1 p + ...";

void curve_flags(CLI::App* c, Options& o) {
  c->add_option("--q", o.q, "field order (odd prime power)")->required();
  c->add_option("--poly", o.poly, kPolyHelp)->required();
  c->add_option("--gamma", o.gamma, "degree of F");
  c->add_option("--cache-dir", o.cache_dir, "L-polynomial cache directory (MODULI_CENSUS_CACHE wins)");
  c->add_option("--out", o.out, "also write the JSON line to this file");
  c->add_flag("--verbose", o.verbose, "report point-count calls and cache use on stderr");
}

void moduli_flags(CLI::App* c, Options& o) {
  c->add_option("--strata", o.strata, "Kummer strata counts: rational or printed")->check(CLI::IsMember({"rational", "printed"}));
  c->add_option("--beta1-variant", o.beta1_variant, "paper or reference")->check(CLI::IsMember({"paper", "reference"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moduli-census: point counts of moduli spaces of bundles over hyperelliptic curves"};
  app.require_subcommand(1);
  Options o;

  auto* curve = app.add_subcommand("curve", "point counts, L-polynomial, Jacobian orders, zeta values");
  curve_flags(curve, o);

  auto* moduli = app.add_subcommand("moduli", "N_q(M_L(n,d)) for gcd(n,d) = 1");
  curve_flags(moduli, o);
  moduli->add_option("--rank", o.rank, "n");
  moduli->add_option("--deg", o.deg, "d");

  auto* stable = app.add_subcommand("stable20", "N_q(M^s_O(2,0))");
  curve_flags(stable, o);
  moduli_flags(stable, o);

  auto* ntilde = app.add_subcommand("ntilde", "N_q of the desingularization of M_O(2,0)");
  curve_flags(ntilde, o);
  moduli_flags(ntilde, o);
  ntilde->add_option("--ntilde-reading", o.ntilde_reading, "base or base-change")
      ->check(CLI::IsMember({"base", "base-change"}));

  auto* survey = app.add_subcommand("survey", "family survey: JSONL records and a CSV moment summary");
  survey->add_option("--q", o.q, "field order")->required();
  survey->add_option("--gamma", o.gamma, "degree of F (>= 5)")->required();
  survey->add_flag("--exhaustive", o.exhaustive, "every squarefree monic F (q^gamma <= 10^7)");
  survey->add_option("--samples", o.samples, "number of sampled curves");
  survey->add_option("--seed", o.seed, "sampling seed");
  survey->add_option("--Z", o.Z, "Delta_Z truncation (default gamma)");
  survey->add_option("--rank", o.rank, "n for the M_L(n,d) statistic");
  survey->add_option("--deg", o.deg, "d for the M_L(n,d) statistic");
  survey->add_option("--r-max", o.r_max, "highest moment order");
  survey->add_option("--degree-bound", o.degree_bound, "prime degree bound D for H(r)");
  survey->add_option("--threads", o.threads, "OpenMP threads (output does not depend on it)");
  survey->add_option("--out", o.out, "output prefix: PREFIX.jsonl, PREFIX.csv, PREFIX.config.json");
  survey->add_option("--cache-dir", o.cache_dir, "L-polynomial cache directory (MODULI_CENSUS_CACHE wins)");
  survey->add_flag("--verbose", o.verbose, "report point-count calls and cache use on stderr");
  moduli_flags(survey, o);
  survey->add_option("--ntilde-reading", o.ntilde_reading, "base or base-change")
      ->check(CLI::IsMember({"base", "base-change"}));

  auto* theory = app.add_subcommand("theory", "H(r) in both forms, or the characteristic function");
  theory->add_option("kind", o.theory_kind, "hr or phi")->required()->check(CLI::IsMember({"hr", "phi"}));
  theory->add_option("--q", o.q, "q")->required();
  theory->add_option("--r", o.r, "single moment order");
  theory->add_option("--r-max", o.r_max, "highest moment order, or number of primes in phi");
  theory->add_option("--degree-bound", o.degree_bound, "prime degree bound D");
  theory->add_option("--tau", o.tau, "tau values for phi")->delimiter(',');

  auto* check = app.add_subcommand("check", "run the invariant suite");
  check->add_option("--cache-dir", o.cache_dir, "also verify this cache");
  moduli_flags(check, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*curve) return census::cli::cmd_curve(o, std::cout);
    if (*moduli) return census::cli::cmd_moduli(o, std::cout);
    if (*stable) return census::cli::cmd_stable20(o, std::cout);
    if (*ntilde) return census::cli::cmd_ntilde(o, std::cout);
    if (*survey) return census::cli::cmd_survey(o, std::cout);
    if (*theory) return census::cli::cmd_theory(o, std::cout);
    if (*check) return census::cli::cmd_check(o, std::cout);
  } catch (const census::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 5;
  }
  return 2;
}
