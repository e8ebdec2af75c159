#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "census/family.hpp"
#include "census/moduli.hpp"

namespace census::cli {

struct Options {
  uint64_t q = 0;
  int gamma = 0;
  std::string poly;
  int rank = 2;
  long deg = 1;
  int Z = 0;
  int degree_bound = 12;
  int r_max = 4;
  int r = 0;  ///< 0: every order up to r_max
  std::vector<double> tau;
  uint64_t samples = 0;
  bool exhaustive = false;
  uint64_t seed = 1;
  int threads = 0;
  std::string out;
  std::string cache_dir;
  std::string beta1_variant = "paper";
  std::string strata = "rational";
  std::string ntilde_reading = "base";
  std::string theory_kind;
  bool verbose = false;
};

/// Monic curve from --q/--poly (constant term first, leading 1 implicit).
HyperellipticCurve parse_curve(const Options& o);
std::vector<uint64_t> parse_labels(const std::string& s);

int cmd_curve(const Options& o, std::ostream& out);
int cmd_moduli(const Options& o, std::ostream& out);
int cmd_stable20(const Options& o, std::ostream& out);
int cmd_ntilde(const Options& o, std::ostream& out);
int cmd_survey(const Options& o, std::ostream& out);
int cmd_theory(const Options& o, std::ostream& out);
int cmd_check(const Options& o, std::ostream& out);

}  // namespace census::cli
