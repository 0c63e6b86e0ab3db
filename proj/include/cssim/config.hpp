#ifndef CSSIM_CONFIG_HPP
#define CSSIM_CONFIG_HPP

#include <string>

#include "cssim/solver.hpp"

namespace cssim {

/// Sectioned key=value run description; parse(print(c)) == c exactly.
///
/// Sections and keys:
///   [model]  model = csh_abelian | csh_adjoint_su2 | csh_adjoint_su3 | csd_abelian
///   [params] kappa, v, m, couplings
///   [data]   epsilon, radius_R, profile
///   [grid]   n, half_width
///   [time]   t_end, cfl_safety, diag_every, project_every
///   [output] out_dir, dump_state
///   [seed]   rng
struct ConfigFile {
  ModelKind model = ModelKind::csh_abelian;

  double kappa = 1;
  double v = 1;  ///< Higgs vacuum parameter (used by the csh models)
  double m = 1;  ///< Dirac mass (used by the csd model)
  bool couplings = true;

  double epsilon = 0.01;
  double radius_R = 1;
  std::string profile = "bump";

  int n = 256;
  double half_width = 10;

  double t_end = 10;
  double cfl_safety = 0.8;
  int diag_every = 10;
  int project_every = 0;

  std::string out_dir = "out";
  bool dump_state = false;

  unsigned long long rng = 0;

  /// Solver-facing view; selects v or m as the mass parameter by model.
  RunConfig run_config() const;
};

bool operator==(const ConfigFile& a, const ConfigFile& b);
inline bool operator!=(const ConfigFile& a, const ConfigFile& b) { return !(a == b); }

/// Parses the sectioned text; throws std::invalid_argument with a line number
/// on malformed input, unknown keys, or violated run invariants.
ConfigFile parse_config(const std::string& text);
/// Reads and parses a file; throws std::invalid_argument when unreadable.
ConfigFile load_config(const std::string& path);
/// Canonical text form; floats carry 17 significant digits.
std::string print_config(const ConfigFile& c);

}  // namespace cssim

#endif
