#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hwgrowth/measures.hpp"
#include "hwgrowth/numerics.hpp"

namespace hwgrowth::cli {

enum class Command { kernel_table, s_constant, eval, verify_bounds, verify_type, gen_zeros };

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNonConvergence = 3;

struct GridSpec {
  double r_min = 0.1;
  double r_max = 100.0;
  int count = 16;
  bool log_spacing = true;

  /// Throws DomainError on an invalid grid.
  std::vector<double> radii() const;
};

struct RunConfig {
  Command command = Command::s_constant;
  std::optional<std::string> input_path;
  std::optional<std::string> output_path;
  std::vector<double> rho;  // s-constant accepts several
  std::optional<int> q;
  GridSpec grid;
  QuadratureSettings quad;
  std::optional<std::uint64_t> seed;
  std::string format = "json";  // verify-* output: json | csv

  // eval
  std::string eval_mode = "points";  // points | circle
  int thetas = 8;

  // verify-bounds random sweep
  int trials = 1;
  int max_atoms = 50;

  // gen-zeros / verify-type synthetic measure
  double sigma = 1.0;
  int count = 0;
  AngleRule angle_rule = AngleRule::fixed();
};

/// Applies HWGROWTH_ABS_TOL, HWGROWTH_REL_TOL and HWGROWTH_MAX_SUBDIVISIONS.
QuadratureSettings quadrature_from_environment();

/// Parses argv and runs. Returns the process exit status.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs a parsed configuration; output goes to config.output_path or `out`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// The random measure used by seeded verify-bounds sweeps: 1..max_atoms atoms
/// with radii uniform in [0.5, 50], uniform angles and masses in [0.5, 2].
DiscreteMeasure random_measure(std::mt19937_64& rng, int max_atoms);

}  // namespace hwgrowth::cli
