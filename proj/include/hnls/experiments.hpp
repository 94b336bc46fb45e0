#pragma once

// Experiment drivers behind the hnls_lab command line: configuration,
// result rows and the five subcommands. Every row carries a value and a
// tolerance and passes iff value <= tolerance; informational rows use an
// infinite tolerance.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "hnls/solver.hpp"

namespace hnls::lab {

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kInfo = std::numeric_limits<double>::infinity();

struct ResultRow {
  std::string experiment_id;
  std::string quantity;
  double t = kUnset;
  double n = kUnset;
  double k = kUnset;
  double s = kUnset;
  double p = kUnset;
  double value = 0.0;
  double tolerance = kInfo;
  bool pass = true;
};

struct Indices {
  double t = kUnset, n = kUnset, k = kUnset, s = kUnset, p = kUnset;
};

ResultRow make_row(std::string experiment_id, std::string quantity,
                   const Indices& at, double value, double tolerance);

struct ExperimentConfig {
  EquationParams equation{1.0, 1.0};
  int points = 512;
  double length = 64 * kPi;
  FieldRecipe field{};  // gaussian, amplitude 0.05, width 4 by default
  double horizon = 1.0;
  double dt = 0.0;      // 0: default_time_step
  int snapshots = 4;    // intervals between recorded snapshots
  Dealias dealias = Dealias::pad_double;
  std::vector<double> k_list{1.0, 2.0};
  AlphaMethod alpha_method = AlphaMethod::logdet;
  int operator_points = 0;
  int n_min = -2;
  int n_max = 2;
  std::vector<double> s_list{0.0};
  std::vector<double> p_list{2.0, 4.0, 8.0};
  std::vector<double> epsilon_list{0.01, 0.05};
  std::vector<std::string> suites{"traces", "identities", "lemmas", "norms"};
  std::uint64_t seed = 1;
  double tolerance_scale = 1.0;

  ExperimentConfig();
  void validate() const;
  SpatialGrid grid() const { return SpatialGrid(points, length); }
};

// Reads a JSON document; keys that are absent keep their defaults. Unknown
// keys raise InvalidParameterError.
ExperimentConfig config_from_json(const nlohmann::json& doc);
// Every field, defaults included.
nlohmann::json config_to_json(const ExperimentConfig& config);

struct RunOutput {
  std::vector<ResultRow> rows;
  bool aborted = false;  // numerical abort (blow-up); rows are partial
  std::string message;
  bool all_pass() const;
};

RunOutput run_verify(const ExperimentConfig& config);
RunOutput run_simulate(const ExperimentConfig& config);
RunOutput run_alpha_scan(const ExperimentConfig& config);
RunOutput run_apriori(const ExperimentConfig& config);
RunOutput run_norms(const ExperimentConfig& config);

inline const char* kCsvHeader =
    "experiment_id,quantity,t,n,k,s,p,value,tolerance,pass";
std::string to_csv(const std::vector<ResultRow>& rows);

// Explicit constants for the inequality chain of the boost family with
// sharp cubes and s = 0 (see alpha-scan). All are upper bounds that hold
// for every field on the grid while hs_A < 1.
struct ChainConstants {
  double hs = 0.0;          // C with hs^2 <= C W on the grid
  double m_k = 0.0;         // max(1, 1/|k|): W(u_n) <= m_k r_n
  double quad_upper = 0.0;  // quadratic_n <= quad_upper w_n
  double quad_lower = 0.0;  // quadratic_n >= quad_lower w_n
  double young_w = 0.0;     // ||w_n||_{p/2} <= young_w ||u||^2_{M^{2,p}}
  double young_r = 0.0;     // ||r_n||_p <= young_r ||u||^2_{M^{2,p}}
  double cube_lower = 4.0 / 9.0;  // w_n >= cube_lower ||Pi_n u||^2
};

ChainConstants chain_constants(const SpatialGrid& grid, double k, double p);

}  // namespace hnls::lab
