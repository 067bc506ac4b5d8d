#pragma once

// Configuration, reports and subcommands of the whfact tool.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "whf/error.hpp"
#include "whf/gravity.hpp"

namespace whf::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitNonCanonical = 2;
inline constexpr int kExitDegenerate = 3;
inline constexpr int kExitMultiplicity = 4;
inline constexpr int kExitBadConfig = 64;

int exit_code(ErrorKind kind);

struct GridSpec {
  double rho_min = 0.0, rho_max = 0.0;
  int rho_n = 1;
  double v_min = 0.0, v_max = 0.0;
  int v_n = 1;

  std::vector<std::pair<double, double>> points() const;  // rho-major
};

struct RunConfig {
  std::string family;
  MonodromySpec spec;
  double margin = kBranchMargin;
  GridSpec grid;
  double verify_tol = 1e-10;
  double quadrature_tol = 1e-4;
  double fd_step = kFdStep;
  std::string report_path;
  std::string table_path;
  int workers = 0;  // 0: available parallelism

  /// Reference point: the family's calibration point, or the grid's minimum corner for custom families.
  std::pair<double, double> reference_point() const;
};

/// Strict parse; unknown keys and ill-typed values throw Error(BadConfig).
RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);
json poly_to_json(const CPoly& p);
CPoly poly_from_json(const json& j);
json rational_to_json(const CRational& r);
CRational rational_from_json(const json& j);

/// Full factorisation report at one point; "status" is "ok" or the error kind.
json factorization_report(const RunConfig& cfg, double rho, double v);

struct PointOverride {
  std::optional<double> rho;
  std::optional<double> v;
};

int cmd_factorize(const RunConfig& cfg, const PointOverride& at, const std::string& out, std::ostream& log);
int cmd_grid(const RunConfig& cfg, const std::string& out, int workers, std::ostream& log);
int cmd_verify(const RunConfig& cfg, int workers, std::ostream& log);

/// Rows of the grid table, in rho-major order, formatted with 17 significant digits.
std::string grid_table(const RunConfig& cfg, int workers, int* ok_rows = nullptr);

}  // namespace whf::cli
