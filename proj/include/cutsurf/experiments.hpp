#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cutsurf/discretization.hpp"
#include "cutsurf/geometry.hpp"
#include "cutsurf/operators.hpp"
#include "cutsurf/pde.hpp"

namespace cutsurf {

constexpr double kBoxHalfExtent = 1.2;
constexpr double kDefaultEta = 0.45;

enum class Stepper { fe, bdf2 };
std::string to_string(Stepper s);
Stepper parse_stepper(const std::string& text);

/// "sphere" (unit), "ellipsoid" (1, .8, .65) or "cassini" (a = .65, b = 1.1 a).
LevelSetSurface make_surface(const std::string& name);

/// Discretization of `surface` on the box [-1.2, 1.2]^3 with N cells per side.
SurfaceDiscretization discretize_box(const LevelSetSurface& surface, int n, double eta = kDefaultEta);

/// Default diffusion time step for a stepper on a surface.
double diffusion_time_step(Stepper stepper, SurfaceKind surface, int n);

/// Diffusion on the full point set from u0 sampled at every cut point.
struct DiffusionRun {
  std::shared_ptr<const SurfaceDiscretization> disc;
  Eigen::VectorXd u;  ///< full field at t_end
};
DiffusionRun run_diffusion(const LevelSetSurface& surface, int n, Stepper stepper, LbForm form, double alpha,
                           const std::function<double(const Vec3&)>& u0, double t_end, double eta = kDefaultEta);

/// Spherical-harmonic decay test on the unit sphere at t = 1.
ErrorNorms sphere_harmonic_diffusion(int n, Stepper stepper, LbForm form, double eta = kDefaultEta);

/// ||u^N - u^{2N}|| on the coarse point set, absolute max and root-mean-square.
AbsoluteNorms successive_difference(const DiffusionRun& coarse, const DiffusionRun& fine);

struct EigenClusterErrors {
  std::vector<double> max_error;  ///< index n: max |lambda + n(n+1)| over the cluster of size 2n+1
  double max_imag = 0.0;
  double max_abs_real = 0.0;
};
/// The (m+1)^2 smallest-magnitude eigenvalues of the reduced operator on the unit sphere, grouped.
EigenClusterErrors sphere_eigen_clusters(int n, LbForm form, int max_degree = 6, double eta = kDefaultEta);

struct PoissonRun {
  double max_error = 0.0;
  double beta = 0.0;
  double h = 0.0;
};
PoissonRun sphere_poisson(int n, LbForm form = LbForm::divergence, double eta = kDefaultEta);

double sphere_area_error(int n, double eta = kDefaultEta, double theta_deg = 62.5);

/// Key=value configuration of one experiment; see run_table for the ids.
struct ExperimentConfig {
  std::string experiment;
  std::string surface = "sphere";
  std::vector<int> n_values;
  std::vector<Stepper> steppers;
  std::vector<LbForm> forms;
  std::vector<std::string> curves;
  std::vector<double> sigmas;
  std::vector<double> times;
  double nu = 1.0;
  double alpha_deg = 30.0;
  double eta = kDefaultEta;
  double theta_deg = 62.5;
  std::string out;
  int jobs = 1;
};

/// Experiment ids accepted by run_table with a one-line description each.
const std::map<std::string, std::string>& experiment_catalog();

/// Defaults for an experiment id; throws ConfigError for unknown ids.
ExperimentConfig default_config(const std::string& experiment);

/// Applies "key = value" lines ('#' comments) on top of `config`. Errors name the line.
void apply_config_text(ExperimentConfig& config, std::istream& in, const std::string& source = "config");
/// Applies one key/value override; throws ConfigError naming the key.
void apply_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

struct CsvRow {
  std::string experiment;
  int n = 0;
  double time = 0.0;
  std::string metric;
  double value = 0.0;
};

/// Runs the experiment; returns one row per (N, time, metric) plus
/// order:<metric> rows whenever consecutive N values double.
std::vector<CsvRow> run_table(const ExperimentConfig& config);

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);
/// N down, metrics across, one block per output time.
void print_table(std::ostream& out, const std::vector<CsvRow>& rows);

/// Directory from CUTSURF_OUTPUT_DIR, or empty.
std::string default_output_dir();

}  // namespace cutsurf
