#include "cutsurf/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "cutsurf/curve1d.hpp"
#include "cutsurf/errors.hpp"
#include "cutsurf/quadrature.hpp"
#include "cutsurf/swe.hpp"

namespace cutsurf {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
    throw ConfigError("field '" + key + "': expected a number, got '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("field '" + key + "': expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

/// Runs tasks on up to `jobs` threads; results keep task order.
template <class T>
std::vector<T> parallel_map(const std::vector<std::function<T()>>& tasks, int jobs) {
  std::vector<T> out(tasks.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = tasks[i]();
    return out;
  }
  for (std::size_t start = 0; start < tasks.size(); start += static_cast<std::size_t>(jobs)) {
    std::vector<std::future<T>> running;
    const std::size_t stop = std::min(tasks.size(), start + static_cast<std::size_t>(jobs));
    for (std::size_t i = start; i < stop; ++i) running.push_back(std::async(std::launch::async, tasks[i]));
    for (std::size_t i = start; i < stop; ++i) out[i] = running[i - start].get();
  }
  return out;
}

double harmonic_u0(const Vec3& p) { return 7.0 * (p.x() - 2.0 * p.y()) * (15.0 * p.z() * p.z() - 3.0) / 8.0; }

double smooth_u0(const Vec3& p) { return std::cos(p.x() - p.y() + p.z()); }

}  // namespace

std::string to_string(Stepper s) { return s == Stepper::fe ? "fe" : "bdf2"; }

Stepper parse_stepper(const std::string& text) {
  if (text == "fe") return Stepper::fe;
  if (text == "bdf2") return Stepper::bdf2;
  throw ConfigError("unknown stepper '" + text + "' (expected fe or bdf2)");
}

LevelSetSurface make_surface(const std::string& name) {
  if (name == "sphere") return LevelSetSurface::sphere(1.0);
  if (name == "ellipsoid") return LevelSetSurface::ellipsoid(1.0, 0.8, 0.65);
  if (name == "cassini") return LevelSetSurface::cassini_oval(0.65, 1.1 * 0.65);
  throw ConfigError("unknown surface '" + name + "' (expected sphere, ellipsoid or cassini)");
}

SurfaceDiscretization discretize_box(const LevelSetSurface& surface, int n, double eta) {
  return discretize(surface, Grid3::box(kBoxHalfExtent, n), eta);
}

double diffusion_time_step(Stepper stepper, SurfaceKind surface, int n) {
  if (stepper == Stepper::fe) return 8.0 / (static_cast<double>(n) * n);
  return surface == SurfaceKind::sphere ? 1.0 / (2.0 * n) : 1.0 / (10.0 * n);
}

DiffusionRun run_diffusion(const LevelSetSurface& surface, int n, Stepper stepper, LbForm form, double alpha,
                           const std::function<double(const Vec3&)>& u0, double t_end, double eta) {
  auto disc = std::make_shared<const SurfaceDiscretization>(discretize_box(surface, n, eta));
  const SparseOperator lb = laplace_beltrami(*disc, surface, form);
  Eigen::VectorXd start(disc->n_total());
  for (int i = 0; i < disc->n_total(); ++i) start[i] = u0(disc->point(i).position);
  const double k = diffusion_time_step(stepper, surface.kind(), n);
  Eigen::VectorXd u = stepper == Stepper::fe ? diffusion_full_fe(*disc, lb, start, alpha, k, t_end)
                                             : diffusion_full_bdf2(*disc, lb, start, alpha, k, t_end);
  return {disc, std::move(u)};
}

ErrorNorms sphere_harmonic_diffusion(int n, Stepper stepper, LbForm form, double eta) {
  const double t = 1.0;
  const DiffusionRun run = run_diffusion(LevelSetSurface::sphere(1.0), n, stepper, form, 1.0 / 12.0, harmonic_u0, t, eta);
  Eigen::VectorXd exact(run.disc->n_total());
  for (int i = 0; i < run.disc->n_total(); ++i) exact[i] = std::exp(-t) * harmonic_u0(run.disc->point(i).position);
  return error_norms(run.u, exact);
}

AbsoluteNorms successive_difference(const DiffusionRun& coarse, const DiffusionRun& fine) {
  const Eigen::VectorXd on_coarse = transfer_to_coarse(*fine.disc, fine.u, *coarse.disc);
  return absolute_norms(coarse.u - on_coarse);
}

EigenClusterErrors sphere_eigen_clusters(int n, LbForm form, int max_degree, double eta) {
  const LevelSetSurface sphere = LevelSetSurface::sphere(1.0);
  const SurfaceDiscretization disc = discretize_box(sphere, n, eta);
  const SparseOperator red = reduced_operator(laplace_beltrami(disc, sphere, form), disc);
  const int count = (max_degree + 1) * (max_degree + 1);
  const auto pairs = eigenvalues_reduced_lb(red, count);
  EigenClusterErrors out;
  out.max_error.assign(static_cast<std::size_t>(max_degree) + 1, 0.0);
  int idx = 0;
  for (int deg = 0; deg <= max_degree; ++deg) {
    const double exact = -deg * (deg + 1.0);
    for (int m = 0; m < 2 * deg + 1; ++m, ++idx) {
      const auto& lam = pairs[static_cast<std::size_t>(idx)].value;
      out.max_error[deg] = std::max(out.max_error[deg], std::abs(lam.real() - exact));
      out.max_imag = std::max(out.max_imag, std::abs(lam.imag()));
      out.max_abs_real = std::max(out.max_abs_real, std::abs(lam.real()));
    }
  }
  return out;
}

PoissonRun sphere_poisson(int n, LbForm form, double eta) {
  const LevelSetSurface sphere = LevelSetSurface::sphere(1.0);
  const SurfaceDiscretization disc = discretize_box(sphere, n, eta);
  const SparseOperator red = reduced_operator(laplace_beltrami(disc, sphere, form), disc);
  const int n_p = disc.n_primary();
  Eigen::VectorXd f(n_p), u(n_p);
  for (int i = 0; i < n_p; ++i) {
    const Vec3 x = disc.point(i).position.normalized();
    const double w = x.x() + x.y() - 2.0 * x.z();
    u[i] = std::cos(w);
    // Surface Laplacian of cos(a.x) on the unit sphere, |a|^2 = 6.
    f[i] = 2.0 * w * std::sin(w) - std::cos(w) * (6.0 - w * w);
  }
  const PoissonResult res = poisson_solve(red, f);
  const Eigen::VectorXd target = u.array() - u.mean();
  return {(res.u - target).lpNorm<Eigen::Infinity>(), res.beta, disc.h()};
}

double sphere_area_error(int n, double eta, double theta_deg) {
  const SurfaceDiscretization disc = discretize_box(LevelSetSurface::sphere(1.0), n, eta);
  const QuadratureWeights q = quadrature_weights(disc, theta_deg * kDeg);
  const double area = q.w.sum();
  return std::abs(area - 4.0 * std::numbers::pi) / (4.0 * std::numbers::pi);
}

const std::map<std::string, std::string>& experiment_catalog() {
  static const std::map<std::string, std::string> catalog = {
      {"3.1", "diffusion of a spherical harmonic on the unit sphere, FE/BDF2 x div/nondiv"},
      {"3.2", "successive-grid diffusion errors on the ellipsoid and the Cassini oval"},
      {"3.3", "smallest eigenvalues of the reduced operator on the unit sphere"},
      {"4.1", "linear advection on the unit sphere (MacCormack)"},
      {"4.2", "shallow water steady zonal flow, viscosity 1"},
      {"4.3", "shallow water steady zonal flow, viscosity 0.5"},
      {"poisson", "Poisson problem on the unit sphere via the bordered system"},
      {"quad", "sphere area by partition-of-unity quadrature"},
      {"curve", "resolvent positivity for plane curves"},
  };
  return catalog;
}

ExperimentConfig default_config(const std::string& experiment) {
  if (!experiment_catalog().contains(experiment)) throw ConfigError("unknown experiment '" + experiment + "'");
  ExperimentConfig c;
  c.experiment = experiment;
  c.steppers = {Stepper::fe, Stepper::bdf2};
  c.forms = {LbForm::nondivergence, LbForm::divergence};
  c.times = {1.0};
  if (experiment == "3.1") {
    c.n_values = {80, 160};
  } else if (experiment == "3.2") {
    c.surface = "ellipsoid,cassini";
    c.n_values = {80, 160};
    c.forms = {LbForm::divergence};
  } else if (experiment == "3.3") {
    c.n_values = {40, 80};
    c.forms = {LbForm::divergence};
  } else if (experiment == "4.1") {
    c.n_values = {80, 160, 320};
    c.times = {1.0, 2.0, 5.0};
  } else if (experiment == "4.2" || experiment == "4.3") {
    c.n_values = {80, 160};
    c.times = {1.0, 2.0, 5.0};
    c.nu = experiment == "4.2" ? 1.0 : 0.5;
  } else if (experiment == "poisson") {
    c.n_values = {80, 160};
    c.forms = {LbForm::divergence};
  } else if (experiment == "quad") {
    c.n_values = {40, 80, 160};
  } else if (experiment == "curve") {
    c.n_values = {80, 160};
    c.curves = {"circle", "ellipse"};
    c.sigmas = {0.75, 1.0, 2.0};
  }
  return c;
}

void apply_config_value(ExperimentConfig& c, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in), value = trim(value_in);
  if (key == "experiment") {
    if (!experiment_catalog().contains(value)) throw ConfigError("field 'experiment': unknown id '" + value + "'");
    c.experiment = value;
  } else if (key == "surface") {
    for (const auto& s : split_list(value)) make_surface(s);
    c.surface = value;
  } else if (key == "N") {
    c.n_values.clear();
    for (const auto& s : split_list(value)) {
      const int n = parse_int(key, s);
      if (n <= 0 || n % 2 != 0) throw ConfigError("field 'N': values must be positive even integers, got " + s);
      c.n_values.push_back(n);
    }
    if (c.n_values.empty()) throw ConfigError("field 'N': empty list");
  } else if (key == "stepper") {
    c.steppers.clear();
    for (const auto& s : split_list(value)) c.steppers.push_back(parse_stepper(s));
  } else if (key == "form") {
    c.forms.clear();
    for (const auto& s : split_list(value)) c.forms.push_back(parse_lb_form(s));
  } else if (key == "curves") {
    c.curves = split_list(value);
  } else if (key == "sigma") {
    c.sigmas.clear();
    for (const auto& s : split_list(value)) c.sigmas.push_back(parse_double(key, s));
  } else if (key == "times") {
    c.times.clear();
    for (const auto& s : split_list(value)) c.times.push_back(parse_double(key, s));
  } else if (key == "t_end" || key == "t-end") {
    const double t = parse_double(key, value);
    if (!(t > 0)) throw ConfigError("field 't_end': must be positive");
    std::erase_if(c.times, [t](double x) { return x > t; });
    if (c.times.empty() || c.times.back() != t) c.times.push_back(t);
  } else if (key == "nu") {
    c.nu = parse_double(key, value);
  } else if (key == "alpha") {
    c.alpha_deg = parse_double(key, value);
  } else if (key == "eta") {
    c.eta = parse_double(key, value);
    if (!(c.eta > 0 && c.eta < 1.0 / std::sqrt(3.0))) throw ConfigError("field 'eta': must lie in (0, 1/sqrt(3))");
  } else if (key == "theta") {
    c.theta_deg = parse_double(key, value);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "jobs") {
    c.jobs = std::max(1, parse_int(key, value));
  } else {
    throw ConfigError("unknown field '" + key + "'");
  }
}

void apply_config_text(ExperimentConfig& config, std::istream& in, const std::string& source) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    try {
      if (eq == std::string::npos) throw ConfigError("expected key = value");
      apply_config_value(config, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      std::ostringstream msg;
      msg << source << ":" << lineno << ": " << e.what();
      throw ConfigError(msg.str());
    }
  }
}

namespace {

using Rows = std::vector<CsvRow>;

Rows table_3_1(const ExperimentConfig& c) {
  std::vector<std::function<Rows()>> tasks;
  for (int n : c.n_values)
    tasks.push_back([&c, n] {
      Rows rows;
      for (Stepper s : c.steppers)
        for (LbForm f : c.forms) {
          const ErrorNorms e = sphere_harmonic_diffusion(n, s, f, c.eta);
          const std::string tag = to_string(s) + "_" + to_string(f);
          rows.push_back({c.experiment, n, 1.0, tag + "_max", e.rel_max});
          rows.push_back({c.experiment, n, 1.0, tag + "_l2", e.rel_l2});
        }
      return rows;
    });
  Rows out;
  for (auto& r : parallel_map(tasks, c.jobs)) out.insert(out.end(), r.begin(), r.end());
  return out;
}

Rows table_3_2(const ExperimentConfig& c) {
  const LbForm form = c.forms.empty() ? LbForm::divergence : c.forms.front();
  std::set<int> grids;
  for (int n : c.n_values) {
    grids.insert(n);
    grids.insert(2 * n);
  }
  Rows out;
  for (const std::string& name : split_list(c.surface)) {
    const LevelSetSurface surface = make_surface(name);
    for (Stepper s : c.steppers) {
      std::vector<std::function<DiffusionRun()>> tasks;
      for (int n : grids)
        tasks.push_back([&, n, s] { return run_diffusion(surface, n, s, form, 0.1, smooth_u0, 1.0, c.eta); });
      const auto runs = parallel_map(tasks, c.jobs);
      std::map<int, const DiffusionRun*> by_n;
      int idx = 0;
      for (int n : grids) by_n[n] = &runs[static_cast<std::size_t>(idx++)];
      for (int n : c.n_values) {
        const AbsoluteNorms d = successive_difference(*by_n[n], *by_n[2 * n]);
        const std::string tag = name + "_" + to_string(s);
        out.push_back({c.experiment, n, 1.0, tag + "_max", d.max});
        out.push_back({c.experiment, n, 1.0, tag + "_l2", d.l2});
      }
    }
  }
  return out;
}

Rows table_3_3(const ExperimentConfig& c) {
  std::vector<std::function<Rows()>> tasks;
  for (int n : c.n_values)
    tasks.push_back([&c, n] {
      Rows rows;
      for (LbForm f : c.forms) {
        const EigenClusterErrors e = sphere_eigen_clusters(n, f, 6, c.eta);
        const std::string tag = c.forms.size() > 1 ? to_string(f) + "_" : "";
        for (std::size_t d = 0; d < e.max_error.size(); ++d)
          rows.push_back({c.experiment, n, 0.0, tag + "err_" + std::to_string(d * (d + 1)), e.max_error[d]});
        rows.push_back({c.experiment, n, 0.0, tag + "max_imag", e.max_imag});
      }
      return rows;
    });
  Rows out;
  for (auto& r : parallel_map(tasks, c.jobs)) out.insert(out.end(), r.begin(), r.end());
  return out;
}

Rows records_to_rows(const std::string& experiment, int n, const std::vector<RunRecord>& recs) {
  Rows rows;
  for (const auto& r : recs)
    for (const auto& [name, value] : r.metrics) rows.push_back({experiment, n, r.time, name, value});
  return rows;
}

Rows table_4_1(const ExperimentConfig& c) {
  std::vector<std::function<Rows()>> tasks;
  for (int n : c.n_values)
    tasks.push_back([&c, n] {
      const SurfaceDiscretization disc = discretize_box(LevelSetSurface::sphere(1.0), n, c.eta);
      return records_to_rows(c.experiment, n, advection_solve(disc, 1.0 / (2.0 * n), c.times));
    });
  Rows out;
  for (auto& r : parallel_map(tasks, c.jobs)) out.insert(out.end(), r.begin(), r.end());
  return out;
}

Rows table_swe(const ExperimentConfig& c) {
  std::vector<std::function<Rows()>> tasks;
  for (int n : c.n_values)
    tasks.push_back([&c, n] {
      const SurfaceDiscretization disc = discretize_box(LevelSetSurface::sphere(1.0), n, c.eta);
      SweParameters p;
      p.alpha = c.alpha_deg * kDeg;
      return records_to_rows(c.experiment, n, swe_solve(disc, p, c.nu, 1.0 / (2.0 * n), c.times));
    });
  Rows out;
  for (auto& r : parallel_map(tasks, c.jobs)) out.insert(out.end(), r.begin(), r.end());
  return out;
}

Rows table_poisson(const ExperimentConfig& c) {
  Rows out;
  for (int n : c.n_values)
    for (LbForm f : c.forms) {
      const PoissonRun r = sphere_poisson(n, f, c.eta);
      const std::string tag = c.forms.size() > 1 ? to_string(f) + "_" : "";
      out.push_back({c.experiment, n, 0.0, tag + "max_error", r.max_error});
      out.push_back({c.experiment, n, 0.0, tag + "beta", r.beta});
      out.push_back({c.experiment, n, 0.0, tag + "beta_over_h2", r.beta / (r.h * r.h)});
    }
  return out;
}

Rows table_quad(const ExperimentConfig& c) {
  Rows out;
  for (int n : c.n_values) out.push_back({c.experiment, n, 0.0, "area_rel_error", sphere_area_error(n, c.eta, c.theta_deg)});
  return out;
}

LevelSetCurve make_curve(const std::string& name) {
  if (name == "circle") return LevelSetCurve::circle(1.0);
  if (name == "ellipse") return LevelSetCurve::ellipse(1.0, 0.7);
  if (name == "perturbed") return LevelSetCurve::perturbed_circle(0.2, 3);
  throw ConfigError("unknown curve '" + name + "' (expected circle, ellipse or perturbed)");
}

Rows table_curve(const ExperimentConfig& c) {
  Rows out;
  for (const auto& name : c.curves) {
    const LevelSetCurve curve = make_curve(name);
    for (int n : c.n_values) {
      const CurveDiscretization disc = discretize_curve(curve, Grid2::box(kBoxHalfExtent, n), c.eta);
      const SparseOperator lb = lb_curve(disc);
      out.push_back({c.experiment, n, 0.0, name + "_min_c2", curve_coefficients(disc).min_primary_c2});
      for (const auto& r : resolvent_positivity(disc, c.sigmas)) {
        std::ostringstream tag;
        tag << name << "_s" << r.sigma;
        out.push_back({c.experiment, n, 0.0, tag.str() + "_min_entry", r.min_entry});
        out.push_back({c.experiment, n, 0.0, tag.str() + "_rowsum_dev", r.max_rowsum_dev});
        out.push_back({c.experiment, n, 0.0, tag.str() + "_m_matrix", check_m_matrix(disc, lb, r.sigma).is_m_matrix ? 1.0 : 0.0});
      }
    }
  }
  return out;
}

void append_orders(Rows& rows, const std::string& experiment) {
  if (experiment == "curve") return;
  std::map<std::tuple<double, std::string, int>, double> value;
  std::vector<std::pair<double, std::string>> keys;
  for (const auto& r : rows) {
    if (r.metric.find("beta") != std::string::npos || r.metric.find("imag") != std::string::npos) continue;
    if (value.emplace(std::make_tuple(r.time, r.metric, r.n), r.value).second) {
      const std::pair<double, std::string> k{r.time, r.metric};
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
  }
  std::set<int> ns;
  for (const auto& r : rows) ns.insert(r.n);
  Rows orders;
  for (const auto& [t, m] : keys)
    for (int n : ns) {
      const auto a = value.find({t, m, n}), b = value.find({t, m, 2 * n});
      if (a == value.end() || b == value.end()) continue;
      const double x = std::abs(a->second), y = std::abs(b->second);
      if (x > 0 && y > 0) orders.push_back({experiment, 2 * n, t, "order:" + m, std::log2(x / y)});
    }
  rows.insert(rows.end(), orders.begin(), orders.end());
}

}  // namespace

std::vector<CsvRow> run_table(const ExperimentConfig& config) {
  if (config.n_values.empty()) throw ConfigError("no grid sizes given");
  Rows rows;
  const std::string& id = config.experiment;
  if (id == "3.1") rows = table_3_1(config);
  else if (id == "3.2") rows = table_3_2(config);
  else if (id == "3.3") rows = table_3_3(config);
  else if (id == "4.1") rows = table_4_1(config);
  else if (id == "4.2" || id == "4.3") rows = table_swe(config);
  else if (id == "poisson") rows = table_poisson(config);
  else if (id == "quad") rows = table_quad(config);
  else if (id == "curve") rows = table_curve(config);
  else throw ConfigError("unknown experiment '" + id + "'");
  append_orders(rows, id);
  return rows;
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  out << "experiment,N,time,metric,value\n";
  for (const auto& r : rows)
    out << r.experiment << ',' << r.n << ',' << format_number(r.time) << ',' << r.metric << ',' << format_number(r.value)
        << '\n';
}

void print_table(std::ostream& out, const std::vector<CsvRow>& rows) {
  std::vector<double> times;
  for (const auto& r : rows)
    if (std::find(times.begin(), times.end(), r.time) == times.end()) times.push_back(r.time);
  for (const bool orders : {false, true}) {
    for (double t : times) {
      std::vector<std::string> metrics;
      std::vector<int> ns;
      for (const auto& r : rows) {
        if (r.time != t || (r.metric.rfind("order:", 0) == 0) != orders) continue;
        if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end()) metrics.push_back(r.metric);
        if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
      }
      if (metrics.empty()) continue;
      int width = 11;
      for (const auto& m : metrics) width = std::max(width, static_cast<int>(m.size()) - (orders ? 6 : 0));
      char buf[96];
      out << (orders ? "observed orders" : "errors");
      if (t != 0.0) out << ", t = " << t;
      out << '\n';
      std::snprintf(buf, sizeof buf, "%6s", "N");
      out << buf;
      for (const auto& m : metrics) {
        std::snprintf(buf, sizeof buf, " %*s", width, (orders ? m.substr(6) : m).c_str());
        out << buf;
      }
      out << '\n';
      for (int n : ns) {
        std::snprintf(buf, sizeof buf, "%6d", n);
        out << buf;
        for (const auto& m : metrics) {
          const auto it = std::find_if(rows.begin(), rows.end(),
                                       [&](const CsvRow& r) { return r.n == n && r.time == t && r.metric == m; });
          if (it == rows.end())
            std::snprintf(buf, sizeof buf, " %*s", width, "-");
          else if (orders)
            std::snprintf(buf, sizeof buf, " %*.2f", width, it->value);
          else
            std::snprintf(buf, sizeof buf, " %*.3e", width, it->value);
          out << buf;
        }
        out << '\n';
      }
      out << '\n';
    }
  }
}

std::string default_output_dir() {
  const char* dir = std::getenv("CUTSURF_OUTPUT_DIR");
  return dir ? std::string(dir) : std::string();
}

}  // namespace cutsurf
