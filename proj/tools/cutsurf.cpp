#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "cutsurf/errors.hpp"
#include "cutsurf/experiments.hpp"

namespace {

using namespace cutsurf;

constexpr int kUsageError = 1;
constexpr int kRuntimeAbort = 2;

/// Raw option text; applied after the config file so flags win.
struct Overrides {
  std::optional<std::string> config, n, surface, form, stepper, nu, alpha, eta, t_end, theta, sigma, curves, times;
  std::optional<int> jobs;
  std::string out;
  bool csv = false;
};

void add_common(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config, "key = value file applied before the flags");
  app.add_option("--N", o.n, "grid sizes, comma separated (cells per box side)");
  app.add_option("--surface", o.surface, "sphere, ellipsoid or cassini (comma list for table-3.2)");
  app.add_option("--form", o.form, "div or nondiv (comma list)");
  app.add_option("--stepper", o.stepper, "fe or bdf2 (comma list)");
  app.add_option("--nu", o.nu, "artificial viscosity coefficient");
  app.add_option("--alpha", o.alpha, "flow angle in degrees");
  app.add_option("--eta", o.eta, "admissibility threshold");
  app.add_option("--t-end", o.t_end, "final time");
  app.add_option("--times", o.times, "output times, comma separated");
  app.add_option("--theta", o.theta, "partition-of-unity angle in degrees");
  app.add_option("--sigma", o.sigma, "k/h^2 values, comma separated");
  app.add_option("--curves", o.curves, "circle, ellipse or perturbed (comma list)");
  app.add_option("--out", o.out, "CSV output path");
  app.add_option("--jobs", o.jobs, "independent runs in parallel")->check(CLI::PositiveNumber);
  app.add_flag("--csv", o.csv, "write CSV to stdout instead of the console table");
}

ExperimentConfig build_config(const std::string& experiment, const Overrides& o) {
  ExperimentConfig c = default_config(experiment);
  if (o.config) {
    std::ifstream in(*o.config);
    if (!in) throw ConfigError("cannot open config file '" + *o.config + "'");
    apply_config_text(c, in, *o.config);
  }
  const std::pair<const char*, const std::optional<std::string>*> fields[] = {
      {"N", &o.n},         {"surface", &o.surface}, {"form", &o.form},   {"stepper", &o.stepper},
      {"nu", &o.nu},       {"alpha", &o.alpha},     {"eta", &o.eta},     {"times", &o.times},
      {"t_end", &o.t_end}, {"theta", &o.theta},     {"sigma", &o.sigma}, {"curves", &o.curves}};
  for (const auto& [key, value] : fields)
    if (*value) apply_config_value(c, key, **value);
  if (o.jobs) c.jobs = *o.jobs;
  if (!o.out.empty()) c.out = o.out;
  return c;
}

std::string output_path(const ExperimentConfig& c, const std::string& name) {
  if (!c.out.empty()) return c.out;
  const std::string dir = default_output_dir();
  if (dir.empty()) return "";
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / (name + ".csv")).string();
}

void emit(const ExperimentConfig& c, const std::string& name, const std::vector<CsvRow>& rows, bool csv) {
  if (csv)
    write_csv(std::cout, rows);
  else
    print_table(std::cout, rows);
  const std::string path = output_path(c, name);
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_csv(out, rows);
}

int run_discretize(const ExperimentConfig& c, const std::string& surface_name) {
  if (c.n_values.size() != 1) throw ConfigError("discretize takes a single --N value");
  const LevelSetSurface surface = make_surface(surface_name);
  const SurfaceDiscretization disc = discretize_box(surface, c.n_values.front(), c.eta);
  const LemmaReport lemma = check_lemma_invariants(disc, surface);
  std::cout << "surface " << surface.name() << ", N " << c.n_values.front() << ", h " << disc.h() << '\n'
            << "primary " << disc.n_primary() << ", secondary " << disc.n_secondary() << '\n'
            << "max normal ratio " << lemma.max_normal_ratio << ", min primary separation / h "
            << lemma.min_primary_separation / disc.h() << '\n';
  if (!c.out.empty()) {
    dump_discretization(disc, c.out);
    std::cout << "wrote " << c.out << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cut-point discretizations of level-set surfaces and surface PDE solvers"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list", list, "list the table subcommands");

  Overrides o;
  struct Command {
    std::string name, experiment, help;
  };
  const std::vector<Command> commands = {
      {"discretize", "3.1", "discretize a surface; --out writes the discretization file"},
      {"diffuse", "3.1", "diffusion (sphere: harmonic decay errors, else successive-grid differences)"},
      {"poisson", "poisson", "Poisson problem on the unit sphere"},
      {"advect", "4.1", "linear advection on the unit sphere"},
      {"swe", "4.2", "shallow water steady zonal flow"},
      {"eig", "3.3", "smallest eigenvalues on the unit sphere"},
      {"quad", "quad", "sphere area by quadrature"},
      {"curve-resolvent", "curve", "resolvent positivity for plane curves"},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& cmd : commands) subs.push_back({app.add_subcommand(cmd.name, cmd.help), cmd});
  for (const auto& [id, help] : experiment_catalog()) {
    if (id == "poisson" || id == "quad" || id == "curve") continue;
    const Command cmd{"table-" + id, id, help};
    subs.push_back({app.add_subcommand(cmd.name, cmd.help), cmd});
  }
  for (auto& [sub, cmd] : subs) add_common(*sub, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  if (list) {
    for (const auto& [sub, cmd] : subs)
      if (cmd.name.rfind("table-", 0) == 0) std::cout << cmd.name << "  " << cmd.help << '\n';
    return 0;
  }
  const auto chosen = std::find_if(subs.begin(), subs.end(), [](const auto& s) { return s.first->parsed(); });
  if (chosen == subs.end()) {
    std::cerr << app.help();
    return kUsageError;
  }
  const Command& cmd = chosen->second;

  try {
    std::string experiment = cmd.experiment;
    if (cmd.name == "diffuse" && o.surface && *o.surface != "sphere") experiment = "3.2";
    if (cmd.name == "swe" && o.nu && *o.nu == "0.5") experiment = "4.3";
    ExperimentConfig c = build_config(experiment, o);
    if (cmd.name == "discretize") return run_discretize(c, o.surface.value_or("sphere"));
    if (cmd.name == "diffuse" && experiment == "3.1" && c.surface != "sphere")
      throw ConfigError("field 'surface': diffuse on '" + c.surface + "' needs --surface on the command line");
    emit(c, cmd.name, run_table(c), o.csv);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeAbort;
  } catch (const std::exception& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return kRuntimeAbort;
  }
}
