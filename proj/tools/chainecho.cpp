#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "chainecho/errors.hpp"
#include "chainecho/experiment.hpp"

using namespace chainecho;

namespace {

struct Overrides {
  std::optional<double> dt;
  std::optional<double> t_max;
  std::optional<std::string> cache;
  std::optional<std::string> out;
  std::optional<int> workers;
  bool plot = false;
};

int execute(ExperimentConfig config, const Overrides &o) {
  if (o.dt)
    config.dt = *o.dt;
  if (o.t_max)
    config.t_max = *o.t_max;
  if (o.cache)
    config.cache_dir = std::filesystem::path(*o.cache);
  if (o.out)
    config.output_dir = *o.out;
  if (o.workers)
    config.workers = *o.workers;
  config.plot = config.plot || o.plot;
  // Re-run validation on the overridden values.
  std::istringstream text(to_text(config));
  try {
    config = parse_config(text);
  } catch (const ConfigError &e) {
    std::string what = e.what();
    if (const auto colon = what.find(": "); e.line() > 0 && colon != std::string::npos)
      what = what.substr(colon + 2);
    throw ConfigError(what, 0, e.field());
  }

  const RunReport report = run_experiment(config);
  std::size_t failed = 0;
  for (const auto *list : {&report.cells, &report.analyses})
    for (const auto &c : *list)
      if (c.status != "ok") {
        ++failed;
        std::cerr << c.status << ": " << c.id << ": " << c.message << '\n';
      }
  std::cout << report.cells.size() << " cells, " << failed << " failed, "
            << static_cast<int>(report.cache_hit_fraction() * 100.0 + 0.5) << "% cache hits, "
            << report.wall_seconds << " s -> " << report.output_dir.string() << '\n';
  return report.ok() ? kExitOk : kExitNumerical;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Two-qubit decoherence in XY spin chains"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--dt", o.dt, "Override the time step");
  app.add_option("--tmax", o.t_max, "Override the final time");
  app.add_option("--cache", o.cache,
                 std::string("Basis cache directory (default: $") + kCacheEnvVar +
                     ", else <out>/cache)");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--plot", o.plot, "Write gnuplot scripts next to the CSV files");

  std::string config_path;
  auto *run = app.add_subcommand("run", "Run an experiment config file");
  run->add_option("config", config_path, "Config file")->required();

  std::string recipe_name;
  auto *rec = app.add_subcommand("recipe", "Run a named figure recipe");
  rec->add_option("name", recipe_name, "Recipe name")->required();

  int cells = 20;
  std::uint64_t seed = 1;
  auto *val = app.add_subcommand("validate", "Compare echoes with the Fock-space oracle");
  val->add_option("--cells", cells, "Random configurations")->check(CLI::PositiveNumber);
  val->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run)
      return execute(load_config(config_path), o);
    if (*rec) {
      if (recipe_name == "list") {
        for (const auto &n : recipe_names())
          std::cout << n << '\n';
        return kExitOk;
      }
      return execute(recipe(recipe_name), o);
    }
    ExperimentConfig c;
    c.kind = ExperimentKind::OracleValidation;
    c.name = "validate";
    c.output_dir = "validate";
    c.n_sites = {4, 6, 8};
    c.t_max = 10.0;
    c.dt = 0.1;
    c.oracle_cells = cells;
    c.seed = seed;
    return execute(c, o);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
