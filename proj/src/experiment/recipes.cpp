#include "chainecho/errors.hpp"
#include "chainecho/experiment.hpp"

namespace chainecho {

std::vector<std::string> recipe_names() { return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}; }

ExperimentConfig recipe(std::string_view name) {
  ExperimentConfig c;
  c.name = std::string(name);
  c.output_dir = std::string(name);
  c.n_sites = {100};
  c.gamma = {1.0};

  if (name == "fig2" || name == "fig3") {
    // Weak coupling, three fields, short distances, t in [0, 10].
    c.kind = ExperimentKind::EchoSeries;
    c.lambda = {0.5, 0.99, 1.5};
    c.coupling = {0.1};
    c.distance = {0, 1, 2, 3, 4, 10};
    c.echo = {name == "fig2" ? EchoKind::L00_11 : EchoKind::L01_10, EchoKind::IndependentProduct};
    c.t_max = 10.0;
    c.dt = 0.05;
  } else if (name == "fig4") {
    c.kind = ExperimentKind::SaturationScan;
    c.n_sites = {500};
    c.lambda.clear();
    for (int k = 0; k < 20; ++k)
      c.lambda.push_back((k + 1) / 10.0);
    c.coupling = {0.1};
    c.distance.clear();
    for (int d = 1; d <= 15; ++d)
      c.distance.push_back(d);
    c.echo = {EchoKind::L00_11};
    c.t_max = 10.0;
    c.dt = 0.05;
    c.assumptions = {"lambda grid: 20 evenly spaced values from 0.1 to 2.0",
                     "time grid: dt = 0.05 on [0, 10]"};
  } else if (name == "fig5") {
    c.kind = ExperimentKind::EchoSeries;
    c.lambda = {0.99};
    c.coupling = {0.1};
    c.distance = {30, 50};
    c.echo = {EchoKind::L00_11, EchoKind::L01_10, EchoKind::IndependentProduct};
    c.t_max = 200.0;
    c.dt = 0.05;
  } else if (name == "fig6" || name == "fig7") {
    // Strong coupling: the fast oscillation needs a fine grid.
    c.kind = ExperimentKind::RevivalScan;
    c.lambda = {0.99};
    c.coupling = {50.0};
    c.distance = name == "fig6" ? std::vector<int>{0, 2, 3, 4, 6, 8, 10}
                                : std::vector<int>{1, 2, 3, 4, 6, 8, 10};
    c.echo = {name == "fig6" ? EchoKind::L00_11 : EchoKind::L01_10};
    c.t_max = 30.0;
    c.dt = 0.005;
  } else {
    std::string known;
    for (const auto &n : recipe_names())
      known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown recipe '" + std::string(name) + "' (known: " + known + ")", 0,
                      "recipe");
  }
  return c;
}

} // namespace chainecho
