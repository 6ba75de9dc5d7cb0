#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "chainecho/errors.hpp"
#include "chainecho/experiment.hpp"
#include "chainecho/oracle.hpp"
#include "chainecho/parallel.hpp"

#ifndef CHAINECHO_VERSION
#define CHAINECHO_VERSION "unknown"
#endif

namespace chainecho {

double fast_frequency(EchoKind kind, double coupling, int distance) {
  // Both qubits on one site flip its field by twice the coupling.
  if (kind == EchoKind::L00_11 && distance == 0)
    return 4.0 * coupling;
  return 2.0 * coupling;
}

bool RunReport::ok() const {
  for (const auto *list : {&cells, &analyses})
    for (const auto &c : *list)
      if (c.status != "ok")
        return false;
  return true;
}

double RunReport::cache_hit_fraction() const {
  if (cells.empty())
    return 0.0;
  std::size_t hits = 0;
  for (const auto &c : cells)
    hits += c.cache_hit ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(cells.size());
}

namespace {

using Clock = std::chrono::steady_clock;

struct Params {
  int n = 0;
  double gamma = 0.0;
  double lambda = 0.0;
  double g = 0.0;
};

std::string group_key(const Params &p) {
  return "N" + std::to_string(p.n) + "_gamma" + format_double(p.gamma) + "_lambda" +
         format_double(p.lambda) + "_g" + format_double(p.g);
}

ChainSpec make_spec(const Params &p, int d, QubitLabel label) {
  return ChainSpec{p.n, p.gamma, p.lambda, p.g, d, label};
}

QubitLabel survival_label(EchoKind kind) {
  switch (kind) {
  case EchoKind::L00_01: return QubitLabel::L01;
  case EchoKind::L00_10: return QubitLabel::L10;
  case EchoKind::L00_11: return QubitLabel::L11;
  default: return QubitLabel::L10;
  }
}

/// Echo of one kind at one distance, with bases drawn from the cache.
/// `hit` is cleared if any basis had to be computed.
EchoSeries compute_echo(const BasisCache &cache, EchoKind kind, const Params &p, int d,
                        const Vector<double> &times, bool &hit) {
  auto track = [&hit](bool h) { hit = hit && h; };
  bool h = false;
  EchoSeries out;
  out.times = times;
  out.kind = kind;
  out.distance = d;
  out.coupling = p.g;

  switch (kind) {
  case EchoKind::L00_01:
  case EchoKind::L00_10:
  case EchoKind::L00_11: {
    const ChainSpec spec = make_spec(p, d, survival_label(kind));
    const ModeBasis<double> b0 = cache.modes(spec.with_label(QubitLabel::L00), &h);
    track(h);
    const ModeBasis<double> b1 = cache.modes(spec, &h);
    track(h);
    out.spec = spec;
    out.values = evaluate_on_grid(SurvivalEvaluator(b0, b1), times, 1);
    return out;
  }
  case EchoKind::L01_10: {
    const ChainSpec spec = make_spec(p, d, QubitLabel::L10);
    const ModeBasis<Complex> b0 = cache.momentum(spec, &h);
    track(h);
    const ModeBasis<double> b1 = cache.modes(spec, &h);
    track(h);
    out.spec = spec;
    out.values = evaluate_on_grid(ExchangeEvaluator(b0, b1, d), times, 1);
    return out;
  }
  case EchoKind::SingleQubit:
  case EchoKind::IndependentProduct: {
    EchoSeries single = compute_echo(cache, EchoKind::L00_10, p, 0, times, hit);
    single.kind = EchoKind::SingleQubit;
    single.distance = d;
    if (kind == EchoKind::SingleQubit)
      return single;
    return independent_product(single);
  }
  }
  throw InvalidArgument("unhandled echo kind");
}

std::string series_name(EchoKind kind, const Params &p, int d) {
  if (kind == EchoKind::SingleQubit || kind == EchoKind::IndependentProduct)
    return std::string(to_string(kind)) + "_" + group_key(p);
  return std::string(to_string(kind)) + "_" + group_key(p) + "_d" + std::to_string(d);
}

class Output {
public:
  explicit Output(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  std::string write(const std::string &name, const std::string &header,
                    const std::vector<std::vector<std::string>> &rows) const {
    std::ostringstream body;
    body << header << '\n';
    for (const auto &row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        body << (i ? ", " : "") << row[i];
      body << '\n';
    }
    std::ofstream out(dir_ / name);
    out << body.str();
    if (!out)
      throw Error("cannot write '" + (dir_ / name).string() + "'");
    return name;
  }

  std::string write_series(const std::string &stem, const Vector<double> &t,
                           const Vector<double> &v) const {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(static_cast<std::size_t>(t.size()));
    for (Index i = 0; i < t.size(); ++i)
      rows.push_back({format_double(t(i)), format_double(v(i))});
    return write(stem + ".csv", "t, value", rows);
  }

  const std::filesystem::path &dir() const { return dir_; }

private:
  std::filesystem::path dir_;
};

/// Runs every cell, catching its failure into the record.
void run_cells(std::vector<std::function<void(CellRecord &)>> &tasks,
               std::vector<CellRecord> &records, int workers) {
  records.resize(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    const auto start = Clock::now();
    CellRecord &rec = records[i];
    try {
      tasks[i](rec);
    } catch (const NumericalError &e) {
      rec.status = "numerical_failure";
      rec.message = e.what();
    } catch (const DiagonalizationError &e) {
      rec.status = "numerical_failure";
      rec.message = e.what();
    } catch (const FitError &e) {
      rec.status = "numerical_failure";
      rec.message = e.what();
    } catch (const std::exception &e) {
      rec.status = "error";
      rec.message = e.what();
    }
    rec.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  });
}

std::vector<Params> parameter_grid(const ExperimentConfig &c) {
  std::vector<Params> out;
  for (int n : c.n_sites)
    for (double gamma : c.gamma)
      for (double lambda : c.lambda)
        for (double g : c.coupling)
          out.push_back({n, gamma, lambda, g});
  return out;
}

void write_plot(const Output &out, const std::string &name, const std::vector<std::string> &files,
                const std::string &ylabel) {
  if (files.empty())
    return;
  std::ofstream gp(out.dir() / name);
  gp << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 't'\n"
     << "set ylabel '" << ylabel << "'\n"
     << "plot \\\n";
  for (std::size_t i = 0; i < files.size(); ++i) {
    gp << "  '" << files[i] << "' using 1:2 with lines title '" << files[i] << "'"
       << (i + 1 < files.size() ? ", \\\n" : "\n");
  }
}

struct Context {
  const ExperimentConfig &config;
  BasisCache cache;
  Output out;
  Vector<double> times;
  std::vector<CellRecord> cells;
  std::vector<CellRecord> analyses;
  nlohmann::json extra = nlohmann::json::object();
};

// ---- echo_series ----------------------------------------------------------

void run_echo_series(Context &ctx) {
  const ExperimentConfig &c = ctx.config;
  std::vector<std::function<void(CellRecord &)>> tasks;
  for (const Params &p : parameter_grid(c)) {
    for (EchoKind kind : c.echo) {
      const bool per_distance =
          kind != EchoKind::SingleQubit && kind != EchoKind::IndependentProduct;
      const std::vector<int> ds = per_distance ? c.distance : std::vector<int>{0};
      for (int d : ds) {
        tasks.push_back([&ctx, p, kind, d](CellRecord &rec) {
          rec.id = series_name(kind, p, d);
          bool hit = true;
          const EchoSeries s = compute_echo(ctx.cache, kind, p, d, ctx.times, hit);
          rec.cache_hit = hit;
          rec.files.push_back(ctx.out.write_series(rec.id, s.times, s.values));
          const auto &state = ctx.config.state;
          const bool matches =
              state && ((state->family == BellFamily::Phi && kind == EchoKind::L00_11) ||
                        (state->family == BellFamily::Psi && kind == EchoKind::L01_10));
          if (matches) {
            const Vector<double> neg =
                s.values.unaryExpr([&](double l) { return negativity(*state, l); });
            const Vector<double> pur =
                s.values.unaryExpr([&](double l) { return purity(*state, l); });
            rec.files.push_back(ctx.out.write_series("negativity_" + rec.id, s.times, neg));
            rec.files.push_back(ctx.out.write_series("purity_" + rec.id, s.times, pur));
          }
        });
      }
    }
  }
  run_cells(tasks, ctx.cells, c.workers);
}

// ---- saturation_scan ------------------------------------------------------

void run_saturation_scan(Context &ctx) {
  const ExperimentConfig &c = ctx.config;
  const std::vector<Params> grid = parameter_grid(c);
  std::vector<EchoKind> kinds;
  for (EchoKind k : c.echo)
    if (k == EchoKind::L00_11 || k == EchoKind::L01_10)
      kinds.push_back(k);
  if (kinds.empty())
    throw ConfigError("saturation_scan needs echo L00_11 or L01_10", 0, "echo");

  // Slot layout per group: baseline, then kinds x distances.
  const std::size_t per_group = 1 + kinds.size() * c.distance.size();
  std::vector<EchoSeries> results(grid.size() * per_group);
  std::vector<std::function<void(CellRecord &)>> tasks;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const Params p = grid[gi];
    for (std::size_t j = 0; j < per_group; ++j) {
      const EchoKind kind = j == 0 ? EchoKind::IndependentProduct : kinds[(j - 1) / c.distance.size()];
      const int d = j == 0 ? 0 : c.distance[(j - 1) % c.distance.size()];
      EchoSeries *slot = &results[gi * per_group + j];
      tasks.push_back([&ctx, p, kind, d, slot](CellRecord &rec) {
        rec.id = series_name(kind, p, d);
        bool hit = true;
        *slot = compute_echo(ctx.cache, kind, p, d, ctx.times, hit);
        rec.cache_hit = hit;
        rec.files.push_back(ctx.out.write_series(rec.id, slot->times, slot->values));
      });
    }
  }
  run_cells(tasks, ctx.cells, c.workers);

  // Saturation lengths per group and kind, then curve fits across lambda.
  std::map<std::string, std::vector<std::pair<double, double>>> lengths;
  std::vector<std::string> order;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const Params &p = grid[gi];
    for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
      CellRecord rec;
      const std::string stem = std::string(to_string(kinds[ki])) + "_" + group_key(p);
      rec.id = "saturation_" + stem;
      const auto start = Clock::now();
      try {
        const std::size_t base = gi * per_group;
        for (std::size_t j = 0; j < per_group; ++j)
          if (ctx.cells[gi * per_group + j].status != "ok")
            throw NumericalError("input echo failed");
        const EchoSeries baseline = smooth(results[base], c.smoothing_window);
        Vector<double> norms(static_cast<Index>(c.distance.size()));
        std::vector<std::vector<std::string>> rows;
        for (std::size_t di = 0; di < c.distance.size(); ++di) {
          const EchoSeries &s = results[base + 1 + ki * c.distance.size() + di];
          norms(static_cast<Index>(di)) =
              echo_distance_to_limit(smooth(s, c.smoothing_window), baseline);
          rows.push_back({std::to_string(c.distance[di]), format_double(norms(static_cast<Index>(di)))});
        }
        rec.files.push_back(ctx.out.write("norms_" + stem + ".csv", "d, norm", rows));
        const SaturationLength l = saturation_length(c.distance, norms, c.saturation_tolerance);
        rec.message = "l = " + format_double(l.length) + " over d = " +
                      std::to_string(l.first_distance) + ".." + std::to_string(l.last_distance);
        const std::string curve = std::string(to_string(kinds[ki])) + "_N" + std::to_string(p.n) +
                                  "_gamma" + format_double(p.gamma) + "_g" + format_double(p.g);
        if (!lengths.count(curve))
          order.push_back(curve);
        lengths[curve].push_back({p.lambda, l.length});
      } catch (const std::exception &e) {
        rec.status = dynamic_cast<const FitError *>(&e) || dynamic_cast<const NumericalError *>(&e)
                         ? "numerical_failure"
                         : "error";
        rec.message = e.what();
      }
      rec.seconds = std::chrono::duration<double>(Clock::now() - start).count();
      ctx.analyses.push_back(rec);
    }
  }

  for (const std::string &curve : order) {
    const auto &pts = lengths[curve];
    std::vector<std::vector<std::string>> rows;
    Vector<double> lam(static_cast<Index>(pts.size())), ls(static_cast<Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      lam(static_cast<Index>(i)) = pts[i].first;
      ls(static_cast<Index>(i)) = pts[i].second;
      rows.push_back({format_double(pts[i].first), format_double(pts[i].second)});
    }
    CellRecord rec;
    rec.id = "fit_" + curve;
    rec.files.push_back(ctx.out.write("saturation_" + curve + ".csv", "lambda, l", rows));
    if (pts.size() < 6) {
      rec.message = "fewer than six lambda values; curve fit skipped";
      ctx.analyses.push_back(rec);
      continue;
    }
    try {
      const SaturationFit fit = fit_saturation_curve(lam, ls, {5.7e-3, c.free_shift});
      std::vector<std::vector<std::string>> frows;
      for (int k = 0; k < 4; ++k)
        frows.push_back({"c" + std::to_string(k), format_double(fit.c[static_cast<std::size_t>(k)]),
                         format_double(fit.stderr_[static_cast<std::size_t>(k)])});
      frows.push_back({"shift", format_double(fit.shift),
                       fit.shift_free ? format_double(fit.stderr_[4]) : "nan"});
      frows.push_back({"residual_norm", format_double(fit.residual_norm), "nan"});
      rec.files.push_back(ctx.out.write(rec.id + ".csv", "param, value, stderr", frows));
      if (!fit.converged) {
        rec.status = "numerical_failure";
        rec.message = "saturation fit did not converge; best parameters written";
      }
      nlohmann::json grid_json = nlohmann::json::array();
      for (const auto &s : fit.start_grid)
        grid_json.push_back(s);
      ctx.extra["fit_start_grid"] = grid_json;
    } catch (const std::exception &e) {
      rec.status = "numerical_failure";
      rec.message = e.what();
    }
    ctx.analyses.push_back(rec);
  }
}

// ---- revival_scan ---------------------------------------------------------

void run_revival_scan(Context &ctx) {
  const ExperimentConfig &c = ctx.config;
  const std::vector<Params> grid = parameter_grid(c);
  std::vector<EchoKind> kinds;
  for (EchoKind k : c.echo)
    if (k != EchoKind::SingleQubit && k != EchoKind::IndependentProduct)
      kinds.push_back(k);
  if (kinds.empty())
    throw ConfigError("revival_scan needs at least one two-qubit echo", 0, "echo");

  const std::size_t per_group = 1 + kinds.size() * c.distance.size();
  std::vector<EchoSeries> envelopes(grid.size() * per_group);
  std::vector<std::function<void(CellRecord &)>> tasks;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const Params p = grid[gi];
    for (std::size_t j = 0; j < per_group; ++j) {
      const EchoKind kind = j == 0 ? EchoKind::IndependentProduct : kinds[(j - 1) / c.distance.size()];
      const int d = j == 0 ? 0 : c.distance[(j - 1) % c.distance.size()];
      EchoSeries *slot = &envelopes[gi * per_group + j];
      tasks.push_back([&ctx, p, kind, d, slot](CellRecord &rec) {
        rec.id = series_name(kind, p, d);
        bool hit = true;
        const EchoSeries s = compute_echo(ctx.cache, kind, p, d, ctx.times, hit);
        rec.cache_hit = hit;
        rec.files.push_back(ctx.out.write_series(rec.id, s.times, s.values));
        const double hint = ctx.config.fast_freq_hint > 0.0 ? ctx.config.fast_freq_hint
                                                            : fast_frequency(kind, p.g, d);
        *slot = envelope(s, hint);
        rec.files.push_back(ctx.out.write_series("envelope_" + rec.id, slot->times, slot->values));
      });
    }
  }
  run_cells(tasks, ctx.cells, c.workers);

  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const Params &p = grid[gi];
    for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
      CellRecord rec;
      rec.id = "revivals_" + std::string(to_string(kinds[ki])) + "_" + group_key(p);
      std::vector<std::vector<std::string>> rows;
      std::vector<double> ds, trs, lrs;
      bool inputs_ok = true;
      for (std::size_t di = 0; di < c.distance.size(); ++di) {
        const std::size_t slot = gi * per_group + 1 + ki * c.distance.size() + di;
        if (ctx.cells[slot].status != "ok") {
          inputs_ok = false;
          continue;
        }
        const RevivalRecord r = find_revivals(envelopes[slot], c.prominence);
        std::string peaks;
        for (std::size_t k = 0; k < r.peak_times.size(); ++k)
          peaks += (k ? ";" : "") + format_double(r.peak_times[k]);
        rows.push_back({std::to_string(c.distance[di]), r.empty() ? "nan" : format_double(r.t_r),
                        r.empty() ? "nan" : format_double(r.L_r), peaks});
        if (!r.empty() && c.distance[di] > 0) {
          ds.push_back(c.distance[di]);
          trs.push_back(r.t_r);
          lrs.push_back(r.L_r);
        }
      }
      try {
        rec.files.push_back(ctx.out.write(rec.id + ".csv", "d, t_r, L_r, peaks", rows));
        if (!inputs_ok)
          throw NumericalError("some input echoes failed");
        if (ds.size() >= 2) {
          const auto n = static_cast<Index>(ds.size());
          const Eigen::Map<const Vector<double>> dv(ds.data(), n), tv(trs.data(), n),
              lv(lrs.data(), n);
          const PowerLawFit pl = fit_power_law(dv, lv);
          const LinearFit line = fit_line(dv, tv);
          rec.files.push_back(ctx.out.write(
              "fit_" + rec.id + ".csv", "param, value, stderr",
              {{"L_r_exponent", format_double(pl.exponent), "nan"},
               {"L_r_prefactor", format_double(pl.prefactor), "nan"},
               {"t_r_slope", format_double(line.slope), "nan"},
               {"t_r_intercept", format_double(line.intercept), "nan"}}));
        } else {
          rec.message = "fewer than two revivals; no scaling fit";
        }
      } catch (const NumericalError &e) {
        rec.status = "numerical_failure";
        rec.message = e.what();
      } catch (const std::exception &e) {
        rec.status = "error";
        rec.message = e.what();
      }
      ctx.analyses.push_back(rec);
    }
  }
}

// ---- oracle_validation ----------------------------------------------------

void run_oracle_validation(Context &ctx) {
  const ExperimentConfig &c = ctx.config;
  const auto cells = static_cast<std::size_t>(c.oracle_cells);
  std::vector<std::vector<std::string>> rows(cells);
  std::vector<std::function<void(CellRecord &)>> tasks;
  for (std::size_t i = 0; i < cells; ++i) {
    tasks.push_back([&ctx, &rows, i](CellRecord &rec) {
      const ExperimentConfig &cfg = ctx.config;
      std::mt19937_64 rng(cfg.seed * 1000003ull + i);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const int n = cfg.n_sites[static_cast<std::size_t>(rng() % cfg.n_sites.size())];
      Params p{n, unit(rng), 0.1 + 1.9 * unit(rng), 0.05 * std::pow(1000.0, unit(rng))};
      const int d = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      const QubitLabel labels[] = {QubitLabel::L01, QubitLabel::L10, QubitLabel::L11};
      const QubitLabel label = labels[rng() % 3];
      const ChainSpec spec = make_spec(p, d, label);
      rec.id = "oracle_" + std::to_string(i) + "_" + cache_key(spec);

      bool hit = true;
      const EchoKind skind = label == QubitLabel::L01   ? EchoKind::L00_01
                             : label == QubitLabel::L10 ? EchoKind::L00_10
                                                        : EchoKind::L00_11;
      const EchoSeries surv = compute_echo(ctx.cache, skind, p, d, ctx.times, hit);
      const EchoSeries exch = compute_echo(ctx.cache, EchoKind::L01_10, p, d, ctx.times, hit);
      rec.cache_hit = hit;
      const double ds =
          (surv.values - oracle_echo_survival(spec, ctx.times).values).cwiseAbs().maxCoeff();
      const double dx =
          (exch.values - oracle_echo_exchange(spec, ctx.times).values).cwiseAbs().maxCoeff();
      rows[i] = {std::to_string(i),         std::to_string(n),  format_double(p.gamma),
                 format_double(p.lambda),   format_double(p.g), std::to_string(d),
                 std::string(to_string(label)), format_double(ds), format_double(dx)};
      rec.message = "max |diff| survival " + format_double(ds) + ", exchange " + format_double(dx);
      if (!(ds < cfg.oracle_tolerance && dx < cfg.oracle_tolerance))
        throw NumericalError("oracle disagreement: " + rec.message);
    });
  }
  run_cells(tasks, ctx.cells, c.workers);
  std::vector<std::vector<std::string>> done;
  for (auto &r : rows)
    if (!r.empty())
      done.push_back(r);
  const std::string file = ctx.out.write(
      "oracle_report.csv",
      "cell, n_sites, gamma, lambda, coupling, distance, label, max_abs_survival, max_abs_exchange",
      done);
  CellRecord rec;
  rec.id = "oracle_report";
  rec.files.push_back(file);
  ctx.analyses.push_back(rec);
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

nlohmann::json to_json(const CellRecord &r) {
  return {{"id", r.id},           {"status", r.status},   {"message", r.message},
          {"cache_hit", r.cache_hit}, {"seconds", r.seconds}, {"files", r.files}};
}

std::optional<std::filesystem::path> resolve_cache(const ExperimentConfig &c) {
  if (c.cache_dir)
    return c.cache_dir;
  if (const char *env = std::getenv(kCacheEnvVar); env && *env)
    return std::filesystem::path(env);
  return c.output_dir / "cache";
}

} // namespace

RunReport run_experiment(const ExperimentConfig &config) {
  const auto start = Clock::now();
  Context ctx{config, BasisCache(resolve_cache(config)), Output(config.output_dir),
              time_grid(config.t_max, config.dt), {}, {}};

  switch (config.kind) {
  case ExperimentKind::EchoSeries: run_echo_series(ctx); break;
  case ExperimentKind::SaturationScan: run_saturation_scan(ctx); break;
  case ExperimentKind::RevivalScan: run_revival_scan(ctx); break;
  case ExperimentKind::OracleValidation: run_oracle_validation(ctx); break;
  }

  RunReport report;
  report.output_dir = config.output_dir;
  report.config_hash = config_hash(config);
  report.cells = std::move(ctx.cells);
  report.analyses = std::move(ctx.analyses);
  std::vector<std::string> echoes, envs;
  for (const auto *list : {&report.cells, &report.analyses})
    for (const auto &c : *list)
      for (const auto &f : c.files)
        report.files.push_back(f);
  for (const auto &c : report.cells)
    for (const auto &f : c.files)
      (f.rfind("envelope_", 0) == 0 ? envs : echoes).push_back(f);
  if (config.plot) {
    write_plot(ctx.out, "echo.gp", echoes, "echo");
    write_plot(ctx.out, "envelope.gp", envs, "envelope");
  }

  report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();

  nlohmann::json manifest;
  manifest["name"] = config.name;
  manifest["kind"] = std::string(to_string(config.kind));
  manifest["config_hash"] = report.config_hash;
  manifest["config"] = to_text(config);
  manifest["version"] = CHAINECHO_VERSION;
  manifest["started"] = timestamp();
  manifest["wall_time_seconds"] = report.wall_seconds;
  manifest["workers"] = config.workers;
  const auto cache_dir = ctx.cache.directory();
  manifest["cache_dir"] = cache_dir ? cache_dir->string() : "";
  manifest["cache_hit_fraction"] = report.cache_hit_fraction();
  manifest["assumptions"] = config.assumptions;
  manifest["cells"] = nlohmann::json::array();
  for (const auto &c : report.cells)
    manifest["cells"].push_back(to_json(c));
  manifest["analyses"] = nlohmann::json::array();
  for (const auto &a : report.analyses)
    manifest["analyses"].push_back(to_json(a));
  for (auto it = ctx.extra.begin(); it != ctx.extra.end(); ++it)
    manifest[it.key()] = it.value();
  std::ofstream(std::filesystem::path(config.output_dir) / "manifest.json") << manifest.dump(2)
                                                                          << '\n';
  return report;
}

} // namespace chainecho
