#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chainecho/analysis.hpp"
#include "chainecho/observables.hpp"

namespace chainecho {

enum class ExperimentKind { EchoSeries, SaturationScan, RevivalScan, OracleValidation };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view text);

/// Environment variable naming the default cache directory.
inline constexpr const char *kCacheEnvVar = "CHAINECHO_CACHE";

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::EchoSeries;
  std::string name = "experiment";

  std::vector<int> n_sites{100};
  std::vector<double> gamma{1.0};
  std::vector<double> lambda{0.5};
  std::vector<double> coupling{0.1};
  std::vector<int> distance{0};
  std::vector<EchoKind> echo{EchoKind::L00_11};

  double t_max = 10.0;
  double dt = 0.05;

  std::optional<BellFamilyState> state;

  double smoothing_window = kDefaultSmoothingWindow;
  double prominence = kDefaultProminence;
  /// 0 picks the hint from the coupling.
  double fast_freq_hint = 0.0;
  double saturation_tolerance = 0.2;
  bool free_shift = false;

  int oracle_cells = 20;
  std::uint64_t seed = 1;
  double oracle_tolerance = 1e-8;

  std::filesystem::path output_dir = "chainecho-out";
  std::optional<std::filesystem::path> cache_dir;
  int workers = 1;
  bool plot = false;

  /// Free-text notes copied into the manifest.
  std::vector<std::string> assumptions;
};

/// Parses `key = value` lines; lists are written `key = [a, b, c]`, `#` starts
/// a comment. Throws ConfigError with the offending line and key.
ExperimentConfig parse_config(std::istream &in);
ExperimentConfig load_config(const std::filesystem::path &path);

/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig &config);

/// 64-bit FNV-1a of to_text, as 16 hex digits.
std::string config_hash(const ExperimentConfig &config);

/// Shortest decimal that reads back as the same double.
std::string format_double(double value);

/// Readable identifier over (N, gamma, lambda, g, sites, label), usable as a
/// file name. Doubles use format_double, so distinct doubles give distinct keys.
std::string cache_key(const ChainSpec &spec);

/// On-disk store of diagonalized mode bases. Files are written to a temporary
/// name and renamed into place; unreadable or corrupt entries are reported on
/// stderr and recomputed.
class BasisCache {
public:
  explicit BasisCache(std::optional<std::filesystem::path> dir);

  /// Modes of H_ab. Label 00 ignores the coupling and distance.
  ModeBasis<double> modes(const ChainSpec &spec, bool *hit = nullptr) const;
  /// Momentum-labelled modes of the uncoupled chain.
  ModeBasis<Complex> momentum(const ChainSpec &spec, bool *hit = nullptr) const;

  const std::optional<std::filesystem::path> &directory() const { return dir_; }

private:
  std::optional<std::filesystem::path> dir_;
};

void write_basis(const std::filesystem::path &path, const ModeBasis<double> &basis);
void write_basis(const std::filesystem::path &path, const ModeBasis<Complex> &basis);
/// Throws Error on a missing, truncated or corrupt file.
ModeBasis<double> read_basis_real(const std::filesystem::path &path);
ModeBasis<Complex> read_basis_complex(const std::filesystem::path &path);

/// Frequency of the fast oscillation of a strong-coupling echo.
double fast_frequency(EchoKind kind, double coupling, int distance);

struct CellRecord {
  std::string id;
  std::string status = "ok";
  std::string message;
  bool cache_hit = false;
  double seconds = 0.0;
  std::vector<std::string> files;
};

struct RunReport {
  std::filesystem::path output_dir;
  std::string config_hash;
  double wall_seconds = 0.0;
  /// One record per computed echo or oracle comparison.
  std::vector<CellRecord> cells;
  /// Derived results (saturation lengths, fits, revival tables).
  std::vector<CellRecord> analyses;
  std::vector<std::string> files;

  bool ok() const;
  double cache_hit_fraction() const;
};

/// Computes every cell of the config, writes CSVs and manifest.json into the
/// output directory. Per-cell numerical failures are recorded, not thrown.
RunReport run_experiment(const ExperimentConfig &config);

/// Named configurations reproducing the figure families: fig2 ... fig7.
std::vector<std::string> recipe_names();
ExperimentConfig recipe(std::string_view name);

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

} // namespace chainecho
