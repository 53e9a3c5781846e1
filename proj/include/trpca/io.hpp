#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "trpca/pipeline.hpp"

// CLI surface: CSV ingestion, artifact emission (JSON fit, CSV scores and
// ridge, SVG figures), and the fit/sample/plot commands the `trpca` binary
// dispatches to. Exit codes: 0 success, 2 data error, 3 convergence error.

namespace trpca::cli {

struct RunConfig {
  std::string input_path;
  TrpcaConfig::Model model = TrpcaConfig::Model::auto_select;
  double alpha = 0.05;
  int fourier_m = 15;
  int grid_n = 500;
  std::uint64_t seed = 1;
  std::string output_dir = ".";
};

struct SampleConfig {
  std::string model;  // bsvm | bwc | bwn
  double mu1 = 0.0, mu2 = 0.0;
  double kappa1 = 1.0, kappa2 = 1.0, lambda = 0.0;  // bsvm
  double xi1 = 0.0, xi2 = 0.0, rho = 0.0;           // bwc / bwn rho
  double sigma1_sq = 1.0, sigma2_sq = 1.0;          // bwn
  std::size_t n = 100;
  std::uint64_t seed = 1;
  std::string output_path = "sample.csv";
};

struct PlotConfig {
  std::string artifact_dir = ".";  // holds fit.json, scores.csv, ridge.csv
  std::string output_path = "plot.svg";
};

/// Reads a `theta1,theta2` CSV of radians, wrapping out-of-range values via
/// cmod. Throws std::runtime_error naming the offending line. `wrapped`
/// (optional) counts values outside [-pi, pi).
std::vector<TorusPoint> read_angles_csv(const std::string& path,
                                        std::size_t* wrapped = nullptr);

void write_angles_csv(const std::string& path,
                      const std::vector<TorusPoint>& pts);

/// scores.csv: `index,s1,s2`, 17 significant digits.
void write_scores_csv(const std::string& path, const Scores& scores);
Scores read_scores_csv(const std::string& path);

// JSON round-trip of the fit artifacts. The curve serialization keeps the
// Fourier coefficients so scores can be re-derived from the artifacts alone.
nlohmann::json curve_to_json(const FourierRidge& fr);
FourierRidge curve_from_json(const nlohmann::json& j);
nlohmann::json fit_to_json(const TrpcaFit& fit, const RunConfig& config,
                           std::size_t n_wrapped);

/// Pipeline run: reads the CSV, runs ridge_pca, writes fit.json,
/// scores.csv, ridge.csv, and summary.txt into output_dir.
int cmd_fit(const RunConfig& config);

/// Writes n seeded samples of a BSvM/BWC/BWN model as a theta CSV.
int cmd_sample(const SampleConfig& config);

/// Renders the fitted model: data scatter, density contours (100 x 100
/// grid), the ridge curve split at the seam, and the score scatter.
int cmd_plot(const PlotConfig& config);

}  // namespace trpca::cli
