#include <string>

#include <CLI11.hpp>

#include "trpca/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"TR-PCA: toroidal PCA via density ridges"};
  app.require_subcommand(1);

  trpca::cli::RunConfig fit_cfg;
  std::string fit_model = "auto";
  CLI::App* fit = app.add_subcommand("fit", "fit a model and run TR-PCA");
  fit->add_option("input", fit_cfg.input_path, "theta1,theta2 CSV (radians)")
      ->required();
  fit->add_option("--model", fit_model, "auto | bsvm | bwc")
      ->check(CLI::IsMember({"auto", "bsvm", "bwc"}));
  fit->add_option("--alpha", fit_cfg.alpha, "LRT significance level")
      ->check(CLI::Range(1e-6, 0.499));
  fit->add_option("--fourier-m", fit_cfg.fourier_m, "Fourier truncation")
      ->check(CLI::PositiveNumber);
  fit->add_option("--grid-n", fit_cfg.grid_n, "implicit-equation grid size")
      ->check(CLI::Range(64, 100000));
  fit->add_option("--seed", fit_cfg.seed, "seed for seeded stages");
  fit->add_option("-o,--output-dir", fit_cfg.output_dir,
                  "directory for fit.json / scores.csv / ridge.csv");

  trpca::cli::SampleConfig sample_cfg;
  CLI::App* smp = app.add_subcommand("sample", "draw a seeded sample");
  smp->add_option("--model", sample_cfg.model, "bsvm | bwc | bwn")->required();
  smp->add_option("--mu1", sample_cfg.mu1);
  smp->add_option("--mu2", sample_cfg.mu2);
  smp->add_option("--kappa1", sample_cfg.kappa1);
  smp->add_option("--kappa2", sample_cfg.kappa2);
  smp->add_option("--lambda", sample_cfg.lambda);
  smp->add_option("--xi1", sample_cfg.xi1);
  smp->add_option("--xi2", sample_cfg.xi2);
  smp->add_option("--rho", sample_cfg.rho);
  smp->add_option("--sigma1-sq", sample_cfg.sigma1_sq);
  smp->add_option("--sigma2-sq", sample_cfg.sigma2_sq);
  smp->add_option("-n", sample_cfg.n)->check(CLI::PositiveNumber);
  smp->add_option("--seed", sample_cfg.seed);
  smp->add_option("-o,--output", sample_cfg.output_path);

  trpca::cli::PlotConfig plot_cfg;
  CLI::App* plt = app.add_subcommand("plot", "render fit artifacts as SVG");
  plt->add_option("-d,--artifact-dir", plot_cfg.artifact_dir,
                  "directory with fit.json, scores.csv, ridge.csv");
  plt->add_option("-o,--output", plot_cfg.output_path, "output SVG path");

  CLI11_PARSE(app, argc, argv);

  if (*fit) {
    fit_cfg.model = fit_model == "bsvm"
                        ? trpca::TrpcaConfig::Model::bsvm
                        : (fit_model == "bwc" ? trpca::TrpcaConfig::Model::bwc
                                              : trpca::TrpcaConfig::Model::auto_select);
    return trpca::cli::cmd_fit(fit_cfg);
  }
  if (*smp) return trpca::cli::cmd_sample(sample_cfg);
  return trpca::cli::cmd_plot(plot_cfg);
}
