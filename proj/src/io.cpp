#include "trpca/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace trpca::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void line_error(const std::string& path, std::size_t line,
                             const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

std::vector<TorusPoint> read_angles_csv(const std::string& path,
                                        std::size_t* wrapped) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<TorusPoint> out;
  std::size_t wrap_count = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != "theta1,theta2") {
        line_error(path, 1, "expected header 'theta1,theta2'");
      }
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      line_error(path, lineno, "expected two comma-separated values");
    }
    double v1 = 0.0, v2 = 0.0;
    try {
      std::size_t used = 0;
      v1 = std::stod(line.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("trailing characters");
      const std::string rest = line.substr(comma + 1);
      v2 = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      line_error(path, lineno, "non-numeric cell");
    }
    if (!std::isfinite(v1) || !std::isfinite(v2)) {
      line_error(path, lineno, "non-finite angle");
    }
    if (v1 < -kPi || v1 >= kPi || v2 < -kPi || v2 >= kPi) ++wrap_count;
    out.emplace_back(cmod(v1), cmod(v2));
  }
  if (wrapped) *wrapped = wrap_count;
  return out;
}

void write_angles_csv(const std::string& path,
                      const std::vector<TorusPoint>& pts) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "theta1,theta2\n";
  for (const TorusPoint& p : pts) {
    out << num17(p.theta1) << ',' << num17(p.theta2) << '\n';
  }
}

void write_scores_csv(const std::string& path, const Scores& scores) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "index,s1,s2\n";
  for (std::size_t i = 0; i < scores.s1.size(); ++i) {
    out << i << ',' << num17(scores.s1[i]) << ',' << num17(scores.s2[i])
        << '\n';
  }
}

Scores read_scores_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Scores out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');  // index
    std::getline(row, cell, ',');
    out.s1.push_back(std::stod(cell));
    std::getline(row, cell, ',');
    out.s2.push_back(std::stod(cell));
  }
  return out;
}

json curve_to_json(const FourierRidge& fr) {
  return json{{"a", fr.a},
              {"b", fr.b},
              {"m", fr.m},
              {"index_coord", fr.index_coord},
              {"mu", {fr.mu.theta1.value(), fr.mu.theta2.value()}},
              {"rho0", fr.rho0},
              {"total_length", fr.total_length_R},
              {"extended", fr.extended}};
}

FourierRidge curve_from_json(const json& j) {
  FourierRidge fr;
  fr.a = j.at("a").get<std::vector<double>>();
  fr.b = j.at("b").get<std::vector<double>>();
  fr.m = j.at("m").get<int>();
  fr.index_coord = j.at("index_coord").get<int>();
  fr.mu = TorusPoint(j.at("mu")[0].get<double>(), j.at("mu")[1].get<double>());
  fr.rho0 = j.at("rho0").get<double>();
  fr.extended = j.at("extended").get<bool>();
  return arclength_param(std::move(fr));
}

namespace {

json params_to_json(const ModelParams& params) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BsvmParams>) {
          return json{{"mu1", m.mu1.value()},   {"mu2", m.mu2.value()},
                      {"kappa1", m.kappa1},     {"kappa2", m.kappa2},
                      {"lambda", m.lambda}};
        } else if constexpr (std::is_same_v<T, BwcParams>) {
          return json{{"mu1", m.mu1.value()}, {"mu2", m.mu2.value()},
                      {"xi1", m.xi1},         {"xi2", m.xi2},
                      {"rho", m.rho}};
        } else {
          return json{{"mu1", m.mu.theta1.value()},
                      {"mu2", m.mu.theta2.value()},
                      {"sigma1_sq", m.sigma1_sq},
                      {"sigma2_sq", m.sigma2_sq},
                      {"rho", m.rho}};
        }
      },
      params);
}

json lrt_to_json(const LrtResult& r) {
  return json{{"statistic", r.statistic},
              {"critical", r.critical},
              {"rejected", r.rejected},
              {"alpha", r.alpha}};
}

json fit_result_to_json(const FitResult& f) {
  std::vector<std::string> restr;
  if (f.restrictions.homogeneous) restr.push_back("homogeneous");
  if (f.restrictions.independent) restr.push_back("independent");
  return json{{"model", f.family == ModelFamily::bsvm ? "bsvm" : "bwc"},
              {"params", params_to_json(f.params)},
              {"loglik", f.loglik},
              {"bic", f.bic},
              {"n", f.n},
              {"converged", f.converged},
              {"restrictions", restr}};
}

}  // namespace

json fit_to_json(const TrpcaFit& fit, const RunConfig& config,
                 std::size_t n_wrapped) {
  std::vector<std::string> flags;
  if (fit.edge_flags.edge_ridge) flags.push_back("edge_ridge");
  if (fit.edge_flags.extended) flags.push_back("edge_case_extended");
  if (fit.edge_flags.ridge_ambiguous) flags.push_back("ridge_ambiguous");
  if (fit.edge_flags.frechet_tie) flags.push_back("frechet_tie");

  json j{{"fit", fit_result_to_json(fit.selected)},
         {"edge_flags", flags},
         {"pve", fit.pve},
         {"m2", fit.scores.m2},
         {"curve", curve_to_json(fit.curve)},
         {"diagnostics", fit.diagnostics},
         {"input", {{"path", config.input_path}, {"wrapped", n_wrapped}}}};
  if (fit.lrt_independence) {
    j["lrt"]["independence"] = lrt_to_json(*fit.lrt_independence);
  }
  if (fit.lrt_homogeneity) {
    j["lrt"]["homogeneity"] = lrt_to_json(*fit.lrt_homogeneity);
  }
  json cands = json::array();
  for (const FitResult& f : fit.rejected_candidates) {
    cands.push_back(fit_result_to_json(f));
  }
  j["rejected_candidates"] = cands;
  return j;
}

namespace {

void write_summary(const std::string& path, const TrpcaFit& fit,
                   std::size_t n, std::size_t n_wrapped) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  const FitResult& s = fit.selected;
  out << "TR-PCA fit summary\n";
  out << "==================\n";
  out << "observations: " << n << " (" << n_wrapped << " wrapped on ingest)\n";
  out << "model: " << (s.family == ModelFamily::bsvm ? "BSvM" : "BWC")
      << (s.restrictions.count() ? " (restricted)" : "") << "\n";
  out << "params: ";
  std::visit(
      [&out](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BsvmParams>) {
          out << "mu=(" << m.mu1.value() << ", " << m.mu2.value() << ") kappa=("
              << m.kappa1 << ", " << m.kappa2 << ") lambda=" << m.lambda;
        } else if constexpr (std::is_same_v<T, BwcParams>) {
          out << "mu=(" << m.mu1.value() << ", " << m.mu2.value() << ") xi=("
              << m.xi1 << ", " << m.xi2 << ") rho=" << m.rho;
        }
      },
      s.params);
  out << "\nloglik: " << s.loglik << "  BIC: " << s.bic << "\n";
  if (fit.lrt_independence) {
    out << "independence LRT: stat " << fit.lrt_independence->statistic
        << (fit.lrt_independence->rejected ? " (rejected)" : " (kept)")
        << "\n";
  }
  if (fit.lrt_homogeneity) {
    out << "homogeneity LRT: stat " << fit.lrt_homogeneity->statistic
        << (fit.lrt_homogeneity->rejected ? " (rejected)" : " (kept)") << "\n";
  }
  out << "ridge branch: "
      << (fit.diagnostics.count("ridge_branch")
              ? fit.diagnostics.at("ridge_branch")
              : "?")
      << "\n";
  out << "curve length R: " << fit.curve.total_length_R << "\n";
  out << "PVE: " << fit.pve << "\n";
}

}  // namespace

int cmd_fit(const RunConfig& config) {
  std::vector<TorusPoint> data;
  std::size_t n_wrapped = 0;
  try {
    data = read_angles_csv(config.input_path, &n_wrapped);
  } catch (const std::exception& e) {
    std::cerr << "trpca fit: " << e.what() << "\n";
    return 2;
  }
  if (data.size() < 10) {
    std::cerr << "trpca fit: need at least 10 rows, got " << data.size()
              << "\n";
    return 2;
  }
  if (n_wrapped > 0) {
    std::cerr << "trpca fit: wrapped " << n_wrapped
              << " out-of-range angles into [-pi, pi)\n";
  }

  TrpcaConfig pc;
  pc.model = config.model;
  pc.alpha = config.alpha;
  pc.fourier_m = config.fourier_m;
  pc.grid_n = config.grid_n;

  TrpcaFit fit;
  try {
    fit = ridge_pca(data, pc);
  } catch (const convergence_error& e) {
    std::cerr << "trpca fit: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "trpca fit: " << e.what() << "\n";
    return 3;
  }

  try {
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    std::ofstream jf(dir / "fit.json");
    jf << fit_to_json(fit, config, n_wrapped).dump(2) << "\n";
    write_scores_csv((dir / "scores.csv").string(), fit.scores);
    write_ridge_csv(fit.curve, (dir / "ridge.csv").string());
    write_summary((dir / "summary.txt").string(), fit, data.size(),
                  n_wrapped);
  } catch (const std::exception& e) {
    std::cerr << "trpca fit: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_sample(const SampleConfig& config) {
  try {
    ModelParams params = [&]() -> ModelParams {
      if (config.model == "bsvm") {
        return BsvmParams(config.mu1, config.mu2, config.kappa1,
                          config.kappa2, config.lambda);
      }
      if (config.model == "bwc") {
        return BwcParams(config.mu1, config.mu2, config.xi1, config.xi2,
                         config.rho);
      }
      if (config.model == "bwn") {
        return BwnParams(config.mu1, config.mu2, config.sigma1_sq,
                         config.sigma2_sq, config.rho);
      }
      throw std::invalid_argument("unknown model '" + config.model +
                                  "' (expected bsvm, bwc, or bwn)");
    }();
    const std::vector<TorusPoint> pts =
        sample(params, config.n, config.seed);
    write_angles_csv(config.output_path, pts);
  } catch (const std::exception& e) {
    std::cerr << "trpca sample: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// SVG rendering

namespace {

struct Panel {
  double x0, y0, w, h;      // pixel rect
  double lo1, hi1, lo2, hi2;  // data rect

  double px(double v1) const { return x0 + (v1 - lo1) / (hi1 - lo1) * w; }
  double py(double v2) const { return y0 + h - (v2 - lo2) / (hi2 - lo2) * h; }
};

void svg_axes(std::ostream& os, const Panel& p, const std::string& xlab,
              const std::string& ylab, const std::string& title) {
  os << "<rect x=\"" << p.x0 << "\" y=\"" << p.y0 << "\" width=\"" << p.w
     << "\" height=\"" << p.h
     << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << p.x0 + p.w / 2 << "\" y=\"" << p.y0 + p.h + 30
     << "\" text-anchor=\"middle\" font-size=\"14\">" << xlab << "</text>\n";
  os << "<text x=\"" << p.x0 - 32 << "\" y=\"" << p.y0 + p.h / 2
     << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 "
     << p.x0 - 32 << " " << p.y0 + p.h / 2 << ")\">" << ylab << "</text>\n";
  os << "<text x=\"" << p.x0 + p.w / 2 << "\" y=\"" << p.y0 - 8
     << "\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  // tick labels at -pi, 0, pi
  for (double v : {-kPi, 0.0, kPi}) {
    const char* lab = v < -1 ? "-&#960;" : (v > 1 ? "&#960;" : "0");
    os << "<text x=\"" << p.px(v) << "\" y=\"" << p.y0 + p.h + 14
       << "\" text-anchor=\"middle\" font-size=\"11\">" << lab << "</text>\n";
    os << "<text x=\"" << p.x0 - 8 << "\" y=\"" << p.py(v) + 4
       << "\" text-anchor=\"end\" font-size=\"11\">" << lab << "</text>\n";
  }
}

// Marching-squares contour segments for one level, one path per level.
void svg_contours(std::ostream& os, const Panel& p,
                  const std::vector<std::vector<double>>& grid, double lo1,
                  double step1, double lo2, double step2, double level,
                  const std::string& color) {
  const std::size_t n1 = grid.size(), n2 = grid.front().size();
  std::ostringstream d;
  auto interp = [level](double a, double b) { return (level - a) / (b - a); };
  for (std::size_t i = 0; i + 1 < n1; ++i) {
    for (std::size_t j = 0; j + 1 < n2; ++j) {
      const double v00 = grid[i][j], v10 = grid[i + 1][j];
      const double v01 = grid[i][j + 1], v11 = grid[i + 1][j + 1];
      const double x0 = lo1 + step1 * i, x1 = x0 + step1;
      const double y0 = lo2 + step2 * j, y1 = y0 + step2;
      std::vector<std::pair<double, double>> pts;
      if ((v00 < level) != (v10 < level)) {
        pts.emplace_back(x0 + interp(v00, v10) * step1, y0);
      }
      if ((v01 < level) != (v11 < level)) {
        pts.emplace_back(x0 + interp(v01, v11) * step1, y1);
      }
      if ((v00 < level) != (v01 < level)) {
        pts.emplace_back(x0, y0 + interp(v00, v01) * step2);
      }
      if ((v10 < level) != (v11 < level)) {
        pts.emplace_back(x1, y0 + interp(v10, v11) * step2);
      }
      if (pts.size() >= 2) {
        d << "M" << p.px(pts[0].first) << " " << p.py(pts[0].second) << "L"
          << p.px(pts[1].first) << " " << p.py(pts[1].second);
        if (pts.size() == 4) {
          d << "M" << p.px(pts[2].first) << " " << p.py(pts[2].second) << "L"
            << p.px(pts[3].first) << " " << p.py(pts[3].second);
        }
      }
    }
  }
  const std::string path = d.str();
  if (!path.empty()) {
    os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"0.8\"/>\n";
  }
}

}  // namespace

int cmd_plot(const PlotConfig& config) {
  const fs::path dir(config.artifact_dir);
  json j;
  Scores scores;
  try {
    std::ifstream jf(dir / "fit.json");
    if (!jf) throw std::runtime_error("missing fit.json in " + dir.string());
    jf >> j;
    if (!fs::exists(dir / "ridge.csv")) {
      throw std::runtime_error("missing ridge.csv in " + dir.string());
    }
    scores = read_scores_csv((dir / "scores.csv").string());
  } catch (const std::exception& e) {
    std::cerr << "trpca plot: " << e.what() << "\n";
    return 2;
  }

  try {
    // Rebuild the model for contours and the curve for the ridge overlay.
    const json& pj = j.at("fit").at("params");
    const std::string family = j.at("fit").at("model").get<std::string>();
    ModelParams params =
        family == "bsvm"
            ? ModelParams(BsvmParams(pj.at("mu1"), pj.at("mu2"),
                                     pj.at("kappa1"), pj.at("kappa2"),
                                     pj.at("lambda")))
            : ModelParams(BwcParams(pj.at("mu1"), pj.at("mu2"), pj.at("xi1"),
                                    pj.at("xi2"), pj.at("rho")));
    const FourierRidge curve = curve_from_json(j.at("curve"));

    std::vector<TorusPoint> data;
    const std::string data_path = j.at("input").at("path").get<std::string>();
    if (fs::exists(data_path)) data = read_angles_csv(data_path);

    // Density grid (100 x 100) and contour levels.
    constexpr int kN = 100;
    std::vector<std::vector<double>> grid(kN, std::vector<double>(kN));
    double fmax = 0.0;
    for (int i = 0; i < kN; ++i) {
      for (int jj = 0; jj < kN; ++jj) {
        const double t1 = -kPi + kTwoPi * i / (kN - 1);
        const double t2 = -kPi + kTwoPi * jj / (kN - 1);
        grid[i][jj] = density(TorusPoint(t1, t2), params);
        fmax = std::max(fmax, grid[i][jj]);
      }
    }

    std::ofstream svg(config.output_path);
    if (!svg) {
      throw std::runtime_error("cannot open " + config.output_path);
    }
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"980\" "
           "height=\"520\" viewBox=\"0 0 980 520\">\n";
    svg << "<rect width=\"980\" height=\"520\" fill=\"white\"/>\n";

    const Panel data_panel{60, 40, 400, 400, -kPi, kPi, -kPi, kPi};
    const Panel score_panel{560, 40, 400, 400, -kPi, kPi, -kPi, kPi};

    svg_axes(svg, data_panel, "&#952;1", "&#952;2", "sample, density, ridge");
    const double step = kTwoPi / (kN - 1);
    for (int l = 1; l <= 8; ++l) {
      svg_contours(svg, data_panel, grid, -kPi, step, -kPi, step,
                   fmax * l / 9.0, "#7b9fd4");
    }
    for (const TorusPoint& p : data) {
      svg << "<circle cx=\"" << data_panel.px(p.theta1) << "\" cy=\""
          << data_panel.py(p.theta2) << "\" r=\"1.5\" fill=\"black\" "
             "fill-opacity=\"0.45\"/>\n";
    }

    // Ridge overlay: samples sorted by the index coordinate, split at wrap
    // jumps so no segment crosses the seam.
    std::vector<TorusPoint> rp = curve.alpha_cache;
    std::sort(rp.begin(), rp.end(),
              [&](const TorusPoint& a, const TorusPoint& b) {
                return curve.index_coord == 1
                           ? a.theta1.value() < b.theta1.value()
                           : a.theta2.value() < b.theta2.value();
              });
    std::ostringstream rd;
    bool open = false;
    for (std::size_t i = 0; i < rp.size(); ++i) {
      const bool jump =
          i > 0 &&
          (std::fabs(rp[i].theta1 - rp[i - 1].theta1) > kPi ||
           std::fabs(rp[i].theta2 - rp[i - 1].theta2) > kPi);
      rd << (!open || jump ? "M" : "L") << data_panel.px(rp[i].theta1) << " "
         << data_panel.py(rp[i].theta2);
      open = true;
    }
    svg << "<path d=\"" << rd.str()
        << "\" fill=\"none\" stroke=\"#c62828\" stroke-width=\"2\"/>\n";

    svg_axes(svg, score_panel, "s1", "s2", "TR-PCA scores");
    for (std::size_t i = 0; i < scores.s1.size(); ++i) {
      const int hue =
          static_cast<int>(std::lround((scores.s1[i] + kPi) / kTwoPi * 300));
      svg << "<circle cx=\"" << score_panel.px(scores.s1[i]) << "\" cy=\""
          << score_panel.py(scores.s2[i]) << "\" r=\"1.8\" fill=\"hsl("
          << hue << ",70%,45%)\"/>\n";
    }
    svg << "</svg>\n";
  } catch (const std::exception& e) {
    std::cerr << "trpca plot: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace trpca::cli
