// Command-line front end: nonclassicality witnesses, Gaussian and loss scans,
// quantum non-Gaussianity certification, and detector-array simulation.

#include <CLI11.hpp>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "psw/psw.hpp"

namespace {

struct Grid {
  double lo = 0.0, hi = 0.0, step = 1.0;
};

Grid parse_grid(const std::string& text) {
  Grid grid;
  std::istringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c, ':'))
    throw CLI::ValidationError("grid", "expected lo:hi:step, got '" + text + "'");
  grid.lo = std::stod(a);
  grid.hi = std::stod(b);
  grid.step = std::stod(c);
  if (grid.step <= 0.0 || grid.hi < grid.lo)
    throw CLI::ValidationError("grid", "need lo <= hi and step > 0");
  return grid;
}

std::vector<double> grid_values(const Grid& grid) {
  std::vector<double> values;
  for (double x = grid.lo; x <= grid.hi + 0.5 * grid.step; x += grid.step)
    values.push_back(std::min(x, grid.hi));
  return values;
}

std::complex<double> parse_complex(const std::string& text) {
  std::istringstream in(text);
  std::string re, im;
  std::getline(in, re, ',');
  std::getline(in, im, ',');
  return {std::stod(re), im.empty() ? 0.0 : std::stod(im)};
}

void emit(const std::string& content, const std::string& output) {
  if (output.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + output);
  out << content;
}

nlohmann::json config_echo(const std::string& command, const nlohmann::json& args) {
  return {{"command", command}, {"args", args}, {"version", psw::library_version}};
}

int run_witness(const std::string& state_path, int n, double s, std::uint64_t seed,
                const std::string& output) {
  psw::QuantumState state = psw::load_state(state_path);
  psw::SearchConfig config;
  config.seed = seed;
  psw::WitnessReport report = psw::optimize_points(state, n, s, config);
  nlohmann::json j = psw::report_to_json(report);
  j["config"] = config_echo("witness", {{"state", state_path},
                                        {"n", n},
                                        {"s", s},
                                        {"seed", seed}});
  emit(j.dump(2) + "\n", output);
  return 0;
}

int run_gaussian_scan(double purity, double s, const Grid& r_grid,
                      const std::string& output) {
  std::ostringstream csv;
  csv << "purity,r,lambda_min,distance_bound\n";
  for (double r : grid_values(r_grid)) {
    psw::GaussianState state = psw::make_squeezed_thermal(purity, r, 0.0, {0.0, 0.0});
    psw::GaussianWitnessOptimum opt = psw::gaussian_lambda_min(state, s);
    csv << psw::format_sci(purity) << "," << psw::format_sci(r) << ","
        << psw::format_sci(opt.lambda_min) << ","
        << psw::format_sci(psw::distance_lower_bound(opt.lambda_min, 2)) << "\n";
  }
  emit(csv.str(), output);
  return 0;
}

int run_fock_loss_scan(const std::vector<int>& fock_levels, const Grid& eta_grid, int n,
                       std::uint64_t seed, const std::string& output) {
  psw::SearchConfig config;
  config.seed = seed;
  std::ostringstream csv;
  csv << "fock,eta,lambda_min\n";
  for (int level : fock_levels) {
    const psw::FockDensityMatrix pure = psw::fock_state(level, level + 1);
    for (double eta : grid_values(eta_grid)) {
      const psw::QuantumState lossy = psw::apply_loss(pure, eta);
      psw::WitnessReport report = psw::optimize_points(lossy, n, 0.0, config);
      csv << level << "," << psw::format_sci(eta) << ","
          << psw::format_sci(report.min_eigenvalue) << "\n";
    }
  }
  emit(csv.str(), output);
  return 0;
}

int run_qng(const std::string& state_path, const std::optional<Grid>& f_grid, double r,
            std::uint64_t seed, const std::string& output) {
  psw::SearchConfig config;
  config.seed = seed;
  if (f_grid) {
    std::ostringstream csv;
    csv << "f,lambda_min,mean_photon,bound,delta\n";
    for (double f : grid_values(*f_grid)) {
      psw::QuantumState state = psw::make_squeezed_two_photon_mixture(f, r);
      psw::QngReport rep = psw::certify_qng(state, config);
      csv << psw::format_sci(f) << "," << psw::format_sci(rep.lambda_min) << ","
          << psw::format_sci(rep.mean_photon) << "," << psw::format_sci(rep.bound) << ","
          << psw::format_sci(rep.delta) << "\n";
    }
    emit(csv.str(), output);
    return 0;
  }
  psw::QuantumState state = psw::load_state(state_path);
  psw::QngReport rep = psw::certify_qng(state, config);
  nlohmann::json j = psw::report_to_json(rep.witness);
  j["mean_photon"] = rep.mean_photon;
  j["qng_bound"] = rep.bound;
  j["delta"] = rep.delta;
  j["quantum_non_gaussian"] = rep.quantum_non_gaussian;
  j["config"] = config_echo("qng", {{"state", state_path}, {"seed", seed}});
  emit(j.dump(2) + "\n", output);
  return 0;
}

int run_detector_sim(const std::string& state_path, int detectors, double eta,
                     const std::string& alpha_text, std::int64_t shots,
                     std::uint64_t seed, const std::string& output) {
  psw::QuantumState state = psw::load_state(state_path);
  psw::ArraySpec spec{detectors, eta};
  const std::complex<double> alpha = parse_complex(alpha_text);
  if (shots > 0) {
    auto [clicks, stderrs] = psw::simulate_shots(state, alpha, spec, shots, seed);
    emit(psw::clicks_to_csv(clicks, stderrs, shots, seed), output);
  } else {
    psw::ClickDistribution clicks = psw::click_probabilities(state, alpha, spec);
    emit(psw::clicks_to_csv(clicks, std::vector<double>(clicks.probs.size(), 0.0), 0, seed),
         output);
  }
  return 0;
}

int run_recover(const std::string& clicks_path, const std::string& format,
                const std::string& output) {
  std::ifstream in(clicks_path);
  if (!in) throw std::invalid_argument("cannot open click file: " + clicks_path);
  psw::ClickCsv data = psw::clicks_from_csv(in);
  auto recovered = psw::recover_quasiprobs(data.clicks);
  if (format == "csv") {
    std::ostringstream csv;
    csv << "m,s,value\n";
    for (size_t m = 0; m < recovered.size(); ++m)
      csv << m << "," << psw::format_sci(recovered[m].first) << ","
          << psw::format_sci(recovered[m].second) << "\n";
    emit(csv.str(), output);
  } else {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& [s, w] : recovered) values.push_back({{"s", s}, {"value", w}});
    nlohmann::json j = {{"schema", psw::report_schema_version},
                        {"recovered", values},
                        {"config", config_echo("recover", {{"clicks", clicks_path}})}};
    emit(j.dump(2) + "\n", output);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space nonclassicality witnesses and detector-array analysis"};
  app.require_subcommand(1);

  std::string state_path, output, alpha_text = "0,0", clicks_path, format = "json";
  std::string r_grid_text, eta_grid_text, f_grid_text;
  std::vector<int> fock_levels;
  int n = 2, detectors = 1;
  double s = 0.0, purity = 1.0, r = 0.0, eta = 1.0;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;

  auto* witness = app.add_subcommand("witness", "optimize a witness for one state");
  witness->add_option("--state", state_path, "state JSON file")->required();
  witness->add_option("--n", n, "matrix size");
  witness->add_option("--s", s, "ordering parameter");
  witness->add_option("--seed", seed, "search seed");
  witness->add_option("--output", output, "report file (default stdout)");

  auto* gscan = app.add_subcommand("gaussian-scan", "closed-form lambda_min over r");
  gscan->add_option("--purity", purity)->required();
  gscan->add_option("--s", s, "ordering parameter");
  gscan->add_option("--r-grid", r_grid_text, "lo:hi:step")->required();
  gscan->add_option("--output", output);

  auto* fscan = app.add_subcommand("fock-loss-scan", "lambda_min of lossy Fock states");
  fscan->add_option("--fock", fock_levels, "Fock levels, e.g. 1,2,3")
      ->required()
      ->delimiter(',');
  fscan->add_option("--eta-grid", eta_grid_text, "lo:hi:step")->required();
  fscan->add_option("--n", n, "matrix size");
  fscan->add_option("--seed", seed);
  fscan->add_option("--output", output);

  auto* qng = app.add_subcommand("qng", "quantum non-Gaussianity certification");
  qng->add_option("--state", state_path, "state JSON file (single-state mode)");
  qng->add_option("--f-grid", f_grid_text, "lo:hi:step over the mixture fraction");
  qng->add_option("--r", r, "squeezing of the mixture family");
  qng->add_option("--seed", seed);
  qng->add_option("--output", output);

  auto* dsim = app.add_subcommand("detector-sim", "click statistics of an on-off array");
  dsim->add_option("--state", state_path)->required();
  dsim->add_option("--N", detectors, "number of detectors")->required();
  dsim->add_option("--eta", eta, "detector efficiency")->required();
  dsim->add_option("--alpha", alpha_text, "displacement re,im");
  dsim->add_option("--shots", shots, "finite shots (0 = exact)");
  dsim->add_option("--seed", seed);
  dsim->add_option("--output", output);

  auto* recover = app.add_subcommand("recover", "quasiprobabilities from click CSV");
  recover->add_option("--clicks", clicks_path, "click CSV file")->required();
  recover->add_option("--format", format, "json or csv");
  recover->add_option("--output", output);

  try {
    app.parse(argc, argv);
    if (witness->parsed()) return run_witness(state_path, n, s, seed, output);
    if (gscan->parsed())
      return run_gaussian_scan(purity, s, parse_grid(r_grid_text), output);
    if (fscan->parsed())
      return run_fock_loss_scan(fock_levels, parse_grid(eta_grid_text), n, seed, output);
    if (qng->parsed()) {
      std::optional<Grid> f_grid;
      if (!f_grid_text.empty()) f_grid = parse_grid(f_grid_text);
      if (!f_grid && state_path.empty())
        throw CLI::ValidationError("qng", "need either --state or --f-grid with --r");
      return run_qng(state_path, f_grid, r, seed, output);
    }
    if (dsim->parsed())
      return run_detector_sim(state_path, detectors, eta, alpha_text, shots, seed, output);
    if (recover->parsed()) return run_recover(clicks_path, format, output);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
