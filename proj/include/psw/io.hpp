#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "psw/detector.hpp"
#include "psw/states.hpp"
#include "psw/witness.hpp"

namespace psw {

inline constexpr const char* library_version = "0.1.0";
inline constexpr int report_schema_version = 1;

/// 12 significant digits, lowercase scientific; stable across platforms.
inline std::string format_sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.11e", x);
  return buf;
}

inline nlohmann::json state_to_json(const QuantumState& state) {
  struct Visitor {
    nlohmann::json operator()(const GaussianState& g) const {
      return {{"kind", "gaussian"},
              {"purity", g.purity},
              {"squeezing", g.squeezing},
              {"phase", g.phase},
              {"displacement", {g.displacement.real(), g.displacement.imag()}}};
    }
    nlohmann::json operator()(const FockDensityMatrix& f) const {
      nlohmann::json entries = nlohmann::json::array();
      for (int j = 0; j < f.dim(); ++j)
        for (int k = 0; k < f.dim(); ++k)
          entries.push_back({f(j, k).real(), f(j, k).imag()});
      return {{"kind", "fock"}, {"dim", f.dim()}, {"entries", entries}};
    }
    nlohmann::json operator()(const ScaledFockState& s) const {
      nlohmann::json j = Visitor{}(s.base);
      j["kind"] = "scaled-fock";
      j["scale"] = s.scale;
      return j;
    }
  };
  return std::visit(Visitor{}, state);
}

inline QuantumState state_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") {
    const auto& d = j.at("displacement");
    return make_squeezed_thermal(j.at("purity").get<double>(),
                                 j.at("squeezing").get<double>(),
                                 j.at("phase").get<double>(),
                                 complexd(d.at(0).get<double>(), d.at(1).get<double>()));
  }
  if (kind == "fock" || kind == "scaled-fock") {
    const int dim = j.at("dim").get<int>();
    const auto& entries = j.at("entries");
    if (int(entries.size()) != dim * dim)
      throw std::invalid_argument("state_from_json: entries size != dim^2");
    Eigen::MatrixXcd rho(dim, dim);
    for (int jj = 0; jj < dim; ++jj)
      for (int k = 0; k < dim; ++k) {
        const auto& e = entries.at(jj * dim + k);
        rho(jj, k) = complexd(e.at(0).get<double>(), e.at(1).get<double>());
      }
    FockDensityMatrix fock(rho);
    if (kind == "scaled-fock")
      return ScaledFockState{std::move(fock), j.at("scale").get<double>()};
    return fock;
  }
  throw std::invalid_argument("state_from_json: unknown kind '" + kind + "'");
}

inline QuantumState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open state file: " + path);
  nlohmann::json j;
  in >> j;
  return state_from_json(j);
}

inline nlohmann::json report_to_json(const WitnessReport& report) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : report.points.points) points.push_back({p.real(), p.imag()});
  nlohmann::json eigvec = nlohmann::json::array();
  for (int i = 0; i < report.eigenvector.size(); ++i)
    eigvec.push_back({report.eigenvector(i).real(), report.eigenvector(i).imag()});
  return {{"schema", report_schema_version},
          {"min_eigenvalue", report.min_eigenvalue},
          {"eigenvector", eigvec},
          {"points", points},
          {"s", report.points.s},
          {"verdict", report.nonclassical ? "nonclassical" : "classical-consistent"},
          {"distance_bound", report.distance_bound},
          {"metadata", report.metadata},
          {"version", library_version}};
}

/// Click-data CSV: a header comment carrying the scenario, then k,p_k,stderr_k.
inline std::string clicks_to_csv(const ClickDistribution& clicks,
                                 const std::vector<double>& stderrs,
                                 std::int64_t shots, std::uint64_t seed) {
  std::ostringstream out;
  out << "# N=" << clicks.spec.detectors << ",eta=" << format_sci(clicks.spec.efficiency)
      << ",alpha_re=" << format_sci(clicks.displacement.real())
      << ",alpha_im=" << format_sci(clicks.displacement.imag()) << ",shots=" << shots
      << ",seed=" << seed << "\n";
  out << "k,p_k,stderr_k\n";
  for (size_t k = 0; k < clicks.probs.size(); ++k) {
    const double se = k < stderrs.size() ? stderrs[k] : 0.0;
    out << k << "," << format_sci(clicks.probs[k]) << "," << format_sci(se) << "\n";
  }
  return out.str();
}

struct ClickCsv {
  ClickDistribution clicks;
  std::vector<double> stderrs;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
};

inline ClickCsv clicks_from_csv(std::istream& in) {
  ClickCsv result;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw std::invalid_argument("click CSV: missing header comment");
  std::istringstream header(line.substr(2));
  std::string field;
  double alpha_re = 0.0, alpha_im = 0.0;
  while (std::getline(header, field, ',')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "N") result.clicks.spec.detectors = std::stoi(value);
    else if (key == "eta") result.clicks.spec.efficiency = std::stod(value);
    else if (key == "alpha_re") alpha_re = std::stod(value);
    else if (key == "alpha_im") alpha_im = std::stod(value);
    else if (key == "shots") result.shots = std::stoll(value);
    else if (key == "seed") result.seed = std::stoull(value);
  }
  result.clicks.displacement = complexd(alpha_re, alpha_im);
  if (!std::getline(in, line) || line != "k,p_k,stderr_k")
    throw std::invalid_argument("click CSV: missing column header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string k_s, p_s, se_s;
    if (!std::getline(row, k_s, ',') || !std::getline(row, p_s, ',') ||
        !std::getline(row, se_s, ','))
      throw std::invalid_argument("click CSV: malformed row: " + line);
    result.clicks.probs.push_back(std::stod(p_s));
    result.stderrs.push_back(std::stod(se_s));
  }
  if (int(result.clicks.probs.size()) != result.clicks.spec.detectors + 1)
    throw std::invalid_argument("click CSV: row count does not match N");
  return result;
}

}  // namespace psw
