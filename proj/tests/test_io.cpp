#include <doctest.h>

#include <sstream>

#include "psw/psw.hpp"

using namespace psw;

TEST_CASE("scientific formatting is fixed-width and lowercase") {
  CHECK(format_sci(1.0) == "1.00000000000e+00");
  CHECK(format_sci(0.0) == "0.00000000000e+00");
  CHECK(format_sci(-2.5e-13) == "-2.50000000000e-13");
  CHECK(format_sci(6.02214076e23) == "6.02214076000e+23");
}

TEST_CASE("Gaussian state JSON round trip") {
  const GaussianState g = make_squeezed_thermal(0.7, 0.9, 0.3, {0.2, -0.4});
  const nlohmann::json j = state_to_json(g);
  CHECK(j.at("kind") == "gaussian");
  const QuantumState back = state_from_json(j);
  const auto& gb = std::get<GaussianState>(back);
  CHECK(gb.purity == g.purity);
  CHECK(gb.squeezing == g.squeezing);
  CHECK(gb.phase == g.phase);
  CHECK(gb.displacement == g.displacement);
}

TEST_CASE("Fock state JSON round trip") {
  const FockDensityMatrix f = apply_loss(fock_state(2, 6), 0.8);
  const nlohmann::json j = state_to_json(f);
  CHECK(j.at("kind") == "fock");
  CHECK(j.at("dim") == 6);
  const QuantumState back = state_from_json(j);
  const auto& fb = std::get<FockDensityMatrix>(back);
  REQUIRE(fb.dim() == f.dim());
  for (int a = 0; a < f.dim(); ++a)
    for (int b = 0; b < f.dim(); ++b) CHECK(fb(a, b) == f(a, b));
}

TEST_CASE("coordinate-scaled state JSON round trip") {
  const QuantumState s = make_squeezed_two_photon_mixture(0.4, 0.3);
  const nlohmann::json j = state_to_json(s);
  CHECK(j.at("kind") == "scaled-fock");
  const QuantumState round = state_from_json(j);
  const auto& back = std::get<ScaledFockState>(round);
  CHECK(back.scale == 0.3);
  CHECK(back.base(2, 2).real() == doctest::Approx(0.4));
}

TEST_CASE("state JSON rejects malformed input") {
  CHECK_THROWS_AS(state_from_json({{"kind", "unknown"}}), std::invalid_argument);
  nlohmann::json bad = {{"kind", "fock"}, {"dim", 2}, {"entries", {{1.0, 0.0}}}};
  CHECK_THROWS_AS(state_from_json(bad), std::invalid_argument);
  CHECK_THROWS_AS(load_state("/nonexistent/state.json"), std::invalid_argument);
}

TEST_CASE("witness report JSON carries schema, verdict, and provenance fields") {
  const WitnessReport rep = optimize_points(fock_state(1, 2), 1, 0.0);
  const nlohmann::json j = report_to_json(rep);
  CHECK(j.at("schema") == report_schema_version);
  CHECK(j.at("version") == std::string(library_version));
  CHECK(j.at("verdict") == "nonclassical");
  CHECK(j.at("min_eigenvalue").get<double>() == rep.min_eigenvalue);
  CHECK(j.at("points").size() == 1);
  CHECK(j.at("eigenvector").size() == 1);
  CHECK(j.at("s") == 0.0);
  CHECK(j.at("metadata").get<std::string>().find("seed=") != std::string::npos);
}

TEST_CASE("click CSV round trip preserves the scenario and the numbers") {
  const QuantumState state = coherent_state({0.4, 0.1});
  const ArraySpec spec{3, 0.85};
  const auto [clicks, stderrs] = simulate_shots(state, {0.2, -0.1}, spec, 10000, 77);
  const std::string csv = clicks_to_csv(clicks, stderrs, 10000, 77);
  std::istringstream in(csv);
  const ClickCsv back = clicks_from_csv(in);
  CHECK(back.clicks.spec.detectors == 3);
  CHECK(back.clicks.spec.efficiency == doctest::Approx(0.85).epsilon(1e-11));
  CHECK(back.clicks.displacement.real() == doctest::Approx(0.2).epsilon(1e-11));
  CHECK(back.clicks.displacement.imag() == doctest::Approx(-0.1).epsilon(1e-11));
  CHECK(back.shots == 10000);
  CHECK(back.seed == 77);
  REQUIRE(back.clicks.probs.size() == 4);
  for (int k = 0; k <= 3; ++k) {
    CHECK(back.clicks.probs[k] == doctest::Approx(clicks.probs[k]).epsilon(1e-11));
    CHECK(back.stderrs[k] == doctest::Approx(stderrs[k]).epsilon(1e-11));
  }
}

TEST_CASE("click CSV is strict about its header lines") {
  std::istringstream no_comment("k,p_k,stderr_k\n0,1.0,0.0\n");
  CHECK_THROWS_AS(clicks_from_csv(no_comment), std::invalid_argument);
  std::istringstream bad_columns("# N=1,eta=1.0,alpha_re=0,alpha_im=0,shots=0,seed=0\nwrong\n");
  CHECK_THROWS_AS(clicks_from_csv(bad_columns), std::invalid_argument);
  std::istringstream short_rows(
      "# N=2,eta=1.0,alpha_re=0,alpha_im=0,shots=0,seed=0\nk,p_k,stderr_k\n0,1.0,0.0\n");
  CHECK_THROWS_AS(clicks_from_csv(short_rows), std::invalid_argument);
}

TEST_CASE("CSV emission is identical across repeated runs") {
  const QuantumState state = thermal_state(0.6);
  const auto [c1, s1] = simulate_shots(state, {0, 0}, {2, 0.9}, 5000, 5);
  const auto [c2, s2] = simulate_shots(state, {0, 0}, {2, 0.9}, 5000, 5);
  CHECK(clicks_to_csv(c1, s1, 5000, 5) == clicks_to_csv(c2, s2, 5000, 5));
}
