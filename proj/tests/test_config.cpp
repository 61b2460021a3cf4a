#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "prionet/analysis.hpp"
#include "prionet/config.hpp"
#include "prionet/errors.hpp"
#include "prionet/ngm.hpp"

using namespace prionet;

namespace {

const char* kFig3 = R"(# three neurons, fully connected
[global]
d = 0.015
p = 5
y_c = 60
T = 0.17

[neuron 1]
K = 1500
mu = 18
[neuron 2]
K = 1500
mu = 18
[neuron 3]
K = 1.5e3   # scientific notation
mu = 18

[edge 1 -> 2]
alpha = 0.9
kappa = 0.1
[edge 1 -> 3]
alpha = 0.9
kappa = 0.1
[edge 2 -> 1]
alpha = 0.9
kappa = 0.1
[edge 2 -> 3]
alpha = 0.9
kappa = 0.1
[edge 3 -> 1]
alpha = 0.9
kappa = 0.1
[edge 3 -> 2]
alpha = 0.9
kappa = 0.1
)";

const char* kMinimal = "[global]\nd = 0.1\np = 2\ny_c = 1\nT = 0.5\n[neuron 1]\nK = 1\nmu = 1\n";

void same_model(const NetworkModel& a, const NetworkModel& b) {
  REQUIRE(a.size() == b.size());
  CHECK(a.d() == b.d());
  CHECK(a.hill().p == b.hill().p);
  CHECK(a.hill().y_c == b.hill().y_c);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.neuron(i).K == b.neuron(i).K);
    CHECK(a.neuron(i).mu == b.neuron(i).mu);
    CHECK(a.neuron(i).T == b.neuron(i).T);
    CHECK(a.neuron(i).alpha_sink == b.neuron(i).alpha_sink);
  }
  REQUIRE(a.edges().size() == b.edges().size());
  for (std::size_t k = 0; k < a.edges().size(); ++k) {
    CHECK(a.edges()[k].from == b.edges()[k].from);
    CHECK(a.edges()[k].to == b.edges()[k].to);
    CHECK(a.edges()[k].alpha == b.edges()[k].alpha);
    CHECK(a.edges()[k].kappa == b.edges()[k].kappa);
  }
}

std::string parse_error(const std::string& text) {
  try {
    parse_model(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "no error";
}

}  // namespace

TEST_CASE("parse a fully connected model") {
  const auto m = parse_model(kFig3);
  CHECK(m.size() == 3);
  CHECK(m.edges().size() == 6);
  CHECK(m.neuron(2).K == 1500.0);
  CHECK(m.neuron(0).T == 0.17);
  CHECK(m.neuron(0).alpha_sink == 0.0);
  CHECK(std::abs(compute_r0(m).r0 - 0.8194) < 1e-3);
  same_model(m, preset("fig3").model);
}

TEST_CASE("parse errors carry positions") {
  CHECK(parse_error(std::string(kMinimal) + "[neuron 2]\nK = 1\nmu = 1\n[edge 1 -> 1]\nalpha = 1\nkappa = 0\n") ==
        "line 12: self-edge on neuron 1");
  CHECK(parse_error(std::string(kMinimal) + "nu = 3\n") == "line 9: unknown key 'nu' in [neuron 1]");
  CHECK(parse_error(std::string(kMinimal) + "mu = 3\n") == "line 9: duplicate key 'mu' in [neuron 1]");
  CHECK(parse_error(std::string(kMinimal) + "[neuron 1]\n").find("duplicate section") != std::string::npos);
  CHECK(parse_error(std::string(kMinimal) + "[global]\n").find("duplicate section") != std::string::npos);
  CHECK(parse_error(std::string(kMinimal) + "[neuron 3]\nK = 1\nmu = 1\n") ==
        "line 9: non-contiguous neuron ids: neuron 2 is missing");
  CHECK(parse_error(std::string(kMinimal) + "[edge 1 -> 2]\nalpha = 1\nkappa = 0\n") ==
        "line 9: edge to unknown neuron in [edge 1 -> 2]");
  CHECK(parse_error(std::string(kMinimal) + "T = abc\n").find("line 9: syntax error") == 0);
  CHECK(parse_error(std::string(kMinimal) + "just words\n").find("line 9: syntax error") == 0);
  CHECK(parse_error(std::string(kMinimal) + "[nucleus 1]\n").find("line 9: syntax error") == 0);
  CHECK(parse_error("d = 1\n") == "line 1: entry outside of any section");
  CHECK(parse_error("[neuron 1]\nK = 1\nmu = 1\nT = 0\n") == "missing [global] section");
  CHECK(parse_error("[global]\nd = 0.1\np = 2\n[neuron 1]\nK = 1\nmu = 1\nT = 0\n").find("y_c") !=
        std::string::npos);
  CHECK(parse_error("[global]\nd = 0.1\np = 2\ny_c = 1\n[neuron 1]\nK = 1\nmu = 1\n").find("'T'") !=
        std::string::npos);
  CHECK(parse_error("[global]\nd = 0.1\np = 2\ny_c = 1\n[neuron 0]\nK = 1\nmu = 1\nT = 0\n")
            .find("start at 1") != std::string::npos);
}

TEST_CASE("comments, blank lines and numerals") {
  const auto m = parse_model(
      "  # leading comment\n\n[ global ]\n d=1e-1\np = +2.\ny_c = .5 # trailing\nT = 0\n"
      "[neuron 1]\nK = 10\nmu = 1\nalpha_sink = 2.5E0\n");
  CHECK(m.d() == 0.1);
  CHECK(m.hill().p == 2.0);
  CHECK(m.hill().y_c == 0.5);
  CHECK(m.alpha_total(0) == 2.5);
}

TEST_CASE("round trip through the text format") {
  for (const auto& name : preset_names()) {
    const auto m = preset(name).model;
    const std::string once = emit_model(m);
    const auto back = parse_model(once);
    same_model(m, back);
    CHECK(emit_model(back) == once);
  }
  const std::string first = emit_model(parse_model(kFig3));
  CHECK(emit_model(parse_model(first)) == first);
}

TEST_CASE("load from disk") {
  CHECK_THROWS_AS(load_model("/nonexistent/model.txt"), ModelError);
}

TEST_CASE("presets") {
  const auto names = preset_names();
  CHECK(names == std::vector<std::string>{"fig3-full3", "fig4-full3", "fig5-line5", "fig6-ring5", "fig7-line5",
                                          "fig9-line9"});
  for (const auto& name : names) {
    const auto p = preset(name);
    CHECK(p.name == name);
    CHECK(preset(name.substr(0, 4)).name == name);
    for (std::size_t i = 0; i < p.model.size(); ++i) {
      CHECK(p.initial.x0[i] == p.model.neuron(i).K / p.model.neuron(i).mu);
      CHECK(p.initial.y_history[i] == 1.0);
    }
  }
  CHECK_THROWS_WITH_AS(preset("fig8"), doctest::Contains("unknown preset"), ModelError);

  const auto fig7 = preset("fig7").model;
  for (std::size_t i = 0; i < 5; ++i) CHECK(fig7.alpha_total(i) == doctest::Approx(3.6).epsilon(1e-15));
  CHECK(fig7.edges().size() == 4);
  const auto fig9 = preset("fig9").model;
  CHECK(fig9.edges().size() == 8);
  CHECK(local_r0(fig9, 0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(preset("fig6").model.edges().size() == 5);
  CHECK(preset("fig5").model.edges().size() == 4);
  for (const auto& e : preset("fig6").model.edges()) CHECK(e.kappa == 0.17);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1500) == "1500");
  for (double v : {0.1, 1.0 / 3.0, 83.33333333333333, 1e-300, 6.02e23}) {
    CHECK(std::stod(format_full(v)) == v);
    CHECK(std::stod(format_number(v)) == v);
  }
}

TEST_CASE("trajectory csv") {
  const NetworkModel m({{10, 1, 0.01, 1}, {10, 1, 0.01, 1}}, {{0, 1, 0.5, 0.1}}, 0.1, {2, 5});
  const auto traj = integrate(m, InitialData::standard(m, 0.0), 0.02, 0.01);
  REQUIRE(traj.node_count() == 3);
  std::ostringstream os;
  write_csv(traj, 1, os);
  const std::string text = os.str();
  std::istringstream is(text);
  std::vector<std::string> lines;
  for (std::string l; std::getline(is, l);) lines.push_back(l);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "t,x_1,y_1,x_2,y_2");
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
  for (std::size_t r = 1; r < lines.size(); ++r) {
    CHECK(std::count(lines[r].begin(), lines[r].end(), ',') == 4);
    CHECK(lines[r].back() != ',');
    CHECK(lines[r].substr(lines[r].find(',')) == lines[1].substr(lines[1].find(',')));
  }

  std::ostringstream strided;
  write_csv(traj, 2, strided);
  const std::string sparse = strided.str();
  CHECK(std::count(sparse.begin(), sparse.end(), '\n') == 3);
  std::ostringstream dummy;
  CHECK_THROWS_AS(write_csv(traj, 0, dummy), std::invalid_argument);
}

TEST_CASE("sweep csv") {
  SweepResult r;
  r.grid = {0.1, 0.2};
  r.amplitude = {{0.0, 1.5, 2.0}, {0.0, 1.0, 3.0}};
  r.oscillating = {{false, true, true}, {false, true, true}};
  std::ostringstream os;
  write_sweep_csv(r, os);
  const std::string s = os.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 2 * 3);
  CHECK(s.rfind("kappa,neuron,amplitude,oscillating\n", 0) == 0);
  CHECK(s.find("0.20000000000000001,3,3,1\n") != std::string::npos);
}
