#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tsspec/cli.hpp"
#include "tsspec/problem.hpp"
#include "tsspec/random_problems.hpp"

using namespace tsspec;
using nlohmann::json;

namespace {

struct CliRun {
  int exit_code;
  json report;
  std::string raw;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), out, err);
  CliRun r{code, json(), out.str() + err.str()};
  if (!out.str().empty() && out.str().front() == '{') r.report = json::parse(out.str());
  return r;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content) : path(name) {
    std::ofstream f(path);
    f << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

std::string random_problem_text(std::uint64_t seed, int d, int N,
                                std::optional<int> r = std::nullopt) {
  Rng rng(seed);
  return problem_to_json_text(random_self_adjoint_problem(rng, d, N, r));
}

}  // namespace

TEST_CASE("validate command exit codes") {
  SUBCASE("valid problem exits 0") {
    TempFile f("cli_valid.json", random_problem_text(1, 2, 4));
    const auto r = run({"validate", f.path});
    CHECK(r.exit_code == 0);
    CHECK(r.report["pass"] == true);
    CHECK(r.report["command"] == "validate");
  }
  SUBCASE("broken hypothesis exits 1 and names the entry") {
    Rng rng(2);
    auto p = random_self_adjoint_problem(rng, 1, 3);
    p.Q[1] = CMatrix::Constant(1, 1, Complex(0, 1));
    TempFile f("cli_badq.json", problem_to_json_text(p));
    const auto r = run({"validate", f.path});
    CHECK(r.exit_code == 1);
    bool named = false;
    for (const auto& c : r.report["checks"]) {
      if (c["name"] == "hermitian_coefficients") named = c.contains("detail") && c["detail"] == "Q[1]";
    }
    CHECK(named);
  }
  SUBCASE("missing file exits 2") {
    const auto r = run({"validate", "nonexistent.json"});
    CHECK(r.exit_code == 2);
  }
  SUBCASE("malformed JSON exits 2") {
    TempFile f("cli_garbage.json", "{not json");
    CHECK(run({"validate", f.path}).exit_code == 2);
  }
}

TEST_CASE("solve command") {
  SUBCASE("proper d=1 N=2 problem reports exactly m = 2 eigenvalues") {
    TempFile f("cli_solve2.json", random_problem_text(3, 1, 2, 2));
    const auto r = run({"solve", f.path});
    REQUIRE(r.exit_code == 0);
    CHECK(r.report["m"] == 2);
    CHECK(r.report["eigenvalues"].size() == 2);
  }
  SUBCASE("improper problem reports m = d(N-2)+r eigenvalues") {
    TempFile f("cli_solve_improper.json", random_problem_text(4, 2, 5, 3));
    const auto r = run({"solve", f.path});
    REQUIRE(r.exit_code == 0);
    CHECK(r.report["r"] == 3);
    CHECK(r.report["m"] == 2 * 3 + 3);
  }
  SUBCASE("non-self-adjoint boundary conditions exit 1") {
    Rng rng(5);
    auto p = random_self_adjoint_problem(rng, 1, 3);
    p.R = CMatrix::Identity(2, 2);
    p.S = CMatrix::Zero(2, 2);
    p.S(0, 1) = 1.0;
    TempFile f("cli_nsa.json", problem_to_json_text(p));
    const auto r = run({"solve", f.path});
    CHECK(r.exit_code == 1);
    CHECK(r.report.contains("error"));
  }
}

TEST_CASE("verify command") {
  SUBCASE("random sweep passes and echoes the seed") {
    const auto r = run({"verify", "--random", "2", "5", "42", "6"});
    CHECK(r.exit_code == 0);
    CHECK(r.report["seed"] == 42);
    CHECK(r.report["problems"].size() == 6);
    CHECK(r.report["pass"] == true);
    CHECK(r.report["summary"]["oracle_agreement"]["pass"] == true);
  }
  SUBCASE("proper problem file carries a dual-orthogonality section") {
    TempFile f("cli_verify_proper.json", random_problem_text(7, 1, 3, 2));
    const auto r = run({"verify", f.path});
    CHECK(r.exit_code == 0);
    CHECK(r.report["problems"][0]["dual_orthogonality"].is_object());
  }
  SUBCASE("improper problem marks dual orthogonality skipped") {
    TempFile f("cli_verify_improper.json", random_problem_text(8, 1, 3, 1));
    const auto r = run({"verify", f.path});
    CHECK(r.exit_code == 0);
    CHECK(r.report["problems"][0]["dual_orthogonality"] == "skipped (r < 2d)");
  }
  SUBCASE("determinism: identical invocations agree modulo wall time") {
    auto strip = [](json j) {
      j.erase("wall_time_ms");
      return j.dump();
    };
    const auto a = run({"verify", "--random", "1", "4", "11", "3"});
    const auto b = run({"verify", "--random", "1", "4", "11", "3"});
    CHECK(strip(a.report) == strip(b.report));
  }
}

TEST_CASE("make-timescale command") {
  SUBCASE("q-scale doubles from 1") {
    const auto r = run({"make-timescale", "qscale", "--q", "2", "--t0", "1", "--N", "3"});
    REQUIRE(r.exit_code == 0);
    CHECK(r.report["scale"] == json::array({0.5, 1.0, 2.0, 4.0, 8.0}));
  }
  SUBCASE("uniform N=2 gives 4 points") {
    const auto r = run({"make-timescale", "uniform", "--h", "1", "--N", "2"});
    REQUIRE(r.exit_code == 0);
    CHECK(r.report["scale"].size() == 4);
  }
  SUBCASE("colliding q-scale parameters exit 2") {
    CHECK(run({"make-timescale", "qscale", "--q", "0.5", "--t0", "1", "--N", "3"}).exit_code ==
          2);
  }
  SUBCASE("--out writes the scale file") {
    const std::string path = "cli_scale_out.json";
    CHECK(run({"make-timescale", "uniform", "--h", "1", "--N", "2", "--out", path}).exit_code ==
          0);
    std::ifstream f(path);
    REQUIRE(f.good());
    const auto j = json::parse(f);
    CHECK(j["scale"].size() == 4);
    std::remove(path.c_str());
  }
}

TEST_CASE("convert command") {
  SUBCASE("hamiltonian-to-symplectic on a valid system") {
    Rng rng(9);
    const auto scale = random_scale(rng, 4, nullptr);
    const auto h = random_hamiltonian_system(rng, 1, scale);
    json input;
    input["schema_version"] = "tsspec-hamiltonian/1";
    input["scale"] = scale->points();
    input["n"] = 1;
    json A = json::array(), B = json::array(), C = json::array();
    for (int i = 0; i <= 4; ++i) {
      auto mat = [](const CMatrix& m) {
        return json::array({json::array({json::array({m(0, 0).real(), m(0, 0).imag()})})});
      };
      A.push_back(mat(h.A_at(i)));
      B.push_back(mat(h.B_at(i)));
      C.push_back(mat(h.C_at(i)));
    }
    input["A"] = A;
    input["B"] = B;
    input["C"] = C;
    TempFile f("cli_ham.json", input.dump());
    const auto r = run({"convert", "--mode", "hamiltonian-to-symplectic", f.path});
    REQUIRE(r.exit_code == 0);
    CHECK(r.report["max_symplectic_defect"].get<double>() <= 1e-11);
  }
  SUBCASE("violated invertibility condition exits 1 naming the point") {
    json input;
    const auto scale = make_uniform_scale(1.0, 3);
    input["schema_version"] = "tsspec-hamiltonian/1";
    input["scale"] = scale->points();
    input["n"] = 1;
    json A = json::array(), B = json::array(), C = json::array();
    for (int i = 0; i <= 3; ++i) {
      const double a = 1.0 / scale->mu_rho(i);
      A.push_back(json::array({json::array({json::array({a, 0.0})})}));
      B.push_back(json::array({json::array({json::array({0.0, 0.0})})}));
      C.push_back(json::array({json::array({json::array({0.0, 0.0})})}));
    }
    input["A"] = A;
    input["B"] = B;
    input["C"] = C;
    TempFile f("cli_ham_bad.json", input.dump());
    const auto r = run({"convert", "--mode", "hamiltonian-to-symplectic", f.path});
    CHECK(r.exit_code == 1);
    CHECK(r.report["error"].get<std::string>().find("index") != std::string::npos);
  }
  SUBCASE("sl-to-hamiltonian at n = 1 gives A = 0, B = 1/p1^rho, C = p0") {
    const auto scale = make_uniform_scale(1.0, 6);
    json input;
    input["schema_version"] = "tsspec-sl/1";
    input["scale"] = scale->points();
    input["n"] = 1;
    json p0 = json::array(), p1 = json::array();
    for (int i = -1; i <= 6; ++i) {
      p0.push_back(json::array({2.0, 0.0}));
      p1.push_back(json::array({4.0, 0.0}));
    }
    input["p"] = json::array({p0, p1});
    TempFile f("cli_sl.json", input.dump());
    const auto r = run({"convert", "--mode", "sl-to-hamiltonian", f.path});
    REQUIRE(r.exit_code == 0);
    CHECK(r.report["A"][0][0] == json::array({0.0, 0.0}));
    CHECK(r.report["B"][0][0][0] == json::array({0.25, 0.0}));
    CHECK(r.report["C"][0][0][0] == json::array({2.0, 0.0}));
    CHECK(r.report["max_residual"].get<double>() <= 1e-11);
  }
  SUBCASE("second-order-to-symplectic embeds a generated solution") {
    Rng rng(10);
    const auto scale = random_scale(rng, 5, nullptr);
    json input;
    input["schema_version"] = "tsspec-secondorder/1";
    input["scale"] = scale->points();
    input["d"] = 1;
    json P = json::array(), Q = json::array();
    for (int i = -1; i <= 4; ++i) {
      P.push_back(json::array({json::array({json::array({1.5, 0.0})})}));
    }
    for (int i = 0; i <= 4; ++i) {
      Q.push_back(json::array({json::array({json::array({-0.5, 0.0})})}));
    }
    input["P"] = P;
    input["Q"] = Q;
    TempFile f("cli_so.json", input.dump());
    const auto r = run({"convert", "--mode", "second-order-to-symplectic", f.path});
    REQUIRE(r.exit_code == 0);
    CHECK(r.report["max_residual"].get<double>() <= 1e-11);
  }
  SUBCASE("unknown mode exits 2") {
    TempFile f("cli_any.json", "{\"schema_version\": \"tsspec-sl/1\"}");
    CHECK(run({"convert", "--mode", "bogus", f.path}).exit_code == 2);
  }
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({"verify"}).exit_code == 2);
  CHECK(run({"unknown-command"}).exit_code == 2);
  CHECK(run({}).exit_code == 2);
}
