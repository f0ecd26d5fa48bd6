#include <doctest.h>

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "tsspec/problem.hpp"
#include "tsspec/random_problems.hpp"

using namespace tsspec;

namespace {

// d = 1 constant-coefficient problem: P = omega = 1, Q = 0, Dirichlet-like R = I, S = 0.
SpectralProblem scalar_problem(int N, ScaleRef scale) {
  SpectralProblem p;
  p.scale = std::move(scale);
  p.d = 1;
  for (int i = -1; i <= N - 1; ++i) p.P.push_back(CMatrix::Identity(1, 1));
  for (int k = 0; k < N; ++k) {
    p.Q.push_back(CMatrix::Zero(1, 1));
    p.omega.push_back(CMatrix::Identity(1, 1));
  }
  p.R = CMatrix::Identity(2, 2);
  p.S = CMatrix::Zero(2, 2);
  return p;
}

}  // namespace

TEST_CASE("validate passes the scalar constant problem") {
  const auto p = scalar_problem(4, make_uniform_scale(1.0, 4));
  const auto rep = validate(p);
  CHECK(rep.pass());
  CHECK(rep.bc_self_adjoint);
  CHECK(rep.bc_defect == 0.0);
}

TEST_CASE("validate flags broken hypotheses") {
  SUBCASE("omega not positive definite") {
    auto p = scalar_problem(4, make_uniform_scale(1.0, 4));
    p.omega[0] = CMatrix::Zero(1, 1);
    const auto rep = validate(p);
    CHECK_FALSE(rep.pass());
    bool found = false;
    for (const auto& c : rep.checks) {
      if (c.name == "omega_positive_definite") {
        found = true;
        CHECK_FALSE(c.passed);
      }
    }
    CHECK(found);
  }
  SUBCASE("P(b) singular") {
    auto p = scalar_problem(4, make_uniform_scale(1.0, 4));
    p.P.back() = CMatrix::Zero(1, 1);
    const auto rep = validate(p);
    CHECK_FALSE(rep.pass());
    for (const auto& c : rep.checks) {
      if (c.name == "endpoint_P_invertible") {
        CHECK_FALSE(c.passed);
        CHECK(c.detail == "P(b)");
      }
    }
  }
  SUBCASE("non-Hermitian Q names the entry") {
    auto p = scalar_problem(4, make_uniform_scale(1.0, 4));
    p.Q[2] = CMatrix::Constant(1, 1, Complex(0, 1));  // 1x1 imaginary: not Hermitian
    const auto rep = validate(p);
    CHECK_FALSE(rep.pass());
    for (const auto& c : rep.checks) {
      if (c.name == "hermitian_coefficients") {
        CHECK_FALSE(c.passed);
        CHECK(c.detail == "Q[2]");
      }
    }
  }
  SUBCASE("rank(R,S) deficiency") {
    auto p = scalar_problem(4, make_uniform_scale(1.0, 4));
    p.R = CMatrix::Zero(2, 2);
    p.S = CMatrix::Zero(2, 2);
    const auto rep = validate(p);
    CHECK_FALSE(rep.pass());
  }
}

TEST_CASE("self-adjoint boundary condition characterization") {
  SUBCASE("R = I, S = 0 and R = 0, S = I are self-adjoint") {
    const auto a = check_self_adjoint_bc(CMatrix::Identity(2, 2), CMatrix::Zero(2, 2));
    CHECK(a.self_adjoint);
    CHECK(a.defect == 0.0);
    const auto b = check_self_adjoint_bc(CMatrix::Zero(2, 2), CMatrix::Identity(2, 2));
    CHECK(b.self_adjoint);
  }
  SUBCASE("hand-multiplied 2x2 counterexample") {
    CMatrix S(2, 2);
    S << 0.0, 1.0, 0.0, 0.0;
    // SR* = [[0,1],[0,0]], RS* = [[0,0],[1,0]]: defect sqrt(2)
    const auto c = check_self_adjoint_bc(CMatrix::Identity(2, 2), S);
    CHECK_FALSE(c.self_adjoint);
    CHECK(c.defect == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("rank-deficient pair throws") {
    CHECK_THROWS_AS(check_self_adjoint_bc(CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)),
                    RankDeficient);
  }
}

TEST_CASE("self-adjointness verdict is invariant under unitary row mixing") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + rng.pick(3);
    const BoundaryPair bc = random_self_adjoint_bc(rng, d);
    REQUIRE(check_self_adjoint_bc(bc.R, bc.S).self_adjoint);
    const CMatrix G = random_unitary(rng, 2 * d);
    const auto mixed = check_self_adjoint_bc(G * bc.R, G * bc.S);
    CHECK(mixed.self_adjoint);
  }
}

TEST_CASE("eta parametrization of boundary data") {
  Rng rng(37);
  const int d = 2, N = 5;
  const SpectralProblem p = random_self_adjoint_problem(rng, d, N);

  SUBCASE("zero function gives eta = 0") {
    GridFunction zero(p.scale, -1, N, d, 1);
    const auto ec = eta_parametrization_check(p, zero);
    CHECK(ec.ok);
    CHECK(ec.eta.norm() <= 1e-12);
  }
  SUBCASE("boundary-condition violators are rejected") {
    GridFunction x = random_grid_function(rng, p.scale, -1, N, d);
    if (boundary_condition_defect(p, x) < 1e-3) x.at(-1)(0, 0) += 10.0;
    CHECK_THROWS_AS(eta_parametrization_check(p, x), NotInBoundarySet);
  }
}

TEST_CASE("problem JSON round trip is bit-exact") {
  Rng rng(41);
  const SpectralProblem p = random_self_adjoint_problem(rng, 2, 4);
  const std::string text = problem_to_json_text(p);
  const SpectralProblem q = problem_from_json_text(text);
  CHECK(p == q);
  CHECK(problem_to_json_text(q) == text);

  const std::string path = "roundtrip_problem.json";
  save_problem(p, path);
  const SpectralProblem r = load_problem(path);
  CHECK(p == r);
  std::remove(path.c_str());
}

TEST_CASE("problem JSON parse errors carry context") {
  Rng rng(43);
  const SpectralProblem p = random_self_adjoint_problem(rng, 1, 3);
  const std::string good = problem_to_json_text(p);

  SUBCASE("missing omega field") {
    auto j = nlohmann::json::parse(good);
    j.erase("omega");
    try {
      problem_from_json_text(j.dump());
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("omega") != std::string::npos);
    }
  }
  SUBCASE("malformed complex entry") {
    auto j = nlohmann::json::parse(good);
    j["R"][0][0] = "not-a-complex";
    CHECK_THROWS_AS(problem_from_json_text(j.dump()), ParseError);
  }
  SUBCASE("wrong schema version") {
    auto j = nlohmann::json::parse(good);
    j["schema_version"] = "tsspec-problem/999";
    CHECK_THROWS_AS(problem_from_json_text(j.dump()), SchemaVersionMismatch);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_problem("no_such_file.json"), ParseError);
  }
}
