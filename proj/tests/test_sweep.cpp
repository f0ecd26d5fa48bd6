#include <doctest.h>

#include "tsspec/sweep.hpp"

using namespace tsspec;

namespace {

bool identical(const ProblemVerification& a, const ProblemVerification& b) {
  return a.index == b.index && a.seed == b.seed && a.d == b.d && a.N == b.N && a.r == b.r &&
         a.m == b.m && a.pass == b.pass && a.lagrange_max == b.lagrange_max &&
         a.oracle_max == b.oracle_max && a.gram_defect == b.gram_defect &&
         a.qshift_max == b.qshift_max && a.failures == b.failures;
}

}  // namespace

TEST_CASE("small mixed sweep passes every suite") {
  SweepOptions opts;
  opts.seed = 7;
  opts.count = 12;
  const auto results = run_problem_sweep_serial(opts);
  for (const auto& v : results) {
    INFO("problem ", v.index, " d=", v.d, " N=", v.N, " r=", v.r,
         (v.failures.empty() ? "" : (" failures: " + v.failures.front())));
    CHECK(v.pass);
    CHECK(v.dimension_ok);
  }
}

TEST_CASE("openmp sweep reproduces the serial reference bit for bit") {
  SweepOptions opts;
  opts.seed = 99;
  opts.count = 10;
  opts.threads = 0;  // let OpenMP pick
  const auto parallel = run_problem_sweep(opts);
  opts.threads = 1;
  const auto serial = run_problem_sweep_serial(opts);
  REQUIRE(parallel.size() == serial.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(identical(serial[i], parallel[i]));
  }
}

TEST_CASE("hamiltonian sweep passes and parallel matches serial") {
  SweepOptions opts;
  opts.seed = 31;
  opts.count = 8;
  const auto serial = run_hamiltonian_sweep_serial(opts);
  for (const auto& v : serial) {
    INFO("sample ", v.index, " n=", v.n,
         (v.failures.empty() ? "" : (" failures: " + v.failures.front())));
    CHECK(v.pass);
  }
  opts.threads = 0;
  const auto parallel = run_hamiltonian_sweep(opts);
  REQUIRE(parallel.size() == serial.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].seed == parallel[i].seed);
    CHECK(serial[i].pass == parallel[i].pass);
    CHECK(serial[i].symplectic_max == parallel[i].symplectic_max);
    CHECK(serial[i].pseudo_max == parallel[i].pseudo_max);
    CHECK(serial[i].hlagrange_max == parallel[i].hlagrange_max);
  }
}

TEST_CASE("fixed d and N are honored") {
  SweepOptions opts;
  opts.seed = 5;
  opts.count = 4;
  opts.d = 2;
  opts.N = 5;
  for (const auto& v : run_problem_sweep_serial(opts)) {
    CHECK(v.d == 2);
    CHECK(v.N == 5);
    CHECK(v.m == 2 * 3 + v.r);
  }
}
