#include "tsspec/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "json_io.hpp"
#include "tsspec/problem.hpp"
#include "tsspec/spectral.hpp"
#include "tsspec/sweep.hpp"

namespace tsspec {

namespace {

using jsonio::Json;

constexpr const char* kReportSchema = "tsspec-report/1";

double default_tol() {
  if (const char* env = std::getenv("TSSPEC_TOL")) {
    try {
      const double t = std::stod(env);
      if (t > 0.0) return t;
    } catch (...) {
    }
  }
  return kDefaultTol;
}

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(const Json& report, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << report.dump(2) << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw ParseError("cannot open output file: " + out_path);
    f << report.dump(2) << "\n";
  }
}

int emit_error(const std::string& command, const std::string& what, int code,
               const std::string& out_path, std::ostream& out) {
  Json j;
  j["schema_version"] = kReportSchema;
  j["command"] = command;
  j["error"] = what;
  emit(j, out_path, out);
  return code;
}

Json rvector_to_json(const RVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json grid_function_to_json(const GridFunction& g) {
  Json a = Json::array();
  for (int i = g.lo(); i <= g.hi(); ++i) a.push_back(jsonio::matrix_to_json(g.at(i)));
  return a;
}

Json problem_verification_to_json(const ProblemVerification& v) {
  Json j;
  j["index"] = v.index;
  j["seed"] = v.seed;
  j["d"] = v.d;
  j["N"] = v.N;
  j["r"] = v.r;
  j["m"] = v.m;
  if (!v.scale_kind.empty()) j["scale_kind"] = v.scale_kind;
  j["dimension_ok"] = v.dimension_ok;
  j["lagrange_max"] = v.lagrange_max;
  j["operator_hermiticity"] = v.operator_hermiticity;
  j["closure_residual"] = v.closure_residual;
  j["selfadjoint_pairs_max"] = v.selfadjoint_pairs_max;
  j["gram_defect"] = v.gram_defect;
  j["eigen_residual_max"] = v.eigen_residual_max;
  j["oracle_max"] = v.oracle_max;
  j["completeness_max"] = v.completeness_max;
  j["parseval_max"] = v.parseval_max;
  j["resolution_defect"] = v.resolution_defect;
  j["projector_defect"] = v.projector_defect;
  j["elambda_defect"] = v.elambda_defect;
  if (v.dual_applicable) {
    j["dual_orthogonality"] = Json{{"gram_defect", v.dual_gram}, {"outer_defect", v.dual_outer}};
  } else {
    j["dual_orthogonality"] = "skipped (r < 2d)";
  }
  j["qshift_max"] = v.qshift_max;
  j["pass"] = v.pass;
  j["failures"] = v.failures;
  return j;
}

Json hamiltonian_verification_to_json(const HamiltonianVerification& v) {
  Json j;
  j["index"] = v.index;
  j["seed"] = v.seed;
  j["n"] = v.n;
  j["N"] = v.N;
  j["symplectic_max"] = v.symplectic_max;
  j["formula_gap"] = v.formula_gap;
  j["zsystem_max"] = v.zsystem_max;
  j["conversion_consistency"] = v.conversion_consistency;
  j["pseudo_max"] = v.pseudo_max;
  j["hlagrange_max"] = v.hlagrange_max;
  j["pass"] = v.pass;
  j["failures"] = v.failures;
  return j;
}

int cmd_validate(const std::string& path, double tol, const std::string& out_path,
                 std::ostream& out) {
  Timer timer;
  std::string text;
  SpectralProblem p;
  try {
    text = read_file(path);
    p = problem_from_json_text(text);
  } catch (const Error& e) {
    return emit_error("validate", e.what(), 2, out_path, out);
  }
  const ValidationReport rep = validate(p, tol);

  Json j;
  j["schema_version"] = kReportSchema;
  j["command"] = "validate";
  j["input"] = path;
  j["input_digest"] = fnv1a_digest(text);
  j["tol"] = tol;
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    cj["defect"] = c.defect;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  j["bc_self_adjoint"] = rep.bc_self_adjoint;
  j["bc_defect"] = rep.bc_defect;
  j["pass"] = rep.pass();
  j["wall_time_ms"] = timer.ms();
  emit(j, out_path, out);
  return rep.pass() ? 0 : 1;
}

int cmd_solve(const std::string& path, double tol, const std::string& out_path,
              std::ostream& out) {
  Timer timer;
  std::string text;
  SpectralProblem p;
  try {
    text = read_file(path);
    p = problem_from_json_text(text);
  } catch (const Error& e) {
    return emit_error("solve", e.what(), 2, out_path, out);
  }

  SpectralResult result;
  try {
    result = solve_spectrum(p, tol);
  } catch (const Error& e) {
    return emit_error("solve", e.what(), 1, out_path, out);
  }

  const VerifyTolerances vt;
  double eq_max = 0.0;
  for (double r : result.equation_residuals) eq_max = std::max(eq_max, r);
  const bool pass = result.gram_defect <= vt.gram && eq_max <= vt.eigen_residual &&
                    result.asymmetry <= vt.operator_hermiticity;

  Json j;
  j["schema_version"] = kReportSchema;
  j["command"] = "solve";
  j["input"] = path;
  j["input_digest"] = fnv1a_digest(text);
  j["tol"] = tol;
  j["d"] = p.d;
  j["N"] = p.N();
  j["r"] = result.r;
  j["m"] = result.m;
  j["eigenvalues"] = rvector_to_json(result.eigenvalues);
  j["equation_residuals"] = result.equation_residuals;
  j["gram_defect"] = result.gram_defect;
  j["operator_hermiticity"] = result.asymmetry;
  j["closure_residual"] = result.closure_residual;
  Json efs = Json::array();
  for (const auto& ef : result.eigenfunctions) efs.push_back(grid_function_to_json(ef));
  j["eigenfunctions"] = std::move(efs);
  j["window"] = Json::array({-1, p.N()});
  j["pass"] = pass;
  j["wall_time_ms"] = timer.ms();
  emit(j, out_path, out);
  return pass ? 0 : 1;
}

Json sweep_summary(const std::vector<ProblemVerification>& results,
                   const VerifyTolerances& tol) {
  double lagrange = 0, herm = 0, pairs = 0, gram = 0, eig = 0, oracle = 0, comp = 0,
         pars = 0, reso = 0, proj = 0, elam = 0, dual = 0, qshift = 0;
  bool dims = true;
  int dual_count = 0;
  for (const auto& v : results) {
    dims = dims && v.dimension_ok;
    lagrange = std::max(lagrange, v.lagrange_max);
    herm = std::max(herm, v.operator_hermiticity);
    pairs = std::max(pairs, v.selfadjoint_pairs_max);
    gram = std::max(gram, v.gram_defect);
    eig = std::max(eig, v.eigen_residual_max);
    oracle = std::max(oracle, v.oracle_max);
    comp = std::max(comp, v.completeness_max);
    pars = std::max(pars, v.parseval_max);
    reso = std::max(reso, v.resolution_defect);
    proj = std::max(proj, v.projector_defect);
    elam = std::max(elam, v.elambda_defect);
    if (v.dual_applicable) {
      ++dual_count;
      dual = std::max({dual, v.dual_gram, v.dual_outer});
    }
    qshift = std::max(qshift, v.qshift_max);
  }
  Json s;
  auto put = [&s](const char* name, double defect, double threshold, bool ok) {
    s[name] = Json{{"max_defect", defect}, {"tol", threshold}, {"pass", ok}};
  };
  s["dimension_law"] = Json{{"pass", dims}};
  put("lagrange", lagrange, tol.lagrange, lagrange <= tol.lagrange);
  put("operator_hermiticity", herm, tol.operator_hermiticity, herm <= tol.operator_hermiticity);
  put("selfadjoint_pairs", pairs, tol.selfadjoint_pairs, pairs <= tol.selfadjoint_pairs);
  put("orthonormality", gram, tol.gram, gram <= tol.gram);
  put("eigen_residual", eig, tol.eigen_residual, eig <= tol.eigen_residual);
  put("oracle_agreement", oracle, tol.oracle, oracle <= tol.oracle);
  put("completeness", comp, tol.completeness, comp <= tol.completeness);
  put("parseval", pars, tol.parseval, pars <= tol.parseval);
  put("spectral_resolution", reso, tol.resolution, reso <= tol.resolution);
  put("projector_algebra", proj, tol.projector, proj <= tol.projector);
  put("e_lambda_steps", elam, tol.elambda, elam <= tol.elambda);
  if (dual_count > 0) {
    put("dual_orthogonality", dual, tol.dual, dual <= tol.dual);
    s["dual_orthogonality"]["problems"] = dual_count;
  } else {
    s["dual_orthogonality"] = "skipped (no proper problems in sweep)";
  }
  put("q_shift", qshift, tol.qshift, qshift <= tol.qshift);
  return s;
}

int cmd_verify(const std::string& path, const std::vector<std::int64_t>& random_spec,
               int threads, int ham_count, double tol, const std::string& out_path,
               std::ostream& out) {
  Timer timer;
  Json j;
  j["schema_version"] = kReportSchema;
  j["command"] = "verify";

  SweepOptions opts;
  opts.threads = threads;
  (void)tol;

  bool all_pass = true;
  if (!random_spec.empty()) {
    opts.d = static_cast<int>(random_spec[0]);
    opts.N = static_cast<int>(random_spec[1]);
    opts.seed = static_cast<std::uint64_t>(random_spec[2]);
    opts.count = static_cast<int>(random_spec[3]);
    if (opts.count <= 0) {
      return emit_error("verify", "--random count must be positive", 2, out_path, out);
    }
    j["mode"] = "random";
    j["seed"] = opts.seed;
    j["count"] = opts.count;
    j["d"] = opts.d;
    j["N"] = opts.N;
    j["threads"] = threads;

    const auto results = run_problem_sweep(opts);
    Json pj = Json::array();
    for (const auto& v : results) {
      pj.push_back(problem_verification_to_json(v));
      all_pass = all_pass && v.pass;
    }
    j["problems"] = std::move(pj);
    j["summary"] = sweep_summary(results, opts.tol);

    if (ham_count > 0) {
      SweepOptions hopts = opts;
      hopts.count = ham_count;
      const auto hres = run_hamiltonian_sweep(hopts);
      Json hj = Json::array();
      for (const auto& v : hres) {
        hj.push_back(hamiltonian_verification_to_json(v));
        all_pass = all_pass && v.pass;
      }
      j["hamiltonian"] = std::move(hj);
    }
  } else {
    std::string text;
    SpectralProblem p;
    try {
      text = read_file(path);
      p = problem_from_json_text(text);
    } catch (const Error& e) {
      return emit_error("verify", e.what(), 2, out_path, out);
    }
    j["mode"] = "file";
    j["input"] = path;
    j["input_digest"] = fnv1a_digest(text);
    j["seed"] = opts.seed;

    Rng rng(opts.seed);
    ProblemVerification v = verify_problem_instance(p, rng, opts);
    v.scale_kind = "file";
    all_pass = v.pass;
    j["problems"] = Json::array({problem_verification_to_json(v)});
    j["summary"] = sweep_summary({v}, opts.tol);
  }

  j["pass"] = all_pass;
  j["wall_time_ms"] = timer.ms();
  emit(j, out_path, out);
  return all_pass ? 0 : 1;
}

ScaleRef scale_from_json(const Json& j) {
  const auto& sj = jsonio::require_field(j, "scale");
  if (!sj.is_array() || sj.size() < 4) throw ParseError("\"scale\" must list at least 4 points");
  std::vector<double> pts;
  for (const auto& e : sj) {
    if (!e.is_number()) throw ParseError("\"scale\" entries must be numbers");
    pts.push_back(e.get<double>());
  }
  try {
    return make_explicit_scale(std::move(pts));
  } catch (const InvalidParameter& e) {
    throw ParseError(std::string("bad \"scale\": ") + e.what());
  }
}

int convert_second_order(const Json& input, double tol, const std::string& out_path,
                         std::ostream& out, Timer& timer) {
  ScaleRef scale = scale_from_json(input);
  const int N = scale->N();
  const auto& dj = jsonio::require_field(input, "d");
  if (!dj.is_number_integer() || dj.get<int>() <= 0) throw ParseError("\"d\" must be positive");
  const int d = dj.get<int>();

  const auto Pl = jsonio::matrix_list_from_json(jsonio::require_field(input, "P"), "P");
  const auto Ql = jsonio::matrix_list_from_json(jsonio::require_field(input, "Q"), "Q");
  if (static_cast<int>(Pl.size()) != N + 1 || static_cast<int>(Ql.size()) != N) {
    throw ParseError("P needs N+1 matrices (indices -1..N-1) and Q needs N");
  }
  GridFunction P = GridFunction::from_values(scale, -1, Pl);
  GridFunction Q = GridFunction::from_values(scale, 0, Ql);
  CMatrix X0 = CMatrix::Identity(d, d);
  CMatrix X1 = CMatrix::Identity(d, d);
  if (input.contains("X0")) X0 = jsonio::matrix_from_json(input["X0"], "X0");
  if (input.contains("X1")) X1 = jsonio::matrix_from_json(input["X1"], "X1");

  const GridFunction X = generate_second_order_solution(P, Q, X0, X1);
  const ZSystemResult zs = second_order_to_z_system(P, Q, X);
  const bool pass = zs.max_residual <= tol * std::max(1.0, X.sup_norm());

  Json j;
  j["schema_version"] = kReportSchema;
  j["command"] = "convert";
  j["mode"] = "second-order-to-symplectic";
  j["window"] = Json::array({zs.res_lo, zs.res_hi});
  j["S"] = jsonio::matrix_list_to_json(zs.S);
  j["residuals"] = zs.residuals;
  j["max_residual"] = zs.max_residual;
  j["Z"] = grid_function_to_json(zs.Z);
  j["pass"] = pass;
  j["wall_time_ms"] = timer.ms();
  emit(j, out_path, out);
  return pass ? 0 : 1;
}

int convert_sl(const Json& input, double tol, const std::string& out_path, std::ostream& out,
               Timer& timer) {
  ScaleRef scale = scale_from_json(input);
  const int N = scale->N();
  const auto& nj = jsonio::require_field(input, "n");
  if (!nj.is_number_integer() || nj.get<int>() < 1) throw ParseError("\"n\" must be >= 1");
  const int n = nj.get<int>();

  const auto& pj = jsonio::require_field(input, "p");
  if (!pj.is_array() || static_cast<int>(pj.size()) != n + 1) {
    throw ParseError("\"p\" must list p_0 ... p_n");
  }
  std::vector<GridFunction> pk;
  for (int k = 0; k <= n; ++k) {
    const auto& arr = pj[static_cast<size_t>(k)];
    if (!arr.is_array() || static_cast<int>(arr.size()) != N + 2) {
      throw ParseError("each p_k needs one value per scale point");
    }
    GridFunction g(scale, -1, N, 1, 1);
    for (int i = -1; i <= N; ++i) {
      g.at(i)(0, 0) = jsonio::complex_from_json(
          arr[static_cast<size_t>(i + 1)], "p[" + std::to_string(k) + "]");
    }
    pk.push_back(std::move(g));
  }

  GridFunction y(scale, -1, N, 1, 1);
  if (input.contains("y")) {
    const auto& arr = input["y"];
    if (!arr.is_array() || static_cast<int>(arr.size()) != N + 2) {
      throw ParseError("\"y\" needs one value per scale point");
    }
    for (int i = -1; i <= N; ++i) {
      y.at(i)(0, 0) = jsonio::complex_from_json(arr[static_cast<size_t>(i + 1)], "y");
    }
  } else {
    std::uint64_t seed = 0;
    if (input.contains("seed")) seed = input["seed"].get<std::uint64_t>();
    Rng rng(seed);
    y = random_grid_function(rng, scale, -1, N, 1, 1);
  }

  const SlToHamiltonianResult sl = sturm_liouville_to_hamiltonian(pk, y);
  const bool pass = sl.max_residual <= tol * std::max(1.0, sl.u.sup_norm());

  CMatrix Acal = CMatrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) Acal(i, i + 1) = 1.0;
  Json Bs = Json::array(), Cs = Json::array();
  for (int i = sl.res_lo; i <= sl.res_hi; ++i) {
    CMatrix B = CMatrix::Zero(n, n);
    B(n - 1, n - 1) = 1.0 / pk[static_cast<size_t>(n)].at(i - 1)(0, 0);
    CMatrix C = CMatrix::Zero(n, n);
    C(0, 0) = pk[0].at(i)(0, 0);
    for (int row = 1; row < n; ++row) C(row, row) = pk[static_cast<size_t>(row)].at(i - 1)(0, 0);
    Bs.push_back(jsonio::matrix_to_json(B));
    Cs.push_back(jsonio::matrix_to_json(C));
  }

  Json j;
  j["schema_version"] = kReportSchema;
  j["command"] = "convert";
  j["mode"] = "sl-to-hamiltonian";
  j["n"] = n;
  j["window"] = Json::array({sl.res_lo, sl.res_hi});
  j["A"] = jsonio::matrix_to_json(Acal);
  j["B"] = std::move(Bs);
  j["C"] = std::move(Cs);
  j["x"] = grid_function_to_json(sl.x);
  j["u"] = grid_function_to_json(sl.u);
  j["My"] = grid_function_to_json(sl.My);
  j["residual_x"] = sl.residual_x;
  j["residual_u"] = sl.residual_u;
  j["max_residual"] = sl.max_residual;
  j["pass"] = pass;
  j["wall_time_ms"] = timer.ms();
  emit(j, out_path, out);
  return pass ? 0 : 1;
}

int convert_hamiltonian(const Json& input, double tol, const std::string& out_path,
                        std::ostream& out, Timer& timer) {
  ScaleRef scale = scale_from_json(input);
  const int N = scale->N();
  const auto& nj = jsonio::require_field(input, "n");
  if (!nj.is_number_integer() || nj.get<int>() < 1) throw ParseError("\"n\" must be >= 1");

  HamiltonianSystem h;
  h.scale = scale;
  h.n = nj.get<int>();
  h.lo = 0;
  h.hi = N;
  h.A = jsonio::matrix_list_from_json(jsonio::require_field(input, "A"), "A");
  h.B = jsonio::matrix_list_from_json(jsonio::require_field(input, "B"), "B");
  h.C = jsonio::matrix_list_from_json(jsonio::require_field(input, "C"), "C");
  if (static_cast<int>(h.A.size()) != N + 1 || static_cast<int>(h.B.size()) != N + 1 ||
      static_cast<int>(h.C.size()) != N + 1) {
    throw ParseError("A, B, C need one matrix per index 0..N");
  }

  std::vector<CMatrix> blocks;
  for (int i = h.lo; i <= h.hi; ++i) blocks.push_back(h.H_at(i));
  const HamiltonianCheck hc = hamiltonian_check(blocks, *scale, h.lo);
  if (!hc.ok()) {
    return emit_error("convert",
                      std::string(hc.structure_ok ? "invertibility condition" : "Hamiltonian structure") +
                          " fails at grid index " + std::to_string(hc.first_bad_index),
                      1, out_path, out);
  }

  SymplecticSystem sym;
  try {
    sym = hamiltonian_to_symplectic(h);
  } catch (const Error& e) {
    return emit_error("convert", e.what(), 1, out_path, out);
  }
  const bool pass = sym.max_symplectic_defect <= tol;

  Json j;
  j["schema_version"] = kReportSchema;
  j["command"] = "convert";
  j["mode"] = "hamiltonian-to-symplectic";
  j["n"] = h.n;
  j["window"] = Json::array({sym.lo, sym.hi});
  j["S"] = jsonio::matrix_list_to_json(sym.S);
  j["symplectic_defect"] = sym.symplectic_defect;
  j["max_symplectic_defect"] = sym.max_symplectic_defect;
  j["max_formula_gap"] = sym.max_formula_gap;
  j["pass"] = pass;
  j["wall_time_ms"] = timer.ms();
  emit(j, out_path, out);
  return pass ? 0 : 1;
}

int cmd_convert(const std::string& mode, const std::string& path, double tol,
                const std::string& out_path, std::ostream& out) {
  Timer timer;
  Json input;
  std::string schema;
  try {
    input = Json::parse(read_file(path));
    schema = jsonio::require_field(input, "schema_version").get<std::string>();
  } catch (const Error& e) {
    return emit_error("convert", e.what(), 2, out_path, out);
  } catch (const nlohmann::json::exception& e) {
    return emit_error("convert", std::string("invalid JSON: ") + e.what(), 2, out_path, out);
  }

  try {
    if (mode == "second-order-to-symplectic") {
      if (schema != "tsspec-secondorder/1") {
        throw SchemaVersionMismatch("expected schema_version \"tsspec-secondorder/1\"");
      }
      return convert_second_order(input, tol, out_path, out, timer);
    }
    if (mode == "sl-to-hamiltonian") {
      if (schema != "tsspec-sl/1") {
        throw SchemaVersionMismatch("expected schema_version \"tsspec-sl/1\"");
      }
      return convert_sl(input, tol, out_path, out, timer);
    }
    if (mode == "hamiltonian-to-symplectic") {
      if (schema != "tsspec-hamiltonian/1") {
        throw SchemaVersionMismatch("expected schema_version \"tsspec-hamiltonian/1\"");
      }
      return convert_hamiltonian(input, tol, out_path, out, timer);
    }
    return emit_error("convert", "unknown mode: " + mode, 2, out_path, out);
  } catch (const ParseError& e) {
    return emit_error("convert", e.what(), 2, out_path, out);
  } catch (const SchemaVersionMismatch& e) {
    return emit_error("convert", e.what(), 2, out_path, out);
  } catch (const Error& e) {
    return emit_error("convert", e.what(), 1, out_path, out);
  }
}

int cmd_make_timescale(const std::string& kind, double h, double q, double t0,
                       std::uint64_t seed, std::vector<double> points, int N,
                       const std::string& out_path, std::ostream& out) {
  Timer timer;
  ScaleRef scale;
  try {
    if (kind == "uniform") {
      scale = make_uniform_scale(h, N);
    } else if (kind == "qscale") {
      scale = make_q_scale(q, t0, N);
    } else if (kind == "explicit") {
      scale = make_explicit_scale(std::move(points), N);
    } else if (kind == "random") {
      scale = make_random_scale(seed, N);
    } else {
      throw InvalidParameter("unknown scale kind: " + kind);
    }
  } catch (const Error& e) {
    return emit_error("make-timescale", e.what(), 2, out_path, out);
  }

  Json j;
  j["schema_version"] = "tsspec-scale/1";
  j["command"] = "make-timescale";
  j["kind"] = kind;
  j["N"] = scale->N();
  j["scale"] = scale->points();
  j["wall_time_ms"] = timer.ms();
  emit(j, out_path, out);
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-adjoint spectral problems for second-order vector dynamic equations "
               "on finite isolated time scales"};
  app.name("tsspec");
  app.require_subcommand(1);
  const double tol_default = default_tol();

  std::string problem_path, out_path, mode, kind;
  double tol = tol_default;
  std::vector<std::int64_t> random_spec;
  int threads = 0;
  int ham_count = 0;

  auto* validate_cmd = app.add_subcommand("validate", "Check every standing hypothesis");
  validate_cmd->add_option("problem", problem_path, "Problem JSON file")->required();
  validate_cmd->add_option("--tol", tol, "Hypothesis tolerance");
  validate_cmd->add_option("--out", out_path, "Write the report to a file");

  auto* solve_cmd = app.add_subcommand("solve", "Solve the eigenvalue problem");
  solve_cmd->add_option("problem", problem_path, "Problem JSON file")->required();
  solve_cmd->add_option("--tol", tol, "Pipeline tolerance");
  solve_cmd->add_option("--out", out_path, "Write the report to a file");

  auto* verify_cmd = app.add_subcommand("verify", "Run the verification suites");
  verify_cmd->add_option("problem", problem_path, "Problem JSON file");
  verify_cmd->add_option("--random", random_spec,
                         "d N seed count (d or N may be 0 for a mixed sweep)")
      ->expected(4);
  verify_cmd->add_option("--threads", threads, "Worker threads (1 = serial)");
  verify_cmd->add_option("--hamiltonian", ham_count, "Also run this many conversion-layer samples");
  verify_cmd->add_option("--tol", tol, "Hypothesis tolerance");
  verify_cmd->add_option("--out", out_path, "Write the report to a file");

  auto* convert_cmd = app.add_subcommand("convert", "Convert between system forms");
  convert_cmd
      ->add_option("--mode", mode,
                   "second-order-to-symplectic | sl-to-hamiltonian | hamiltonian-to-symplectic")
      ->required();
  convert_cmd->add_option("input", problem_path, "Input JSON file")->required();
  convert_cmd->add_option("--tol", tol, "Residual tolerance");
  convert_cmd->add_option("--out", out_path, "Write the report to a file");

  double h = 1.0, q = 2.0, t0 = 1.0;
  std::uint64_t seed = 0;
  int N = 2;
  std::vector<double> points;
  auto* make_cmd = app.add_subcommand("make-timescale", "Emit a time-scale JSON file");
  make_cmd->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
  make_cmd->add_option("kind", kind, "uniform | qscale | explicit | random")->required();
  make_cmd->add_option("--N", N, "Interior point count (N >= 2)")->required();
  make_cmd->add_option("--h", h, "Uniform step");
  make_cmd->add_option("--q", q, "Quantum ratio");
  make_cmd->add_option("--t0", t0, "Quantum base point (= a)");
  make_cmd->add_option("--seed", seed, "Random scale seed");
  make_cmd->add_option("--points", points, "Explicit point list (N+2 values)");
  make_cmd->add_option("--out", out_path, "Write the scale to a file");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(validate_cmd)) {
      return cmd_validate(problem_path, tol, out_path, out);
    }
    if (app.got_subcommand(solve_cmd)) {
      return cmd_solve(problem_path, tol, out_path, out);
    }
    if (app.got_subcommand(verify_cmd)) {
      if (random_spec.empty() && problem_path.empty()) {
        err << "verify needs a problem file or --random d N seed count\n";
        return 2;
      }
      return cmd_verify(problem_path, random_spec, threads, ham_count, tol, out_path, out);
    }
    if (app.got_subcommand(convert_cmd)) {
      return cmd_convert(mode, problem_path, tol, out_path, out);
    }
    if (app.got_subcommand(make_cmd)) {
      return cmd_make_timescale(kind, h, q, t0, seed, std::move(points), N, out_path, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace tsspec
