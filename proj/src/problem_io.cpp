#include <fstream>
#include <sstream>

#include "json_io.hpp"
#include "tsspec/problem.hpp"

namespace tsspec {

namespace jsonio {

Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("malformed complex entry at " + where + " (expected [re, im])");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(i, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ParseError("matrix at " + where + " must be a nonempty array of rows");
  }
  const size_t nrows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    throw ParseError("matrix row at " + where + " must be a nonempty array");
  }
  const size_t ncols = j[0].size();
  CMatrix m(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ncols));
  for (size_t i = 0; i < nrows; ++i) {
    if (!j[i].is_array() || j[i].size() != ncols) {
      throw ParseError("ragged matrix rows at " + where);
    }
    for (size_t c = 0; c < ncols; ++c) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = complex_from_json(
          j[i][c], where + "[" + std::to_string(i) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

const Json& require_field(const Json& j, const std::string& name) {
  auto it = j.find(name);
  if (it == j.end()) throw ParseError("missing \"" + name + "\" field");
  return *it;
}

std::vector<CMatrix> matrix_list_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError("\"" + where + "\" must be an array of matrices");
  std::vector<CMatrix> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    out.push_back(matrix_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Json matrix_list_to_json(const std::vector<CMatrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

}  // namespace jsonio

namespace {
using jsonio::Json;
constexpr const char* kProblemSchema = "tsspec-problem/1";
}  // namespace

std::string problem_to_json_text(const SpectralProblem& p) {
  p.check_shape();
  Json j;
  j["schema_version"] = kProblemSchema;
  j["d"] = p.d;
  j["scale"] = p.scale->points();
  j["P"] = jsonio::matrix_list_to_json(p.P);
  j["Q"] = jsonio::matrix_list_to_json(p.Q);
  j["omega"] = jsonio::matrix_list_to_json(p.omega);
  j["R"] = jsonio::matrix_to_json(p.R);
  j["S"] = jsonio::matrix_to_json(p.S);
  return j.dump(2) + "\n";
}

SpectralProblem problem_from_json_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  const auto& ver = jsonio::require_field(j, "schema_version");
  if (!ver.is_string() || ver.get<std::string>() != kProblemSchema) {
    throw SchemaVersionMismatch("expected schema_version \"" + std::string(kProblemSchema) +
                                "\"");
  }
  SpectralProblem p;
  const auto& dj = jsonio::require_field(j, "d");
  if (!dj.is_number_integer() || dj.get<int>() <= 0) {
    throw ParseError("\"d\" must be a positive integer");
  }
  p.d = dj.get<int>();

  const auto& sj = jsonio::require_field(j, "scale");
  if (!sj.is_array() || sj.size() < 4) throw ParseError("\"scale\" must list at least 4 points");
  std::vector<double> pts;
  pts.reserve(sj.size());
  for (size_t i = 0; i < sj.size(); ++i) {
    if (!sj[i].is_number()) throw ParseError("\"scale\" entries must be numbers");
    pts.push_back(sj[i].get<double>());
  }
  try {
    p.scale = make_explicit_scale(std::move(pts));
  } catch (const InvalidParameter& e) {
    throw ParseError(std::string("bad \"scale\": ") + e.what());
  }

  p.P = jsonio::matrix_list_from_json(jsonio::require_field(j, "P"), "P");
  p.Q = jsonio::matrix_list_from_json(jsonio::require_field(j, "Q"), "Q");
  p.omega = jsonio::matrix_list_from_json(jsonio::require_field(j, "omega"), "omega");
  p.R = jsonio::matrix_from_json(jsonio::require_field(j, "R"), "R");
  p.S = jsonio::matrix_from_json(jsonio::require_field(j, "S"), "S");
  try {
    p.check_shape();
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what());
  }
  return p;
}

SpectralProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return problem_from_json_text(buf.str());
}

void save_problem(const SpectralProblem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << problem_to_json_text(p);
}

}  // namespace tsspec
