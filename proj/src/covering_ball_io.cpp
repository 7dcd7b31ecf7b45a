#include "avi/io.hpp"

namespace avi {

namespace {

json matrix_rows(const Matrix<double>& a) {
  json rows = json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix<double> matrix_from_rows(const json& rows, Index cols, const char* what) {
  Matrix<double> a(static_cast<Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail::require(rows[i].size() == static_cast<std::size_t>(cols),
                    std::string("covering-ball instance: ragged ") + what);
    for (Index j = 0; j < cols; ++j) a(static_cast<Index>(i), j) = rows[i][static_cast<std::size_t>(j)].get<double>();
  }
  return a;
}

}  // namespace

json covering_ball_to_json(const CoveringBallProblem<double>& p) {
  json j;
  j["kind"] = "covering_ball";
  j["dims"] = {{"n", p.n()}, {"m", p.m()}, {"s", p.s()}};
  j["seed"] = p.seed;
  j["case"] = to_string(p.coefficient_case);
  j["dual_cap"] = p.dual_cap;
  j["primal_radius"] = p.primal_radius;
  j["points_A"] = matrix_rows(p.points);
  j["alpha"] = matrix_rows(p.alpha);
  return j;
}

CoveringBallProblem<double> covering_ball_from_json(const json& j) {
  CoveringBallProblem<double> p;
  const auto& d = j.at("dims");
  const Index n = d.at("n").get<Index>();
  const Index m = d.at("m").get<Index>();
  const Index s = d.at("s").get<Index>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.coefficient_case = coefficient_case_from_string(j.at("case").get<std::string>());
  p.dual_cap = j.at("dual_cap").get<double>();
  p.primal_radius = j.at("primal_radius").get<double>();
  p.points = matrix_from_rows(j.at("points_A"), n, "points_A");
  p.alpha = matrix_from_rows(j.at("alpha"), n, "alpha");
  detail::require(p.s() == s && p.m() == m, "covering-ball instance: dims disagree with the data");
  p.validate();
  return p;
}

void save_covering_ball(const CoveringBallProblem<double>& p, const std::filesystem::path& path) {
  write_text_file(path, covering_ball_to_json(p).dump() + "\n");
}

CoveringBallProblem<double> load_covering_ball(const std::filesystem::path& path) {
  return covering_ball_from_json(read_json_file(path));
}

}  // namespace avi
