#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "avi/io.hpp"
#include "avi/random.hpp"

using namespace avi;
using Vec = Eigen::VectorXd;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / "avi-tests" / name;
  std::filesystem::create_directories(p.parent_path());
  return p;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

Trace<double> sample_trace(int n_records) {
  Trace<double> t;
  t.method = "alg3_delta";
  t.bound_eq = "eq19";
  t.z0 = (Vec(2) << 0.1, 1.0 / 3).finished();
  t.final = (Vec(2) << 1e-300, -2.5e17).finished();
  t.V0 = 0.7;
  t.V0_exact = true;
  t.mu = 1;
  t.delta = 0.01;
  t.operator_calls = 17;
  t.termination = Termination::IterationCap;
  for (int k = 0; k < n_records; ++k) {
    TraceRecord<double> r;
    r.iter = k + 1;
    r.trials = k % 3;
    r.L = std::ldexp(0.3, k);
    r.S = 1.0 / 3 + k;
    r.z = (Vec(2) << k / 7.0, -k / 11.0).finished();
    r.w = (Vec(2) << 0.1 * k, 0.2).finished();
    if (k != 1) r.V_err = 1.0 / (k + 3);
    r.norm_err = std::sqrt(2.0) / (k + 1);
    if (k == 2) r.objective = 42.125;
    r.bound = 0.9 / (k + 1);
    r.elapsed_s = 1e-6 * k;
    t.records.push_back(r);
  }
  RestartMarker<double> m;
  m.stage = 0;
  m.iterations = n_records;
  m.R_sq = 0.5;
  m.S_stage = 1.25;
  m.first_iter = 1;
  t.restart_markers.push_back(m);
  return t;
}

bool same(const Trace<double>& a, const Trace<double>& b) {
  if (a.method != b.method || a.bound_eq != b.bound_eq || a.z0 != b.z0 || a.final != b.final || a.V0 != b.V0 ||
      a.V0_exact != b.V0_exact || a.mu != b.mu || a.delta != b.delta || a.operator_calls != b.operator_calls ||
      a.termination != b.termination || a.records.size() != b.records.size() ||
      a.restart_markers.size() != b.restart_markers.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto &x = a.records[i], &y = b.records[i];
    if (x.iter != y.iter || x.trials != y.trials || x.L != y.L || x.S != y.S || x.z != y.z || x.w != y.w ||
        x.V_err != y.V_err || x.norm_err != y.norm_err || x.objective != y.objective || x.bound != y.bound ||
        x.elapsed_s != y.elapsed_s) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.restart_markers.size(); ++i) {
    const auto &x = a.restart_markers[i], &y = b.restart_markers[i];
    if (x.stage != y.stage || x.iterations != y.iterations || x.R_sq != y.R_sq || x.S_stage != y.S_stage ||
        x.first_iter != y.first_iter) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("shortest round-trip number formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(1e-300) == "1e-300");
  for (double x : {1.0 / 3, std::sqrt(2.0), 6.02214076e23, -4.9e-324, 123456789.125}) {
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("CSV export") {
  SUBCASE("empty trace gives the header only") {
    const auto csv = trace_to_csv(Trace<double>{});
    CHECK(csv == std::string(kTraceCsvHeader) + "\n");
  }
  SUBCASE("three records give three data rows") {
    const auto rows = lines(trace_to_csv(sample_trace(3)));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "iter,i_k,L_accepted,S_k,V_err,norm_err,objective,bound_eq,bound_value,elapsed_s");
    CHECK(rows[1] == "1,0,0.3,0.3333333333333333,0.3333333333333333,1.4142135623730951,,eq19,0.9,0");
    CHECK(rows[2].rfind("2,1,0.6,1.3333333333333333,,0.7071067811865476,,eq19,0.45,", 0) == 0);
    CHECK(rows[3].find(",42.125,") != std::string::npos);
  }
}

TEST_CASE("JSON trace round trip") {
  const auto t = sample_trace(4);
  CHECK(same(trace_from_json(trace_to_json(t)), t));
  CHECK(same(trace_from_json(json::parse(trace_to_json(t).dump())), t));

  const auto path = scratch("roundtrip.json");
  TraceFile f{{{"seed", 5}}, t};
  save_trace_file(f, path);
  const auto back = load_trace_file(path);
  CHECK(same(back.trace, t));
  CHECK(back.header.at("seed") == 5);

  export_trace(t, TraceFormat::Json, path);
  CHECK(same(load_trace_file(path).trace, t));
  export_trace(t, TraceFormat::Csv, scratch("roundtrip.csv"));
  std::ifstream in(scratch("roundtrip.csv"));
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == trace_to_csv(t));
}

TEST_CASE("IO errors") {
  CHECK_THROWS(load_trace_file(scratch("does-not-exist.json")));
  const auto bad = scratch("bad.json");
  write_text_file(bad, "{ not json");
  CHECK_THROWS_AS(read_json_file(bad), std::runtime_error);
  CHECK_THROWS_AS(trace_format_from_string("xml"), std::invalid_argument);
}

TEST_CASE("covering-ball instance round trip") {
  const auto p = gen_covering_ball(31, 4, 2, 6, CoefficientCase::ChiSq3);
  const auto path = scratch("instance.json");
  save_covering_ball(p, path);
  const auto q = load_covering_ball(path);
  CHECK(q.points == p.points);
  CHECK(q.alpha == p.alpha);
  CHECK(q.seed == 31);
  CHECK(q.coefficient_case == CoefficientCase::ChiSq3);
  CHECK(q.dual_cap == p.dual_cap);
  auto j = covering_ball_to_json(p);
  j["dims"]["s"] = 99;
  CHECK_THROWS_AS(covering_ball_from_json(j), std::invalid_argument);
}
