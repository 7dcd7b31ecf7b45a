#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "avi/io.hpp"

namespace avi {

namespace {

json vec_to_json(const Vector<double>& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector<double> vec_from_json(const json& a) {
  Vector<double> v(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Index>(i)] = a[i].get<double>();
  return v;
}

json opt_to_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::optional<double> opt_from_json(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

void put_opt(std::ostream& os, const std::optional<double>& x) {
  if (x) os << format_double(*x);
}

const char* to_string(Termination t) { return t == Termination::StopRule ? "stop_rule" : "iteration_cap"; }

Termination termination_from_string(const std::string& s) {
  if (s == "stop_rule") return Termination::StopRule;
  if (s == "iteration_cap") return Termination::IterationCap;
  throw std::invalid_argument("unknown termination '" + s + "'");
}

}  // namespace

TraceFormat trace_format_from_string(std::string_view s) {
  if (s == "csv") return TraceFormat::Csv;
  if (s == "json") return TraceFormat::Json;
  throw std::invalid_argument("unknown trace format '" + std::string(s) + "'");
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_trace_csv(const Trace<double>& t, std::ostream& os) {
  os << kTraceCsvHeader << '\n';
  for (const auto& r : t.records) {
    os << r.iter << ',' << r.trials << ',' << format_double(r.L) << ',' << format_double(r.S) << ',';
    put_opt(os, r.V_err);
    os << ',';
    put_opt(os, r.norm_err);
    os << ',';
    put_opt(os, r.objective);
    os << ',';
    if (r.bound) os << t.bound_eq;
    os << ',';
    put_opt(os, r.bound);
    os << ',' << format_double(r.elapsed_s) << '\n';
  }
}

std::string trace_to_csv(const Trace<double>& t) {
  std::ostringstream os;
  write_trace_csv(t, os);
  return os.str();
}

json trace_to_json(const Trace<double>& t) {
  json j;
  j["method"] = t.method;
  j["bound_eq"] = t.bound_eq;
  j["z0"] = vec_to_json(t.z0);
  j["final"] = vec_to_json(t.final);
  j["V0"] = opt_to_json(t.V0);
  j["V0_exact"] = t.V0_exact;
  j["mu"] = t.mu;
  j["delta"] = t.delta;
  j["operator_calls"] = t.operator_calls;
  j["termination"] = to_string(t.termination);
  json markers = json::array();
  for (const auto& m : t.restart_markers) {
    markers.push_back({{"stage", m.stage},
                       {"iterations", m.iterations},
                       {"R_sq", m.R_sq},
                       {"S_stage", m.S_stage},
                       {"first_iter", m.first_iter}});
  }
  j["restart_markers"] = std::move(markers);
  json records = json::array();
  for (const auto& r : t.records) {
    json rec;
    rec["iter"] = r.iter;
    rec["i_k"] = r.trials;
    rec["L"] = r.L;
    rec["S"] = r.S;
    if (r.z.size() > 0) rec["z"] = vec_to_json(r.z);
    if (r.w.size() > 0) rec["w"] = vec_to_json(r.w);
    rec["V_err"] = opt_to_json(r.V_err);
    rec["norm_err"] = opt_to_json(r.norm_err);
    rec["objective"] = opt_to_json(r.objective);
    rec["bound"] = opt_to_json(r.bound);
    rec["elapsed_s"] = r.elapsed_s;
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  return j;
}

Trace<double> trace_from_json(const json& j) {
  Trace<double> t;
  t.method = j.at("method").get<std::string>();
  t.bound_eq = j.at("bound_eq").get<std::string>();
  t.z0 = vec_from_json(j.at("z0"));
  t.final = vec_from_json(j.at("final"));
  t.V0 = opt_from_json(j, "V0");
  t.V0_exact = j.at("V0_exact").get<bool>();
  t.mu = j.at("mu").get<double>();
  t.delta = j.at("delta").get<double>();
  t.operator_calls = j.at("operator_calls").get<std::int64_t>();
  t.termination = termination_from_string(j.at("termination").get<std::string>());
  for (const auto& m : j.at("restart_markers")) {
    RestartMarker<double> mk;
    mk.stage = m.at("stage").get<int>();
    mk.iterations = m.at("iterations").get<std::int64_t>();
    mk.R_sq = m.at("R_sq").get<double>();
    mk.S_stage = m.at("S_stage").get<double>();
    mk.first_iter = m.at("first_iter").get<std::int64_t>();
    t.restart_markers.push_back(mk);
  }
  for (const auto& rec : j.at("records")) {
    TraceRecord<double> r;
    r.iter = rec.at("iter").get<std::int64_t>();
    r.trials = rec.at("i_k").get<int>();
    r.L = rec.at("L").get<double>();
    r.S = rec.at("S").get<double>();
    if (rec.contains("z")) r.z = vec_from_json(rec.at("z"));
    if (rec.contains("w")) r.w = vec_from_json(rec.at("w"));
    r.V_err = opt_from_json(rec, "V_err");
    r.norm_err = opt_from_json(rec, "norm_err");
    r.objective = opt_from_json(rec, "objective");
    r.bound = opt_from_json(rec, "bound");
    r.elapsed_s = rec.at("elapsed_s").get<double>();
    t.records.push_back(std::move(r));
  }
  return t;
}

json trace_file_to_json(const TraceFile& f) {
  json j;
  j["header"] = f.header;
  j["trace"] = trace_to_json(f.trace);
  return j;
}

TraceFile trace_file_from_json(const json& j) {
  TraceFile f;
  if (j.contains("header")) f.header = j.at("header");
  f.trace = trace_from_json(j.contains("trace") ? j.at("trace") : j);
  return f;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

void save_trace_file(const TraceFile& f, const std::filesystem::path& path) {
  write_text_file(path, trace_file_to_json(f).dump(1) + "\n");
}

TraceFile load_trace_file(const std::filesystem::path& path) { return trace_file_from_json(read_json_file(path)); }

void export_trace(const Trace<double>& t, TraceFormat format, const std::filesystem::path& path) {
  if (format == TraceFormat::Csv) {
    write_text_file(path, trace_to_csv(t));
  } else {
    save_trace_file(TraceFile{json::object(), t}, path);
  }
}

}  // namespace avi
