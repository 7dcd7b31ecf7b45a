#ifndef AVI_IO_HPP
#define AVI_IO_HPP

// Trace and problem-instance serialization. CSV is plot-ready and lossy in
// structure (no points, no markers); JSON mirrors Trace and round-trips.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "avi/operators.hpp"
#include "avi/solvers.hpp"

namespace avi {

using json = nlohmann::json;

enum class TraceFormat { Csv, Json };

TraceFormat trace_format_from_string(std::string_view s);

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

inline constexpr std::string_view kTraceCsvHeader =
    "iter,i_k,L_accepted,S_k,V_err,norm_err,objective,bound_eq,bound_value,elapsed_s";

void write_trace_csv(const Trace<double>& t, std::ostream& os);
std::string trace_to_csv(const Trace<double>& t);

json trace_to_json(const Trace<double>& t);
Trace<double> trace_from_json(const json& j);

/// A trace plus its header: config echo, seed, status, library version.
struct TraceFile {
  json header = json::object();
  Trace<double> trace;
};

json trace_file_to_json(const TraceFile& f);
TraceFile trace_file_from_json(const json& j);

void save_trace_file(const TraceFile& f, const std::filesystem::path& path);
TraceFile load_trace_file(const std::filesystem::path& path);

/// Writes `t` as CSV or as a headerless JSON trace file.
void export_trace(const Trace<double>& t, TraceFormat format, const std::filesystem::path& path);

json covering_ball_to_json(const CoveringBallProblem<double>& p);
CoveringBallProblem<double> covering_ball_from_json(const json& j);
void save_covering_ball(const CoveringBallProblem<double>& p, const std::filesystem::path& path);
CoveringBallProblem<double> load_covering_ball(const std::filesystem::path& path);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

inline constexpr std::string_view kLibraryVersion = "0.1.0";

}  // namespace avi

#endif  // AVI_IO_HPP
