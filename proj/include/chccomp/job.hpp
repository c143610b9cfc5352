#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chccomp/error.hpp"

namespace chccomp {

enum class Result { Sat, Unsat, Unknown };
enum class Status { Complete, Timeout, MemOut, Crash };

const char* to_string(Result r);
const char* to_string(Status s);
std::optional<Result> parse_result(const std::string& s);
std::optional<Status> parse_status(const std::string& s);

inline bool is_definite(Result r) { return r != Result::Unknown; }

/// Outcome of one (solver configuration, benchmark) job.
struct JobRecord {
  std::string benchmark;
  std::string solver;
  std::string configuration;
  Result result = Result::Unknown;
  Status status = Status::Complete;
  double cpu_time = 0.0;   // seconds
  double wall_time = 0.0;  // seconds

  friend bool operator==(const JobRecord&, const JobRecord&) = default;
};

class CsvError : public Error {
 public:
  using Error::Error;
};

/// Header of the job-information CSV.
inline constexpr const char* kJobCsvHeader =
    "benchmark,solver,configuration,status,result,cpu_time,wallclock_time";

/// Writes header plus one row per record, in the given order. Times are
/// printed with two decimals.
void write_job_csv(std::ostream& out, const std::vector<JobRecord>& records);
std::string job_csv(const std::vector<JobRecord>& records);

/// Reads a job-information CSV. Columns are located by header name, so extra
/// columns are tolerated. Throws CsvError.
std::vector<JobRecord> read_job_csv(std::istream& in);
std::vector<JobRecord> parse_job_csv(const std::string& text);

/// Rounds to the two-decimal resolution of the CSV.
double round_centis(double seconds);

/// RFC 4180 field splitting/quoting for the CSV formats in this project.
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_field(const std::string& field);

}  // namespace chccomp
