#include "chccomp/job.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace chccomp {

const char* to_string(Result r) {
  switch (r) {
    case Result::Sat: return "sat";
    case Result::Unsat: return "unsat";
    case Result::Unknown: return "unknown";
  }
  return "?";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Complete: return "complete";
    case Status::Timeout: return "timeout";
    case Status::MemOut: return "memout";
    case Status::Crash: return "crash";
  }
  return "?";
}

std::optional<Result> parse_result(const std::string& s) {
  if (s == "sat") return Result::Sat;
  if (s == "unsat") return Result::Unsat;
  if (s == "unknown") return Result::Unknown;
  return std::nullopt;
}

std::optional<Status> parse_status(const std::string& s) {
  if (s == "complete") return Status::Complete;
  if (s == "timeout") return Status::Timeout;
  if (s == "memout") return Status::MemOut;
  if (s == "crash") return Status::Crash;
  return std::nullopt;
}

double round_centis(double seconds) { return std::round(seconds * 100.0) / 100.0; }

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (quoted) throw CsvError("unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

namespace {
std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
}  // namespace

void write_job_csv(std::ostream& out, const std::vector<JobRecord>& records) {
  out << kJobCsvHeader << '\n';
  for (const auto& r : records) {
    out << csv_field(r.benchmark) << ',' << csv_field(r.solver) << ',' << csv_field(r.configuration)
        << ',' << to_string(r.status) << ',' << to_string(r.result) << ',' << fixed2(r.cpu_time)
        << ',' << fixed2(r.wall_time) << '\n';
  }
}

std::string job_csv(const std::vector<JobRecord>& records) {
  std::ostringstream os;
  write_job_csv(os, records);
  return os.str();
}

std::vector<JobRecord> read_job_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty job CSV");
  auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  const char* required[] = {"benchmark", "solver",   "configuration", "status",
                            "result",    "cpu_time", "wallclock_time"};
  for (const char* name : required) {
    if (!col.count(name)) throw CsvError(std::string("job CSV lacks column '") + name + "'");
  }
  std::vector<JobRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    // A quoted field may span lines.
    std::string next;
    while (std::count(line.begin(), line.end(), '"') % 2 == 1 && std::getline(in, next)) {
      line += '\n' + next;
      ++line_no;
    }
    auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw CsvError("line " + std::to_string(line_no) + ": expected " +
                     std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
    }
    JobRecord r;
    r.benchmark = f[col["benchmark"]];
    r.solver = f[col["solver"]];
    r.configuration = f[col["configuration"]];
    auto status = parse_status(f[col["status"]]);
    auto result = parse_result(f[col["result"]]);
    if (!status || !result) throw CsvError("line " + std::to_string(line_no) + ": bad status/result");
    r.status = *status;
    r.result = *result;
    try {
      r.cpu_time = std::stod(f[col["cpu_time"]]);
      r.wall_time = std::stod(f[col["wallclock_time"]]);
    } catch (const std::exception&) {
      throw CsvError("line " + std::to_string(line_no) + ": bad time value");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<JobRecord> parse_job_csv(const std::string& text) {
  std::istringstream is(text);
  return read_job_csv(is);
}

}  // namespace chccomp
