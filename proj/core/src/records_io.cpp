#include "onel1/records_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace onel1 {

namespace {

constexpr const char* kTrialHeader =
    "solver,ensemble,delta,rho,N,n,k,seed,relative_rmse,success,"
    "operator_calls,outer_iters,wall_time_s,status,error";

constexpr const char* kBenchmarkHeader =
    "solver,delta,rho,N,n,k,trials,success_count,"
    "rmse_min,rmse_mean,rmse_max,calls_min,calls_mean,calls_max,"
    "time_min,time_mean,time_max";

// Splits one complete CSV record into fields, honoring RFC-4180 quoting.
// Newlines embedded in quoted fields are fine: read_csv_record() splices the
// physical lines back into one record before this runs.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) {
    throw std::runtime_error("CSV parse error: unterminated quoted field");
  }
  fields.push_back(std::move(field));
  return fields;
}

// Reads one logical CSV record, joining physical lines while a quoted field
// is open. Returns false at end of input.
bool read_csv_record(std::istream& in, std::string& record) {
  record.clear();
  std::string line;
  bool have_any = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (have_any) record.push_back('\n');
    record += line;
    have_any = true;
    // A record is complete when quotes are balanced.
    int quotes = 0;
    for (char c : record) {
      if (c == '"') ++quotes;
    }
    if (quotes % 2 == 0) return true;
  }
  return have_any;
}

double parse_double(const std::string& s, const char* what) {
  if (s.empty()) {
    throw std::runtime_error(std::string("CSV parse error: empty ") + what);
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) {
    throw std::runtime_error(std::string("CSV parse error: bad ") + what +
                             " '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s, const char* what) {
  if (s.empty()) {
    throw std::runtime_error(std::string("CSV parse error: empty ") + what);
  }
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) {
    throw std::runtime_error(std::string("CSV parse error: bad ") + what +
                             " '" + s + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  if (s.empty()) {
    throw std::runtime_error(std::string("CSV parse error: empty ") + what);
  }
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) {
    throw std::runtime_error(std::string("CSV parse error: bad ") + what +
                             " '" + s + "'");
  }
  return v;
}

void expect_header(std::istream& in, const char* expected) {
  std::string header;
  if (!read_csv_record(in, header)) {
    throw std::runtime_error("CSV parse error: missing header row");
  }
  if (header != expected) {
    throw std::runtime_error("CSV parse error: unexpected header '" + header +
                             "'");
  }
}

nlohmann::json trial_to_json(const TrialRecord& rec) {
  return nlohmann::json{{"solver", rec.solver},
                        {"ensemble", rec.ensemble},
                        {"delta", rec.delta},
                        {"rho", rec.rho},
                        {"N", rec.N},
                        {"n", rec.n},
                        {"k", rec.k},
                        {"seed", rec.seed},
                        {"relative_rmse", rec.relative_rmse},
                        {"success", rec.success},
                        {"operator_calls", rec.operator_calls},
                        {"outer_iters", rec.outer_iters},
                        {"wall_time_s", rec.wall_time_s},
                        {"status", rec.status},
                        {"error", rec.error}};
}

TrialRecord trial_from_json(const nlohmann::json& j) {
  TrialRecord rec;
  rec.solver = j.at("solver").get<std::string>();
  rec.ensemble = j.at("ensemble").get<std::string>();
  rec.delta = j.at("delta").get<double>();
  rec.rho = j.at("rho").get<double>();
  rec.N = j.at("N").get<int>();
  rec.n = j.at("n").get<int>();
  rec.k = j.at("k").get<int>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.relative_rmse = j.at("relative_rmse").get<double>();
  rec.success = j.at("success").get<bool>();
  rec.operator_calls = j.at("operator_calls").get<std::uint64_t>();
  rec.outer_iters = j.at("outer_iters").get<int>();
  rec.wall_time_s = j.at("wall_time_s").get<double>();
  rec.status = j.at("status").get<std::string>();
  rec.error = j.at("error").get<std::string>();
  return rec;
}

nlohmann::json benchmark_to_json(const BenchmarkRecord& rec) {
  return nlohmann::json{{"solver", rec.solver},
                        {"delta", rec.delta},
                        {"rho", rec.rho},
                        {"N", rec.N},
                        {"n", rec.n},
                        {"k", rec.k},
                        {"trials", rec.trials},
                        {"success_count", rec.success_count},
                        {"rmse_min", rec.rmse_min},
                        {"rmse_mean", rec.rmse_mean},
                        {"rmse_max", rec.rmse_max},
                        {"calls_min", rec.calls_min},
                        {"calls_mean", rec.calls_mean},
                        {"calls_max", rec.calls_max},
                        {"time_min", rec.time_min},
                        {"time_mean", rec.time_mean},
                        {"time_max", rec.time_max}};
}

BenchmarkRecord benchmark_from_json(const nlohmann::json& j) {
  BenchmarkRecord rec;
  rec.solver = j.at("solver").get<std::string>();
  rec.delta = j.at("delta").get<double>();
  rec.rho = j.at("rho").get<double>();
  rec.N = j.at("N").get<int>();
  rec.n = j.at("n").get<int>();
  rec.k = j.at("k").get<int>();
  rec.trials = j.at("trials").get<int>();
  rec.success_count = j.at("success_count").get<int>();
  rec.rmse_min = j.at("rmse_min").get<double>();
  rec.rmse_mean = j.at("rmse_mean").get<double>();
  rec.rmse_max = j.at("rmse_max").get<double>();
  rec.calls_min = j.at("calls_min").get<double>();
  rec.calls_mean = j.at("calls_mean").get<double>();
  rec.calls_max = j.at("calls_max").get<double>();
  rec.time_min = j.at("time_min").get<double>();
  rec.time_mean = j.at("time_mean").get<double>();
  rec.time_max = j.at("time_max").get<double>();
  return rec;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  return out;
}

}  // namespace

RecordFormat record_format_from_string(const std::string& name) {
  if (name == "csv") return RecordFormat::Csv;
  if (name == "json") return RecordFormat::Json;
  throw std::invalid_argument("unknown format '" + name +
                              "' (expected csv or json)");
}

std::string to_string(RecordFormat format) {
  return format == RecordFormat::Csv ? "csv" : "json";
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string csv_escape(const std::string& field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_trial_records_csv(std::ostream& out,
                             const std::vector<TrialRecord>& records) {
  out << kTrialHeader << '\n';
  for (const TrialRecord& rec : records) {
    out << csv_escape(rec.solver) << ',' << csv_escape(rec.ensemble) << ','
        << format_double(rec.delta) << ',' << format_double(rec.rho) << ','
        << rec.N << ',' << rec.n << ',' << rec.k << ',' << rec.seed << ','
        << format_double(rec.relative_rmse) << ',' << (rec.success ? 1 : 0)
        << ',' << rec.operator_calls << ',' << rec.outer_iters << ','
        << format_double(rec.wall_time_s) << ',' << csv_escape(rec.status)
        << ',' << csv_escape(rec.error) << '\n';
  }
}

std::vector<TrialRecord> read_trial_records_csv(std::istream& in) {
  expect_header(in, kTrialHeader);
  std::vector<TrialRecord> records;
  std::string line;
  while (read_csv_record(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 15) {
      throw std::runtime_error("CSV parse error: expected 15 fields, got " +
                               std::to_string(f.size()));
    }
    TrialRecord rec;
    rec.solver = f[0];
    rec.ensemble = f[1];
    rec.delta = parse_double(f[2], "delta");
    rec.rho = parse_double(f[3], "rho");
    rec.N = static_cast<int>(parse_int(f[4], "N"));
    rec.n = static_cast<int>(parse_int(f[5], "n"));
    rec.k = static_cast<int>(parse_int(f[6], "k"));
    rec.seed = parse_u64(f[7], "seed");
    rec.relative_rmse = parse_double(f[8], "relative_rmse");
    rec.success = parse_int(f[9], "success") != 0;
    rec.operator_calls = parse_u64(f[10], "operator_calls");
    rec.outer_iters = static_cast<int>(parse_int(f[11], "outer_iters"));
    rec.wall_time_s = parse_double(f[12], "wall_time_s");
    rec.status = f[13];
    rec.error = f[14];
    records.push_back(std::move(rec));
  }
  return records;
}

void write_benchmark_records_csv(std::ostream& out,
                                 const std::vector<BenchmarkRecord>& records) {
  out << kBenchmarkHeader << '\n';
  for (const BenchmarkRecord& rec : records) {
    out << csv_escape(rec.solver) << ',' << format_double(rec.delta) << ','
        << format_double(rec.rho) << ',' << rec.N << ',' << rec.n << ','
        << rec.k << ',' << rec.trials << ',' << rec.success_count << ','
        << format_double(rec.rmse_min) << ',' << format_double(rec.rmse_mean)
        << ',' << format_double(rec.rmse_max) << ','
        << format_double(rec.calls_min) << ',' << format_double(rec.calls_mean)
        << ',' << format_double(rec.calls_max) << ','
        << format_double(rec.time_min) << ',' << format_double(rec.time_mean)
        << ',' << format_double(rec.time_max) << '\n';
  }
}

std::vector<BenchmarkRecord> read_benchmark_records_csv(std::istream& in) {
  expect_header(in, kBenchmarkHeader);
  std::vector<BenchmarkRecord> records;
  std::string line;
  while (read_csv_record(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 17) {
      throw std::runtime_error("CSV parse error: expected 17 fields, got " +
                               std::to_string(f.size()));
    }
    BenchmarkRecord rec;
    rec.solver = f[0];
    rec.delta = parse_double(f[1], "delta");
    rec.rho = parse_double(f[2], "rho");
    rec.N = static_cast<int>(parse_int(f[3], "N"));
    rec.n = static_cast<int>(parse_int(f[4], "n"));
    rec.k = static_cast<int>(parse_int(f[5], "k"));
    rec.trials = static_cast<int>(parse_int(f[6], "trials"));
    rec.success_count = static_cast<int>(parse_int(f[7], "success_count"));
    rec.rmse_min = parse_double(f[8], "rmse_min");
    rec.rmse_mean = parse_double(f[9], "rmse_mean");
    rec.rmse_max = parse_double(f[10], "rmse_max");
    rec.calls_min = parse_double(f[11], "calls_min");
    rec.calls_mean = parse_double(f[12], "calls_mean");
    rec.calls_max = parse_double(f[13], "calls_max");
    rec.time_min = parse_double(f[14], "time_min");
    rec.time_mean = parse_double(f[15], "time_mean");
    rec.time_max = parse_double(f[16], "time_max");
    records.push_back(std::move(rec));
  }
  return records;
}

void write_trial_records_json(std::ostream& out,
                              const std::vector<TrialRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const TrialRecord& rec : records) arr.push_back(trial_to_json(rec));
  out << arr.dump(2) << '\n';
}

std::vector<TrialRecord> read_trial_records_json(std::istream& in) {
  const nlohmann::json arr = nlohmann::json::parse(in);
  if (!arr.is_array()) {
    throw std::runtime_error("JSON parse error: expected an array");
  }
  std::vector<TrialRecord> records;
  records.reserve(arr.size());
  for (const auto& j : arr) records.push_back(trial_from_json(j));
  return records;
}

void write_benchmark_records_json(std::ostream& out,
                                  const std::vector<BenchmarkRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const BenchmarkRecord& rec : records) {
    arr.push_back(benchmark_to_json(rec));
  }
  out << arr.dump(2) << '\n';
}

std::vector<BenchmarkRecord> read_benchmark_records_json(std::istream& in) {
  const nlohmann::json arr = nlohmann::json::parse(in);
  if (!arr.is_array()) {
    throw std::runtime_error("JSON parse error: expected an array");
  }
  std::vector<BenchmarkRecord> records;
  records.reserve(arr.size());
  for (const auto& j : arr) records.push_back(benchmark_from_json(j));
  return records;
}

void write_trial_records(const std::string& path, RecordFormat format,
                         const std::vector<TrialRecord>& records) {
  std::ofstream out = open_for_write(path);
  if (format == RecordFormat::Csv) {
    write_trial_records_csv(out, records);
  } else {
    write_trial_records_json(out, records);
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void write_benchmark_records(const std::string& path, RecordFormat format,
                             const std::vector<BenchmarkRecord>& records) {
  std::ofstream out = open_for_write(path);
  if (format == RecordFormat::Csv) {
    write_benchmark_records_csv(out, records);
  } else {
    write_benchmark_records_json(out, records);
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace onel1
