#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "onel1/experiments.hpp"

namespace onel1 {

enum class RecordFormat { Csv, Json };

// "csv" or "json" (case-sensitive); anything else throws.
RecordFormat record_format_from_string(const std::string& name);
std::string to_string(RecordFormat format);

// Doubles are serialized with %.17g so that parsing them back reproduces the
// exact bit pattern.
std::string format_double(double value);

// RFC-4180 quoting: a field containing a comma, quote, CR, or LF is wrapped
// in double quotes with embedded quotes doubled.
std::string csv_escape(const std::string& field);

// Trial record CSV column order (header row included):
//   solver,ensemble,delta,rho,N,n,k,seed,relative_rmse,success,
//   operator_calls,outer_iters,wall_time_s,status,error
// `success` is 0/1; `relative_rmse` is -1 for errored trials; `error` is
// empty unless status == "error".
void write_trial_records_csv(std::ostream& out,
                             const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_trial_records_csv(std::istream& in);

// Benchmark summary CSV column order (header row included):
//   solver,delta,rho,N,n,k,trials,success_count,
//   rmse_min,rmse_mean,rmse_max,calls_min,calls_mean,calls_max,
//   time_min,time_mean,time_max
void write_benchmark_records_csv(std::ostream& out,
                                 const std::vector<BenchmarkRecord>& records);
std::vector<BenchmarkRecord> read_benchmark_records_csv(std::istream& in);

// JSON form: an array of objects keyed by the CSV column names, with native
// booleans/integers and exact round-trip doubles.
void write_trial_records_json(std::ostream& out,
                              const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_trial_records_json(std::istream& in);

void write_benchmark_records_json(std::ostream& out,
                                  const std::vector<BenchmarkRecord>& records);
std::vector<BenchmarkRecord> read_benchmark_records_json(std::istream& in);

// Path-based wrappers; create/truncate the file and dispatch on format.
void write_trial_records(const std::string& path, RecordFormat format,
                         const std::vector<TrialRecord>& records);
void write_benchmark_records(const std::string& path, RecordFormat format,
                             const std::vector<BenchmarkRecord>& records);

}  // namespace onel1
