#pragma once

#include <span>
#include <string>
#include <vector>

#include "ebseq/simulate.hpp"

namespace ebseq {

// Shortest round-trip decimal representation ("%.17g" trimmed by value).
std::string format_double(double v);

// One real per line (single-column CSV also qualifies); blank lines and a
// UTF-8 BOM are tolerated, anything non-numeric raises parse_error with the
// 1-based line number.
std::vector<double> read_column(const std::string& path);

void write_column(const std::string& path, std::span<const double> values);

// RFC 4180: CRLF records, fields quoted when they contain comma/quote/newline.
std::string csv_escape(const std::string& field);

// Replicate table with header
// replicate,covered,radius,alpha_hat,risk_q,point_risk_median,point_risk_mean
// in replicate order; fields a kind does not produce stay empty.
std::string experiment_csv(const ExperimentResult& result);

// Deterministic key=value summary (config echo + aggregates); no timestamps.
std::string experiment_summary(const ExperimentResult& result);

// Environment manifest (tool version, seed, worker count, wall time); the one
// place timestamps are allowed, written next to --out as <out>.manifest.json.
std::string run_manifest_json(const std::string& command, std::uint64_t seed,
                              int workers, double wall_seconds);

// Config files for the simulate subcommand: strict JSON object, unknown keys
// rejected by name.
ExperimentConfig parse_experiment_config(const std::string& json_text);
std::string experiment_config_json(const ExperimentConfig& config);

}  // namespace ebseq
