#pragma once

#include <string>
#include <vector>

#include "spikepca/sweep.hpp"

namespace spikepca {

/// Fixed CSV header, one row per (grid value, trial), 17 significant digits
/// so a re-parse reproduces every numeric field exactly.
extern const char* const kSweepCsvHeader;

void export_records_csv(const std::vector<SweepRecord>& records, const std::string& path);
void export_records_json(const std::vector<SweepRecord>& records, const std::string& path);
/// Two-panel line chart: mean overlap and mean eigenvalues vs the grid, with
/// the asymptotic overlays.
void export_records_svg(const std::vector<SweepRecord>& records, const std::string& path);

/// format is a comma list of csv|json|svg; files are written as
/// base + "." + format. Throws IoFailure on empty records or write failure.
std::vector<std::string> export_records(const std::vector<SweepRecord>& records,
                                        const std::string& format, const std::string& base);

/// Re-parse helper used by the round-trip tests and the CLI.
std::vector<std::vector<double>> parse_csv_numeric(const std::string& path);

}  // namespace spikepca
