// File formats shared by the CLI and the analysis pipeline.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mipt/stats.hpp"

namespace mipt {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double x);

// FNV-1a 64-bit hash, hex-encoded; used for config/file provenance.
std::string fnv1a_hex(const std::string& bytes);

struct RawSampleRow {
    std::size_t L = 0;
    double p = 0.0;
    std::size_t trajectory = 0;
    std::uint64_t seed = 0;
    std::size_t sample_index = 0;
    int entropy_bits = 0;
};

inline constexpr const char* kRawCsvHeader = "L,p,trajectory,seed,sample_index,entropy_bits";

void write_raw_csv_header(std::ostream& os);
void append_raw_rows(std::ostream& os, const CircuitConfig& config,
                     const std::vector<TrajectoryRecord>& records);
std::vector<RawSampleRow> read_raw_csv(const std::string& path);

// Groups raw rows into per-(L, p) samples with trajectory boundaries.
std::vector<EntropySamples> group_raw_rows(const std::vector<RawSampleRow>& rows);

inline constexpr const char* kSummaryCsvHeader =
    "L,p,n,mean,var,iod,skew,se_mean,se_var,se_iod,se_skew";

void write_summary_csv(std::ostream& os, const SweepTable& table);

struct SummaryRow {
    std::size_t L = 0;
    double p = 0.0;
    std::size_t n = 0;
    double mean = 0.0, var = 0.0;
    double iod = 0.0, skew = 0.0;  // NaN when undefined
    double se_mean = 0.0, se_var = 0.0, se_iod = 0.0, se_skew = 0.0;
};

std::vector<SummaryRow> read_summary_csv(const std::string& path);

}  // namespace mipt
