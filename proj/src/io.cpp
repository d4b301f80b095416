#include "mipt/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mipt {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_raw_csv_header(std::ostream& os) { os << kRawCsvHeader << "\n"; }

void append_raw_rows(std::ostream& os, const CircuitConfig& config,
                     const std::vector<TrajectoryRecord>& records) {
    const std::string pstr = format_double(config.p);
    for (const TrajectoryRecord& rec : records) {
        for (std::size_t k = 0; k < rec.entropies.size(); ++k) {
            os << config.L << ',' << pstr << ',' << rec.trajectory_index << ',' << rec.seed << ','
               << k << ',' << rec.entropies[k] << "\n";
        }
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::vector<RawSampleRow> read_raw_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open raw CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty raw CSV: " + path);
    if (line != kRawCsvHeader && line != std::string(kRawCsvHeader) + "\r") {
        throw std::runtime_error("raw CSV schema mismatch in " + path + ": " + line);
    }
    std::vector<RawSampleRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 6) throw std::runtime_error("bad raw CSV row in " + path + ": " + line);
        RawSampleRow r;
        r.L = std::strtoull(f[0].c_str(), nullptr, 10);
        r.p = std::strtod(f[1].c_str(), nullptr);
        r.trajectory = std::strtoull(f[2].c_str(), nullptr, 10);
        r.seed = std::strtoull(f[3].c_str(), nullptr, 10);
        r.sample_index = std::strtoull(f[4].c_str(), nullptr, 10);
        r.entropy_bits = static_cast<int>(std::strtol(f[5].c_str(), nullptr, 10));
        rows.push_back(r);
    }
    return rows;
}

std::vector<EntropySamples> group_raw_rows(const std::vector<RawSampleRow>& rows) {
    std::map<std::pair<std::size_t, double>, std::map<std::size_t, std::vector<int>>> cells;
    for (const RawSampleRow& r : rows) {
        cells[{r.L, r.p}][r.trajectory].push_back(r.entropy_bits);
    }
    std::vector<EntropySamples> out;
    for (const auto& [key, trajs] : cells) {
        EntropySamples s;
        s.L = key.first;
        s.p = key.second;
        s.trajectory_offsets.push_back(0);
        for (const auto& [traj, vals] : trajs) {
            s.values.insert(s.values.end(), vals.begin(), vals.end());
            s.trajectory_offsets.push_back(s.values.size());
        }
        out.push_back(std::move(s));
    }
    return out;
}

void write_summary_csv(std::ostream& os, const SweepTable& table) {
    os << kSummaryCsvHeader << "\n";
    for (const SweepRow& row : table.rows) {
        const MomentSummary& m = row.summary;
        os << row.L << ',' << format_double(row.p) << ',' << m.n << ',' << format_double(m.mean)
           << ',' << format_double(m.variance) << ','
           << (m.iod ? format_double(*m.iod) : "nan") << ','
           << (m.skewness ? format_double(*m.skewness) : "nan") << ','
           << format_double(m.se_mean) << ',' << format_double(m.se_variance) << ','
           << format_double(m.se_iod) << ',' << format_double(m.se_skewness) << "\n";
    }
}

std::vector<SummaryRow> read_summary_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open summary CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty summary CSV: " + path);
    if (line != kSummaryCsvHeader && line != std::string(kSummaryCsvHeader) + "\r") {
        throw std::runtime_error("summary CSV schema mismatch in " + path);
    }
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 11) throw std::runtime_error("bad summary CSV row: " + line);
        SummaryRow r;
        r.L = std::strtoull(f[0].c_str(), nullptr, 10);
        r.p = std::strtod(f[1].c_str(), nullptr);
        r.n = std::strtoull(f[2].c_str(), nullptr, 10);
        r.mean = std::strtod(f[3].c_str(), nullptr);
        r.var = std::strtod(f[4].c_str(), nullptr);
        r.iod = std::strtod(f[5].c_str(), nullptr);
        r.skew = std::strtod(f[6].c_str(), nullptr);
        r.se_mean = std::strtod(f[7].c_str(), nullptr);
        r.se_var = std::strtod(f[8].c_str(), nullptr);
        r.se_iod = std::strtod(f[9].c_str(), nullptr);
        r.se_skew = std::strtod(f[10].c_str(), nullptr);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace mipt
