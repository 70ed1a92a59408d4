#ifndef NCINTERP_IO_HPP
#define NCINTERP_IO_HPP

#include "ncinterp/core.hpp"
#include "ncinterp/variational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ncinterp {

// Tuple file: {"d": 2, "n": 2, "entries": [ [[ [re, im], ... ], ...], ... ]}
// with matrices stored row-major.
MatrixTuple load_tuple(const std::string& path);
MatrixTuple parse_tuple(const std::string& text);
std::string dump_tuple(const MatrixTuple& x);
void save_tuple(const MatrixTuple& x, const std::string& path);

struct EstimateRecord {
    std::string name;
    double value = 0;
    std::string kind;
    int iterations = 0;
    bool converged = true;
    std::vector<std::string> warnings;

    bool operator==(const EstimateRecord&) const = default;
};

EstimateRecord make_record(const std::string& name, const NormEstimate& est);

struct CheckRecord {
    std::string name;
    bool passed = true;
    double value = 0;   // the measured quantity (deviation, gap, ...)
    double bound = 0;   // threshold it was compared against

    bool operator==(const CheckRecord&) const = default;
};

struct Report {
    std::string command;          // compute | verify
    std::string mode;             // method or suite name
    int d = 0;
    int n = 0;
    std::string p;
    double theta = 0;
    std::uint64_t seed = 0;
    SolverConfig cfg;
    std::vector<EstimateRecord> estimates;
    std::map<std::string, double> metrics;
    std::vector<CheckRecord> checks;
    std::map<std::string, double> timings;   // seconds; not deterministic

    bool passed() const;
    void check(const std::string& name, bool ok, double value, double bound);

    bool operator==(const Report&) const = default;
};

std::string dump_report(const Report& r, bool with_timings = true);
Report parse_report(const std::string& text);

}  // namespace ncinterp

#endif  // NCINTERP_IO_HPP
