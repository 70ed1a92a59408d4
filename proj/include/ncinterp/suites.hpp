#ifndef NCINTERP_SUITES_HPP
#define NCINTERP_SUITES_HPP

#include "ncinterp/io.hpp"

#include <optional>
#include <string>

namespace ncinterp {

struct ComputeOptions {
    std::string method = "alpha";   // alpha | oracle | pisier | certificate | sandwich
    Exponent p = Exponent::infinity();
    double theta = 0.5;
    double epsilon = 1e-6;          // certificate regularization
    SolverConfig cfg;
};

/// Throws UsageError for unknown methods or a method/exponent mismatch.
Report run_compute(const MatrixTuple& x, const ComputeOptions& opts);

struct VerifyOptions {
    std::string suite = "duality";  // duality | sandwich | corollary | szego | endpoints
    int d = 2;
    int n = 2;
    int trials = 20;
    std::optional<Exponent> p;      // restricts suites that otherwise cycle over exponents
    std::optional<double> theta;
    SolverConfig cfg;
    int threads = 0;                // 0: NCINTERP_THREADS or hardware concurrency
};

/// Runs seeded trials; checks are aggregated per name (worst value, all passed).
Report run_verify(const VerifyOptions& opts);

class UsageError : public Error {
public:
    using Error::Error;
};

/// NCINTERP_THREADS if set and positive, otherwise the hardware concurrency.
int default_thread_count();

}  // namespace ncinterp

#endif  // NCINTERP_SUITES_HPP
