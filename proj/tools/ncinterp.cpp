#include "ncinterp/io.hpp"
#include "ncinterp/random.hpp"
#include "ncinterp/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace ncinterp;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

void emit(const std::string& text, const std::string& out)
{
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f)
        throw InputError("cannot write " + out);
    f << text;
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg)
{
    cmd->add_option("--degree", cfg.degree, "polynomial degree of oracle candidates")->check(CLI::NonNegativeNumber);
    cmd->add_option("--samples", cfg.samples, "boundary samples for the oracle")->check(CLI::Range(16, 1 << 16));
    cmd->add_option("--tol", cfg.tol, "solver tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", cfg.max_iters, "iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--restarts", cfg.restarts, "random restarts")->check(CLI::PositiveNumber);
    cmd->add_option("--cutoff", cfg.fourier_cutoff, "Fourier cutoff for spectral factorization")
        ->check(CLI::Range(1, 512));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Interpolation norms of column/row matrix tuples"};
    app.require_subcommand(1);

    std::string input, out, p_text = "inf", suite = "duality", family = "gaussian";
    std::optional<std::string> verify_p;
    std::optional<double> verify_theta;
    ComputeOptions copts;
    VerifyOptions vopts;
    int gen_d = 2, gen_n = 2;
    std::uint64_t seed = 0;
    bool no_timings = false;

    auto* compute = app.add_subcommand("compute", "evaluate one tuple with one method");
    compute->add_option("--input", input, "tuple file (JSON)")->required()->check(CLI::ExistingFile);
    compute->add_option("--p", p_text, "exponent: 1, 4/3, 2, 4, inf or a rational");
    compute->add_option("--theta", copts.theta, "interpolation parameter")->check(CLI::Range(0.0, 1.0));
    compute->add_option("--method", copts.method, "alpha | oracle | pisier | certificate | sandwich")
        ->check(CLI::IsMember({"alpha", "oracle", "pisier", "certificate", "sandwich"}));
    compute->add_option("--epsilon", copts.epsilon, "certificate regularization")->check(CLI::PositiveNumber);
    compute->add_option("--seed", seed, "random seed");
    compute->add_option("--out", out, "write the report here instead of stdout");
    compute->add_flag("--no-timings", no_timings, "omit wall-clock timings from the report");
    add_solver_flags(compute, copts.cfg);

    auto* verify = app.add_subcommand("verify", "run a seeded verification suite");
    verify->add_option("--suite", suite, "duality | sandwich | corollary | szego | endpoints")
        ->check(CLI::IsMember({"duality", "sandwich", "corollary", "szego", "endpoints"}));
    verify->add_option("--d", vopts.d, "matrix size (maximum size for corollary)")->check(CLI::Range(1, 64));
    verify->add_option("--n", vopts.n, "tuple length (maximum length for corollary)")->check(CLI::Range(1, 64));
    verify->add_option("--trials", vopts.trials, "number of instances")->check(CLI::PositiveNumber);
    verify->add_option("--p", verify_p, "fix the exponent instead of cycling");
    verify->add_option("--theta", verify_theta, "fix theta")->check(CLI::Range(0.0, 1.0));
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--out", out, "write the report here instead of stdout");
    verify->add_flag("--no-timings", no_timings, "omit wall-clock timings from the report");
    add_solver_flags(verify, vopts.cfg);

    auto* gen = app.add_subcommand("gen", "write a random tuple file");
    gen->add_option("--d", gen_d, "matrix size")->check(CLI::Range(1, 256));
    gen->add_option("--n", gen_n, "tuple length")->check(CLI::Range(1, 256));
    gen->add_option("--family", family, "gaussian | psd | unitary")
        ->check(CLI::IsMember({"gaussian", "psd", "unitary"}));
    gen->add_option("--seed", seed, "random seed");
    gen->add_option("--out", out, "write the tuple here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*compute) {
            copts.p = parse_exponent(p_text);
            copts.cfg.seed = seed;
            const Report rep = run_compute(load_tuple(input), copts);
            emit(dump_report(rep, !no_timings), out);
            return rep.passed() ? kExitPass : kExitFailure;
        }
        if (*verify) {
            vopts.suite = suite;
            if (verify_p)
                vopts.p = parse_exponent(*verify_p);
            vopts.theta = verify_theta;
            vopts.cfg.seed = seed;
            const Report rep = run_verify(vopts);
            emit(dump_report(rep, !no_timings), out);
            return rep.passed() ? kExitPass : kExitFailure;
        }
        Rng rng(seed);
        const MatrixTuple x = random_tuple(rng, static_cast<std::size_t>(gen_d), static_cast<std::size_t>(gen_n),
                                           parse_family(family));
        emit(dump_tuple(x), out);
        return kExitPass;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitFailure;
    }
}
