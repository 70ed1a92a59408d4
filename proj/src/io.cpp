#include "ncinterp/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ncinterp {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write " + path);
    out << text;
}

json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw InputError("parse error at line " + std::to_string(line) + ": " + e.what());
    }
}

int require_int(const json& j, const char* key)
{
    if (!j.contains(key) || !j[key].is_number_integer())
        throw InputError(std::string("missing integer field '") + key + "'");
    return j[key].get<int>();
}

json config_to_json(const SolverConfig& c)
{
    return {{"tol", c.tol},         {"max_iters", c.max_iters}, {"restarts", c.restarts},
            {"gap_tol", c.gap_tol}, {"seed", c.seed},           {"degree", c.degree},
            {"samples", c.samples}, {"fourier_cutoff", c.fourier_cutoff}};
}

SolverConfig config_from_json(const json& j)
{
    SolverConfig c;
    c.tol = j.at("tol").get<double>();
    c.max_iters = j.at("max_iters").get<int>();
    c.restarts = j.at("restarts").get<int>();
    c.gap_tol = j.at("gap_tol").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.degree = j.at("degree").get<int>();
    c.samples = j.at("samples").get<int>();
    c.fourier_cutoff = j.at("fourier_cutoff").get<int>();
    return c;
}

}  // namespace

MatrixTuple parse_tuple(const std::string& text)
{
    const json j = parse_json(text);
    const int d = require_int(j, "d");
    const int n = require_int(j, "n");
    if (d <= 0 || n <= 0)
        throw ShapeError("d and n must be positive");
    if (!j.contains("entries") || !j["entries"].is_array())
        throw InputError("missing array field 'entries'");
    const json& entries = j["entries"];
    if (entries.size() != static_cast<std::size_t>(n))
        throw ShapeError("entries: expected " + std::to_string(n) + " matrices, got " +
                         std::to_string(entries.size()));
    std::vector<ComplexMatrix> mats;
    for (int k = 0; k < n; ++k) {
        const std::string where = "entries[" + std::to_string(k) + "]";
        const json& m = entries[static_cast<std::size_t>(k)];
        if (!m.is_array() || m.size() != static_cast<std::size_t>(d))
            throw ShapeError(where + ": expected " + std::to_string(d) + " rows");
        ComplexMatrix mat(d, d);
        for (int r = 0; r < d; ++r) {
            const json& row = m[static_cast<std::size_t>(r)];
            if (!row.is_array() || row.size() != static_cast<std::size_t>(d))
                throw ShapeError(where + "[" + std::to_string(r) + "]: expected " + std::to_string(d) + " entries");
            for (int c = 0; c < d; ++c) {
                const json& z = row[static_cast<std::size_t>(c)];
                if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
                    throw ShapeError(where + "[" + std::to_string(r) + "][" + std::to_string(c) +
                                     "]: expected [re, im]");
                mat(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
            }
        }
        require_finite(mat, where.c_str());
        mats.push_back(std::move(mat));
    }
    return MatrixTuple(std::move(mats));
}

MatrixTuple load_tuple(const std::string& path)
{
    try {
        return parse_tuple(read_file(path));
    } catch (const ShapeError& e) {
        throw ShapeError(path + ": " + e.what());
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::string dump_tuple(const MatrixTuple& x)
{
    json entries = json::array();
    for (const auto& m : x) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                row.push_back({m(r, c).real(), m(r, c).imag()});
            rows.push_back(std::move(row));
        }
        entries.push_back(std::move(rows));
    }
    json j{{"d", x.dim()}, {"n", x.size()}, {"entries", std::move(entries)}};
    return j.dump() + "\n";
}

void save_tuple(const MatrixTuple& x, const std::string& path) { write_file(path, dump_tuple(x)); }

EstimateRecord make_record(const std::string& name, const NormEstimate& est)
{
    return {name, est.value, to_string(est.kind), est.iterations, est.converged, est.warnings};
}

bool Report::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed; });
}

void Report::check(const std::string& name, bool ok, double value, double bound)
{
    checks.push_back({name, ok, value, bound});
}

std::string dump_report(const Report& r, bool with_timings)
{
    json est = json::array();
    for (const auto& e : r.estimates)
        est.push_back({{"name", e.name},
                       {"value", e.value},
                       {"kind", e.kind},
                       {"iterations", e.iterations},
                       {"converged", e.converged},
                       {"warnings", e.warnings}});
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"bound", c.bound}});
    json j{{"command", r.command},
           {"mode", r.mode},
           {"instance", {{"d", r.d}, {"n", r.n}, {"p", r.p}, {"theta", r.theta}, {"seed", r.seed}}},
           {"config", config_to_json(r.cfg)},
           {"estimates", std::move(est)},
           {"metrics", r.metrics},
           {"checks", std::move(checks)},
           {"passed", r.passed()}};
    if (with_timings)
        j["timings"] = r.timings;
    return j.dump(2) + "\n";
}

Report parse_report(const std::string& text)
{
    const json j = parse_json(text);
    Report r;
    try {
        r.command = j.at("command").get<std::string>();
        r.mode = j.at("mode").get<std::string>();
        const json& inst = j.at("instance");
        r.d = inst.at("d").get<int>();
        r.n = inst.at("n").get<int>();
        r.p = inst.at("p").get<std::string>();
        r.theta = inst.at("theta").get<double>();
        r.seed = inst.at("seed").get<std::uint64_t>();
        r.cfg = config_from_json(j.at("config"));
        for (const auto& e : j.at("estimates"))
            r.estimates.push_back({e.at("name").get<std::string>(), e.at("value").get<double>(),
                                   e.at("kind").get<std::string>(), e.at("iterations").get<int>(),
                                   e.at("converged").get<bool>(), e.at("warnings").get<std::vector<std::string>>()});
        r.metrics = j.at("metrics").get<std::map<std::string, double>>();
        for (const auto& c : j.at("checks"))
            r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                                c.at("value").get<double>(), c.at("bound").get<double>()});
        if (j.contains("timings"))
            r.timings = j.at("timings").get<std::map<std::string, double>>();
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed report: ") + e.what());
    }
    return r;
}

}  // namespace ncinterp
