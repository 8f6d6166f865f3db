#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "speccode/code_zoo.hpp"
#include "speccode/csv.hpp"
#include "speccode/decode_threshold.hpp"
#include "speccode/errors.hpp"
#include "speccode/fluctuation.hpp"
#include "speccode/geometry.hpp"
#include "speccode/toeplitz.hpp"

namespace speccode::cli {

namespace fs = std::filesystem;

namespace {

template <class T>
T convert(const json& v, const std::string& path);

template <>
double convert<double>(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

template <>
std::int64_t convert<std::int64_t>(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    return v.get<std::int64_t>();
}

template <>
int convert<int>(const json& v, const std::string& path) {
    const std::int64_t x = convert<std::int64_t>(v, path);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) throw ConfigError(path, "integer out of range");
    return static_cast<int>(x);
}

template <>
bool convert<bool>(const json& v, const std::string& path) {
    if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
    return v.get<bool>();
}

template <>
std::string convert<std::string>(const json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    return v.get<std::string>();
}

template <class T>
std::vector<T> convert_array(const json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError(path, "expected an array");
    std::vector<T> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(convert<T>(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

template <>
std::vector<double> convert<std::vector<double>>(const json& v, const std::string& path) {
    return convert_array<double>(v, path);
}

template <>
std::vector<int> convert<std::vector<int>>(const json& v, const std::string& path) {
    return convert_array<int>(v, path);
}

template <>
std::vector<std::string> convert<std::vector<std::string>>(const json& v, const std::string& path) {
    return convert_array<std::string>(v, path);
}

} // namespace

Fields::Fields(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
}

template <class T>
T Fields::get(const std::string& key) {
    if (!has(key)) throw ConfigError(path(key), "required field missing");
    seen_.insert(key);
    return convert<T>(object_.at(key), path(key));
}

template double Fields::get<double>(const std::string&);
template int Fields::get<int>(const std::string&);
template std::int64_t Fields::get<std::int64_t>(const std::string&);
template bool Fields::get<bool>(const std::string&);
template std::string Fields::get<std::string>(const std::string&);
template std::vector<double> Fields::get<std::vector<double>>(const std::string&);
template std::vector<int> Fields::get<std::vector<int>>(const std::string&);
template std::vector<std::string> Fields::get<std::vector<std::string>>(const std::string&);

Fields Fields::object(const std::string& key) {
    if (!has(key)) throw ConfigError(path(key), "required field missing");
    seen_.insert(key);
    return Fields(object_.at(key), path(key));
}

void Fields::finish() const {
    for (const auto& [key, value] : object_.items()) {
        if (!seen_.count(key)) throw ConfigError(path(key), "unknown key");
    }
}

namespace {

struct Globals {
    std::uint64_t seed = 1;
    std::optional<double> scalar_tol;
    std::optional<double> agreement_tol;
};

Globals read_globals(Fields& f, const std::optional<std::uint64_t>& cli_seed) {
    Globals g;
    if (f.has("seed")) {
        const std::int64_t s = f.get<std::int64_t>("seed");
        if (s < 0) throw ConfigError(f.path("seed"), "seed must be nonnegative");
        g.seed = static_cast<std::uint64_t>(s);
    }
    if (cli_seed) g.seed = *cli_seed;
    if (f.has("tol")) {
        Fields t = f.object("tol");
        auto positive = [&t](const std::string& key) -> std::optional<double> {
            if (!t.has(key)) return std::nullopt;
            const double v = t.get<double>(key);
            if (!(v > 0.0)) throw ConfigError(t.path(key), "tolerance must be positive");
            return v;
        };
        g.scalar_tol = positive("scalar");
        g.agreement_tol = positive("agreement");
        t.finish();
    }
    return g;
}

json number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

void write_json(const fs::path& file, const json& j) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw ConfigError(file.string(), "cannot open output file");
    out << j.dump(2) << '\n';
}

std::ofstream open_csv(const fs::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw ConfigError(file.string(), "cannot open output file");
    return out;
}

json spectrum_json(const SpectrumReport& s) {
    json levels = json::array(), mult = json::array();
    for (double l : s.levels) levels.push_back(l);
    for (int m : s.multiplicities) mult.push_back(m);
    return {{"levels", levels}, {"multiplicities", mult}, {"gap", s.gap}, {"kernel_dim", s.kernel_dim}};
}

void write_spectrum_csv(const fs::path& file, const SpectrumReport& s) {
    std::ofstream out = open_csv(file);
    CsvWriter csv(out, {"level", "multiplicity"});
    for (std::size_t i = 0; i < s.levels.size(); ++i) csv.row(std::vector<double>{s.levels[i], double(s.multiplicities[i])});
}

// Qubit code with a dense Dirac operator, as needed by the noise and
// fluctuation commands.
struct QubitCode {
    int n = 0;
    HermitianOperator d;
    CodeProjection p;
};

std::vector<std::string> read_generators(Fields& f, std::optional<int>& n) {
    const auto gens = f.get<std::vector<std::string>>("generators");
    if (gens.empty()) throw ConfigError(f.path("generators"), "at least one generator is required");
    if (f.has("n")) n = f.get<int>("n");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (n && static_cast<int>(gens[i].size()) != *n) {
            throw ConfigError(f.path("generators") + "[" + std::to_string(i) + "]", "length differs from n");
        }
    }
    return gens;
}

QubitCode read_qubit_code(Fields f) {
    const std::string kind = f.get<std::string>("kind");
    QubitCode q;
    if (kind == "stabilizer") {
        std::optional<int> n;
        const auto gens = read_generators(f, n);
        f.finish();
        const StabilizerCode code = stabilizer_code(gens);
        if (!code.d_c) throw DomainError("dense Dirac operator needs at most 10 qubits");
        q = {code.n, *code.d_c, code.p};
    } else if (kind == "toric") {
        const int lx = f.get<int>("Lx");
        const int ly = f.get<int>("Ly");
        f.finish();
        const ToricCode code = toric_code_z2(lx, ly);
        if (!code.d_code) throw DomainError("dense Dirac operator needs at most 10 edges");
        q = {code.lattice.edges(), *code.d_code, code.p};
    } else {
        throw ConfigError(f.path("kind"), "expected \"stabilizer\" or \"toric\" for a qubit code");
    }
    return q;
}

Matrix read_pauli(const std::string& text, int n, const std::string& path) {
    if (static_cast<int>(text.size()) != n) throw ConfigError(path, "Pauli string length differs from the code length");
    for (char c : text) {
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') throw ConfigError(path, "Pauli string must use I, X, Y, Z");
    }
    return pauli_dense(text);
}

int cmd_code(Fields& f, const Globals& g, const fs::path& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string kind = f.get<std::string>("kind");
    json report{{"kind", kind}, {"seed", g.seed}};
    std::optional<SpectrumReport> spectrum;
    WDistance dist;
    std::optional<std::size_t> w_size;
    std::string witness;

    if (kind == "stabilizer") {
        std::optional<int> n;
        const auto gens = read_generators(f, n);
        f.finish();
        const StabilizerCode code = stabilizer_code(gens);
        report["n"] = code.n;
        report["generators"] = gens;
        report["ker_dim"] = code.p.rank();
        spectrum = code.spectrum;
        dist = code.distance;
        if (code.w_set_enumerated) {
            const WeylRepresentation rep = code.representation();
            if (g.scalar_tol) dist = code_distance_via_W(code.p, rep, WeightFunction::pauli_weight(code.group()), *g.scalar_tol);
            w_size = g.scalar_tol ? dist.w_size : code.w_set.size();
        }
        if (!dist.infinite) witness = pauli_label(dist.witness, code.n);
    } else if (kind == "classical") {
        std::optional<int> n;
        const auto gens = read_generators(f, n);
        f.finish();
        const ClassicalCode code = classical_code(static_cast<int>(gens.front().size()), gens);
        report["n"] = code.n;
        report["generators"] = gens;
        report["ker_dim"] = code.p.rank();
        spectrum = eigh(code.d_c).report;
        dist = code.distance;
        const AbelianGroup grp = AbelianGroup::bit_vectors(code.n);
        if (g.scalar_tol) {
            dist = code_distance_via_W(code.p, WeylRepresentation::regular(Cocycle::trivial(grp)), WeightFunction::hamming(grp),
                                       *g.scalar_tol);
        }
        w_size = g.scalar_tol ? dist.w_size : code.w_set.size();
        if (!dist.infinite) witness = grp.label(dist.witness);
    } else if (kind == "gkp") {
        const int m = f.get<int>("M");
        f.finish();
        const GkpCode code = gkp_discrete(m);
        report["M"] = m;
        report["ker_dim"] = code.p.rank();
        spectrum = code.spectrum;
        dist = code.distance;
        const AbelianGroup grp = AbelianGroup::torus(m);
        if (g.scalar_tol) {
            dist = code_distance_via_W(code.p, WeylRepresentation::regular(Cocycle::one_sided_symplectic(grp)),
                                       WeightFunction::manhattan(grp), *g.scalar_tol);
        }
        w_size = g.scalar_tol ? dist.w_size : code.w_set.size();
        if (!dist.infinite) witness = grp.label(dist.witness);
    } else if (kind == "toric") {
        const int lx = f.get<int>("Lx");
        const int ly = f.get<int>("Ly");
        f.finish();
        const ToricCode code = toric_code_z2(lx, ly);
        report["Lx"] = lx;
        report["Ly"] = ly;
        report["n"] = code.lattice.edges();
        report["ker_dim"] = code.p.rank();
        if (code.d_code) spectrum = eigh(*code.d_code).report;
        dist.distance = code.distance.distance;
        dist.infinite = code.distance.infinite;
        witness = code.distance.witness;
    } else {
        throw ConfigError(f.path("kind"), "expected one of stabilizer, classical, gkp, toric");
    }

    report["spectrum"] = spectrum ? spectrum_json(*spectrum) : json(nullptr);
    report["w_set_size"] = w_size ? json(*w_size) : json(nullptr);
    report["distance"] = number(dist.distance);
    report["witness"] = witness;
    report["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (spectrum) write_spectrum_csv(out / "spectrum.csv", *spectrum);
    write_json(out / "report.json", report);
    return kOk;
}

int cmd_threshold(Fields& f, const Globals& g, const fs::path& out) {
    const QubitCode code = read_qubit_code(f.object("code"));

    Fields nf = f.object("noise");
    const std::string noise_kind = nf.get<std::string>("kind");
    std::optional<NoiseFamily> noise;
    if (noise_kind == "linear") {
        const auto strings = nf.get<std::vector<std::string>>("errors");
        if (strings.empty()) throw ConfigError(nf.path("errors"), "at least one error is required");
        std::vector<Matrix> errors;
        for (std::size_t i = 0; i < strings.size(); ++i) {
            errors.push_back(read_pauli(strings[i], code.n, nf.path("errors") + "[" + std::to_string(i) + "]"));
        }
        noise = NoiseFamily::linear(errors, "linear");
    } else if (noise_kind == "independent_flips") {
        noise = NoiseFamily::independent_flips(code.n);
    } else {
        throw ConfigError(nf.path("kind"), "expected \"linear\" or \"independent_flips\"");
    }
    nf.finish();

    const auto thetas = f.get<std::vector<double>>("theta");
    if (thetas.size() < 4) throw ConfigError(f.path("theta"), "the threshold fit needs at least 4 grid points");
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (!(thetas[i] > 0.0) || thetas[i] > 0.1) {
            throw ConfigError(f.path("theta") + "[" + std::to_string(i) + "]", "theta must lie in (0, 0.1]");
        }
    }
    const std::string decoder_name = f.get_or<std::string>("decoder", "petz");
    Decoder decoder;
    if (decoder_name == "petz") {
        decoder = Decoder::Petz;
    } else if (decoder_name == "poor") {
        decoder = Decoder::Poor;
    } else if (decoder_name == "petz_expectation") {
        decoder = Decoder::PetzThenExpectation;
    } else {
        throw ConfigError(f.path("decoder"), "expected petz, poor or petz_expectation");
    }
    std::optional<Factorization> factorization;
    if (f.has("factorization")) {
        Fields ff = f.object("factorization");
        factorization = Factorization{ff.get<int>("low"), ff.get<int>("high")};
        ff.finish();
    }
    const double theta0 = f.get_or<double>("theta0", thetas.front());
    f.finish();

    const Matrix sigma = code_state(code.p);
    const double variance = poor_decoder_variance(code.p, noise->errors());
    const double d = static_cast<double>(code.p.rank());
    std::vector<double> samples;
    {
        std::ofstream file = open_csv(out / "sweep.csv");
        CsvWriter csv(file, {"theta", "T", "T_expansion", "P_leak", "Fe"});
        for (double t : thetas) {
            const double tt = residual_error_T(sigma, code.p, *noise, t, decoder, factorization);
            const double leak = leakage_probability(code.p, noise->at(t), sigma);
            csv.row(std::vector<double>{t, tt, t * variance + (1.0 - 1.0 / (d * d)) * leak, leak, 1.0 - tt});
            samples.push_back(tt);
        }
    }
    const ThresholdReport fit = threshold_estimate(thetas, samples, theta0);

    json expansion = nullptr;
    if (noise->theta_max() >= 1e-2) {
        std::vector<double> grid;
        for (int i = 0; i < 7; ++i) grid.push_back(1e-4 * std::pow(100.0, i / 6.0));
        const ExpansionReport e = verify_poor_decoder_expansion(code.p, *noise, grid);
        expansion = {{"thetas", grid},
                     {"variance_sum", e.variance_sum},
                     {"slope", number(e.slope)},
                     {"vanishing", e.vanishing},
                     {"certified", e.certified}};
    }
    json iteration = json::array();
    for (double v : fit.iteration) iteration.push_back(number(v));
    write_json(out / "fit.json", {{"seed", g.seed},
                                  {"decoder", decoder_name},
                                  {"k", fit.k},
                                  {"gamma", fit.gamma},
                                  {"theta_th", number(fit.theta_th)},
                                  {"residual", fit.residual},
                                  {"clipped", fit.clipped},
                                  {"theta0", fit.theta0},
                                  {"monotone", fit.monotone},
                                  {"iteration", iteration},
                                  {"expansion", expansion}});
    return kOk;
}

int cmd_fluctuation(Fields& f, const Globals& g, const fs::path& out) {
    const QubitCode code = read_qubit_code(f.object("code"));
    const Matrix error = read_pauli(f.get<std::string>("error"), code.n, f.path("error"));
    const double theta = f.get<double>("theta");
    if (!(theta >= 0.0)) throw ConfigError(f.path("theta"), "theta must be nonnegative");
    const auto lambdas = f.get<std::vector<double>>("lambda");
    if (lambdas.empty()) throw ConfigError(f.path("lambda"), "at least one lambda is required");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] >= 0.0)) throw ConfigError(f.path("lambda") + "[" + std::to_string(i) + "]", "lambda must be nonnegative");
    }
    const bool normalized = f.get_or<bool>("normalized", true);
    f.finish();

    const SweepReport rep = leakage_gap_sweep(code.d, error, theta, lambdas, normalized);
    {
        std::ofstream file = open_csv(out / "sweep.csv");
        CsvWriter csv(file, {"lambda", "gap", "comm_norm", "bound", "bound_sq_times_theta", "leak_literal"});
        for (const SweepRow& r : rep.rows) {
            csv.row(std::vector<double>{r.lambda, r.gap, r.comm_norm, r.bound, r.bound_sq_times_theta, r.leak_literal});
        }
    }
    write_json(out / "summary.json",
               {{"seed", g.seed}, {"normalized", rep.normalized}, {"fitted_exponent", number(rep.fitted_exponent)}});
    return kOk;
}

SphereFunction read_sphere_function(Fields& f, const std::string& key, const std::string& fallback) {
    const std::string text = f.get_or<std::string>(key, fallback);
    try {
        return SphereFunction::parse(text);
    } catch (const DomainError& e) {
        throw ConfigError(f.path(key), e.what());
    }
}

int cmd_bt(Fields& f, const Globals& g, const fs::path& out) {
    const auto ps = f.get<std::vector<int>>("p");
    if (ps.size() < 3) throw ConfigError(f.path("p"), "at least three p values are needed for the decay fit");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i] < 1 || ps[i] > 256 || (i > 0 && ps[i] <= ps[i - 1])) {
            throw ConfigError(f.path("p") + "[" + std::to_string(i) + "]", "p values must ascend within [1, 256]");
        }
    }
    const SphereFunction fn = read_sphere_function(f, "f", "z");
    const SphereFunction gn = read_sphere_function(f, "g", "z");
    const int extra = f.get_or<int>("extra_order", 8);
    if (extra < 4) throw ConfigError(f.path("extra_order"), "extra_order must be at least 4");
    SphereFunction kl_f = SphereFunction::parse("bump_north");
    SphereFunction kl_g = SphereFunction::parse("bump_south");
    if (f.has("kl")) {
        Fields kf = f.object("kl");
        kl_f = read_sphere_function(kf, "f", "bump_north");
        kl_g = read_sphere_function(kf, "g", "bump_south");
        kf.finish();
    }
    f.finish();

    const AxiomTable table = verify_axioms(ps, fn, gn, extra);
    json rows = json::array();
    {
        std::ofstream file = open_csv(out / "defects.csv");
        CsvWriter csv(file, {"p", "delta1", "delta2", "delta3", "delta4", "kl_defect"});
        for (const AxiomRow& r : table.rows) {
            const double kl = kl_approx_check(build_quantizer(r.p, bump_order(r.p)), kl_f, kl_g).defect;
            csv.row(std::vector<double>{double(r.p), r.delta1, r.delta2, r.delta3, r.delta4, kl});
            rows.push_back({{"p", r.p}, {"gram_defect", r.gram}, {"trace_constant", r.trace_constant}});
        }
    }
    write_json(out / "summary.json", {{"seed", g.seed},
                                      {"f", fn.name()},
                                      {"g", gn.name()},
                                      {"s_inf", table.s_inf},
                                      {"slopes", {table.slope1, table.slope2, table.slope3, table.slope4}},
                                      {"rows", rows}});
    return kOk;
}

int cmd_distance(Fields& f, const Globals& g, const fs::path& out) {
    Fields gf = f.object("group");
    const std::string kind = gf.get<std::string>("kind");
    std::optional<AbelianGroup> grp;
    if (kind == "bit_vectors" || kind == "symplectic") {
        const int n = gf.get<int>("n");
        if (n < 1 || n > (kind == "bit_vectors" ? 8 : 4)) throw ConfigError(gf.path("n"), "group too large for the distance table");
        grp = kind == "bit_vectors" ? AbelianGroup::bit_vectors(n) : AbelianGroup::symplectic(n);
    } else if (kind == "torus") {
        const int m = gf.get<int>("M");
        if (m < 2 || m > 16) throw ConfigError(gf.path("M"), "M must lie in [2, 16]");
        grp = AbelianGroup::torus(m);
    } else {
        throw ConfigError(gf.path("kind"), "expected bit_vectors, symplectic or torus");
    }
    gf.finish();

    const std::string default_weight = kind == "bit_vectors" ? "hamming" : kind == "symplectic" ? "pauli" : "manhattan";
    const std::string weight_name = f.get_or<std::string>("weight", default_weight);
    std::optional<WeightFunction> weight;
    if (weight_name == "hamming" && kind == "bit_vectors") {
        weight = WeightFunction::hamming(*grp);
    } else if (weight_name == "pauli" && kind == "symplectic") {
        weight = WeightFunction::pauli_weight(*grp);
    } else if (weight_name == "manhattan" && kind == "torus") {
        weight = WeightFunction::manhattan(*grp);
    } else {
        throw ConfigError(f.path("weight"), "weight \"" + weight_name + "\" does not fit group kind \"" + kind + "\"");
    }
    const std::string method = f.get_or<std::string>("method", "closed");
    if (method != "closed" && method != "general" && method != "both") {
        throw ConfigError(f.path("method"), "expected closed, general or both");
    }
    ConnesOptions opts;
    opts.seed = g.seed;
    opts.restarts = f.get_or<int>("restarts", opts.restarts);
    opts.iterations = f.get_or<int>("iterations", opts.iterations);
    if (opts.restarts < 1) throw ConfigError(f.path("restarts"), "restarts must be positive");
    if (opts.iterations < 1) throw ConfigError(f.path("iterations"), "iterations must be positive");
    if (g.agreement_tol) opts.agreement_tol = *g.agreement_tol;
    f.finish();

    const bool general = method != "closed";
    if (general && grp->size() > 16) throw DomainError("general solver limited to groups of at most 16 elements");
    const DiscreteMetricTriple dm = DiscreteMetricTriple::from_group(*weight);
    const Eigen::MatrixXd closed = connes_distance_matrix(dm);
    std::optional<FiniteSpectralTriple> triple;
    if (general) triple = dm.triple();

    std::ofstream file = open_csv(out / "distances.csv");
    CsvWriter csv(file, {"x", "y", "weight", "d_closed", "d_general", "lower_bound"});
    for (const auto& [x, y] : dm.pairs()) {
        const double w = (*weight)(grp->subtract(x, y));
        std::vector<std::string> row{dm.labels()[x], dm.labels()[y], format_double(w), "", "", ""};
        if (method != "general") row[3] = format_double(closed(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)));
        if (general) {
            const ConnesResult r = connes_distance_general(*triple, dm.point_state(x), dm.point_state(y), opts);
            row[4] = r.unbounded ? "inf" : format_double(r.distance);
            row[5] = r.lower_bound ? "1" : "0";
        }
        csv.row(row);
    }
    return kOk;
}

} // namespace

int run(const RunOptions& options, std::ostream& err) {
    try {
        Fields f(options.config, "");
        const Globals g = read_globals(f, options.seed);
        std::error_code ec;
        fs::create_directories(options.out, ec);
        if (ec || !fs::is_directory(options.out)) throw ConfigError("--out", "cannot create directory " + options.out.string());
        if (options.command == "code") return cmd_code(f, g, options.out);
        if (options.command == "threshold") return cmd_threshold(f, g, options.out);
        if (options.command == "fluctuation") return cmd_fluctuation(f, g, options.out);
        if (options.command == "bt") return cmd_bt(f, g, options.out);
        if (options.command == "distance") return cmd_distance(f, g, options.out);
        throw ConfigError("<command>", "unknown command " + options.command);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomainError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    }
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Spectral quantum error-correcting codes"};
    std::string command, config_path, out_dir;
    std::optional<std::uint64_t> seed;
    app.add_option("command", command, "code | threshold | fluctuation | bt | distance")
        ->required()
        ->check(CLI::IsMember({"code", "threshold", "fluctuation", "bt", "distance"}));
    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--out", out_dir, "Output directory")->required();
    app.add_option("--seed", seed, "Seed for every random choice; overrides the config");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    RunOptions options;
    options.command = command;
    options.out = out_dir;
    options.seed = seed;
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "config error: --config: cannot read " << config_path << '\n';
        return kConfigError;
    }
    try {
        options.config = json::parse(in);
    } catch (const json::parse_error& e) {
        std::cerr << "config error: " << config_path << ": " << e.what() << '\n';
        return kConfigError;
    }
    return run(options, std::cerr);
}

} // namespace speccode::cli
