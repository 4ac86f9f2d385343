#include "qwalk/cli.hpp"

#include "qwalk/error.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace qwalk::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

double parse_real(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DomainError("cannot read " + what + " from '" + s + "'");
    }
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DomainError("cannot read " + what + " from '" + s + "'");
    }
}

Point parse_point(const std::string& s) {
    auto parts = split(s, ',');
    if (parts.size() != 2) throw DomainError("point must be written x,y; got '" + s + "'");
    return {parse_int(parts[0], "x"), parse_int(parts[1], "y")};
}

std::vector<double> parse_reals(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& p : split(s, ',')) out.push_back(parse_real(p, what));
    if (out.empty()) throw DomainError(what + " list is empty");
    return out;
}

std::vector<std::int64_t> parse_ints(const std::string& s, const std::string& what) {
    std::vector<std::int64_t> out;
    for (const auto& p : split(s, ',')) out.push_back(parse_int(p, what));
    if (out.empty()) throw DomainError(what + " list is empty");
    return out;
}

WalkSpec load_model(const std::string& path) { return spec_from_json(read_json_file(path)); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

StationaryChoice parse_method(const std::string& m) {
    if (m == "auto") return StationaryChoice::Auto;
    if (m == "exact") return StationaryChoice::Exact;
    if (m == "truncate") return StationaryChoice::Truncate;
    if (m == "mc") return StationaryChoice::MonteCarlo;
    throw DomainError("unknown method '" + m + "'");
}

struct Globals {
    std::string format = "json";
    std::uint64_t seed = 1;
    unsigned threads = default_threads();
    std::string out_path;
};

class Emitter {
public:
    Emitter(const Globals& g, std::ostream& out) : g_(g), out_(out) {}

    void json_or_text(const json& j) const {
        if (g_.format == "csv") throw DomainError("csv output is only available for simulate-tail");
        emit(g_.format == "text" ? render_text(j) : j.dump(2) + "\n");
    }

    void emit(const std::string& text) const {
        if (g_.out_path.empty()) out_ << text;
        else write_text_file(g_.out_path, text);
    }

private:
    const Globals& g_;
    std::ostream& out_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Classification and Monte-Carlo verification for reflected random walks on the quadrant", "qwalk"};
    app.fallthrough();
    app.require_subcommand(1);
    Globals g;
    app.add_option("--format", g.format, "json, text, or csv (simulate-tail)")
        ->check(CLI::IsMember({"json", "text", "csv"}));
    app.add_option("--seed", g.seed, "master seed for all stochastic output");
    app.add_option("--threads", g.threads, "simulation worker threads")->check(CLI::Range(1U, 1024U));
    app.add_option("-o,--out", g.out_path, "write output to this file");

    std::string model_path;
    std::string zeta_path;

    auto* validate_cmd = app.add_subcommand("validate", "check the model hypotheses");
    int trunc = 0;
    validate_cmd->add_option("model", model_path, "model JSON")->required();
    validate_cmd->add_option("--trunc", trunc, "irreducibility box side (default 8R)");

    auto* classify_cmd = app.add_subcommand("classify", "compute chi and the recurrence verdict");
    std::string method = "auto";
    double tol_crit = 1e-9;
    std::uint64_t mc_steps = 10'000'000;
    classify_cmd->add_option("model", model_path, "model JSON")->required();
    classify_cmd->add_option("--method", method, "stationary solver: auto, exact, truncate, mc");
    classify_cmd->add_option("--tol-crit", tol_crit, "critical band for chi");
    classify_cmd->add_option("--steps", mc_steps, "occupation MC steps");

    auto* stationary_cmd = app.add_subcommand("stationary", "stationary law of a projection chain on I_R");
    int side = 1;
    std::int64_t K0 = 0;
    double tol = 1e-10;
    stationary_cmd->add_option("model", model_path, "model JSON")->required();
    stationary_cmd->add_option("--side", side, "boundary 1 or 2")->required()->check(CLI::IsMember({1, 2}));
    stationary_cmd->add_option("--method", method, "auto, exact, truncate, mc");
    stationary_cmd->add_option("--K0", K0, "initial truncation level");
    stationary_cmd->add_option("--tol", tol, "truncation tolerance");
    stationary_cmd->add_option("--steps", mc_steps, "occupation MC steps");

    auto* tail_cmd = app.add_subcommand("simulate-tail", "empirical survival curve of the passage time");
    double radius = 0.0;
    std::uint64_t trials = 0, horizon = 0;
    std::string start_text;
    int compression = 1;
    tail_cmd->add_option("model", model_path, "model JSON")->required();
    tail_cmd->add_option("--radius", radius, "target ball radius")->required();
    tail_cmd->add_option("--trials", trials, "independent trajectories")->required();
    tail_cmd->add_option("--horizon", horizon, "maximum steps per trajectory")->required();
    tail_cmd->add_option("--start", start_text, "start state x,y")->required();
    tail_cmd->add_option("--compression", compression, "run the N-compressed chain");

    auto* fit_cmd = app.add_subcommand("fit", "fit the tail slope of a curve CSV");
    std::string csv_path;
    std::uint64_t fit_trials = 0;
    fit_cmd->add_option("curve", csv_path, "CSV with header n,survival,stderr")->required();
    fit_cmd->add_option("--trials", fit_trials, "trial count (inferred from stderr when omitted)");

    auto* drift_cmd = app.add_subcommand("verify-drift", "Monte-Carlo sign checks of the Lyapunov drift");
    std::string window = "below", radii_text, n_text;
    double epsilon = 0.0, alpha = 0.0, trunc_b = 0.0;
    int angles = 3, expected_sign = 0;
    std::uint64_t interior_samples = 1'000'000, boundary_samples = 20'000;
    bool boundaries_only = false;
    drift_cmd->add_option("model", model_path, "model JSON")->required();
    drift_cmd->add_option("--window", window, "below or above")->check(CLI::IsMember({"below", "above"}));
    drift_cmd->add_option("--epsilon", epsilon, "window width (default |chi|/4)");
    drift_cmd->add_option("--alpha", alpha, "exponent of h (default 1/2 below, 1/beta above)");
    drift_cmd->add_option("--radii", radii_text, "shell radii r1,r2,...")->required();
    drift_cmd->add_option("--N", n_text, "compression factors (default 1,2,4,...,1024)");
    drift_cmd->add_option("--angles", angles, "interior probes per shell");
    drift_cmd->add_option("--samples", interior_samples, "samples per interior probe");
    drift_cmd->add_option("--boundary-samples", boundary_samples, "samples per boundary probe");
    drift_cmd->add_option("--expected-sign", expected_sign, "-1 or +1 (default by window)");
    drift_cmd->add_option("--truncate-b", trunc_b, "use h_b with this level");
    drift_cmd->add_flag("--boundaries-only", boundaries_only, "skip interior probes");

    auto* stab_cmd = app.add_subcommand("stabilize", "normalized n-step boundary drift");
    std::string steps_text = "10,100,1000";
    std::uint64_t samples = 1'000'000;
    int row = 0;
    stab_cmd->add_option("model", model_path, "model JSON")->required();
    stab_cmd->add_option("--side", side, "boundary 1 or 2")->check(CLI::IsMember({1, 2}));
    stab_cmd->add_option("--n", steps_text, "step counts n1,n2,...");
    stab_cmd->add_option("--start", start_text, "start state x,y (default: row on the boundary, |z| > 2Rn)");
    stab_cmd->add_option("--row", row, "boundary row for the default start");
    stab_cmd->add_option("--samples", samples, "trajectories per n");

    auto* exc_cmd = app.add_subcommand("excursion", "tail of the excursion maximum before return");
    std::string levels_text;
    exc_cmd->add_option("model", model_path, "model JSON")->required();
    exc_cmd->add_option("--start", start_text, "start state x,y")->required();
    exc_cmd->add_option("--radius", radius, "target ball radius")->required();
    exc_cmd->add_option("--levels", levels_text, "levels s1,s2,...")->required();
    exc_cmd->add_option("--trials", trials, "independent trajectories")->required();
    exc_cmd->add_option("--horizon", horizon, "maximum steps per trajectory")->required();

    auto* lindley_cmd = app.add_subcommand("lindley", "build the Lindley walk (z + zeta)^+");
    lindley_cmd->add_option("zeta", zeta_path, "increment JSON")->required();
    auto* mirror_cmd = app.add_subcommand("mirror", "build the mirror walk |z + zeta|");
    mirror_cmd->add_option("zeta", zeta_path, "increment JSON")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    const Emitter emit(g, out);
    try {
        if (validate_cmd->parsed()) {
            const auto rep = validate(load_model(model_path), trunc);
            emit.json_or_text(to_json(rep));
            if (rep.irreducibility == IrreducibilityStatus::NotVerified) {
                err << "warning: irreducibility not verified: " << rep.irreducibility_witness << "\n";
            }
            return rep.hard_pass() ? kSuccess : kHypothesis;
        }
        if (classify_cmd->parsed()) {
            ClassifyOptions o;
            o.tol_crit = tol_crit;
            o.stationary.method = parse_method(method);
            o.stationary.mc_steps = mc_steps;
            o.stationary.seed = g.seed;
            emit.json_or_text(to_json(classify(load_model(model_path), o)));
            return kSuccess;
        }
        if (stationary_cmd->parsed()) {
            StationaryOptions o;
            o.method = parse_method(method);
            o.truncation.K0 = K0;
            o.truncation.tol = tol;
            o.mc_steps = mc_steps;
            o.seed = g.seed;
            emit.json_or_text(to_json(stationary_measure(load_model(model_path), side, o)));
            return kSuccess;
        }
        if (tail_cmd->parsed()) {
            SimConfig cfg;
            cfg.start = parse_point(start_text);
            cfg.radius = radius;
            cfg.horizon = horizon;
            cfg.trials = trials;
            cfg.master_seed = g.seed;
            cfg.threads = g.threads;
            cfg.compression = compression;
            const auto est = survival_curve(load_model(model_path), cfg);
            if (g.format == "csv") emit.emit(curve_csv(est.grid));
            else emit.json_or_text(to_json(est));
            return kSuccess;
        }
        if (fit_cmd->parsed()) {
            const auto curve = parse_curve_csv(read_file(csv_path), fit_trials);
            auto j = to_json(fit_tail(curve.grid, curve.trials, g.seed));
            j["trials"] = curve.trials;
            emit.json_or_text(j);
            return kSuccess;
        }
        if (drift_cmd->parsed()) {
            const auto spec = load_model(model_path);
            const auto rep = classify(spec);
            if (rep.verdict == Verdict::Critical) throw DomainError("chi is critical; no beta window exists");
            const double eps = epsilon > 0.0 ? epsilon : std::fabs(rep.chi) / 4.0;
            const auto w = window == "below" ? BetaWindow::Below : BetaWindow::Above;
            const auto params = choose_betas(rep.phi1, rep.phi2, rep.phi0, rep.chi, eps, w);
            DriftSweepOptions o;
            o.alpha = alpha > 0.0 ? alpha : (w == BetaWindow::Below ? 0.5 : 1.0 / params.beta);
            if (!(o.alpha > 0.0)) throw DomainError("alpha must be positive; pass --alpha");
            for (auto n : (n_text.empty() ? std::vector<std::int64_t>{} : parse_ints(n_text, "N"))) {
                o.Ns.push_back(static_cast<int>(n));
            }
            o.radii = parse_reals(radii_text, "radius");
            o.angles = angles;
            o.interior_samples = interior_samples;
            o.boundary_samples = boundary_samples;
            o.seed = g.seed;
            if (trunc_b > 0.0) o.truncation_b = trunc_b;
            o.expected_sign = expected_sign != 0 ? (expected_sign < 0 ? -1 : 1) : (w == BetaWindow::Below ? -1 : 1);
            o.boundaries_only = boundaries_only;
            o.threads = g.threads;
            auto j = to_json(drift_sweep(spec, params, o));
            j["params"] = to_json(params);
            j["chi"] = to_json(rep.chi);
            j["epsilon"] = to_json(eps);
            j["expected_sign"] = o.expected_sign;
            emit.json_or_text(j);
            return kSuccess;
        }
        if (stab_cmd->parsed()) {
            const auto spec = load_model(model_path);
            const int R = spec.R();
            if (row < 0 || row >= R) throw DomainError("row must lie in [0, R)");
            json arr = json::array();
            for (auto n : parse_ints(steps_text, "n")) {
                if (n <= 0) throw DomainError("n must be positive");
                Point start;
                if (!start_text.empty()) {
                    start = parse_point(start_text);
                } else {
                    const std::int64_t far = 2 * static_cast<std::int64_t>(R) * n + R + 1;
                    start = side == 1 ? Point{far, row} : Point{row, far};
                }
                arr.push_back(to_json(stabilization_probe(spec, side, static_cast<std::uint64_t>(n), start, samples,
                                                          stream_seed(g.seed, static_cast<std::uint64_t>(n)), g.threads)));
            }
            emit.json_or_text(arr);
            return kSuccess;
        }
        if (exc_cmd->parsed()) {
            const auto est = excursion_max_probe(load_model(model_path), parse_point(start_text), radius,
                                                 parse_reals(levels_text, "level"), trials, horizon, g.seed, g.threads);
            emit.json_or_text(to_json(est));
            return kSuccess;
        }
        if (lindley_cmd->parsed() || mirror_cmd->parsed()) {
            const auto zeta = increment_from_json(read_json_file(zeta_path));
            const auto rep = validate_increment_A(zeta);
            if (!rep.pass()) {
                err << "error: increment law fails the hypotheses\n" << to_json(rep).dump(2) << "\n";
                return kHypothesis;
            }
            const auto spec = lindley_cmd->parsed() ? lindley_spec(zeta) : mirror_spec(zeta);
            emit.emit(spec_to_json(spec).dump(2) + "\n");
            return kSuccess;
        }
    } catch (const HypothesisError& e) {
        err << "hypothesis failure: " << e.what() << "\n";
        return kHypothesis;
    } catch (const SchemaError& e) {
        err << "input error: " << e.what() << "\n";
        return kSchema;
    } catch (const MethodUnavailableError& e) {
        err << "method unavailable: " << e.what() << "\n";
        return kNumerical;
    } catch (const ConvergenceError& e) {
        err << "no convergence: " << e.what() << " (last residual " << e.residual() << ")\n";
        return kNumerical;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return kUsage;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace qwalk::cli
