#include "qwalk/report.hpp"

#include "qwalk/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace qwalk {

namespace {

std::string region_name(Region r) { return to_string(r); }

std::string number_text(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

json to_json(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
    return v;
}

json to_json(Vec2 v) { return json::array({to_json(v.x), to_json(v.y)}); }

json to_json(const Mat2& m) {
    return json::array({json::array({to_json(m.a11), to_json(m.a12)}), json::array({to_json(m.a21), to_json(m.a22)})});
}

json to_json(const ValidationReport& r) {
    json j;
    j["hypothesis_H"] = {{"pass", r.hypothesis_H}, {"offending_atoms", r.offending_atoms}};
    j["zero_drift_D"] = {{"pass", r.zero_drift_D}, {"drift", to_json(r.interior_drift)}, {"drift_exact", r.interior_drift_exact}};
    j["covariance_Sigma"] = {{"pass", r.covariance_Sigma}, {"det", to_json(r.det_sigma)}, {"det_exact", r.det_sigma_exact}};
    j["irreducibility_I"] = {
        {"status", r.irreducibility == IrreducibilityStatus::VerifiedOnTruncation ? "verified-on-truncation" : "not-verified"},
        {"truncation", r.truncation},
        {"witness", r.irreducibility_witness}};
    j["moment_exponents"] = {{"nu_interior", to_json(r.nu_interior)},
                             {"nu_horizontal", to_json(r.nu_horizontal)},
                             {"nu_vertical", to_json(r.nu_vertical)}};
    j["left_continuous"] = r.left_continuous;
    j["pass"] = r.hard_pass();
    return j;
}

json to_json(const StationaryMeasure& m) {
    json j;
    json w = json::array();
    for (double v : m.weights) w.push_back(to_json(v));
    j["weights"] = w;
    if (!m.exact_weights.empty()) {
        json e = json::array();
        for (const auto& v : m.exact_weights) e.push_back(format_rational(v));
        j["weights_exact"] = e;
    }
    j["method"] = to_string(m.method);
    j["residual"] = to_json(m.residual);
    if (m.method == StationaryMethod::Truncated) j["trunc_level"] = m.trunc_level;
    if (m.method == StationaryMethod::OccupationMC) {
        j["sample_count"] = m.sample_count;
        json s = json::array();
        for (double v : m.std_errors) s.push_back(to_json(v));
        j["std_errors"] = s;
    }
    j["diagnostics"] = m.diagnostics;
    return j;
}

json to_json(const ClassificationReport& r) {
    json j;
    j["sigma"] = to_json(r.sigma);
    j["rho"] = to_json(r.rho);
    j["s"] = to_json(r.s);
    j["transform"] = to_json(r.transform);
    j["phi0"] = to_json(r.phi0);
    j["pi1"] = to_json(r.pi1);
    j["pi2"] = to_json(r.pi2);
    j["mu_bar1"] = to_json(r.mu_bar1);
    j["mu_bar2"] = to_json(r.mu_bar2);
    j["theta1"] = to_json(r.theta1);
    j["theta2"] = to_json(r.theta2);
    j["phi1"] = to_json(r.phi1);
    j["phi2"] = to_json(r.phi2);
    j["chi"] = to_json(r.chi);
    j["verdict"] = to_string(r.verdict);
    j["tail_exponent"] = to_json(r.tail_exponent);
    j["moment_note"] = r.moment_note;
    return j;
}

json to_json(const SlopeFit& f) {
    return {{"fitted_slope", to_json(f.slope)},
            {"intercept", to_json(f.intercept)},
            {"slope_ci", json::array({to_json(f.ci_lo), to_json(f.ci_hi)})},
            {"fit_window", json::array({f.n_min, f.n_max})},
            {"fit_points", f.points},
            {"bootstrap_resamples", f.bootstrap_used}};
}

json to_json(const TailEstimate& t) {
    json j = to_json(t.fit);
    json g = json::array();
    for (const auto& p : t.grid) g.push_back(json::array({p.n, to_json(p.survival)}));
    j["grid"] = g;
    j["trials"] = t.trials;
    j["horizon"] = t.horizon;
    j["censored_fraction"] = to_json(t.censored_fraction);
    return j;
}

json to_json(const StabilizationEstimate& s) {
    return {{"side", s.side},
            {"n", s.n},
            {"start", json::array({s.start.x, s.start.y})},
            {"samples", s.samples},
            {"estimate", to_json(s.estimate)},
            {"std_error", to_json(s.std_error)},
            {"ci_lo", to_json(s.ci_lo)},
            {"ci_hi", to_json(s.ci_hi)},
            {"mean_occupation", to_json(s.mean_occupation)}};
}

json to_json(const ExcursionEstimate& e) {
    json pts = json::array();
    for (const auto& p : e.points) {
        pts.push_back({{"s", to_json(p.s)}, {"probability", to_json(p.probability)}, {"stderr", to_json(p.stderr_)},
                       {"hits", p.hits}});
    }
    return {{"points", pts}, {"censored_fraction", to_json(e.censored_fraction)}, {"slope", to_json(e.slope)},
            {"fit_points", e.fit_points}};
}

json to_json(const HarmonicParams& p) {
    return {{"beta1", to_json(p.beta1)}, {"beta2", to_json(p.beta2)}, {"phi0", to_json(p.phi0)}, {"beta", to_json(p.beta)}};
}

json to_json(const DriftEstimate& d) {
    return {{"point", to_json(d.point)},     {"mean", to_json(d.mean)},   {"std_error", to_json(d.std_error)},
            {"samples", d.samples},          {"alpha", to_json(d.alpha)}, {"N", d.N},
            {"region", region_name(d.region)}};
}

json to_json(const DriftSweepResult& r) {
    json est = json::array();
    for (const auto& e : r.estimates) est.push_back(to_json(e));
    json regions = json::object();
    for (const auto& [reg, frac] : r.region_fraction) regions[region_name(reg)] = to_json(frac);
    return {{"N", r.N}, {"estimates", est}, {"fraction_resolved", to_json(r.fraction_resolved)},
            {"region_fraction", regions}, {"success", r.success}};
}

json to_json(const IncrementReport& r) {
    return {{"zero_mean", r.zero_mean},
            {"mean_exact", r.mean_exact},
            {"R", r.R},
            {"sigma", to_json(r.sigma)},
            {"det_exact", r.det_exact},
            {"positive_definite", r.positive_definite},
            {"rho", to_json(r.rho)},
            {"rho_in_range", r.rho_in_range},
            {"pass", r.pass()}};
}

std::string curve_csv(const std::vector<GridPoint>& grid) {
    std::string out = "n,survival,stderr\n";
    for (const auto& p : grid) {
        out += std::to_string(p.n) + "," + number_text(p.survival) + "," + number_text(p.stderr_) + "\n";
    }
    return out;
}

ParsedCurve parse_curve_csv(const std::string& text, std::uint64_t trials) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty curve file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "n,survival,stderr") throw SchemaError("curve header must be 'n,survival,stderr'");
    struct Row {
        std::uint64_t n;
        double s, e;
    };
    std::vector<Row> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c)) {
            throw SchemaError("curve line " + std::to_string(lineno) + " needs three fields");
        }
        try {
            std::size_t used = 0;
            Row r{std::stoull(a, &used), std::stod(b), std::stod(c)};
            if (!(r.s >= 0.0 && r.s <= 1.0) || !(r.e >= 0.0)) throw SchemaError("");
            if (!rows.empty() && (r.n <= rows.back().n || r.s > rows.back().s)) {
                throw SchemaError("curve line " + std::to_string(lineno) + " breaks the grid order or monotonicity");
            }
            rows.push_back(r);
        } catch (const SchemaError& e) {
            if (*e.what()) throw;
            throw SchemaError("curve line " + std::to_string(lineno) + " holds invalid values");
        } catch (const std::exception&) {
            throw SchemaError("curve line " + std::to_string(lineno) + " is not numeric");
        }
    }
    if (rows.empty()) throw SchemaError("curve has no data rows");
    if (trials == 0) {
        std::vector<double> est;
        for (const auto& r : rows) {
            if (r.s > 0.0 && r.s < 1.0 && r.e > 0.0) est.push_back(r.s * (1.0 - r.s) / (r.e * r.e));
        }
        if (est.empty()) throw SchemaError("cannot infer the trial count; pass --trials");
        std::nth_element(est.begin(), est.begin() + static_cast<std::ptrdiff_t>(est.size() / 2), est.end());
        trials = static_cast<std::uint64_t>(std::llround(est[est.size() / 2]));
    }
    ParsedCurve out;
    out.trials = trials;
    for (const auto& r : rows) {
        GridPoint p;
        p.n = r.n;
        p.survivors = static_cast<std::uint64_t>(std::llround(r.s * static_cast<double>(trials)));
        p.survival = static_cast<double>(p.survivors) / static_cast<double>(trials);
        p.stderr_ = std::sqrt(p.survival * (1.0 - p.survival) / static_cast<double>(trials));
        out.grid.push_back(p);
    }
    return out;
}

namespace {

void render(const json& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) render(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array()) && j.size() > 2) {
        for (std::size_t i = 0; i < j.size(); ++i) render(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out += prefix + ": " + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
    }
}

}  // namespace

std::string render_text(const json& j) {
    std::string out;
    render(j, "", out);
    return out;
}

}  // namespace qwalk
