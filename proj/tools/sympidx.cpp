// Command line front end: index reports, Bott grids, index recurrence search and
// verification, the gallery example and the property suites.
#include "sympidx/gallery.hpp"
#include "sympidx/path_json.hpp"
#include "sympidx/recurrence.hpp"
#include "sympidx/suites.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace sympidx;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitSchema = 2;

struct Settings {
    std::string output;
    std::string csv;
    std::vector<std::string> inputs;
    std::vector<std::string> tol;
    std::vector<std::string> params;
    std::uint64_t seed = 1;
    int grid = 64;
    long kbound = 100000;
    // irt
    double eta = 0.5;
    int ell0 = 1;
    int divisor = 1;
    std::string cert;
    // gallery / properties
    int samples = 240;
    int count = 200;
};

struct Tolerances {
    IndexOptions index;
    RealizeOptions realize;

    json header() const {
        return {{"snap_tol", index.snap_tol},
                {"proximity_tol", index.proximity_tol},
                {"integer_tol", index.integer_tol},
                {"step_guard", index.step_guard},
                {"root_match_tol", index.root_match_tol},
                {"cluster_tol", index.spectrum.cluster_tol},
                {"rank_tol", index.spectrum.rank_tol},
                {"resolution", realize.resolution},
                {"step_bound", realize.step_bound},
                {"unitary_bound", realize.unitary_bound},
                {"drift_tol", realize.drift_tol},
                {"ode_rtol", realize.ode.rtol},
                {"ode_atol", realize.ode.atol}};
    }
};

std::pair<std::string, std::string> split_kv(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::Schema, "expected KEY=VAL, got '" + s + "'");
    return {s.substr(0, eq), s.substr(eq + 1)};
}

double to_number(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw Error(ErrorKind::Schema, "value of " + key + " is not a number: '" + v + "'");
    }
}

Tolerances parse_tolerances(const std::vector<std::string>& kvs) {
    Tolerances t;
    std::map<std::string, double*> slots{{"snap_tol", &t.index.snap_tol},
                                         {"proximity_tol", &t.index.proximity_tol},
                                         {"integer_tol", &t.index.integer_tol},
                                         {"step_guard", &t.index.step_guard},
                                         {"root_match_tol", &t.index.root_match_tol},
                                         {"cluster_tol", &t.index.spectrum.cluster_tol},
                                         {"rank_tol", &t.index.spectrum.rank_tol},
                                         {"step_bound", &t.realize.step_bound},
                                         {"unitary_bound", &t.realize.unitary_bound},
                                         {"drift_tol", &t.realize.drift_tol},
                                         {"ode_rtol", &t.realize.ode.rtol},
                                         {"ode_atol", &t.realize.ode.atol}};
    for (const auto& kv : kvs) {
        const auto [k, v] = split_kv(kv);
        if (k == "resolution") {
            const double r = to_number(k, v);
            if (r < 1 || r != std::floor(r)) throw Error(ErrorKind::Schema, "resolution must be a positive integer");
            t.realize.resolution = static_cast<int>(r);
            continue;
        }
        auto it = slots.find(k);
        if (it == slots.end()) throw Error(ErrorKind::Schema, "unknown tolerance '" + k + "'");
        const double x = to_number(k, v);
        if (!(x > 0)) throw Error(ErrorKind::Schema, "tolerance " + k + " must be positive");
        *it->second = x;
    }
    return t;
}

std::pair<long, long> parse_fraction(const std::string& v) {
    const auto slash = v.find('/');
    try {
        if (slash == std::string::npos) {
            const double x = std::stod(v);
            for (long d = 1; d <= 1000; ++d)
                if (std::abs(x * d - std::round(x * d)) < 1e-12) return {std::lround(x * d), d};
        } else {
            return {std::stol(v.substr(0, slash)), std::stol(v.substr(slash + 1))};
        }
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::Schema, "eps must be a fraction p/q, got '" + v + "'");
}

struct GalleryParams {
    ExampleParams example;
    int circle_n = 3;
    double circle_eps = 1e-3;
};

GalleryParams parse_params(const std::vector<std::string>& kvs) {
    GalleryParams g;
    for (const auto& kv : kvs) {
        const auto [k, v] = split_kv(kv);
        if (k == "n") {
            g.example.n = static_cast<int>(to_number(k, v));
        } else if (k == "eps") {
            std::tie(g.example.eps_num, g.example.eps_den) = parse_fraction(v);
        } else if (k == "r0") {
            g.example.r0 = to_number(k, v);
        } else if (k == "C") {
            g.example.C = to_number(k, v);
        } else if (k == "eps_prime") {
            g.example.eps_prime = to_number(k, v);
        } else if (k == "circle_n") {
            g.circle_n = static_cast<int>(to_number(k, v));
        } else if (k == "circle_eps") {
            g.circle_eps = to_number(k, v);
        } else {
            throw Error(ErrorKind::Schema, "unknown parameter '" + k + "'");
        }
    }
    g.example.validate();
    return g;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Schema, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Report {
public:
    Report(const std::string& command, const Settings& s, const Tolerances& t) {
        doc_["schema_version"] = kSchemaVersion;
        doc_["command"] = command;
        doc_["seed"] = s.seed;
        doc_["tolerances"] = t.header();
        doc_["inputs"] = s.inputs;
        doc_["checks"] = json::array();
    }

    json& operator[](const char* key) { return doc_[key]; }

    void check(const std::string& name, bool ok, const std::string& detail = {}) {
        doc_["checks"].push_back({{"name", name}, {"passed", ok}, {"detail", detail}});
        if (!ok) {
            ++failed_;
            std::cerr << "FAIL " << name << (detail.empty() ? "" : ": " + detail) << "\n";
        }
    }

    int finish(const Settings& s) {
        if (finished_) return failed_ ? kExitCheck : kExitOk;
        finished_ = true;
        doc_["passed"] = failed_ == 0;
        const std::string text = doc_.dump(2) + "\n";
        if (s.output.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(s.output);
            if (!out) throw Error(ErrorKind::Schema, "cannot write '" + s.output + "'");
            out << text;
        }
        if (!s.csv.empty() && !csv_.str().empty()) {
            std::ofstream out(s.csv);
            if (!out) throw Error(ErrorKind::Schema, "cannot write '" + s.csv + "'");
            out << csv_.str();
        }
        const size_t total = doc_["checks"].size();
        std::cerr << (failed_ ? "FAIL" : "PASS") << " " << doc_["command"].get<std::string>() << ": "
                  << total - static_cast<size_t>(failed_) << "/" << total << " checks passed\n";
        return failed_ ? kExitCheck : kExitOk;
    }

    std::ostringstream& csv() { return csv_; }

private:
    json doc_;
    std::ostringstream csv_;
    int failed_ = 0;
    bool finished_ = false;
};

template <class... Args>
std::string cat(const Args&... args) {
    std::ostringstream os;
    os.precision(12);
    (os << ... << args);
    return os.str();
}

SymplecticPath load_path(const std::string& file, const Tolerances& t) {
    return realize(parse_path_document(read_file(file)), t.realize);
}

void need_inputs(const Settings& s, size_t min, size_t max) {
    if (s.inputs.size() < min || s.inputs.size() > max)
        throw Error(ErrorKind::Schema, cat("expected between ", min, " and ", max, " --input files, got ", s.inputs.size()));
}

// ---------------------------------------------------------------------------

int cmd_index(const Settings& s, const Tolerances& t, Report& rep) {
    need_inputs(s, 1, 1);
    const SymplecticPath p = load_path(s.inputs[0], t);
    const IndexReport r = index_report(p, s.grid, t.index);
    rep["report"] = index_report_to_json(r);
    rep["report"]["sdc"] = r.mu + r.defect;
    rep["dim_half"] = p.dim_half();

    rep.check("bott_formula", r.mu == r.bott.at(0.0), cat("mu ", r.mu, " vs B(1) ", r.bott.at(0.0)));
    bool bounds = true, nullity_bound = true;
    for (const auto& [z, sp] : r.splitting) {
        const int nu = r.nu_z.at(z), eta = r.eta_z.at(z);
        bounds = bounds && 0 <= sp.first && 0 <= sp.second && sp.first <= nu && sp.second <= nu && nu <= eta;
        const bool real = std::abs(z) < 1e-9 || std::abs(z - kPi) < 1e-9;
        if (real) nullity_bound = nullity_bound && 2 * (nu - sp.first) <= eta && 2 * (nu - sp.second) <= eta;
    }
    rep.check("splitting_bounds", bounds, "0 <= S+-_z <= nu_z <= eta_z");
    rep.check("nullity_splitting_bound", nullity_bound, "nu - S+- <= eta / 2 at +-1");
    std::string below;
    for (const auto& [z, b] : r.bott)
        if (b > r.bott_plus.at(z)) below += cat(" z=", z, ": B ", b, " > B+ ", r.bott_plus.at(z));
    rep.check("semicontinuity", below.empty(), below.empty() ? "B <= B+ on the grid" : below);
    if (p.dim_half() <= 4 && r.nu_z.count(0.0) && r.nu_z.at(0.0) > 0) {
        const auto nf = eigen1_normal_form(p.endpoint(), t.index.spectrum);
        rep["report"]["b_plus"] = nf.b_plus;
        rep["report"]["b_minus"] = nf.b_minus;
        rep.check("linear", nf.b_minus - nf.b_plus == r.defect,
                  cat("b- - b+ = ", nf.b_minus - nf.b_plus, " vs 2S+_1 - nu = ", r.defect));
    }
    rep.csv() << "angle,bott,bott_plus\n";
    for (const auto& [z, b] : r.bott) rep.csv() << cat(z, ",", b, ",", r.bott_plus.at(z), "\n");
    return rep.finish(s);
}

int cmd_bott_grid(const Settings& s, const Tolerances& t, Report& rep) {
    need_inputs(s, 1, 1);
    if (s.grid < 1) throw Error(ErrorKind::Schema, "--grid must be positive");
    const SymplecticPath p = load_path(s.inputs[0], t);
    const BottProfile prof = bott_profile(p, t.index);
    std::vector<double> zs;
    for (int j = 0; j < s.grid; ++j) zs.push_back(kTwoPi * j / s.grid);
    zs.push_back(kPi);
    for (double a : prof.angles) zs.push_back(a);
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), zs.end());
    const auto lo = bott_many(p, zs, t.index);
    const auto hi = bott_many(inverse(p), zs, t.index);
    json rows = json::array();
    rep.csv() << "angle,bott,bott_plus,nu\n";
    bool sandwich = true;
    for (size_t j = 0; j < zs.size(); ++j) {
        const int nu = prof.nullity(zs[j]);
        rows.push_back({{"angle", zs[j]}, {"bott", lo[j]}, {"bott_plus", -hi[j]}, {"nu", nu}});
        rep.csv() << cat(zs[j], ",", lo[j], ",", -hi[j], ",", nu, "\n");
        sandwich = sandwich && lo[j] <= -hi[j] && (nu > 0 || lo[j] == -hi[j]);
    }
    rep["rows"] = rows;
    rep["mean"] = prof.mean();
    rep.check("semicontinuity", sandwich, "B <= B+ with equality off the endpoint spectrum");
    return rep.finish(s);
}

std::vector<IRTPath> load_irt_paths(const Settings& s, const Tolerances& t) {
    std::vector<IRTPath> out;
    for (const auto& f : s.inputs) out.push_back(irt_path(load_path(f, t), t.index));
    return out;
}

void ledger_checks(Report& rep, const IRTLedger& l) {
    rep.check("irt_precheck", l.precheck, l.precheck_failure);
    if (!l.precheck) return;
    for (size_t i = 0; i < l.cond_i.size(); ++i)
        rep.check(cat("irt_mean_gap[", i, "]"), l.cond_i[i], cat("|mean(Phi^k) - d| = ", l.mean_gap[i]));
    for (const auto& e : l.entries) {
        rep.check(cat("irt_ii[", e.path, ",", e.ell, "]"), e.cond_ii,
                  cat("mu(Phi^{k+l}) = ", e.mu_k_plus, ", mu(Phi^l) = ", e.mu_ell));
        rep.check(cat("irt_iii[", e.path, ",", e.ell, "]"), e.cond_iii,
                  cat("mu(Phi^{k-l}) = ", e.mu_k_minus, ", mu(Phi^-l) = ", e.mu_minus_ell, ", b+ = ", e.b_plus,
                      ", b- = ", e.b_minus));
    }
    rep.check("irt_route2", l.route2_agrees, "substituted form of the k-l equation");
}

int cmd_irt_find(const Settings& s, const Tolerances& t, Report& rep) {
    need_inputs(s, 1, 64);
    const auto paths = load_irt_paths(s, t);
    rep["search"] = {{"eta", s.eta}, {"ell0", s.ell0}, {"N", s.divisor}, {"kbound", s.kbound}};
    const auto cert = find_irt(paths, s.eta, s.ell0, s.divisor, s.kbound);
    if (!cert) {
        rep["certificate"] = nullptr;
        rep.check("irt_search", false, cat("no certificate with k_i <= ", s.kbound, "; this is not a refutation"));
        return rep.finish(s);
    }
    rep["certificate"] = certificate_to_json(*cert);
    const IRTLedger l = verify_irt(paths, *cert);
    rep["ledger"] = ledger_to_json(l);
    ledger_checks(rep, l);
    return rep.finish(s);
}

int cmd_irt_verify(const Settings& s, const Tolerances& t, Report& rep) {
    need_inputs(s, 1, 64);
    if (s.cert.empty()) throw Error(ErrorKind::Schema, "irt-verify needs --cert");
    const IRTCertificate cert = parse_certificate_document(read_file(s.cert));
    if (cert.k.size() != s.inputs.size()) throw Error(ErrorKind::Schema, "certificate needs one k per input path");
    const auto paths = load_irt_paths(s, t);
    rep["certificate"] = certificate_to_json(cert);
    const IRTLedger l = verify_irt(paths, cert);
    rep["ledger"] = ledger_to_json(l);
    ledger_checks(rep, l);
    return rep.finish(s);
}

int cmd_gallery(const Settings& s, const Tolerances& t, Report& rep) {
    const GalleryParams gp = parse_params(s.params);
    const ExampleParams& p = gp.example;
    const Example ex(p);
    const int n = p.n;
    rep["params"] = {{"n", n},         {"eps", cat(p.eps_num, "/", p.eps_den)},
                     {"r0", p.r0},     {"C", p.C},
                     {"eps_prime", p.eps_prime}, {"profile_exponent", ex.profile().exponent()},
                     {"samples", s.samples},     {"circle_n", gp.circle_n},
                     {"circle_eps", gp.circle_eps}};

    const OrbitRecord g0 = h_orbit(ex, Vec::Zero(2 * n), {}, t.index);
    rep["gamma0"] = {{"T", g0.T}, {"q", g0.q}, {"mu_h", g0.mu_h}, {"mu", g0.mu_shifted}};
    rep.check("dynconvex_gamma0", g0.mu_h == -n - 2 && g0.mu_shifted == n,
              cat("mu(gamma_H) = ", g0.mu_h, ", mu(gamma_0) = ", g0.mu_shifted, ", expected ", -n - 2, " and ", n));

    const Gamma0Report pg = perturbed_gamma0(p, t.index);
    rep["gamma0_perturbed"] = {{"mu", pg.mu}, {"sdc", pg.sdc}, {"mu_unshifted", pg.mu_unshifted}, {"defect", pg.defect}};
    rep.check("gamma0", pg.mu == n + 2 && pg.sdc == n, cat("(mu, sdc) = (", pg.mu, ", ", pg.sdc, ")"));
    rep.check("not_strongly_convex", pg.sdc < n + 2, cat("sdc = ", pg.sdc, " vs n+2 = ", n + 2));

    const auto recs = sample_orbits(ex, s.samples, s.seed, {}, t.index);
    int bad_mu = 0, bad_action = 0, bad_bound = 0;
    rep.csv() << "x0,m,T,T_G,q,G,F2,A,action,symmetric,mu_h,mu_shifted,lower_bound\n";
    for (const auto& r : recs) {
        const int lb = index_lower_bound(ex, r);
        if (r.mu_shifted < n + 2) ++bad_mu;
        if (!(r.action > 1.0) || std::abs(r.action - std::round(r.action)) > 1e-6) ++bad_action;
        if (lb > r.mu_shifted) ++bad_bound;
        std::ostringstream x;
        x.precision(17);
        for (int i = 0; i < r.x0.size(); ++i) x << (i ? " " : "") << r.x0(i);
        rep.csv() << cat(x.str(), ",", r.m, ",", r.T, ",", r.T_G, ",", r.q, ",", r.G_value, ",", r.F2_value, ",",
                         r.A_value, ",", r.action, ",", r.symmetric, ",", r.mu_h, ",", r.mu_shifted, ",", lb, "\n");
    }
    rep["orbits"] = {{"count", recs.size()}, {"mu_violations", bad_mu}, {"action_violations", bad_action},
                     {"lower_bound_violations", bad_bound}};
    rep.check("orbit_count", static_cast<int>(recs.size()) >= std::min(s.samples, 200),
              cat(recs.size(), " distinct closed orbits"));
    rep.check("dynconvex", bad_mu == 0, cat(bad_mu, " orbits with mu < n+2"));
    rep.check("action", bad_action == 0, cat(bad_action, " orbits without integer action > 1"));
    rep.check("index_bga", bad_bound == 0, cat(bad_bound, " orbits below the lower bound"));

    const auto mi = mean_index_positivity_check(ex, recs, t.index);
    rep["mean_index"] = {{"b", mi.b}, {"violations", mi.violations}, {"gamma0", mi.gamma0.mean},
                         {"round_sphere", mi.round_sphere.mean}};
    rep.check("mean_index_positivity", mi.violations == 0 && mi.gamma0.ok && mi.round_sphere.ok,
              cat(mi.violations, " violations of mean > bT with b = ", mi.b));

    const auto rp = reparam_index_gap_check(ex, recs, {}, t.index);
    rep["reparam"] = {{"max_gap", rp.max_gap}, {"violations", rp.violations}};
    rep.check("indexes_hs", rp.violations == 0, cat("max |mu_H - mu_G| = ", rp.max_gap));

    ReturnScanOptions ro;
    ro.grid = s.grid == 64 ? 0 : s.grid;
    const auto scan = return_map_scan(ex, ro);
    rep["return_scan"] = {{"grid", scan.grid},
                          {"points", scan.points},
                          {"radius", scan.radius},
                          {"periodic_points", scan.periodic_points.size()},
                          {"min_relative_residual", scan.min_relative_residual},
                          {"max_time_residual", scan.max_time_residual},
                          {"cone", {scan.cone_decreasing, scan.cone_points}},
                          {"rotated", {scan.rotated_nonzero, scan.rotated_points}}};
    rep.check("no_new_orbit", scan.origin_unique(), cat(scan.periodic_points.size(), " 2-periodic grid points"));
    rep.check("return_time", scan.max_time_residual < 1e-10, cat("residual ", scan.max_time_residual));
    rep.check("cone_decrease", scan.cone_decreasing == scan.cone_points,
              cat(scan.cone_decreasing, "/", scan.cone_points));
    rep.check("rotation_nonzero", scan.rotated_nonzero == scan.rotated_points,
              cat(scan.rotated_nonzero, "/", scan.rotated_points));

    const auto rh = reeb_ham_shift_check(perturbed_gamma0_path(p), 64, t.index);
    rep.check("reeb_ham", rh.ok(), cat("shift at 1 = ", rh.shift_at_one, ", mismatches ", rh.mismatches));

    const std::vector<OrbitRecord> few(recs.begin(), recs.begin() + std::min<size_t>(3, recs.size()));
    const auto orbits = gallery_orbit_set(ex, few, t.index);
    const auto cert = find_irt(replay_paths(orbits), 0.5, 2, 2, s.kbound * 2);
    if (cert) {
        const auto rr = replay_multiplicity_arithmetic(orbits, *cert, n);
        rep["replay"] = replay_to_json(rr);
        rep["replay"]["certificate"] = certificate_to_json(*cert);
        rep.check("replay_equations", rr.equations_hold, "irt1-irt6 and the squeeze");
        rep.check("replay_windows", rr.windows_consistent, "bound1-bound3 for orbits meeting the hypothesis");
    } else {
        rep.check("replay_search", false, "no certificate for the gallery orbit set within the k bound");
    }

    const auto ca = circle_action_paths(gp.circle_n, gp.circle_eps, t.realize);
    const int cn = gp.circle_n;
    const int bphi = bott(ca.phi_half, kPi, t.index);
    const int m1 = cz_index(ca.psi_bar, t.index);
    const int m2 = cz_index(iterate(ca.psi_bar, 2), t.index);
    const Mat re = block_diag(std::vector<Mat>(static_cast<size_t>(cn + 1), rotation2(-kPi * gp.circle_eps)));
    const double gap = (ca.psi_bar.samples().back() + re).cwiseAbs().maxCoeff();
    rep["circle_action"] = {{"n", cn}, {"bott_phi_minus_one", bphi}, {"mu_psi", m1}, {"mu_psi2", m2}, {"endpoint_gap", gap}};
    rep.check("bott_phi_minus_one", bphi == -(cn + 1), cat("B_Phi(-1) = ", bphi));
    rep.check("psi_bar", m1 == 0 && m2 == -(cn + 1), cat("mu = ", m1, ", mu^2 = ", m2));
    rep.check("psi_bar_endpoint", gap < 1e-9, cat("|Psi(1/2) + R_eps| = ", gap));
    return rep.finish(s);
}

int cmd_properties(const Settings& s, const Tolerances& t, Report& rep) {
    if (s.count < 1) throw Error(ErrorKind::Schema, "--count must be positive");
    SuiteOptions o;
    o.count = s.count;
    o.seed = s.seed;
    o.grid = s.grid;
    o.index = t.index;
    json suites = json::array();
    rep.csv() << "suite,cases,violations,rejected,degenerate,tight\n";
    for (const auto& r : run_all_suites(o)) {
        suites.push_back({{"name", r.name},
                          {"cases", r.cases},
                          {"violations", r.violations},
                          {"rejected", r.rejected},
                          {"degenerate", r.degenerate},
                          {"tight", r.tight},
                          {"failures", r.failures}});
        rep.csv() << cat(r.name, ",", r.cases, ",", r.violations, ",", r.rejected, ",", r.degenerate, ",", r.tight, "\n");
        std::string detail = cat(r.violations, " violations in ", r.cases, " cases");
        for (const auto& f : r.failures) detail += "; " + f;
        rep.check(r.name, r.passed(), detail);
    }
    rep["suites"] = suites;
    return rep.finish(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conley-Zehnder index toolkit"};
    app.require_subcommand(1);
    Settings s;

    auto common = [&](CLI::App* c) {
        c->add_option("--output,-o", s.output, "JSON report file (default stdout)");
        c->add_option("--csv", s.csv, "CSV table file");
        c->add_option("--tol", s.tol, "tolerance override KEY=VAL")->take_all();
        c->add_option("--seed", s.seed, "random seed");
    };
    auto* index = app.add_subcommand("index", "index report of a path document");
    auto* grid = app.add_subcommand("bott-grid", "B and B+ on a grid of the circle");
    auto* find = app.add_subcommand("irt-find", "search for an index recurrence certificate");
    auto* verify = app.add_subcommand("irt-verify", "verify an index recurrence certificate");
    auto* gallery = app.add_subcommand("gallery", "run the example construction");
    auto* props = app.add_subcommand("properties", "run the randomized property suites");
    for (auto* c : {index, grid, find, verify, gallery, props}) common(c);
    for (auto* c : {index, grid, find, verify}) c->add_option("--input,-i", s.inputs, "path document")->required();
    for (auto* c : {index, grid, gallery, props}) c->add_option("--grid", s.grid, "grid size")->check(CLI::PositiveNumber);
    for (auto* c : {find, verify, gallery}) c->add_option("--kbound", s.kbound, "largest k_i searched")->check(CLI::PositiveNumber);
    find->add_option("--eta", s.eta, "mean index window")->check(CLI::PositiveNumber);
    find->add_option("--ell0", s.ell0, "largest l checked")->check(CLI::PositiveNumber);
    find->add_option("--divisor", s.divisor, "common divisor N")->check(CLI::PositiveNumber);
    verify->add_option("--cert", s.cert, "certificate document")->required();
    gallery->add_option("--params", s.params, "parameter KEY=VAL (n, eps, r0, C, eps_prime, circle_n, circle_eps)")
        ->take_all();
    gallery->add_option("--samples", s.samples, "closed orbits to sample")->check(CLI::PositiveNumber);
    props->add_option("--count", s.count, "cases per suite")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitSchema;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    Tolerances t;
    try {
        t = parse_tolerances(s.tol);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    }
    Report rep(command, s, t);
    try {
        if (*index) return cmd_index(s, t, rep);
        if (*grid) return cmd_bott_grid(s, t, rep);
        if (*find) return cmd_irt_find(s, t, rep);
        if (*verify) return cmd_irt_verify(s, t, rep);
        if (*gallery) return cmd_gallery(s, t, rep);
        if (*props) return cmd_properties(s, t, rep);
    } catch (const Error& e) {
        const bool input = e.kind() == ErrorKind::Schema || e.kind() == ErrorKind::InvalidParams ||
                           e.kind() == ErrorKind::EvenN;
        rep.check(input ? "input_schema" : "numerical_resolution", false, e.what());
        try {
            rep.finish(s);
        } catch (const Error& w) {
            std::cerr << "error: " << w.what() << "\n";
        }
        return input ? kExitSchema : kExitCheck;
    }
    return kExitSchema;
}
