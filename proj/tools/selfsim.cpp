// Command-line front end.
//
//   selfsim exponents --N <int> [--p <rational>]
//   selfsim shoot --N <int> --p <rational> (--alpha <x> | --ell <x>) [--csv <path>]
//   selfsim enumerate --N <int> --p <rational> [--alpha-max <x>] [--curve-csv <prefix>] [--strict]
//   selfsim spectrum --N <int> --p <rational> [--j-max <int>] [--oracle] [--zero-mode]
//   selfsim laguerre --j <int> [--B <rational>] [--coeffs] [--verify]
//   selfsim verify [--criteria 1,2,...]
//
// Every command prints a report (table or --json) with an invariant summary
// and a determinism hash; the exit status is 0 iff all invariants hold.
// SELFSIM_THREADS sets the default worker count.

#include "report.hpp"

#include "selfsim/acceptance.hpp"
#include "selfsim/enumerator.hpp"
#include "selfsim/laguerre.hpp"
#include "selfsim/operator_oracle.hpp"
#include "selfsim/plot_data.hpp"
#include "selfsim/spectral.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>

using namespace selfsim;
using cli::json;

namespace {

struct Common {
    bool json_out = false;
    bool quiet = false;
    int threads = 1;
};

void progress(const Common& c, const std::string& msg) {
    if (!c.quiet) std::cerr << "[selfsim] " << msg << std::endl;
}

json surd_json(const QuadraticSurd& s) { return {{"exact", s.to_string()}, {"value", s.to_double()}}; }

template <typename T, typename F>
json extended_json(const Extended<T>& e, F&& f) {
    return e.is_finite() ? f(e.value()) : json("inf");
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// exponents -------------------------------------------------------------------

struct ExponentsArgs {
    int N = 0;
    std::string p;
};

void run_exponents(const ExponentsArgs& a, cli::RunReport& rep) {
    rep.inputs()["N"] = a.N;
    const auto crit = compute_critical_exponents(a.N);
    auto& res = rep.results();
    res["p_S"] = extended_json(crit.p_S, [](const Rational& q) { return json(to_string(q)); });
    res["p_JL"] = extended_json(crit.p_JL, surd_json);
    res["p_L"] = extended_json(crit.p_L, [](const Rational& q) { return json(to_string(q)); });
    json pj = json::array();
    for (int j = 2; j <= 5; ++j) {
        const auto r = compute_pj(a.N, j);
        pj.push_back({{"j", j},
                      {"value", r.value ? json(to_string(*r.value)) : json(nullptr)},
                      {"above_pJL", r.above_pJL},
                      {"eigenvalue_zero", r.eigenvalue_zero}});
        if (j == 2 && r.value && crit.p_L.is_finite()) rep.check("p_2 = p_L", *r.value == crit.p_L.value());
    }
    res["p_j"] = pj;
    if (crit.p_S.is_finite() && crit.p_JL.is_finite() && crit.p_L.is_finite()) {
        rep.check("p_S < p_JL < p_L", compare(crit.p_JL.value(), crit.p_S.value()) > 0 &&
                                          compare(crit.p_JL.value(), crit.p_L.value()) < 0);
    }
    if (a.p.empty()) return;

    const ProblemParams params(a.N, parse_rational(a.p));
    rep.inputs()["p"] = to_string(params.p());
    const auto ex = compute_exponents(params);
    res["regime"] = to_string(classify_regime(params));
    res["kappa"] = ex.kappa;
    res["kappa^(p-1)"] = to_string(ex.kappa_pm1);
    res["L^(p-1)"] = ex.L_pm1 ? json(to_string(*ex.L_pm1)) : json(nullptr);
    res["L"] = ex.L ? json(*ex.L) : json(nullptr);
    const ProfileModel m(params);
    rep.check("kappa is an equilibrium", m.residual(1, m.kappa(), 0, 0) == 0);
    if (m.has_singular()) {
        double worst = 0;
        for (double r : {0.5, 1.0, 2.0, 5.0}) {
            const double w = m.phi_inf(r), wr = m.phi_inf_r(r), wrr = m.phi_inf_rr(r);
            const double scale = std::abs(wrr) + std::abs((m.N() - 1) / r * wr) + std::abs(r / 2 * wr) +
                                 std::abs(w / m.pm1()) + std::pow(std::abs(w), m.p());
            worst = std::max(worst, std::abs(m.residual(r, w, wr, wrr)) / scale);
        }
        rep.check("phi_inf solves the profile equation", worst <= 1e-13, fmt("max relative residual %.3g", worst));
    }
}

// shoot -----------------------------------------------------------------------

struct ShootArgs {
    int N = 0;
    std::string p;
    std::optional<double> alpha;
    std::optional<double> ell;
    double r_min = 0.1;
    double r_max = 60;
    int samples = 400;
    bool log_spaced = false;
    std::string csv;
};

void run_shoot(const ShootArgs& a, cli::RunReport& rep) {
    const ProblemParams params(a.N, parse_rational(a.p));
    const ProfileModel m(params);
    rep.inputs() = {{"N", a.N}, {"p", to_string(params.p())}, {"samples", a.samples}, {"log_spaced", a.log_spaced}};
    auto& res = rep.results();
    if (a.alpha) {
        rep.inputs()["from"] = "origin";
        rep.inputs()["alpha"] = *a.alpha;
        rep.inputs()["r_max"] = a.r_max;
        ForwardConfig cfg;
        cfg.window_end = a.r_max;
        const auto shot = shoot_from_origin(m, *a.alpha, cfg);
        res["classification"] = to_string(shot.classification);
        if (shot.classification == ShotClass::SignChange) res["sign_change_r"] = shot.sign_change_r;
        res["horizon"] = shot.horizon;
        res["window"] = shot.window;
        res["r_eps"] = shot.start.r_eps;
        res["series_truncation_bound"] = shot.start.truncation_bound;
        res["diagnostic"] = shot.diagnostic;
        if (shot.fit) {
            res["fit"] = {{"ell", shot.fit->ell}, {"c", shot.fit->c},           {"d", shot.fit->d},
                          {"r_lo", shot.fit->r_lo}, {"r_hi", shot.fit->r_hi}, {"residual", shot.fit->residual}};
        }
        rep.check("series start within tolerance", shot.start.truncation_bound <= 1e-14 + 1e-12 * *a.alpha,
                  fmt("truncation bound %.3g", shot.start.truncation_bound));
        const double r_hi = std::min(10.0, shot.profile.r_max());
        if (shot.classification != ShotClass::Diverged && r_hi > 0.2) {
            const auto y = shot.at(m, 0.1);
            const auto d = wronskian_drift(m, {y[0], y[1]}, 0.1, r_hi);
            res["wronskian_drift"] = d.max_relative;
            rep.check("omega W constant", d.termination == Termination::Completed && d.max_relative <= 1e-7,
                      fmt("max relative drift %.3g", d.max_relative));
        }
        if (!a.csv.empty()) {
            const double lo = a.log_spaced ? shot.start.r_eps : 0;
            auto t = profile_table(m, shot, lo, shot.profile.r_max(), a.samples, a.log_spaced);
            t.comments = {"forward profile N=" + std::to_string(a.N) + " p=" + to_string(params.p()) +
                              " alpha=" + fmt("%.17g", *a.alpha),
                          "columns: r, w(r), w_r(r)"};
            write_csv(a.csv, t);
            res["csv"] = a.csv;
        }
        return;
    }
    if (!m.has_singular()) throw std::invalid_argument("backward shots need p(N-2) > N");
    rep.inputs()["from"] = "infinity";
    rep.inputs()["ell"] = *a.ell;
    rep.inputs()["r_min"] = a.r_min;
    const auto shot = shoot_from_infinity(m, *a.ell, a.r_min);
    res["r_handoff"] = shot.r_handoff;
    res["picard_delta"] = shot.stage.delta;
    res["picard_iterations"] = shot.stage.iterations;
    res["fixed_point_residual"] = shot.stage.fixed_point_residual;
    res["positive"] = shot.positive;
    if (!shot.positive) res["sign_change_r"] = shot.sign_change_r;
    res["termination"] = to_string(shot.profile.termination);
    res["diagnostic"] = shot.diagnostic;
    rep.check("Picard fixed point converged", shot.stage.fixed_point_residual <= 1e-10,
              fmt("residual %.3g", shot.stage.fixed_point_residual));
    rep.check("inward integration reached r_min", shot.ok() || !shot.positive, to_string(shot.profile.termination));
    if (shot.ok()) {
        const auto y = shot.at(m, shot.r_min());
        res["w_at_r_min"] = y[0];
        res["w_r_at_r_min"] = y[1];
    }
    if (!a.csv.empty()) {
        const double hi = std::max(a.r_max, shot.r_min() * 2);
        auto t = profile_table(m, shot, shot.r_min(), hi, a.samples, a.log_spaced);
        t.comments = {"backward profile N=" + std::to_string(a.N) + " p=" + to_string(params.p()) +
                          " ell=" + fmt("%.17g", *a.ell),
                      "columns: r, w(r), w_r(r)"};
        write_csv(a.csv, t);
        res["csv"] = a.csv;
    }
}

// enumerate -------------------------------------------------------------------

struct EnumerateArgs {
    int N = 0;
    std::string p;
    std::optional<double> r0;
    double alpha_max = 1e6;
    int alpha_per_octave = 4;
    int ell_points = 60;
    std::string curve_csv;
    bool strict = false;
};

void run_enumerate(const EnumerateArgs& a, const Common& c, cli::RunReport& rep) {
    const ProblemParams params(a.N, parse_rational(a.p));
    SearchConfig cfg;
    cfg.r0 = a.r0;
    cfg.alpha_max = a.alpha_max;
    cfg.alpha_per_octave = a.alpha_per_octave;
    cfg.ell_points = a.ell_points;
    cfg.threads = c.threads;
    rep.inputs() = {{"N", a.N},
                    {"p", to_string(params.p())},
                    {"alpha_max", a.alpha_max},
                    {"alpha_per_octave", a.alpha_per_octave},
                    {"ell_points", a.ell_points},
                    {"r0", a.r0 ? json(*a.r0) : json("auto")},
                    {"strict", a.strict}};
    progress(c, "enumerating N=" + std::to_string(a.N) + " p=" + to_string(params.p()));
    const auto out = enumerate_solutions(params, cfg);
    progress(c, "enumeration done: " + std::to_string(out.records.size()) + " records");

    auto& res = rep.results();
    res["r0"] = out.r0;
    json scores = json::array();
    for (auto [r, s] : out.r0_scores) scores.push_back({{"r0", r}, {"score", s}});
    res["r0_scores"] = scores;
    json records = json::array();
    bool two_sided = true, roundtrip = true;
    for (const auto& r : out.records) {
        json j = {{"alpha", r.alpha},
                  {"constant", r.constant},
                  {"zeta", r.zeta},
                  {"slope", r.slope},
                  {"residual", r.residual},
                  {"alpha_tolerance", r.alpha_tolerance},
                  {"two_sided_error", r.two_sided_error},
                  {"ell", finite_or_null(r.ell)},
                  {"ell_fit", finite_or_null(r.ell_fit)},
                  {"ell_roundtrip_error", finite_or_null(r.ell_roundtrip_error)},
                  {"note", r.note}};
        records.push_back(j);
        if (!r.constant) {
            two_sided &= r.two_sided_error <= cfg.two_sided_tol;
            if (std::isfinite(r.ell_fit)) roundtrip &= r.ell_roundtrip_error <= cfg.ell_roundtrip_tol;
        }
    }
    res["records"] = records;
    json unresolved = json::array();
    for (const auto& u : out.unresolved)
        unresolved.push_back({{"alpha_lo", u.alpha_lo}, {"alpha_hi", u.alpha_hi}, {"reason", u.reason}});
    res["unresolved"] = unresolved;
    res["F_failures"] = out.F.failures.size();
    res["G_failures"] = out.G.failures.size();

    rep.check("constant solution listed first", !out.records.empty() && out.records[0].constant);
    rep.check("two-sided match of every record", two_sided);
    rep.check("ell round trip of every fitted record", roundtrip);
    if (classify_regime(params) == Regime::AtMostSobolev)
        rep.check("only kappa for p <= p_S", out.records.size() == 1);
    if (a.strict) rep.check("no unresolved windows", out.unresolved.empty(), std::to_string(out.unresolved.size()));

    if (!a.curve_csv.empty()) {
        for (const auto* curve : {&out.F, &out.G}) {
            const bool is_f = curve == &out.F;
            auto t = curve_table(*curve);
            t.comments = {std::string(is_f ? "F" : "G") + " curve at r0=" + fmt("%.17g", out.r0) + ", N=" +
                              std::to_string(a.N) + " p=" + to_string(params.p()),
                          std::string("columns: ") + (is_f ? "alpha" : "ell") + ", w(r0), w_r(r0)"};
            const std::string path = a.curve_csv + (is_f ? "_F.csv" : "_G.csv");
            write_csv(path, t);
            res[is_f ? "csv_F" : "csv_G"] = path;
        }
    }
}

// spectrum --------------------------------------------------------------------

struct SpectrumArgs {
    int N = 0;
    std::string p;
    int j_max = 5;
    bool oracle = false;
    bool zero_mode = false;
    std::optional<double> fpp_r0;
};

void run_spectrum(const SpectrumArgs& a, cli::RunReport& rep) {
    const ProblemParams params(a.N, parse_rational(a.p));
    rep.inputs() = {{"N", a.N},           {"p", to_string(params.p())}, {"j_max", a.j_max},
                    {"oracle", a.oracle}, {"zero_mode", a.zero_mode}};
    const auto s = compute_spectrum(params, a.j_max);
    auto& res = rep.results();
    res["V"] = to_string(s.V);
    res["discriminant"] = to_string(s.discriminant);
    res["beta"] = surd_json(s.beta);
    res["beta_minus"] = surd_json(s.beta_minus);
    res["zero_eigenvalue_index"] = s.zero_eig ? json(*s.zero_eig) : json(nullptr);
    json eig = json::array();
    bool zeros_ok = true;
    double worst = 0;
    for (int j = 0; j <= a.j_max; ++j) {
        const EigenFn psi(s, j);
        const int zeros = psi.count_zeros(50);
        double residual = 0;
        for (int i = 0; i <= 200; ++i) residual = std::max(residual, psi.relative_residual(0.1 * std::pow(100.0, i / 200.0)));
        zeros_ok &= zeros == j;
        worst = std::max(worst, residual);
        eig.push_back({{"j", j},
                       {"lambda", surd_json(s.lambda[j])},
                       {"zeros", zeros},
                       {"max_relative_residual", residual},
                       {"large_r_exponent", psi.large_r_exponent()}});
    }
    res["eigenpairs"] = eig;
    rep.check("psi_j has j zeros", zeros_ok);
    rep.check("eigen-equation residual on [0.1, 10]", worst <= 1e-8, fmt("max %.3g", worst));

    const auto env = classify_envelope(params);
    res["envelope"] = {{"exponent", surd_json(env.exponent)}, {"divergent", env.divergent}};
    if (a.fpp_r0) {
        const auto lim = f_double_prime_limit(params, *a.fpp_r0);
        res["fpp_limit"] = {{"r0", *a.fpp_r0},
                            {"value", lim.value ? json(*lim.value) : json(nullptr)},
                            {"error", lim.error}};
    }
    if (a.oracle) {
        const int count = std::min(a.j_max + 1, 4);
        const auto ev = discretized_eigenvalues(params, count);
        double err = 0;
        for (int j = 0; j < count; ++j) err = std::max(err, std::abs(ev[j] - s.lambda_value[j]));
        res["oracle_eigenvalues"] = ev;
        rep.check("discretized operator agrees", err <= 1e-3, fmt("max |dlambda| %.3g", err));
    }
    if (a.zero_mode) {
        const auto z = psi1_psi2_lambda0(params);
        res["zero_mode"] = {{"verdict", to_string(z.verdict)},
                            {"growth_share", z.growth_share},
                            {"growth_share_half", z.growth_share_half},
                            {"loglog_slope", z.loglog_slope},
                            {"wronskian_drift", z.wronskian_drift}};
        const auto expected = s.zero_eig ? ZeroModeTest::Verdict::DecaysLikeSingular : ZeroModeTest::Verdict::Grows;
        rep.check("zero-mode test matches the exact spectrum", z.verdict == expected, to_string(z.verdict));
    }
}

// laguerre --------------------------------------------------------------------

struct LaguerreArgs {
    int j = 0;
    std::string B;
    bool coeffs = false;
    bool verify = false;
};

void run_laguerre(const LaguerreArgs& a, cli::RunReport& rep) {
    rep.inputs() = {{"j", a.j}, {"coeffs", a.coeffs}, {"verify", a.verify}};
    if (a.j < 0 || a.j > 12) throw std::invalid_argument("j must be in 0..12");
    auto& res = rep.results();
    const std::string name = "Q_" + std::to_string(a.j);
    const auto Q = Q_symbolic(a.j);
    rep.check("moment and S-assembly routes agree", true);
    res[name + "(B)"] = Q.to_string();
    if (a.coeffs) {
        json cs = json::array();
        for (const auto& c : Q.coefficients()) cs.push_back(to_string(c));
        res["coefficients"] = cs;
    }
    std::optional<Rational> B;
    if (!a.B.empty()) {
        B = parse_rational(a.B);
        rep.inputs()["B"] = to_string(*B);
        res[name + "(" + to_string(*B) + ")"] = to_string(Q(*B));
    }
    if (!a.verify) return;
    rep.check("coefficients positive", Q.all_coefficients_positive());
    bool lag2 = true;
    for (int k2 = 0; k2 <= a.j; ++k2) lag2 &= S_symbolic(a.j, 0, k2) == S_closed_form_k1_zero(a.j, k2);
    rep.check("S(j, 0, k2, B) closed form", lag2);
    bool rec = true;
    for (int i = 0; i <= a.j; ++i) rec &= recurrence_holds(a.j, i);
    rep.check("Laguerre recurrence", rec);
    if (B && *B > 0) {
        const auto q = Q_quadrature(a.j, *B);
        const double exact = to_double(Q(*B));
        const double rel = std::abs(q.value - exact) / std::abs(exact);
        res["quadrature"] = {{"value", q.value}, {"error_bound", q.error_bound}, {"nodes", q.nodes}};
        rep.check("quadrature matches symbolic value", rel <= 1e-10, fmt("relative difference %.3g", rel));
    }
}

// verify ----------------------------------------------------------------------

void run_verify(const std::vector<int>& ids_in, const Common& c, cli::RunReport& rep, json& timing) {
    std::vector<int> ids = ids_in;
    if (ids.empty())
        for (int i = 1; i <= acceptance_criterion_count; ++i) ids.push_back(i);
    rep.inputs()["criteria"] = ids;
    json list = json::array();
    AcceptanceOptions opt;
    opt.threads = c.threads;
    for (int id : ids) {
        progress(c, "criterion " + std::to_string(id));
        const auto r = run_criterion(id, opt);
        progress(c, format_result(r, false));
        list.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"details", r.details}});
        timing[std::to_string(id)] = {{"seconds", r.seconds}, {"limit", r.time_limit}};
        rep.check("criterion " + std::to_string(id) + ": " + r.title, r.passed);
    }
    rep.results()["criteria"] = list;
}

int env_threads() {
    if (const char* t = std::getenv("SELFSIM_THREADS")) return std::max(1, std::atoi(t));
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial self-similar profiles of u_t = Laplacian(u) + u^p"};
    app.require_subcommand(1);
    Common common;
    common.threads = env_threads();
    app.add_flag("--json", common.json_out, "Print the report as JSON");
    app.add_flag("-q,--quiet", common.quiet, "No progress messages on stderr");
    app.add_option("--threads", common.threads, "Worker threads (default: SELFSIM_THREADS or 1)")
        ->check(CLI::PositiveNumber);

    auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--json", common.json_out, "Print the report as JSON");
        sub->add_flag("-q,--quiet", common.quiet, "No progress messages on stderr");
        sub->add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
    };

    ExponentsArgs ex;
    auto* s_ex = app.add_subcommand("exponents", "Critical exponents of a dimension");
    s_ex->add_option("--N", ex.N, "Dimension")->required()->check(CLI::PositiveNumber);
    s_ex->add_option("--p", ex.p, "Exponent (rational or decimal)");
    add_common(s_ex);

    ShootArgs sh;
    auto* s_sh = app.add_subcommand("shoot", "Single shot from the origin or from infinity");
    s_sh->add_option("--N", sh.N, "Dimension")->required()->check(CLI::PositiveNumber);
    s_sh->add_option("--p", sh.p, "Exponent")->required();
    auto* o_alpha = s_sh->add_option("--alpha", sh.alpha, "w(0) for a shot from the origin");
    auto* o_ell = s_sh->add_option("--ell", sh.ell, "Limit of r^(2/(p-1)) w for a shot from infinity");
    o_alpha->excludes(o_ell);
    s_sh->add_option("--r-min", sh.r_min, "Inner end of a shot from infinity")->capture_default_str();
    s_sh->add_option("--r-max", sh.r_max, "Window end (origin) or plot end (infinity)")->capture_default_str();
    s_sh->add_option("--samples", sh.samples, "CSV rows")->capture_default_str()->check(CLI::Range(2, 10000000));
    s_sh->add_flag("--log-spaced", sh.log_spaced, "Log-spaced CSV radii");
    s_sh->add_option("--csv", sh.csv, "Write r, w, w_r to this file");
    add_common(s_sh);

    EnumerateArgs en;
    auto* s_en = app.add_subcommand("enumerate", "Enumerate positive solutions by curve matching");
    s_en->add_option("--N", en.N, "Dimension")->required()->check(CLI::PositiveNumber);
    s_en->add_option("--p", en.p, "Exponent")->required();
    s_en->add_option("--r0", en.r0, "Matching radius (default: chosen automatically)");
    s_en->add_option("--alpha-max", en.alpha_max, "Largest alpha")->capture_default_str();
    s_en->add_option("--alpha-per-octave", en.alpha_per_octave, "alpha grid density")->capture_default_str()
        ->check(CLI::PositiveNumber);
    s_en->add_option("--ell-points", en.ell_points, "ell grid size")->capture_default_str()->check(CLI::PositiveNumber);
    s_en->add_option("--curve-csv", en.curve_csv, "Write <prefix>_F.csv and <prefix>_G.csv");
    s_en->add_flag("--strict", en.strict, "Unresolved windows make the run fail");
    add_common(s_en);

    SpectrumArgs sp;
    auto* s_sp = app.add_subcommand("spectrum", "Linearization at the singular solution");
    s_sp->add_option("--N", sp.N, "Dimension")->required()->check(CLI::PositiveNumber);
    s_sp->add_option("--p", sp.p, "Exponent")->required();
    s_sp->add_option("--j-max", sp.j_max, "Highest eigenvalue index")->capture_default_str()->check(CLI::Range(0, 40));
    s_sp->add_flag("--oracle", sp.oracle, "Compare with the discretized operator");
    s_sp->add_flag("--zero-mode", sp.zero_mode, "Integrate psi_1 at lambda = 0 and classify its growth");
    s_sp->add_option("--fpp-limit", sp.fpp_r0, "Limit of F'' at this matching radius");
    add_common(s_sp);

    LaguerreArgs lg;
    auto* s_lg = app.add_subcommand("laguerre", "Integrals of Laguerre polynomials");
    s_lg->add_option("--j", lg.j, "Index")->required();
    s_lg->add_option("--B", lg.B, "Evaluate at this rational B");
    s_lg->add_flag("--coeffs", lg.coeffs, "List the coefficients of Q_j");
    s_lg->add_flag("--verify", lg.verify, "Check the identities for this j");
    add_common(s_lg);

    std::vector<int> criteria;
    auto* s_vf = app.add_subcommand("verify", "Run the acceptance criteria");
    s_vf->add_option("--criteria", criteria, "Criterion ids (default: all)")->delimiter(',')->check(CLI::Range(1, 10));
    add_common(s_vf);

    CLI11_PARSE(app, argc, argv);

    const auto t0 = std::chrono::steady_clock::now();
    CLI::App* sub = app.get_subcommands().front();
    cli::RunReport rep(sub->get_name());
    json timing = json::object();
    try {
        if (sub == s_ex) {
            run_exponents(ex, rep);
        } else if (sub == s_sh) {
            if (!sh.alpha && !sh.ell) throw CLI::RequiredError("--alpha or --ell");
            run_shoot(sh, rep);
        } else if (sub == s_en) {
            run_enumerate(en, common, rep);
        } else if (sub == s_sp) {
            run_spectrum(sp, rep);
        } else if (sub == s_lg) {
            run_laguerre(lg, rep);
        } else {
            run_verify(criteria, common, rep, timing);
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        rep.error(sub->get_name(), e.what());
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json doc = rep.document(wall);
    if (!timing.empty()) doc["timing"] = timing;
    if (common.json_out) {
        std::cout << cli::dump_json(doc, 2) << '\n';
    } else {
        std::cout << cli::table_text(doc);
    }
    return rep.all_passed() ? 0 : 1;
}
