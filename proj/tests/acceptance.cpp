// Acceptance suite: end-to-end checks of the toolkit's headline claims, one
// printed line per criterion. Exits nonzero if any criterion fails.
//
// Usage: acceptance [configs_dir] [out_dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "stretchlab/diagnostics.hpp"
#include "stretchlab/ensemble.hpp"
#include "stretchlab/errors.hpp"
#include "stretchlab/exact_solution.hpp"
#include "stretchlab/flow.hpp"
#include "stretchlab/runner.hpp"
#include "stretchlab/scenario.hpp"
#include "stretchlab/svg.hpp"
#include "stretchlab/transport.hpp"

using namespace stretchlab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void record(int criterion, const std::string& label, bool pass,
            const std::string& detail, double seconds) {
    std::printf("[%s] criterion %d: %s (%s) [%.1f s]\n", pass ? "PASS" : "FAIL",
                criterion, label.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void run_criterion(int criterion, const std::string& label,
                   const std::function<std::pair<bool, std::string>()>& body) {
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        const auto [ok, msg] = body();
        pass = ok;
        detail = msg;
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    record(criterion, label, pass, detail, secs);
}

std::string fmt(const char* spec, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), spec, a, b);
    return buf;
}

// ---- criterion 1: pullback vs closed form on a resolvable annulus ----------

std::pair<bool, std::string> oracle_equivalence() {
    const InitialField b0 = preset_initial_field("constant_ex");
    const BrownianPath path = sample_brownian(1, 1e-4, 10000);
    double worst = 0.0;
    for (double alpha : {0.2, 0.5, 0.8}) {
        const HolderRotationField field(alpha);
        const ExactSolution exact(alpha, b0);
        const AnnulusGrid grid{0.2, 0.9, 10, 16, 0.0, true};  // 160 points
        const auto samples = reconstruct_grid(b0, field, path, 0.0, 1.0, grid);
        for (const FieldSample& s : samples) {
            if (!s.ok) return {false, "skipped point at alpha " + std::to_string(alpha)};
            const Vec3 truth = exact.at(1.0, s.x);
            worst = std::max(worst, (s.B - truth).norm() / truth.norm());
        }
    }
    return {worst <= 1e-3, fmt("max rel err %.3g <= %.0e", worst, 1e-3)};
}

// ---- criterion 2: blow-up exponent ------------------------------------------

std::pair<bool, std::string> blowup_exponent() {
    const InitialField b0 = preset_initial_field("constant_ex");
    std::string detail;
    bool ok = true;
    for (double alpha : {0.2, 0.5}) {
        const ExactSolution exact(alpha, b0);
        const AnnulusGrid grid{1e-3, 1e-1, 9, 32, 0.0, true};
        std::vector<std::pair<double, double>> data;
        for (double r : grid.radii()) {
            double sup_btheta = 0.0;
            for (int j = 0; j < grid.n_theta; ++j) {
                const double th = 2.0 * M_PI * j / grid.n_theta;
                sup_btheta = std::max(
                    sup_btheta, std::abs(exact.at_cyl(1.0, {r, th, 0.0}).theta_comp));
            }
            data.push_back({r, sup_btheta});
        }
        const PowerLawFit fit = fit_blowup_exponent(data);
        const double err = std::abs(fit.slope - (alpha - 1.0));
        ok = ok && err <= 0.05;
        if (!detail.empty()) detail += ", ";
        detail += fmt("alpha %.1f slope err %.3f", alpha, err);
    }
    return {ok, detail + " (tol 0.05)"};
}

// ---- criterion 3: deterministic blow-up vs noisy suppression ----------------

std::pair<bool, std::string> noise_suppression() {
    Scenario s;
    s.alpha = 0.2;
    s.sigma = 0.1;
    s.T = 1.0;
    s.dt = 1e-4;
    s.seed = 2024;
    s.experiment = Experiment::ensemble;
    s.r_min = 1e-4;
    s.r_max = 1e-1;
    s.n_r = 6;
    s.n_theta = 8;
    s.replicates = 256;

    const InitialField b0 = preset_initial_field("constant_ex");
    const ExactSolution exact(s.alpha, b0);
    const AnnulusGrid grid{s.r_min, s.r_max, s.n_r, s.n_theta, 0.0, true};
    const StretchReport det = stretch_supremum(exact_reconstructor(exact), s.T, grid);

    EnsembleSpec spec;
    spec.n_replicates = s.replicates;
    spec.base_seed = s.seed;
    const EnsembleStats stats = run_ensemble(spec, ensemble_metric("stretch_supremum", s));
    const double ratio = suppression_ratio(det.sup_B, stats);

    const bool ok = det.sup_B >= 1e3 && ratio >= 20.0;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "det sup %.1f >= 1e3, median %.2f, ratio %.1f >= 20 (%zu/%d ok)",
                  det.sup_B, stats.median, ratio, stats.values.size(), s.replicates);
    return {ok, buf};
}

// ---- criterion 4: measure preservation ---------------------------------------

std::pair<bool, std::string> measure_preservation() {
    const HolderRotationField field(0.8);
    std::mt19937_64 gen(1717);
    std::uniform_real_distribution<double> ur(0.05, 2.0), ua(0.0, 2.0 * M_PI);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double r = ur(gen), th = ua(gen);
        const Vec3 x0{r * std::cos(th), r * std::sin(th), 0.0};
        const double sigma = (i % 2 == 0) ? 0.0 : 0.1;
        const BrownianPath path = sample_brownian(40000u + i, 1e-4, 10000);
        const auto hist =
            flow_jacobian(field, x0, path, sigma, JacobianMethod::variational);
        worst = std::max(worst, std::abs(det3(hist.back()) - 1.0));
    }
    return {worst <= 1e-3, fmt("max |det-1| %.3g <= %.0e", worst, 1e-3)};
}

// ---- criterion 5: weak-form identity ----------------------------------------

std::pair<bool, std::string> weak_form_identity() {
    const InitialField b0 = preset_initial_field("constant_ex");
    GaussianBump phi;
    phi.center = {0.5, 0.0, 0.0};
    phi.width = 0.1;

    // deterministic balance at dt = 1e-4
    const HolderRotationField field(0.5);
    const BrownianPath det_path = sample_brownian(1, 1e-4, 5000);
    WeakFormSpec det_spec;
    det_spec.space_n = 25;
    det_spec.time_nodes = 10;
    const WeakFormResult det = weak_form_residual(
        history_from_pullback(b0, field, det_path, 0.0), phi, field, det_path, 0.0,
        0.5, det_spec);
    const bool det_ok = det.scaled() <= 1e-2;

    // stochastic balance: the residual's ensemble mean must vanish
    WeakFormSpec mc_spec;
    mc_spec.space_n = 10;
    mc_spec.hermite = true;
    mc_spec.time_nodes = 20;
    const int n_seeds = 64;
    std::vector<double> residuals(n_seeds);
    for (int i = 0; i < n_seeds; ++i) {
        const BrownianPath path = sample_brownian(split_seed(515, i), 1e-3, 500);
        const WeakFormResult res = weak_form_residual(
            history_from_pullback(b0, field, path, 0.1), phi, field, path, 0.1, 0.5,
            mc_spec);
        residuals[i] = res.residual / res.scale;
    }
    double mean = 0.0;
    for (double r : residuals) mean += r;
    mean /= n_seeds;
    double var = 0.0;
    for (double r : residuals) var += (r - mean) * (r - mean);
    const double se = std::sqrt(var / (n_seeds - 1) / n_seeds);
    const bool mc_ok = std::abs(mean) <= 2.0 * se;

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "sigma=0 scaled residual %.3g <= 1e-2; sigma=0.1 |mean| %.3g <= 2 SE %.3g",
                  det.scaled(), std::abs(mean), 2.0 * se);
    return {det_ok && mc_ok, buf};
}

// ---- criterion 6: figure suite ----------------------------------------------

std::pair<bool, std::string> figure_suite(const std::string& configs,
                                          const std::string& out_root) {
    std::vector<std::string> svgs;
    bool fig3_exhausted = false;
    double fig4_arc = -1.0;
    for (const char* name : {"fig1", "fig2", "fig3", "fig4"}) {
        const Scenario s = parse_scenario(configs + "/" + name + ".cfg");
        const std::string dir = out_root + "/" + name;
        run_scenario(s, dir);
        const std::string svg =
            dir + "/" + (s.experiment == Experiment::line ? "line.svg" : "trajectories.svg");
        if (!fs::exists(svg)) return {false, std::string("missing ") + svg};
        svgs.push_back(svg);
        if (std::string(name) == "fig3" || std::string(name) == "fig4") {
            LineEvolveOptions opts;
            opts.dt = s.dt;
            opts.refine_len = s.refine_len;
            opts.vertex_budget = s.vertex_budget;
            opts.throw_on_budget = false;
            const LineEvolution ev = evolve_line(HolderRotationField(s.alpha, s.gamma),
                                                 s.sigma, s.seed, s.snapshots,
                                                 s.line_from, s.line_to, opts);
            if (std::string(name) == "fig3") fig3_exhausted = ev.budget_exhausted;
            if (std::string(name) == "fig4") {
                if (ev.budget_exhausted) return {false, "fig4 exhausted its budget"};
                fig4_arc = ev.snapshots.back().arc_length();
                opts.vertex_budget = 2 * s.vertex_budget;
                const LineEvolution ev2 =
                    evolve_line(HolderRotationField(s.alpha, s.gamma), s.sigma, s.seed,
                                s.snapshots, s.line_from, s.line_to, opts);
                const double arc2 = ev2.snapshots.back().arc_length();
                if (std::abs(arc2 - fig4_arc) > 0.05 * fig4_arc) {
                    return {false, fmt("fig4 arc unstable: %.4f vs %.4f", fig4_arc, arc2)};
                }
            }
        }
    }

    // isometry proxy: the rigid rotation keeps the line's arc length fixed
    LineEvolveOptions iso;
    iso.dt = 1e-3;
    const LineEvolution rigid = evolve_line(HolderRotationField(1.0), 0.0, 7,
                                            {0.25, 0.5, 0.75, 1.0}, {-1, 0, 0},
                                            {1, 0, 0}, iso);
    double arc_dev = 0.0;
    for (const Polyline& pl : rigid.snapshots) {
        arc_dev = std::max(arc_dev, std::abs(pl.arc_length() - 2.0));
    }

    const bool ok = svgs.size() == 4 && fig3_exhausted && arc_dev <= 1e-6;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "4 SVGs, rigid arc dev %.2g <= 1e-6, fig3 budget exhausted %s, "
                  "fig4 arc %.3f stable to 5%%",
                  arc_dev, fig3_exhausted ? "yes" : "NO", fig4_arc);
    return {ok, buf};
}

// ---- criterion 7: module invariant pack --------------------------------------

std::pair<bool, std::string> invariant_pack() {
    std::vector<std::string> failures;

    {  // adjugate identity
        std::mt19937_64 gen(8);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            Mat3 a;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) a(r, c) = u(gen);
            worst = std::max(
                worst, (a * adjugate(a) - Mat3::identity() * det3(a)).norm_inf());
        }
        if (worst > 1e-12) failures.push_back("adjugate identity");
    }
    {  // cylindrical round trips
        std::mt19937_64 gen(9);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        double worst = 0.0;
        int done = 0;
        while (done < 1000) {
            const Vec3 p{u(gen), u(gen), u(gen)};
            if (p.radius() < 1e-3) continue;
            ++done;
            const Vec3 v{u(gen), u(gen), u(gen)};
            worst = std::max(worst, (from_cylindrical(to_cylindrical(p)) - p).norm());
            const CylVec cv = vector_to_cylindrical(p, v);
            worst = std::max(worst, std::abs(cv.norm() - v.norm()));
            worst = std::max(worst, (vector_from_cylindrical(p, cv) - v).norm());
        }
        if (worst > 1e-12) failures.push_back("cylindrical round trip");
    }
    {  // divergence-free presets (fourth-order stencils, h = 1e-4)
        std::mt19937_64 gen(10);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        const HolderRotationField f02(0.2), f05(0.5);
        const InitialField rotor = preset_initial_field("solid_rotor");
        auto div4 = [](const std::function<Vec3(const Vec3&)>& f, const Vec3& p) {
            const double h = 1e-4;
            double acc = 0.0;
            for (int axis = 0; axis < 3; ++axis) {
                Vec3 e;
                (axis == 0 ? e.x : axis == 1 ? e.y : e.z) = h;
                auto pick = [axis](const Vec3& v) {
                    return axis == 0 ? v.x : axis == 1 ? v.y : v.z;
                };
                acc += (-pick(f(p + 2.0 * e)) + 8.0 * pick(f(p + e)) -
                        8.0 * pick(f(p - e)) + pick(f(p - 2.0 * e))) /
                       (12.0 * h);
            }
            return acc;
        };
        double worst = 0.0;
        int done = 0;
        while (done < 300) {
            const Vec3 p{u(gen), u(gen), u(gen)};
            if (p.radius() < 0.01) continue;
            ++done;
            worst = std::max(worst, std::abs(div4(
                [&](const Vec3& q) { return f02.evaluate(0.0, q); }, p)));
            worst = std::max(worst, std::abs(div4(
                [&](const Vec3& q) { return f05.evaluate(0.0, q); }, p)));
            worst = std::max(worst, std::abs(div4(rotor.evaluate, p)));
        }
        if (worst > 1e-6) failures.push_back("divergence residual");
    }
    {  // Brownian statistics
        const BrownianPath p = sample_brownian(777, 0.01, 100000);
        double mean = 0.0, var = 0.0;
        for (const Vec3& dw : p.increments) mean += dw.x;
        mean /= static_cast<double>(p.n_steps);
        for (const Vec3& dw : p.increments) var += (dw.x - mean) * (dw.x - mean);
        var /= static_cast<double>(p.n_steps - 1);
        if (std::abs(mean) > 4.0 * std::sqrt(0.01 / 1e5) ||
            std::abs(var - 0.01) > 0.05 * 0.01) {
            failures.push_back("Brownian statistics");
        }
    }
    {  // inverse-flow round trip
        const HolderRotationField rigid(1.0);
        const std::size_t n = 2000;
        const BrownianPath path = sample_brownian(1, (M_PI / 2.0) / n, n);
        const Vec3 x =
            integrate_inverse_flow(rigid, {0.0, 1.0, 0.0}, path, 0.0, M_PI / 2.0);
        const FlowSample fwd = integrate_flow(rigid, x, path, 0.0);
        if ((fwd.trajectory.back() - Vec3{0.0, 1.0, 0.0}).norm() > 1e-6) {
            failures.push_back("inverse-flow round trip");
        }
    }
    {  // pushforward/pullback consistency
        const HolderRotationField f(0.5);
        const InitialField b0 = preset_initial_field("constant_ex");
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const BrownianPath path = sample_brownian(52000u + i, 1e-4, 5000);
            FlowOptions opts;
            opts.with_jacobian = true;
            const Vec3 x0{0.5 + 0.02 * i, 0.1, 0.0};
            const FlowSample flow = integrate_flow(f, x0, path, 0.1, opts);
            const FieldSample fwd = pushforward(b0, flow, 0.5);
            const Vec3 back = pullback_at(b0, f, path, 0.1, 0.5, fwd.x);
            worst = std::max(worst, (back - fwd.B).norm());
        }
        if (worst > 1e-3) failures.push_back("pushforward/pullback consistency");
    }
    {  // ensemble determinism under different schedules
        auto metric = [](std::uint64_t seed) {
            return 1.0 + 0.25 * standard_normals(seed, 1)[0];
        };
        EnsembleSpec a;
        a.n_replicates = 64;
        a.base_seed = 99;
        a.parallelism = 1;
        EnsembleSpec b = a;
        b.parallelism = 8;
        const EnsembleStats sa = run_ensemble(a, metric);
        const EnsembleStats sb = run_ensemble(b, metric);
        if (sa.values != sb.values || sa.median != sb.median) {
            failures.push_back("ensemble determinism");
        }
    }

    if (failures.empty()) return {true, "7/7 property groups hold"};
    std::string msg = "failing:";
    for (const auto& f : failures) msg += " " + f + ";";
    return {false, msg};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string configs = argc > 1 ? argv[1] : "../configs";
    const std::string out_root = argc > 2 ? argv[2] : "acceptance_out";
    fs::create_directories(out_root);

    run_criterion(1, "pullback matches the closed form on the annulus",
                  oracle_equivalence);
    run_criterion(2, "blow-up exponent fits alpha - 1", blowup_exponent);
    run_criterion(3, "noise suppresses the deterministic blow-up", noise_suppression);
    run_criterion(4, "flow Jacobians are volume preserving", measure_preservation);
    run_criterion(5, "weak-form identity balances", weak_form_identity);
    run_criterion(6, "figure suite reproduces the four panels",
                  [&] { return figure_suite(configs, out_root); });
    run_criterion(7, "module invariant pack", invariant_pack);

    if (g_failures == 0) {
        std::printf("acceptance: all 7 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return 1;
}
