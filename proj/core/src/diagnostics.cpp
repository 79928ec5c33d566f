#include "stretchlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <stack>

#include "stretchlab/errors.hpp"
#include "stretchlab/flow.hpp"
#include "stretchlab/parallel.hpp"

namespace stretchlab {

FieldAt exact_reconstructor(const ExactSolution& exact) {
    return [exact](double t, const Vec3& x) { return exact.at(t, x); };
}

FieldAt pullback_reconstructor(const InitialField& b0, const VelocityField& field,
                               const BrownianPath& path, double sigma,
                               const PullbackOptions& opts) {
    const VelocityField* f = &field;
    const BrownianPath* p = &path;
    return [b0, f, p, sigma, opts](double t, const Vec3& x) {
        return pullback_at(b0, *f, *p, sigma, t, x, opts);
    };
}

std::vector<StretchReport> stretch_per_radius(const FieldAt& field_at, double t,
                                              const AnnulusGrid& grid) {
    const std::vector<double> radii = grid.radii();
    struct PointResult {
        double mag = -1.0;  // negative marks a skipped point
        Vec3 x;
    };
    std::vector<PointResult> results(radii.size() * grid.n_theta);
    parallel_for(results.size(), [&](std::size_t idx) {
        const std::size_t ri = idx / grid.n_theta;
        const std::size_t ti = idx % grid.n_theta;
        const double th = 2.0 * M_PI * static_cast<double>(ti) / grid.n_theta;
        const Vec3 x{radii[ri] * std::cos(th), radii[ri] * std::sin(th), grid.z};
        results[idx].x = x;
        try {
            results[idx].mag = field_at(t, x).norm();
        } catch (const Error&) {
            results[idx].mag = -1.0;
        }
    });

    std::vector<StretchReport> per_ring(radii.size());
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
        StretchReport& rep = per_ring[ri];
        rep.t = t;
        rep.r_min = rep.r_max = radii[ri];
        for (int ti = 0; ti < grid.n_theta; ++ti) {
            const PointResult& pr = results[ri * grid.n_theta + ti];
            if (pr.mag < 0.0) {
                ++rep.skipped;
                continue;
            }
            ++rep.samples;
            if (pr.mag > rep.sup_B) {
                rep.sup_B = pr.mag;
                rep.argmax = pr.x;
            }
        }
    }
    return per_ring;
}

StretchReport stretch_supremum(const FieldAt& field_at, double t,
                               const AnnulusGrid& grid) {
    const auto rings = stretch_per_radius(field_at, t, grid);
    StretchReport rep;
    rep.t = t;
    rep.r_min = grid.r_min;
    rep.r_max = grid.r_max;
    for (const StretchReport& ring : rings) {
        rep.samples += ring.samples;
        rep.skipped += ring.skipped;
        if (ring.samples > 0 && ring.sup_B > rep.sup_B) {
            rep.sup_B = ring.sup_B;
            rep.argmax = ring.argmax;
        }
    }
    return rep;
}

double Polyline::arc_length() const {
    double len = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        len += (vertices[i] - vertices[i - 1]).norm();
    }
    return len;
}

namespace {

struct LineVertex {
    double s;   // parameter in [0, 1] along the initial segment
    Vec3 pos;   // position at the current snapshot index
};

class LineAdvector {
  public:
    LineAdvector(const VelocityField& field, const BrownianPath& path, double sigma,
                 const Vec3& from, const Vec3& to)
        : field_(field), path_(path), sigma_(sigma), from_(from), to_(to) {}

    Vec3 advance(Vec3 x, std::size_t from_idx, std::size_t to_idx) const {
        const double dt = path_.dt;
        for (std::size_t k = from_idx; k < to_idx; ++k) {
            const double t = dt * static_cast<double>(k);
            x = (sigma_ == 0.0)
                    ? detail::rk4_step(field_, t, x, dt)
                    : detail::em_step(field_, t, x, dt, path_.increments[k], sigma_);
            if (!x.finite()) throw NonFiniteError("evolve_line: non-finite vertex");
        }
        return x;
    }

    Vec3 advect_from_zero(double s, std::size_t to_idx) const {
        return advance(from_ + s * (to_ - from_), 0, to_idx);
    }

  private:
    const VelocityField& field_;
    const BrownianPath& path_;
    double sigma_;
    Vec3 from_, to_;
};

bool segment_needs_split(const Vec3& a, const Vec3& mid, const Vec3& b,
                         double refine_len, double sagitta_tol, double turn_tol) {
    if ((b - a).norm() > refine_len) return true;
    if ((mid - 0.5 * (a + b)).norm() > sagitta_tol) return true;
    const Vec3 u = mid - a;
    const Vec3 v = b - mid;
    const double nu = u.norm(), nv = v.norm();
    if (nu < 1e-300 || nv < 1e-300) return false;
    const double cosang = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
    return std::acos(cosang) > turn_tol;
}

}  // namespace

LineEvolution evolve_line(const VelocityField& field, double sigma,
                          std::uint64_t seed, const std::vector<double>& t_snapshots,
                          const Vec3& from, const Vec3& to,
                          const LineEvolveOptions& opts) {
    if (t_snapshots.empty()) {
        throw ValidationError("evolve_line: need at least one snapshot time");
    }
    if ((to - from).norm() <= 0.0) {
        throw ValidationError("evolve_line: degenerate initial segment");
    }
    if (!(opts.refine_len > 0.0)) {
        throw ValidationError("evolve_line: refine_len must be > 0");
    }
    const double sagitta_tol =
        opts.sagitta_tol > 0.0 ? opts.sagitta_tol : opts.refine_len / 8.0;

    std::vector<std::size_t> snap_idx(t_snapshots.size());
    for (std::size_t i = 0; i < t_snapshots.size(); ++i) {
        const double kf = t_snapshots[i] / opts.dt;
        snap_idx[i] = static_cast<std::size_t>(std::llround(kf));
        if (std::abs(kf - std::round(kf)) > 1e-6 ||
            (i > 0 && snap_idx[i] <= snap_idx[i - 1])) {
            throw ValidationError(
                "evolve_line: snapshots must be ascending multiples of dt");
        }
    }

    const BrownianPath path = sample_brownian(seed, opts.dt, snap_idx.back());
    LineAdvector adv(field, path, sigma, from, to);

    std::list<LineVertex> line;
    const int n0 = std::max(2, opts.initial_vertices);
    for (int i = 0; i < n0; ++i) {
        const double s = static_cast<double>(i) / (n0 - 1);
        line.push_back({s, from + s * (to - from)});
    }

    LineEvolution out;
    std::size_t cur_idx = 0;
    for (std::size_t si = 0; si < snap_idx.size(); ++si) {
        for (LineVertex& v : line) v.pos = adv.advance(v.pos, cur_idx, snap_idx[si]);
        cur_idx = snap_idx[si];

        // Segment-local refinement: each segment is tested against its own
        // re-advected midpoint, so one pass over a worklist settles the line.
        std::stack<std::list<LineVertex>::iterator> work;
        for (auto it = line.begin(); std::next(it) != line.end(); ++it) work.push(it);
        while (!work.empty()) {
            auto a = work.top();
            work.pop();
            auto b = std::next(a);
            const double s_mid = 0.5 * (a->s + b->s);
            if (s_mid <= a->s || s_mid >= b->s) continue;  // parameter exhausted
            const Vec3 mid = adv.advect_from_zero(s_mid, cur_idx);
            if (!segment_needs_split(a->pos, mid, b->pos, opts.refine_len, sagitta_tol,
                                     opts.turn_tol)) {
                continue;
            }
            if (line.size() >= static_cast<std::size_t>(opts.vertex_budget)) {
                out.budget_exhausted = true;
                if (opts.throw_on_budget) {
                    throw VertexBudgetError(
                        "evolve_line: refinement demand exceeded the vertex budget of " +
                        std::to_string(opts.vertex_budget));
                }
                break;
            }
            auto m = line.insert(b, {s_mid, mid});
            work.push(a);
            work.push(m);
        }

        Polyline snap;
        snap.t = t_snapshots[si];
        snap.vertices.reserve(line.size());
        for (const LineVertex& v : line) snap.vertices.push_back(v.pos);
        out.snapshots.push_back(std::move(snap));
    }
    out.vertices_used = static_cast<int>(line.size());
    return out;
}

PowerLawFit fit_blowup_exponent(const std::vector<std::pair<double, double>>& r_sup) {
    if (r_sup.size() < 5) {
        throw InsufficientSpanError("fit_blowup_exponent: need at least 5 samples");
    }
    double r_lo = r_sup.front().first, r_hi = r_sup.front().first;
    for (const auto& [r, s] : r_sup) {
        if (!(r > 0.0 && s > 0.0)) {
            throw ValidationError("fit_blowup_exponent: samples must be positive");
        }
        r_lo = std::min(r_lo, r);
        r_hi = std::max(r_hi, r);
    }
    if (r_hi / r_lo < 100.0) {
        throw InsufficientSpanError(
            "fit_blowup_exponent: samples must span at least two decades of r");
    }
    const double n = static_cast<double>(r_sup.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [r, s] : r_sup) {
        const double x = std::log(r), y = std::log(s);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double y_mean = sy / n;
    for (const auto& [r, s] : r_sup) {
        const double y = std::log(s);
        const double fit = intercept + slope * std::log(r);
        ss_res += (y - fit) * (y - fit);
        ss_tot += (y - y_mean) * (y - y_mean);
    }
    PowerLawFit out;
    out.slope = slope;
    out.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return out;
}

double GaussianBump::envelope(const Vec3& x) const {
    const Vec3 d = x - center;
    return std::exp(-d.dot(d) / (2.0 * width * width));
}

Vec3 GaussianBump::phi(const Vec3& x) const { return amplitude * envelope(x); }

Mat3 GaussianBump::dphi(const Vec3& x) const {
    const double g = envelope(x);
    const Vec3 d = x - center;
    const double w2 = width * width;
    Mat3 j;
    const double u[3] = {amplitude.x, amplitude.y, amplitude.z};
    const double dc[3] = {d.x, d.y, d.z};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) j(i, k) = -u[i] * dc[k] / w2 * g;
    return j;
}

Vec3 GaussianBump::laplacian(const Vec3& x) const {
    const double g = envelope(x);
    const Vec3 d = x - center;
    const double w2 = width * width;
    return amplitude * ((d.dot(d) / (w2 * w2) - 3.0 / w2) * g);
}

namespace {

// Composite Simpson weights for n (odd) points over an interval of step h.
std::vector<double> simpson_weights(int n, double h) {
    std::vector<double> w(n, 1.0);
    for (int i = 1; i + 1 < n; ++i) w[i] = (i % 2 == 1) ? 4.0 : 2.0;
    for (double& x : w) x *= h / 3.0;
    return w;
}

// Gauss-Hermite nodes and weights for the weight e^{-x^2} (Newton iteration on
// the orthonormal Hermite recurrence).
void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const double pim4 = 0.7511255444649425;  // pi^(-1/4)
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) -
                1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * x[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * x[1];
        } else {
            z = 2.0 * z - x[i - 2];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-14) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
}

struct SpaceGrid {
    std::vector<double> offset;  // per-axis offsets from the bump center
    std::vector<double> weight;  // per-axis quadrature weights
};

// The Gauss-Hermite weights absorb e^{+xi^2}, cancelling the Gaussian factor
// that every integrand of the weak identity carries; what remains is the
// smooth non-Gaussian part the rule is exact-ish for.
SpaceGrid make_space_grid(const GaussianBump& phi, int n, bool hermite) {
    SpaceGrid g;
    if (hermite) {
        std::vector<double> xi, wi;
        gauss_hermite(std::max(2, n), xi, wi);
        const double s = std::sqrt(2.0) * phi.width;
        g.offset.resize(xi.size());
        g.weight.resize(xi.size());
        for (std::size_t i = 0; i < xi.size(); ++i) {
            g.offset[i] = s * xi[i];
            g.weight[i] = s * wi[i] * std::exp(xi[i] * xi[i]);
        }
        return g;
    }
    int nn = n | 1;
    if (nn < 3) nn = 3;
    const double r_sup = phi.support_radius();
    const double h = 2.0 * r_sup / (nn - 1);
    g.weight = simpson_weights(nn, h);
    g.offset.resize(nn);
    for (int i = 0; i < nn; ++i) g.offset[i] = -r_sup + i * h;
    return g;
}

}  // namespace

WeakFormResult weak_form_residual(
    const std::function<std::vector<Vec3>(const Vec3&, const std::vector<std::size_t>&)>&
        field_history,
    const GaussianBump& phi, const VelocityField& v, const BrownianPath& path,
    double sigma, double t, const WeakFormSpec& spec) {
    const double kf = t / path.dt;
    const auto steps = static_cast<std::size_t>(std::llround(kf));
    if (std::abs(kf - std::round(kf)) > 1e-6 || steps > path.n_steps) {
        throw ValidationError("weak_form_residual: t is not on the path grid");
    }
    const int m = spec.time_nodes;
    if (m < 1 || steps % static_cast<std::size_t>(m) != 0) {
        throw ValidationError(
            "weak_form_residual: time_nodes must divide the step count of [0, t]");
    }
    std::vector<std::size_t> t_idx(m + 1);
    for (int j = 0; j <= m; ++j) t_idx[j] = steps / m * static_cast<std::size_t>(j);

    const SpaceGrid grid = make_space_grid(phi, spec.space_n, spec.hermite);
    const int n = static_cast<int>(grid.offset.size());
    const std::size_t n_pts = static_cast<std::size_t>(n) * n * n;
    // Per-point contributions, reduced in index order afterwards so the result
    // does not depend on the thread schedule. Layout per point:
    // [pair0, pairT, drift_0..m, lap_0..m, s0_0..m, s1_0..m, s2_0..m, maxB]
    const std::size_t row = 3 + 5 * static_cast<std::size_t>(m + 1);
    std::vector<double> contrib(n_pts * row, 0.0);

    const bool v_static = v.time_independent();
    parallel_for(n_pts, [&](std::size_t pi) {
        const int i = static_cast<int>(pi / (n * n));
        const int j = static_cast<int>((pi / n) % n);
        const int k = static_cast<int>(pi % n);
        const Vec3 q{phi.center.x + grid.offset[i], phi.center.y + grid.offset[j],
                     phi.center.z + grid.offset[k]};
        const double wq = grid.weight[i] * grid.weight[j] * grid.weight[k];
        const Vec3 phi_q = phi.phi(q);
        const Mat3 dphi_q = phi.dphi(q);
        const Mat3 dphi_a = dphi_q - dphi_q.transpose();
        const Vec3 lap_q = phi.laplacian(q);
        const Vec3 dphi_cols[3] = {{dphi_q(0, 0), dphi_q(1, 0), dphi_q(2, 0)},
                                   {dphi_q(0, 1), dphi_q(1, 1), dphi_q(2, 1)},
                                   {dphi_q(0, 2), dphi_q(1, 2), dphi_q(2, 2)}};

        const std::vector<Vec3> b_hist = field_history(q, t_idx);
        double* out = contrib.data() + pi * row;
        double max_b = 0.0;
        const Vec3 av_static = dphi_a * v.evaluate(0.0, q);
        for (int jj = 0; jj <= m; ++jj) {
            const Vec3& b = b_hist[static_cast<std::size_t>(jj)];
            max_b = std::max(max_b, b.norm());
            const Vec3 av =
                v_static ? av_static
                         : dphi_a * v.evaluate(path.dt * static_cast<double>(t_idx[jj]), q);
            out[2 + jj] = wq * av.dot(b);
            out[2 + (m + 1) + jj] = wq * lap_q.dot(b);
            for (int kk = 0; kk < 3; ++kk) {
                out[2 + (2 + kk) * (m + 1) + jj] = wq * dphi_cols[kk].dot(b);
            }
        }
        out[0] = wq * phi_q.dot(b_hist.front());
        out[1] = wq * phi_q.dot(b_hist.back());
        out[row - 1] = max_b;
    });

    // Ordered reduction.
    std::vector<double> totals(row - 1, 0.0);
    double max_b = 0.0;
    double l1_phi = 0.0;
    for (std::size_t pi = 0; pi < n_pts; ++pi) {
        const double* in = contrib.data() + pi * row;
        for (std::size_t c = 0; c + 1 < row; ++c) totals[c] += in[c];
        max_b = std::max(max_b, in[row - 1]);
        const int i = static_cast<int>(pi / (n * n));
        const int j = static_cast<int>((pi / n) % n);
        const int k = static_cast<int>(pi % n);
        const Vec3 q{phi.center.x + grid.offset[i], phi.center.y + grid.offset[j],
                     phi.center.z + grid.offset[k]};
        l1_phi += grid.weight[i] * grid.weight[j] * grid.weight[k] * phi.phi(q).norm();
    }

    const double dtau = t / m;
    auto trapezoid = [&](std::size_t offset) {
        double acc = 0.5 * (totals[offset] + totals[offset + m]);
        for (int jj = 1; jj < m; ++jj) acc += totals[offset + jj];
        return acc * dtau;
    };

    WeakFormResult res;
    res.pairing_0 = totals[0];
    res.pairing_t = totals[1];
    res.drift_term = trapezoid(2);
    res.laplace_term = 0.5 * sigma * sigma * trapezoid(2 + (m + 1));
    double ito = 0.0;
    for (int kk = 0; kk < 3; ++kk) {
        Vec3 w_prev = path.partial_sum(t_idx[0]);
        for (int jj = 0; jj < m; ++jj) {
            const Vec3 w_next = path.partial_sum(t_idx[jj + 1]);
            const Vec3 dw = w_next - w_prev;
            const double dw_k = (kk == 0) ? dw.x : (kk == 1) ? dw.y : dw.z;
            ito += totals[2 + (2 + kk) * (m + 1) + jj] * dw_k;
            w_prev = w_next;
        }
    }
    res.ito_term = sigma * ito;
    res.residual = res.pairing_t - res.pairing_0 - res.drift_term - res.ito_term -
                   res.laplace_term;
    res.scale = l1_phi * std::max(1.0, max_b);

    if (spec.check_resolution) {
        WeakFormSpec finer = spec;
        finer.check_resolution = false;
        finer.space_n = spec.hermite ? 2 * n : 2 * n - 1;
        const WeakFormResult fine =
            weak_form_residual(field_history, phi, v, path, sigma, t, finer);
        const double ref = std::max({std::abs(res.residual), std::abs(fine.residual),
                                     1e-9 * res.scale});
        if (std::abs(res.residual - fine.residual) > 0.2 * ref) {
            throw QuadratureError(
                "weak_form_residual: residual moved more than 20% under grid doubling");
        }
    }
    return res;
}

std::function<std::vector<Vec3>(const Vec3&, const std::vector<std::size_t>&)>
history_from_pullback(const InitialField& b0, const VelocityField& field,
                      const BrownianPath& path, double sigma,
                      const PullbackOptions& opts) {
    const VelocityField* f = &field;
    const BrownianPath* p = &path;
    return [b0, f, p, sigma, opts](const Vec3& x, const std::vector<std::size_t>& idx) {
        return pullback_history(b0, *f, *p, sigma, idx, x, opts);
    };
}

std::function<std::vector<Vec3>(const Vec3&, const std::vector<std::size_t>&)>
history_from_exact(const ExactSolution& exact, double dt) {
    return [exact, dt](const Vec3& x, const std::vector<std::size_t>& idx) {
        std::vector<Vec3> out;
        out.reserve(idx.size());
        for (std::size_t i : idx) out.push_back(exact.at(dt * static_cast<double>(i), x));
        return out;
    };
}

double divergence_residual(const std::vector<Vec3>& values, int n, double spacing) {
    if (n < 3 || values.size() != static_cast<std::size_t>(n) * n * n) {
        throw ValidationError("divergence_residual: values must be an n^3 lattice, n >= 3");
    }
    auto at = [&](int i, int j, int k) -> const Vec3& {
        return values[(static_cast<std::size_t>(i) * n + j) * n + k];
    };
    double worst = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        for (int j = 1; j + 1 < n; ++j) {
            for (int k = 1; k + 1 < n; ++k) {
                const double div = (at(i + 1, j, k).x - at(i - 1, j, k).x +
                                    at(i, j + 1, k).y - at(i, j - 1, k).y +
                                    at(i, j, k + 1).z - at(i, j, k - 1).z) /
                                   (2.0 * spacing);
                worst = std::max(worst, std::abs(div));
            }
        }
    }
    return worst;
}

std::vector<Vec3> sample_box(const FieldAt& field_at, double t, const BoxGrid& grid) {
    const std::vector<Vec3> pts = grid.points();
    std::vector<Vec3> values(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { values[i] = field_at(t, pts[i]); });
    return values;
}

}  // namespace stretchlab
