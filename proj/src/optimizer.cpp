#include "heralded_fock/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "heralded_fock/wigner.hpp"

namespace hfock {

SampledModeFunction optimal_mode_zero_intensity(double t_c1, double t_c2, const TimeGrid& grid,
                                                double gamma) {
    std::vector<double> v(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid.time(k);
        v[k] = std::exp(-0.5 * gamma * std::abs(t - t_c1)) +
               std::exp(-0.5 * gamma * std::abs(t - t_c2));
    }
    return SampledModeFunction::from_shape(grid, std::move(v));
}

double two_photon_fidelity_for_mode(const OpoParams& params, const ClickTimes& clicks,
                                    const SampledModeFunction& signal) {
    if (clicks.size() != 2)
        throw std::invalid_argument("two_photon_fidelity_for_mode: exactly two clicks");
    const TimeGrid& grid = signal.grid();
    const SampledModeFunction t1 = trigger_top_hat(grid, clicks[0], grid.step());
    const SampledModeFunction t2 = trigger_top_hat(grid, clicks[1], grid.step());
    return fidelity_two_photon(assemble_covariance(params, t1, t2, signal));
}

namespace {

/// Basis of cusped exponentials exp(-s (gamma/2) |t - t_c|) at both click
/// times and several width scales s; the first two members reproduce the
/// zero-intensity optimum, the others let the peaks sharpen and the flanks
/// dip.
std::vector<std::vector<double>> make_basis(const ClickTimes& clicks, const TimeGrid& grid,
                                            double gamma, int basis_size) {
    static const double scales[] = {1.0, 2.0, 0.5, 3.0, 4.0, 0.25};
    const bool coincident = std::abs(clicks[1] - clicks[0]) < 0.5 * grid.step();
    std::vector<std::vector<double>> basis;
    for (double s : scales) {
        for (double tc : {clicks[0], clicks[1]}) {
            if (static_cast<int>(basis.size()) >= basis_size) return basis;
            std::vector<double> b(grid.size());
            for (std::size_t k = 0; k < grid.size(); ++k)
                b[k] = std::exp(-0.5 * s * gamma * std::abs(grid.time(k) - tc));
            basis.push_back(std::move(b));
            if (coincident) break; // duplicate columns are useless
        }
    }
    return basis;
}

struct Objective {
    const OpoParams& params;
    const ClickTimes& clicks;
    const TimeGrid& grid;
    const std::vector<std::vector<double>>& basis;

    double operator()(const std::vector<double>& a) const {
        std::vector<double> shape(grid.size(), 0.0);
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const double w = a[b];
            if (w == 0.0) continue;
            const auto& col = basis[b];
            for (std::size_t k = 0; k < shape.size(); ++k) shape[k] += w * col[k];
        }
        double n2 = 0.0;
        for (double v : shape) n2 += v * v;
        if (!(n2 * grid.step() > 1e-12)) return -1.0;
        SampledModeFunction f = SampledModeFunction::from_shape(grid, std::move(shape));
        return two_photon_fidelity_for_mode(params, clicks, f);
    }
};

struct SimplexOutcome {
    std::vector<double> best_point;
    double best_value;
    bool converged;
};

/// Nelder-Mead maximization (standard reflection/expansion/contraction).
SimplexOutcome nelder_mead(const Objective& obj, std::vector<double> start, int max_iters,
                           double tol) {
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> pts(dim + 1, start);
    std::vector<double> vals(dim + 1);
    for (std::size_t i = 0; i < dim; ++i)
        pts[i + 1][i] += (start[i] != 0.0 ? 0.2 * std::abs(start[i]) : 0.1);
    for (std::size_t i = 0; i <= dim; ++i) vals[i] = obj(pts[i]);

    const auto order = [&] {
        std::vector<std::size_t> idx(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return vals[a] > vals[b]; });
        std::vector<std::vector<double>> p2(dim + 1);
        std::vector<double> v2(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) {
            p2[i] = pts[idx[i]];
            v2[i] = vals[idx[i]];
        }
        pts.swap(p2);
        vals.swap(v2);
    };
    order();

    double best_seen = vals[0];
    int stale = 0;
    bool converged = false;
    for (int it = 0; it < max_iters; ++it) {
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += pts[i][d] / dim;

        const auto blend = [&](double coef) {
            std::vector<double> p(dim);
            for (std::size_t d = 0; d < dim; ++d)
                p[d] = centroid[d] + coef * (pts[dim][d] - centroid[d]);
            return p;
        };

        const std::vector<double> refl = blend(-1.0);
        const double frefl = obj(refl);
        if (frefl > vals[0]) {
            const std::vector<double> expd = blend(-2.0);
            const double fexpd = obj(expd);
            if (fexpd > frefl) {
                pts[dim] = expd;
                vals[dim] = fexpd;
            } else {
                pts[dim] = refl;
                vals[dim] = frefl;
            }
        } else if (frefl > vals[dim - 1]) {
            pts[dim] = refl;
            vals[dim] = frefl;
        } else {
            const std::vector<double> contr = blend(0.5);
            const double fcontr = obj(contr);
            if (fcontr > vals[dim]) {
                pts[dim] = contr;
                vals[dim] = fcontr;
            } else {
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t d = 0; d < dim; ++d)
                        pts[i][d] = pts[0][d] + 0.5 * (pts[i][d] - pts[0][d]);
                    vals[i] = obj(pts[i]);
                }
            }
        }
        order();

        if (vals[0] > best_seen + tol) {
            best_seen = vals[0];
            stale = 0;
        } else if (++stale >= 20) {
            converged = true;
            break;
        }
    }
    return {pts[0], vals[0], converged};
}

SampledModeFunction assemble_from_coeffs(const std::vector<std::vector<double>>& basis,
                                         const std::vector<double>& a, const TimeGrid& grid) {
    std::vector<double> shape(grid.size(), 0.0);
    for (std::size_t b = 0; b < basis.size(); ++b)
        for (std::size_t k = 0; k < shape.size(); ++k) shape[k] += a[b] * basis[b][k];
    return SampledModeFunction::from_shape(grid, std::move(shape));
}

SampledModeFunction canonical_sign(SampledModeFunction f, double t_c1) {
    if (f[f.grid().index_near(t_c1)] < 0.0) return f.negated();
    return f;
}

} // namespace

OptimizeResult optimize_mode(const OpoParams& params, const ClickTimes& clicks,
                             const OptimizerSettings& settings, std::optional<TimeGrid> grid_opt) {
    settings.validate();
    if (clicks.size() != 2) throw std::invalid_argument("optimize_mode: exactly two clicks");
    const TimeGrid grid =
        grid_opt ? *grid_opt : default_grid(clicks.front(), clicks.back(), params.gamma());

    const auto basis = make_basis(clicks, grid, params.gamma(), settings.basis_size);
    const std::size_t dim = basis.size();
    const Objective obj{params, clicks, grid, basis};

    std::vector<std::vector<double>> starts;
    {
        std::vector<double> a(dim, 0.0);
        a[0] = 1.0;
        if (dim > 1) a[1] = 1.0; // zero-intensity optimum g1 + g2
        starts.push_back(a);
    }
    {
        std::vector<double> a(dim, 0.0);
        a[0] = 1.0; // g1 alone
        starts.push_back(a);
    }
    {
        std::vector<double> a(dim, 0.05); // symmetric perturbation of everything
        a[0] = 1.0;
        if (dim > 1) a[1] = 1.0;
        starts.push_back(a);
    }
    while (static_cast<int>(starts.size()) > settings.restarts && starts.size() > 1)
        starts.pop_back();

    SimplexOutcome best{{}, -1.0, false};
    for (const auto& s : starts) {
        const SimplexOutcome out = nelder_mead(obj, s, settings.max_iters, settings.tol);
        if (out.best_value > best.best_value) best = out;
    }
    if (best.best_point.empty()) throw ConvergenceFailure("optimize_mode: all restarts failed");

    SampledModeFunction mode =
        canonical_sign(assemble_from_coeffs(basis, best.best_point, grid), clicks[0]);
    return {mode, best.best_value, best.converged};
}

OptimizeResult optimize_mode_per_sample(const OpoParams& params, const ClickTimes& clicks,
                                        const TimeGrid& grid, int max_steps) {
    if (clicks.size() != 2)
        throw std::invalid_argument("optimize_mode_per_sample: exactly two clicks");
    SampledModeFunction f =
        optimal_mode_zero_intensity(clicks[0], clicks[1], grid, params.gamma());
    double fval = two_photon_fidelity_for_mode(params, clicks, f);

    const double h = grid.step();
    double step_size = 0.5;
    for (int it = 0; it < max_steps && step_size > 1e-8; ++it) {
        // gradient of F2 via its dependence on (V15, V35, V55); the trigger
        // block does not depend on the signal mode
        const SampledModeFunction t1 = trigger_top_hat(grid, clicks[0], h);
        const SampledModeFunction t2 = trigger_top_hat(grid, clicks[1], h);
        const CovMatrix6 v0 = assemble_covariance(params, t1, t2, f);
        const double f0 = fidelity_two_photon(v0);

        const KernelSplit ker(params);
        const std::vector<double> u_mu = exp_smooth(grid, f.values(), ker.mu);
        const std::vector<double> u_la = exp_smooth(grid, f.values(), ker.lambda);
        const std::vector<double> s1_mu = exp_smooth(grid, t1.values(), ker.mu);
        const std::vector<double> s1_la = exp_smooth(grid, t1.values(), ker.lambda);
        const std::vector<double> s2_mu = exp_smooth(grid, t2.values(), ker.mu);
        const std::vector<double> s2_la = exp_smooth(grid, t2.values(), ker.lambda);

        // finite-difference sensitivities of the closed form to the three
        // signal-dependent covariance entries
        const auto fid_of = [&](double d15, double d35, double d55) {
            CovMatrix6::Mat6 m = v0.matrix();
            m(0, 4) = m(4, 0) = v0.v15() + d15;
            m(2, 4) = m(4, 2) = v0.v35() + d35;
            m(1, 5) = m(5, 1) = -(v0.v15() + d15);
            m(3, 5) = m(5, 3) = -(v0.v35() + d35);
            m(4, 4) = m(5, 5) = v0.v55() + d55;
            return fidelity_two_photon(CovMatrix6(m));
        };
        const double dv = 1e-7;
        const double dF15 = (fid_of(dv, 0, 0) - fid_of(-dv, 0, 0)) / (2 * dv);
        const double dF35 = (fid_of(0, dv, 0) - fid_of(0, -dv, 0)) / (2 * dv);
        const double dF55 = (fid_of(0, 0, dv) - fid_of(0, 0, -dv)) / (2 * dv);

        const double se = std::sqrt(params.eta_t() * params.eta_s());
        std::vector<double> grad(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double w = (k == 0 || k + 1 == grid.size()) ? 0.5 : 1.0;
            const double dv15 = 2.0 * se * (ker.p * s1_mu[k] + ker.q * s1_la[k]) * w * h;
            const double dv35 = 2.0 * se * (ker.p * s2_mu[k] + ker.q * s2_la[k]) * w * h;
            const double dv55 =
                4.0 * params.eta_s() * (ker.p * u_mu[k] - ker.q * u_la[k]) * w * h;
            grad[k] = dF15 * dv15 + dF35 * dv35 + dF55 * dv55;
        }
        // project out the radial component to stay on the unit sphere
        double gf = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) gf += grad[k] * f[k];
        gf *= h;
        double gnorm2 = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            grad[k] -= gf * f[k];
            gnorm2 += grad[k] * grad[k];
        }
        if (gnorm2 * h < 1e-24) break;

        bool improved = false;
        while (step_size > 1e-8) {
            std::vector<double> cand(grid.size());
            for (std::size_t k = 0; k < grid.size(); ++k) cand[k] = f[k] + step_size * grad[k];
            SampledModeFunction fc = SampledModeFunction::from_shape(grid, std::move(cand));
            const double fv = two_photon_fidelity_for_mode(params, clicks, fc);
            if (fv > f0) {
                f = fc;
                fval = fv;
                improved = true;
                break;
            }
            step_size *= 0.5;
        }
        if (!improved) break;
    }
    return {canonical_sign(f, clicks[0]), fval, true};
}

double fidelity_two_photon_low_intensity(double gamma_dt) {
    const double i12 = overlap(0.0, std::abs(gamma_dt), 1.0);
    return (1.0 + i12) * (1.0 + i12) / (2.0 * (1.0 + i12 * i12));
}

std::vector<FidelityCurvePoint> fidelity_curve(const OpoParams& params,
                                               const std::vector<double>& separations,
                                               bool use_optimal,
                                               const OptimizerSettings& settings) {
    std::vector<FidelityCurvePoint> out;
    out.reserve(separations.size());
    for (double gdt : separations) {
        const double dt = gdt / params.gamma();
        if (params.epsilon() == 0.0) {
            out.push_back({gdt, fidelity_two_photon_low_intensity(gdt)});
            continue;
        }
        const ClickTimes clicks{-0.5 * dt, 0.5 * dt};
        if (use_optimal) {
            out.push_back({gdt, optimize_mode(params, clicks, settings).fidelity});
        } else {
            const TimeGrid grid = default_grid(clicks.front(), clicks.back(), params.gamma());
            const SampledModeFunction f =
                optimal_mode_zero_intensity(clicks[0], clicks[1], grid, params.gamma());
            out.push_back({gdt, two_photon_fidelity_for_mode(params, clicks, f)});
        }
    }
    return out;
}

} // namespace hfock
