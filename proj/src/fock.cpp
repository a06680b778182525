#include "heralded_fock/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

namespace hfock {

double permanent(const Eigen::MatrixXd& m) {
    const auto n = static_cast<int>(m.rows());
    if (m.cols() != n) throw std::invalid_argument("permanent: matrix must be square");
    if (n == 0) return 1.0;
    if (n > 12)
        throw std::invalid_argument("permanent: n > 12 refused (cost 2^n n; use a smaller matrix)");

    // Ryser: perm = (-1)^n sum_{S != 0} (-1)^|S| prod_i sum_{j in S} a_ij,
    // visiting subsets in Gray order so each step updates one column.
    Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(n);
    double total = 0.0;
    std::uint32_t gray = 0;
    const std::uint32_t count = (1u << n) - 1u;
    for (std::uint32_t k = 1; k <= count; ++k) {
        const std::uint32_t next = k ^ (k >> 1);
        const std::uint32_t changed = next ^ gray;
        const int j = std::countr_zero(changed);
        if (next & changed)
            rowsum += m.col(j);
        else
            rowsum -= m.col(j);
        gray = next;
        const int bits = std::popcount(gray);
        double prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= rowsum[i];
        total += (bits % 2 == 0 ? prod : -prod);
    }
    return (n % 2 == 0) ? total : -total;
}

Eigen::MatrixXd gram_matrix(const ClickTimes& clicks, double gamma) {
    const auto n = static_cast<int>(clicks.size());
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = overlap(clicks[i], clicks[j], gamma);
    return g;
}

NPhotonState make_n_photon_state(const ClickTimes& clicks, double gamma) {
    Eigen::MatrixXd g = gram_matrix(clicks, gamma);
    const double p = permanent(g);
    return {clicks, gamma, std::move(g), p};
}

double fidelity_n(const ClickTimes& clicks, const SampledModeFunction& f, double gamma) {
    const NPhotonState st = make_n_photon_state(clicks, gamma);
    const auto n = static_cast<int>(clicks.size());
    const double amp = std::sqrt(0.5 * gamma);
    const std::vector<double> u = exp_smooth(f.grid(), f.values(), 0.5 * gamma);
    double prod = 1.0;
    for (int i = 0; i < n; ++i) {
        const double ui = amp * u[f.grid().index_near(clicks[static_cast<std::size_t>(i)])];
        prod *= ui * ui;
    }
    return std::tgamma(n + 1.0) * prod / st.gram_permanent;
}

double fidelity_n_in_span(const ClickTimes& clicks, const Eigen::VectorXd& coeffs, double gamma) {
    const auto n = static_cast<int>(clicks.size());
    if (coeffs.size() != n) throw std::invalid_argument("fidelity_n_in_span: coefficient count");
    const Eigen::MatrixXd g = gram_matrix(clicks, gamma);
    const Eigen::VectorXd m = g * coeffs;
    const double norm = coeffs.dot(m);
    if (!(norm > 0.0)) throw std::invalid_argument("fidelity_n_in_span: degenerate coefficients");
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= m[i] * m[i];
    return std::tgamma(n + 1.0) * prod / (permanent(g) * std::pow(norm, n));
}

TwoClickDecomposition two_click_state_decomposition(const ClickTimes& clicks, double gamma) {
    if (clicks.size() != 2)
        throw std::invalid_argument("two_click_state_decomposition: exactly two clicks");
    const double i12 = overlap(clicks[0], clicks[1], gamma);
    const double den = 2.0 * (1.0 + i12 * i12);
    return {(1.0 + i12) * (1.0 + i12) / den, (1.0 - i12) * (1.0 - i12) / den};
}

namespace {

struct StationaryPoint {
    Eigen::VectorXd c;
    double xi;
    double residual;
    double fidelity;
};

double stationarity_residual(const Eigen::MatrixXd& gram, const Eigen::VectorXd& c, double xi) {
    const auto n = static_cast<int>(c.size());
    const Eigen::VectorXd m = gram * c;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double prod = 1.0;
        for (int j = 0; j < n; ++j)
            if (j != i) prod *= m[j];
        worst = std::max(worst, std::abs(xi * c[i] - prod));
    }
    worst = std::max(worst, std::abs(c.dot(m) - 1.0));
    return worst;
}

// xi at a normalized stationary point: contracting the stationarity relation
// with m gives xi = n prod_j m_j.
double xi_of(const Eigen::MatrixXd& gram, const Eigen::VectorXd& c) {
    const auto n = static_cast<int>(c.size());
    const Eigen::VectorXd m = gram * c;
    double prod = 1.0;
    for (int j = 0; j < n; ++j) prod *= m[j];
    return n * prod;
}

bool normalize_in_gram(const Eigen::MatrixXd& gram, Eigen::VectorXd& c) {
    const double q = c.dot(gram * c);
    if (!(q > 1e-14) || !std::isfinite(q)) return false;
    c /= std::sqrt(q);
    if (c.sum() < 0.0) c = -c;
    return true;
}

bool newton_polish(const Eigen::MatrixXd& gram, Eigen::VectorXd& c, double& xi, int max_iters,
                   double target) {
    const auto n = static_cast<int>(c.size());
    for (int it = 0; it < max_iters; ++it) {
        const Eigen::VectorXd m = gram * c;
        Eigen::VectorXd f(n + 1);
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + 1, n + 1);
        for (int i = 0; i < n; ++i) {
            double prod = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) prod *= m[j];
            f[i] = xi * c[i] - prod;
            for (int k = 0; k < n; ++k) {
                double d = 0.0;
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    double partial = gram(k, j);
                    for (int l = 0; l < n; ++l)
                        if (l != i && l != j) partial *= m[l];
                    d += partial;
                }
                jac(i, k) = (k == i ? xi : 0.0) - d;
            }
            jac(i, n) = c[i];
        }
        f[n] = c.dot(m) - 1.0;
        jac.row(n).head(n) = 2.0 * m.transpose();

        if (f.cwiseAbs().maxCoeff() < target) return true;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
        if (!lu.isInvertible()) return false;
        const Eigen::VectorXd step = lu.solve(f);
        if (!step.allFinite()) return false;
        c -= step.head(n);
        xi -= step[n];
    }
    return stationarity_residual(gram, c, xi) < target;
}

} // namespace

GramSolution solve_coefficients(const ClickTimes& clicks, double gamma,
                                const GramSolverSettings& settings) {
    const auto n = static_cast<int>(clicks.size());
    if (n < 2) throw std::invalid_argument("solve_coefficients: need n >= 2 clicks");
    Eigen::MatrixXd gram = gram_matrix(clicks, gamma);

    const TimeGrid grid = default_grid(clicks.front(), clicks.back(), gamma);
    const auto sample_mode = [&](const Eigen::VectorXd& c) {
        std::vector<double> shape(grid.size(), 0.0);
        const double amp = std::sqrt(0.5 * gamma);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double t = grid.time(k);
            double v = 0.0;
            for (int i = 0; i < n; ++i)
                v += c[i] * amp * std::exp(-0.5 * gamma * std::abs(t - clicks[static_cast<std::size_t>(i)]));
            shape[k] = v;
        }
        return SampledModeFunction::from_shape(grid, std::move(shape));
    };

    // All clicks coincident: rank-1 Gram, f = g_1 exactly, bypass iteration.
    if (clicks.back() - clicks.front() < 1e-12 / gamma) {
        Eigen::VectorXd c = Eigen::VectorXd::Constant(n, 1.0 / n);
        return {gram, c, static_cast<double>(n), 1.0, 0.0, sample_mode(c)};
    }

    std::vector<Eigen::VectorXd> seeds;
    seeds.push_back(Eigen::VectorXd::Ones(n));
    for (int i = 0; i < n; ++i) seeds.push_back(Eigen::VectorXd::Unit(n, i));
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    for (int s = 0; s < settings.random_seeds; ++s) {
        Eigen::VectorXd c(n);
        for (int i = 0; i < n; ++i) c[i] = unif(rng);
        seeds.push_back(c);
    }

    std::vector<StationaryPoint> found;
    for (Eigen::VectorXd c : seeds) {
        if (!normalize_in_gram(gram, c)) continue;
        bool ok = false;
        for (int it = 0; it < settings.max_fixed_point_iters; ++it) {
            const Eigen::VectorXd m = gram * c;
            Eigen::VectorXd next(n);
            for (int i = 0; i < n; ++i) {
                double prod = 1.0;
                for (int j = 0; j < n; ++j)
                    if (j != i) prod *= m[j];
                next[i] = prod;
            }
            if (!normalize_in_gram(gram, next)) break;
            Eigen::VectorXd blended = (1.0 - settings.damping) * c + settings.damping * next;
            if (!normalize_in_gram(gram, blended)) break;
            const double move = (blended - c).cwiseAbs().maxCoeff();
            c = blended;
            if (move < 1e-13) {
                ok = true;
                break;
            }
        }
        double xi = xi_of(gram, c);
        const bool polished =
            newton_polish(gram, c, xi, settings.max_newton_iters, settings.residual_target);
        if (!polished && !ok) continue;
        if (!normalize_in_gram(gram, c)) continue;
        xi = xi_of(gram, c);
        const double res = stationarity_residual(gram, c, xi);
        if (res > 1e-10) continue;
        double fid = 0.0;
        try {
            fid = fidelity_n_in_span(clicks, c, gamma);
        } catch (const std::invalid_argument&) {
            continue;
        }
        bool duplicate = false;
        for (const auto& sp : found)
            if ((sp.c - c).cwiseAbs().maxCoeff() < 1e-8) duplicate = true;
        if (!duplicate) found.push_back({c, xi, res, fid});
    }

    if (found.empty()) {
        std::ostringstream msg;
        msg << "solve_coefficients: no stationary point reached residual 1e-10 for clicks [";
        for (int i = 0; i < n; ++i) msg << (i ? ", " : "") << clicks[static_cast<std::size_t>(i)];
        msg << "] (" << seeds.size() << " seeds tried)";
        throw ConvergenceFailure(msg.str());
    }

    const auto best = std::max_element(found.begin(), found.end(),
                                       [](const StationaryPoint& a, const StationaryPoint& b) {
                                           return a.fidelity < b.fidelity;
                                       });
    return {gram, best->c, best->xi, best->fidelity, best->residual, sample_mode(best->c)};
}

std::vector<FockCurvePoint> three_photon_fidelity_curve(ThreeClickPattern pattern,
                                                        const std::vector<double>& separations,
                                                        double gamma) {
    std::vector<FockCurvePoint> out;
    out.reserve(separations.size());
    for (double sep : separations) {
        const double d = sep / gamma;
        ClickTimes clicks = (pattern == ThreeClickPattern::EqualSpacing)
                                ? ClickTimes{0.0, 0.5 * d, d}
                                : ClickTimes{0.0, 0.0, d};
        out.push_back({sep, solve_coefficients(clicks, gamma).fidelity});
    }
    return out;
}

} // namespace hfock
