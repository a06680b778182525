#pragma once

#include <Eigen/Dense>

#include "heralded_fock/correlation.hpp"
#include "heralded_fock/grid.hpp"
#include "heralded_fock/opo.hpp"

namespace hfock {

/// Exact matrix permanent by Ryser's inclusion-exclusion formula with Gray
/// code updates, O(2^n n).  Refuses n > 12.
double permanent(const Eigen::MatrixXd& m);

/// Gram matrix I_ij = overlap(t_ci, t_cj) of the click modes g_i.
Eigen::MatrixXd gram_matrix(const ClickTimes& clicks, double gamma = 1.0);

/// Conditional n-photon signal state in the low intensity limit, represented
/// through its Gram matrix; <psi_n|psi_n> = |N|^2 perm(Gram) = 1.
struct NPhotonState {
    ClickTimes clicks;
    double gamma;
    Eigen::MatrixXd gram;
    double gram_permanent; // = 1/|N_psi_n|^2
};
NPhotonState make_n_photon_state(const ClickTimes& clicks, double gamma = 1.0);

/// n-photon fidelity F_n = n! |N|^2 prod_i |int f g_i|^2 of a sampled real
/// mode function against the conditional state.
double fidelity_n(const ClickTimes& clicks, const SampledModeFunction& f, double gamma = 1.0);

/// Same, for f = sum_i c_i g_i given by coefficients (overlap integrals are
/// then exact: int f g_i = (I c)_i).
double fidelity_n_in_span(const ClickTimes& clicks, const Eigen::VectorXd& coeffs,
                          double gamma = 1.0);

/// Squared amplitudes of the two-click conditional state on the orthogonal
/// pair f_a ~ g_1 + g_2, f_b ~ g_1 - g_2:
///   p_a2 = (1+I12)^2 / (2(1+I12^2)),  p_b2 = (1-I12)^2 / (2(1+I12^2)).
struct TwoClickDecomposition {
    double p_a2;
    double p_b2;
};
TwoClickDecomposition two_click_state_decomposition(const ClickTimes& clicks, double gamma = 1.0);

/// Optimal-mode solution of the stationarity system
///   xi c_i = prod_{j != i} (I c)_j,   c^T I c = 1.
struct GramSolution {
    Eigen::MatrixXd gram;
    Eigen::VectorXd coeffs;
    double xi;
    double fidelity;          // F_n at the optimum
    double residual;          // max stationarity residual
    SampledModeFunction mode; // f = sum_i c_i g_i sampled on a default grid
};

struct GramSolverSettings {
    int max_fixed_point_iters = 4000;
    int max_newton_iters = 60;
    double damping = 0.5;
    double residual_target = 1e-11;
    int random_seeds = 4;
};

/// Solve the stationarity system for the clicks' Gram matrix, seeding from
/// the uniform vector, each single-mode vector and a few fixed-seed random
/// directions; among converged stationary points the one of maximal F_n is
/// returned.  All-coincident clicks short-circuit to the rank-1 solution
/// c_i = 1/n, xi = n, F_n = 1.
GramSolution solve_coefficients(const ClickTimes& clicks, double gamma = 1.0,
                                const GramSolverSettings& settings = {});

enum class ThreeClickPattern { EqualSpacing, CoincidentPair };

struct FockCurvePoint {
    double separation; // gamma |t_c3 - t_c1|
    double fidelity;
};

/// F_3 versus total click separation for the two special spacing patterns.
std::vector<FockCurvePoint> three_photon_fidelity_curve(ThreeClickPattern pattern,
                                                        const std::vector<double>& separations,
                                                        double gamma = 1.0);

} // namespace hfock
