#pragma once

#include "tomo/fbp.hpp"
#include "tomo/photon_noise.hpp"
#include "tomo/projector.hpp"
#include "tomo/tv.hpp"

#include <string>
#include <vector>

namespace tomo {

struct ArmijoConfig {
    double c = 1e-4;
    double shrink = 0.5;
    int max_backtracks = 30;
};

enum class InitKind { Zero, Fbp };

struct MleConfig {
    int max_iters = 300;
    ArmijoConfig armijo;
    InitKind init = InitKind::Fbp;
    /// Stop once the projected-gradient norm falls below this fraction of its initial value.
    double grad_tol = 1e-6;
    FbpConfig fbp;
    ProjectorOptions projector;
};

struct MapTvConfig {
    MleConfig mle;
    double tv_weight = 0.0;
    int tv_inner_iters = 20;
    bool fista = true;
};

/// Per-reconstruction log. objective_trace[0] is the objective at the
/// initial iterate, then one entry per accepted iteration.
struct RunReport {
    int iterations = 0;
    std::vector<double> objective_trace;
    std::vector<std::string> warnings;
    int momentum_restarts = 0;
    bool converged = false;
};

struct Reconstruction {
    ImageGrid image;
    RunReport report;
};

/// sum_i n0 exp(-(Ax)_i) + y_i (Ax)_i, computed from a given projection Ax.
double poisson_nll_from_projection(const Sinogram& ax, const PhotonMeasurement& meas);

/// Negative Poisson log-likelihood of the Beer-Lambert model, constants dropped.
double poisson_nll(const ImageGrid& image, const PhotonMeasurement& meas, const ProjectorOptions& opts = {});

/// A^T (y - n0 exp(-Ax)) through the exact adjoint.
ImageGrid poisson_nll_gradient(const ImageGrid& image, const PhotonMeasurement& meas,
                               const ProjectorOptions& opts = {});

/// Projected gradient descent on the Poisson NLL with Armijo backtracking
/// (Barzilai-Borwein trial steps) and nonnegativity.
Reconstruction mle_solve(const PhotonMeasurement& meas, const MleConfig& cfg, int side_px, double pixel_size);

/// Proximal gradient (optionally FISTA) on NLL + tv_weight * TV with
/// backtracking, TV prox, nonnegativity, and a monotone restart safeguard.
Reconstruction map_tv_solve(const PhotonMeasurement& meas, const MapTvConfig& cfg, int side_px, double pixel_size);

ImageGrid mle_reconstruct(const PhotonMeasurement& meas, const MleConfig& cfg, int side_px, double pixel_size);
ImageGrid map_tv_reconstruct(const PhotonMeasurement& meas, const MapTvConfig& cfg, int side_px, double pixel_size);

/// Grid value maximizing the mean Pearson r of map_tv_reconstruct over the
/// calibration pairs; ties go to the smaller weight.
double select_tv_weight(const std::vector<PhotonMeasurement>& meas_set, const std::vector<ImageGrid>& truth_set,
                        const std::vector<double>& grid, const MapTvConfig& base_cfg = {});

}  // namespace tomo
