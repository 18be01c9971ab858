#include "tomo/iterative.hpp"

#include "tomo/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace tomo {

namespace {

using Vec = Eigen::VectorXd;

class PoissonProblem {
public:
    PoissonProblem(const PhotonMeasurement& meas, int side_px, double pixel_size, const ProjectorOptions& opts)
        : meas_(meas), side_(side_px), pixel_size_(pixel_size), opts_(opts) {
        if (!(meas.n0 > 0.0)) throw std::invalid_argument("Poisson model: n0 must be positive");
        meas.geometry.validate();
        if (meas.counts.rows() != meas.geometry.n_angles() || meas.counts.cols() != meas.geometry.n_det) {
            throw std::invalid_argument("Poisson model: counts shape does not match geometry");
        }
        if (!meas.geometry.covers(side_px, pixel_size)) {
            throw std::invalid_argument("Poisson model: detector extent does not cover the image diagonal");
        }
        counts_ = meas.counts.cast<double>();
    }

    Sinogram project(const ImageGrid& x) const { return forward_project(x, meas_.geometry, opts_); }

    double value(const Sinogram& ax) const {
        const auto s = ax.values.array();
        return (meas_.n0 * (-s).exp() + counts_.array() * s).sum();
    }

    ImageGrid gradient(const Sinogram& ax) const {
        Sinogram residual(meas_.geometry, counts_ - (meas_.n0 * (-ax.values.array()).exp()).matrix());
        return back_project(residual, side_, pixel_size_, opts_);
    }

    /// Exact minimizer of the local quadratic model along -direction.
    double cauchy_step(const ImageGrid& direction, const Sinogram& ax) const {
        const Sinogram ad = project(direction);
        const double curvature =
            (meas_.n0 * (-ax.values.array()).exp() * ad.values.array().square()).sum();
        const double dd = direction.flat().squaredNorm();
        if (!(curvature > 0.0) || !(dd > 0.0)) return 1.0;
        return dd / curvature;
    }

    ImageGrid initial_image(const MleConfig& cfg) const {
        if (cfg.init == InitKind::Zero) return ImageGrid(side_, pixel_size_);
        FbpConfig fbp = cfg.fbp;
        fbp.clamp_negative = true;
        return fbp_reconstruct(meas_, fbp, side_, pixel_size_);
    }

    ImageGrid zero() const { return ImageGrid(side_, pixel_size_); }

private:
    const PhotonMeasurement& meas_;
    int side_;
    double pixel_size_;
    ProjectorOptions opts_;
    RowMatrix<double> counts_;
};

ImageGrid projected_gradient(const ImageGrid& x, const ImageGrid& g) {
    ImageGrid pg = g;
    for (Eigen::Index i = 0; i < pg.flat().size(); ++i) {
        if (x.flat()[i] <= 0.0 && g.flat()[i] > 0.0) pg.flat()[i] = 0.0;
    }
    return pg;
}

void check_nonnegative(const ImageGrid& image) {
    if (!image.all_finite()) throw std::invalid_argument("Poisson model: image has non-finite values");
    if (image.values().minCoeff() < 0.0) throw std::invalid_argument("Poisson model: image must be nonnegative");
}

void check_config(const MleConfig& cfg) {
    if (cfg.max_iters < 1) throw std::invalid_argument("MleConfig: max_iters must be positive");
    if (!(cfg.armijo.c > 0.0 && cfg.armijo.c < 1.0)) throw std::invalid_argument("MleConfig: armijo.c must be in (0,1)");
    if (!(cfg.armijo.shrink > 0.0 && cfg.armijo.shrink < 1.0)) {
        throw std::invalid_argument("MleConfig: armijo.shrink must be in (0,1)");
    }
    if (cfg.armijo.max_backtracks < 0) throw std::invalid_argument("MleConfig: max_backtracks must be >= 0");
    if (!(cfg.grad_tol >= 0.0)) throw std::invalid_argument("MleConfig: grad_tol must be nonnegative");
}

}  // namespace

double poisson_nll_from_projection(const Sinogram& ax, const PhotonMeasurement& meas) {
    const auto s = ax.values.array();
    return (meas.n0 * (-s).exp() + meas.counts.cast<double>().array() * s).sum();
}

double poisson_nll(const ImageGrid& image, const PhotonMeasurement& meas, const ProjectorOptions& opts) {
    check_nonnegative(image);
    PoissonProblem problem(meas, image.side_px(), image.pixel_size(), opts);
    return problem.value(problem.project(image));
}

ImageGrid poisson_nll_gradient(const ImageGrid& image, const PhotonMeasurement& meas, const ProjectorOptions& opts) {
    check_nonnegative(image);
    PoissonProblem problem(meas, image.side_px(), image.pixel_size(), opts);
    return problem.gradient(problem.project(image));
}

Reconstruction mle_solve(const PhotonMeasurement& meas, const MleConfig& cfg, int side_px, double pixel_size) {
    check_config(cfg);
    const PoissonProblem problem(meas, side_px, pixel_size, cfg.projector);
    const auto& armijo = cfg.armijo;

    Reconstruction out{problem.initial_image(cfg), {}};
    ImageGrid& x = out.image;
    RunReport& report = out.report;

    Sinogram ax = problem.project(x);
    double f = problem.value(ax);
    ImageGrid g = problem.gradient(ax);
    report.objective_trace.push_back(f);

    ImageGrid pg = projected_gradient(x, g);
    const double pg0 = pg.flat().norm();
    if (pg0 == 0.0) {
        report.converged = true;
        return out;
    }
    ImageGrid direction = pg;
    direction.flat() *= -1.0;
    double alpha = problem.cauchy_step(direction, ax);

    for (int k = 0; k < cfg.max_iters; ++k) {
        ImageGrid candidate = x;
        Sinogram a_candidate;
        double f_candidate = f;
        bool accepted = false;
        bool moved = false;
        for (int bt = 0; bt <= armijo.max_backtracks; ++bt) {
            candidate.flat() = (x.flat() - alpha * g.flat()).cwiseMax(0.0);
            const Vec step = candidate.flat() - x.flat();
            if (step.squaredNorm() == 0.0) break;
            moved = true;
            a_candidate = problem.project(candidate);
            f_candidate = problem.value(a_candidate);
            if (f_candidate <= f + armijo.c * step.dot(g.flat())) {
                accepted = true;
                break;
            }
            if (bt < armijo.max_backtracks) alpha *= armijo.shrink;
        }
        if (!moved) {
            report.converged = true;
            break;
        }
        if (!accepted) {
            report.warnings.push_back("armijo backtracking exhausted at iteration " + std::to_string(k));
            // Keep the minimum step only if it does not raise the objective.
            if (!(f_candidate <= f)) break;
        }

        ImageGrid g_next = problem.gradient(a_candidate);
        const Vec s = candidate.flat() - x.flat();
        const Vec z = g_next.flat() - g.flat();
        const double sz = s.dot(z);
        alpha = sz > 0.0 ? s.squaredNorm() / sz : alpha / armijo.shrink;

        x = std::move(candidate);
        ax = std::move(a_candidate);
        g = std::move(g_next);
        f = f_candidate;
        report.objective_trace.push_back(f);
        report.iterations = k + 1;

        if (projected_gradient(x, g).flat().norm() <= cfg.grad_tol * pg0) {
            report.converged = true;
            break;
        }
    }
    return out;
}

Reconstruction map_tv_solve(const PhotonMeasurement& meas, const MapTvConfig& cfg, int side_px, double pixel_size) {
    check_config(cfg.mle);
    if (!(cfg.tv_weight >= 0.0)) throw std::invalid_argument("MapTvConfig: tv_weight must be nonnegative");
    if (cfg.tv_inner_iters < 1) throw std::invalid_argument("MapTvConfig: tv_inner_iters must be positive");
    // Without the prior the problem is plain MLE; on an underdetermined system
    // FISTA and the MLE solver stop at different points of the same flat
    // minimizer set, so hand over rather than run a second optimizer.
    if (cfg.tv_weight == 0.0) return mle_solve(meas, cfg.mle, side_px, pixel_size);
    const PoissonProblem problem(meas, side_px, pixel_size, cfg.mle.projector);
    const auto& armijo = cfg.mle.armijo;
    const double w = cfg.tv_weight;

    Reconstruction out{problem.initial_image(cfg.mle), {}};
    ImageGrid& x = out.image;
    RunReport& report = out.report;

    Sinogram ax = problem.project(x);
    double objective = problem.value(ax) + w * tv_value(x);
    report.objective_trace.push_back(objective);

    ImageGrid y = x;
    Sinogram ay = ax;
    double t = 1.0;
    bool momentum = false;
    TvProx prox;

    double alpha = 0.0;
    {
        const ImageGrid g0 = problem.gradient(ax);
        ImageGrid direction = projected_gradient(x, g0);
        direction.flat() *= -1.0;
        if (direction.flat().squaredNorm() == 0.0 && w == 0.0) {
            report.converged = true;
            return out;
        }
        alpha = problem.cauchy_step(direction, ax);
    }

    double first_mapping_norm = -1.0;
    int stalled = 0;
    for (int k = 0; k < cfg.mle.max_iters; ++k) {
        const double f_y = problem.value(ay);
        const ImageGrid g_y = problem.gradient(ay);

        ImageGrid candidate = y;
        Sinogram a_candidate;
        double f_candidate = 0.0;
        int backtracks = 0;
        for (;; ++backtracks) {
            const RowMatrix<double> z = y.values() - alpha * g_y.values();
            candidate.values() = prox.apply(z, alpha * w, cfg.tv_inner_iters).cwiseMax(0.0);
            const Vec d = candidate.flat() - y.flat();
            a_candidate = problem.project(candidate);
            f_candidate = problem.value(a_candidate);
            const double model = f_y + d.dot(g_y.flat()) + d.squaredNorm() / (2.0 * alpha);
            if (f_candidate <= model || backtracks >= armijo.max_backtracks) break;
            alpha *= armijo.shrink;
        }
        const double candidate_objective = f_candidate + w * tv_value(candidate);

        if (!(candidate_objective <= objective)) {
            if (momentum) {
                y = x;
                ay = ax;
                t = 1.0;
                momentum = false;
                ++report.momentum_restarts;
                continue;
            }
            // Inexact prox or exhausted backtracking: retry from x with a shorter step.
            alpha *= armijo.shrink;
            if (++stalled > armijo.max_backtracks) {
                report.warnings.push_back("no descent after step-size safeguard at iteration " + std::to_string(k));
                break;
            }
            continue;
        }
        stalled = 0;
        if (backtracks >= armijo.max_backtracks) {
            report.warnings.push_back("backtracking exhausted at iteration " + std::to_string(k));
        }

        const double mapping_norm = (candidate.flat() - y.flat()).norm() / alpha;
        if (first_mapping_norm < 0.0) first_mapping_norm = mapping_norm;

        if (cfg.fista) {
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            const double beta = (t - 1.0) / t_next;
            y.flat() = candidate.flat() + beta * (candidate.flat() - x.flat());
            ay.values = a_candidate.values + beta * (a_candidate.values - ax.values);
            momentum = beta > 0.0;
            t = t_next;
        } else {
            y = candidate;
            ay = a_candidate;
        }
        x = std::move(candidate);
        ax = std::move(a_candidate);
        objective = candidate_objective;
        report.objective_trace.push_back(objective);
        report.iterations = k + 1;
        if (backtracks == 0) alpha *= 1.1;

        if (mapping_norm <= cfg.mle.grad_tol * first_mapping_norm) {
            report.converged = true;
            break;
        }
    }
    return out;
}

ImageGrid mle_reconstruct(const PhotonMeasurement& meas, const MleConfig& cfg, int side_px, double pixel_size) {
    return mle_solve(meas, cfg, side_px, pixel_size).image;
}

ImageGrid map_tv_reconstruct(const PhotonMeasurement& meas, const MapTvConfig& cfg, int side_px, double pixel_size) {
    return map_tv_solve(meas, cfg, side_px, pixel_size).image;
}

double select_tv_weight(const std::vector<PhotonMeasurement>& meas_set, const std::vector<ImageGrid>& truth_set,
                        const std::vector<double>& grid, const MapTvConfig& base_cfg) {
    if (meas_set.empty() || grid.empty()) throw std::invalid_argument("select_tv_weight: empty input");
    if (meas_set.size() != truth_set.size()) {
        throw std::invalid_argument("select_tv_weight: measurement and truth sets differ in length");
    }
    double best_weight = 0.0;
    double best_r = -2.0;
    for (const double weight : grid) {
        if (!(weight >= 0.0)) throw std::invalid_argument("select_tv_weight: weights must be nonnegative");
        MapTvConfig cfg = base_cfg;
        cfg.tv_weight = weight;
        double sum = 0.0;
        for (std::size_t i = 0; i < meas_set.size(); ++i) {
            const ImageGrid& truth = truth_set[i];
            const ImageGrid recon = map_tv_reconstruct(meas_set[i], cfg, truth.side_px(), truth.pixel_size());
            sum += pearson_r(recon, truth);
        }
        const double mean = sum / static_cast<double>(meas_set.size());
        if (mean > best_r || (mean == best_r && weight < best_weight)) {
            best_r = mean;
            best_weight = weight;
        }
    }
    return best_weight;
}

}  // namespace tomo
