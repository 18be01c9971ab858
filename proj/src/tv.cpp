#include "tomo/tv.hpp"

#include <algorithm>
#include <stdexcept>

namespace tomo {

void tv_gradient(const RowMatrix<double>& u, RowMatrix<double>& gx, RowMatrix<double>& gy) {
    const Eigen::Index rows = u.rows();
    const Eigen::Index cols = u.cols();
    gx.resize(rows, cols);
    gy.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            gx(r, c) = c + 1 < cols ? u(r, c + 1) - u(r, c) : 0.0;
            gy(r, c) = r + 1 < rows ? u(r + 1, c) - u(r, c) : 0.0;
        }
    }
}

RowMatrix<double> tv_divergence(const RowMatrix<double>& px, const RowMatrix<double>& py) {
    const Eigen::Index rows = px.rows();
    const Eigen::Index cols = px.cols();
    RowMatrix<double> div(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            double v = 0.0;
            if (c + 1 < cols) v += px(r, c);
            if (c > 0) v -= px(r, c - 1);
            if (r + 1 < rows) v += py(r, c);
            if (r > 0) v -= py(r - 1, c);
            div(r, c) = v;
        }
    }
    return div;
}

namespace {

double prox_objective(const RowMatrix<double>& u, const RowMatrix<double>& f, double weight) {
    return 0.5 * (u - f).squaredNorm() + weight * tv_value(u);
}

}  // namespace

RowMatrix<double> TvProx::apply(const RowMatrix<double>& f, double weight, int inner_iters) {
    if (!(weight >= 0.0)) throw std::invalid_argument("tv_prox: weight must be nonnegative");
    if (inner_iters < 1) throw std::invalid_argument("tv_prox: inner_iters must be positive");
    if (weight == 0.0) return f;

    const Eigen::Index rows = f.rows();
    const Eigen::Index cols = f.cols();
    if (dual_.px.rows() != rows || dual_.px.cols() != cols) {
        dual_.px = RowMatrix<double>::Zero(rows, cols);
        dual_.py = RowMatrix<double>::Zero(rows, cols);
    }

    // Minimize ||weight * div p - f||^2 over |p| <= 1; u = f - weight * div p.
    // Each sweep takes a projected gradient step from the extrapolated point
    // (rx, ry) and then updates the extrapolation (FGP momentum).
    RowMatrix<double> rx = dual_.px;
    RowMatrix<double> ry = dual_.py;
    RowMatrix<double> u(rows, cols);
    const double step = 1.0 / (8.0 * weight);
    double t = 1.0;
    for (int it = 0; it < inner_iters; ++it) {
        u = f - weight * tv_divergence(rx, ry);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double beta = (t - 1.0) / t_next;
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                const double gx = c + 1 < cols ? u(r, c + 1) - u(r, c) : 0.0;
                const double gy = r + 1 < rows ? u(r + 1, c) - u(r, c) : 0.0;
                const double qx = rx(r, c) - step * gx;
                const double qy = ry(r, c) - step * gy;
                const double scale = std::max(1.0, std::sqrt(qx * qx + qy * qy));
                const double px = qx / scale;
                const double py = qy / scale;
                rx(r, c) = px + beta * (px - dual_.px(r, c));
                ry(r, c) = py + beta * (py - dual_.py(r, c));
                dual_.px(r, c) = px;
                dual_.py(r, c) = py;
            }
        }
        t = t_next;
    }
    u = f - weight * tv_divergence(dual_.px, dual_.py);
    if (prox_objective(u, f, weight) > prox_objective(f, f, weight)) return f;
    return u;
}

ImageGrid tv_prox(const ImageGrid& image, double weight, int inner_iters) {
    TvProx prox;
    return image.with_values(prox.apply(image.values(), weight, inner_iters));
}

}  // namespace tomo
