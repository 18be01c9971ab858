#pragma once

#include "tomo/image.hpp"

#include <cmath>

namespace tomo {

/// Isotropic total variation with forward differences and replicate
/// boundary (the difference past the last row/column is zero).
template <typename Derived>
typename Derived::Scalar tv_value(const Eigen::MatrixBase<Derived>& u) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index rows = u.rows();
    const Eigen::Index cols = u.cols();
    Scalar total(0);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const Scalar dx = c + 1 < cols ? Scalar(u(r, c + 1) - u(r, c)) : Scalar(0);
            const Scalar dy = r + 1 < rows ? Scalar(u(r + 1, c) - u(r, c)) : Scalar(0);
            total += std::sqrt(dx * dx + dy * dy);
        }
    }
    return total;
}

inline double tv_value(const ImageGrid& image) { return tv_value(image.values()); }

/// Dual field p = (px, py) with |p| <= 1 per pixel.
struct TvDual {
    RowMatrix<double> px;
    RowMatrix<double> py;
};

/// Forward-difference gradient and its negative adjoint, the divergence.
void tv_gradient(const RowMatrix<double>& u, RowMatrix<double>& gx, RowMatrix<double>& gy);
RowMatrix<double> tv_divergence(const RowMatrix<double>& px, const RowMatrix<double>& py);

/// Proximal map of weight * TV by accelerated dual projection
/// (Chambolle's dual, Beck-Teboulle FGP iterations). Keeps its dual field
/// between calls so a solver can warm-start successive proxes.
class TvProx {
public:
    RowMatrix<double> apply(const RowMatrix<double>& f, double weight, int inner_iters);
    void reset() { dual_ = {}; }

private:
    TvDual dual_;
};

/// Approximates argmin_u 0.5||u - image||^2 + weight * TV(u). Returns the
/// input unchanged when weight == 0 or when the iterations fail to lower the
/// objective.
ImageGrid tv_prox(const ImageGrid& image, double weight, int inner_iters);

}  // namespace tomo
