#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace tomo {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Square 2D attenuation map. Row 0 is the top of the image (largest y);
/// column 0 is the left edge (smallest x). Values are attenuation per unit
/// length, pixel_size is in the same length units.
template <typename Scalar>
class ImageGridT {
public:
    using Matrix = RowMatrix<Scalar>;

    ImageGridT() = default;

    explicit ImageGridT(int side_px, double pixel_size = 1.0)
        : pixel_size_(pixel_size), values_(Matrix::Zero(side_px, side_px)) {
        validate();
    }

    ImageGridT(Matrix values, double pixel_size)
        : pixel_size_(pixel_size), values_(std::move(values)) {
        if (values_.rows() != values_.cols()) {
            throw std::invalid_argument("ImageGrid: values must be square");
        }
        validate();
    }

    int side_px() const { return static_cast<int>(values_.rows()); }
    double pixel_size() const { return pixel_size_; }
    std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

    const Matrix& values() const { return values_; }
    Matrix& values() { return values_; }

    /// Flat row-major view, handy for vector-space algebra on images.
    Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> flat() const {
        return {values_.data(), values_.size()};
    }
    Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> flat() {
        return {values_.data(), values_.size()};
    }

    Scalar operator()(int row, int col) const { return values_(row, col); }
    Scalar& operator()(int row, int col) { return values_(row, col); }

    /// Physical x of a column center, y of a row center (origin at the image center).
    double x_of_col(int col) const { return (col - 0.5 * (side_px() - 1)) * pixel_size_; }
    double y_of_row(int row) const { return (0.5 * (side_px() - 1) - row) * pixel_size_; }

    bool all_finite() const { return values_.allFinite(); }

    ImageGridT with_values(Matrix values) const { return ImageGridT(std::move(values), pixel_size_); }

    friend bool operator==(const ImageGridT& a, const ImageGridT& b) {
        return a.pixel_size_ == b.pixel_size_ && a.values_.rows() == b.values_.rows() &&
               a.values_ == b.values_;
    }

private:
    void validate() const {
        if (values_.rows() <= 0) throw std::invalid_argument("ImageGrid: side_px must be positive");
        if (!(pixel_size_ > 0.0) || !std::isfinite(pixel_size_)) {
            throw std::invalid_argument("ImageGrid: pixel_size must be positive");
        }
    }

    double pixel_size_ = 1.0;
    Matrix values_;
};

using ImageGrid = ImageGridT<double>;

}  // namespace tomo
