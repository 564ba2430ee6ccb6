#include "infx/grid.hpp"

#include <cmath>
#include <sstream>

namespace infx {

Grid2D::Grid2D(const GridSpec& s)
    : xmin_(s.xmin), xmax_(s.xmax), ymin_(s.ymin), ymax_(s.ymax), nx_(s.nx), ny_(s.ny) {
    if (nx_ < 3 || ny_ < 3) throw std::invalid_argument("grid needs at least 3 nodes per direction");
    if (!(xmax_ > xmin_) || !(ymax_ > ymin_)) throw std::invalid_argument("grid extent must be positive");
    hx_ = (xmax_ - xmin_) / (nx_ - 1);
    hy_ = (ymax_ - ymin_) / (ny_ - 1);
}

Grid2D build_grid(const GridSpec& spec) { return Grid2D(spec); }

ScalarField Grid2D::sample(const Expr& e) const {
    ScalarField out(size());
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) out[index(i, j)] = e(x(i), y(j));
    return out;
}

FrameExprs FrameExprs::identity() {
    return {Expr::constant(1.0), Expr::constant(0.0), Expr::constant(0.0), Expr::constant(1.0)};
}

FrameField make_frame(const Grid2D& grid, std::vector<Eigen::Matrix2d> a, double det_floor) {
    if (Eigen::Index(a.size()) != grid.size()) throw std::invalid_argument("frame size does not match grid");
    FrameField frame{grid, std::move(a), {}};
    frame.inv_t.resize(frame.a.size());
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        const Eigen::Matrix2d& m = frame.a[std::size_t(k)];
        const double det = m.determinant();
        if (!std::isfinite(det) || std::abs(det) < det_floor) {
            const auto n = grid.node(k);
            std::ostringstream os;
            os << "frame singular at node (" << n.i << "," << n.j << ") = (" << grid.x(n.i) << ","
               << grid.y(n.j) << "): |det A| = " << std::abs(det);
            throw FrameSingular(os.str(), n);
        }
        frame.inv_t[std::size_t(k)] = m.transpose().inverse();
    }
    return frame;
}

FrameField sample_frame(const FrameExprs& e, const Grid2D& grid, double det_floor) {
    std::vector<Eigen::Matrix2d> a(std::size_t(grid.size()));
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            const double x = grid.x(i), y = grid.y(j);
            Eigen::Matrix2d& m = a[std::size_t(grid.index(i, j))];
            m << e.a11(x, y), e.a12(x, y), e.a21(x, y), e.a22(x, y);
        }
    }
    return make_frame(grid, std::move(a), det_floor);
}

FrameField constant_frame(const Grid2D& grid, const Eigen::Matrix2d& a) {
    return make_frame(grid, std::vector<Eigen::Matrix2d>(std::size_t(grid.size()), a));
}

}  // namespace infx
