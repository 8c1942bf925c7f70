#include "kppfb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace kppfb {

Mesh1D::Mesh1D(double length_, int cells_) : length(length_), cells(cells_) {
    if (!(length > 0.0) || !std::isfinite(length))
        fail(ErrorCode::InvalidArgument, "mesh length must be strictly positive");
    if (cells < 8) fail(ErrorCode::InvalidArgument, "mesh needs at least 8 cells");
}

bool left_dirichlet(BcTag bc) { return bc == BcTag::Dirichlet_Dirichlet; }

bool right_dirichlet(BcTag bc) {
    return bc == BcTag::Dirichlet_Dirichlet || bc == BcTag::NeumannLeft_DirichletRight;
}

const char* bc_name(BcTag bc) {
    switch (bc) {
        case BcTag::NeumannLeft_DirichletRight: return "mixed";
        case BcTag::Dirichlet_Dirichlet: return "dirichlet";
        case BcTag::Neumann_Neumann: return "neumann";
    }
    return "?";
}

GridFunction::GridFunction(Mesh1D mesh, BcTag bc, std::vector<double> values, double time)
    : mesh_(mesh), bc_(bc), values_(std::move(values)), time_(time) {
    if (static_cast<int>(values_.size()) != mesh_.nodes())
        fail(ErrorCode::InvalidArgument, "grid function size does not match mesh");
    for (double v : values_)
        if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "grid function has non-finite entries");
    pin_dirichlet();
}

GridFunction GridFunction::zeros(Mesh1D mesh, BcTag bc, double time) {
    return GridFunction(mesh, bc, std::vector<double>(mesh.nodes(), 0.0), time);
}

GridFunction GridFunction::constant(Mesh1D mesh, BcTag bc, double value, double time) {
    return GridFunction(mesh, bc, std::vector<double>(mesh.nodes(), value), time);
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double GridFunction::min_value() const {
    double m = values_[0];
    for (double v : values_) m = std::min(m, v);
    return m;
}

double GridFunction::at(double x) const {
    const double dx = mesh_.dx();
    if (x <= 0.0) return values_.front();
    if (x >= mesh_.length) return values_.back();
    const double s = x / dx;
    int j = static_cast<int>(s);
    if (j >= mesh_.cells) j = mesh_.cells - 1;
    const double w = s - j;
    return (1.0 - w) * values_[j] + w * values_[j + 1];
}

void GridFunction::pin_dirichlet() {
    if (left_dirichlet(bc_)) values_.front() = 0.0;
    if (right_dirichlet(bc_)) values_.back() = 0.0;
}

void GridFunction::scale(double factor) {
    for (double& v : values_) v *= factor;
}

double sup_norm(const GridFunction& g) { return g.sup_norm(); }

} // namespace kppfb
