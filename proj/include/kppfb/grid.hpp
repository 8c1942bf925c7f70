#pragma once

#include <span>
#include <vector>

#include "kppfb/errors.hpp"

namespace kppfb {

/// Uniform mesh on [0, length] with `cells` intervals, nodes x_j = j*dx.
struct Mesh1D {
    double length = 1.0;
    int cells = 8;

    Mesh1D() = default;
    Mesh1D(double length_, int cells_);

    double dx() const { return length / cells; }
    int nodes() const { return cells + 1; }
    double x(int j) const { return j * dx(); }

    bool operator==(const Mesh1D& o) const { return length == o.length && cells == o.cells; }
};

enum class BcTag {
    NeumannLeft_DirichletRight, // u_x(0)=0, u(l)=0
    Dirichlet_Dirichlet,        // u(0)=u(l)=0
    Neumann_Neumann,            // u_x(0)=u_x(l)=0 (half-line truncation wall)
};

bool left_dirichlet(BcTag bc);
bool right_dirichlet(BcTag bc);
const char* bc_name(BcTag bc);

/// Node values of a solution on a mesh, tagged with its boundary condition
/// and the current time. Dirichlet end nodes are pinned to exactly 0.
class GridFunction {
public:
    GridFunction() : values_(mesh_.nodes(), 0.0) {} // zeros on a default mesh
    GridFunction(Mesh1D mesh, BcTag bc, std::vector<double> values, double time = 0.0);

    template <typename F>
    static GridFunction sample(Mesh1D mesh, BcTag bc, F&& f, double time = 0.0) {
        std::vector<double> v(mesh.nodes());
        for (int j = 0; j < mesh.nodes(); ++j) v[j] = f(mesh.x(j));
        return GridFunction(mesh, bc, std::move(v), time);
    }

    static GridFunction zeros(Mesh1D mesh, BcTag bc, double time = 0.0);
    static GridFunction constant(Mesh1D mesh, BcTag bc, double value, double time = 0.0);

    const Mesh1D& mesh() const { return mesh_; }
    BcTag bc() const { return bc_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    std::span<const double> values() const { return values_; }
    std::vector<double>& raw() { return values_; } // steppers write in place
    double operator[](int j) const { return values_[j]; }
    int nodes() const { return mesh_.nodes(); }

    double sup_norm() const;
    double min_value() const;
    /// Linear interpolation at x in [0, length] (clamped to the ends).
    double at(double x) const;

    void pin_dirichlet();
    void scale(double factor);

private:
    Mesh1D mesh_;
    BcTag bc_ = BcTag::Neumann_Neumann;
    std::vector<double> values_;
    double time_ = 0.0;
};

double sup_norm(const GridFunction& g);

} // namespace kppfb
