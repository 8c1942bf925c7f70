#pragma once

// Internal Crank-Nicolson machinery shared by the fixed-domain steppers and
// the front-fixing stepper. Not installed; include only from src/.

#include <cmath>
#include <span>
#include <vector>

#include "kppfb/errors.hpp"
#include "kppfb/grid.hpp"

namespace kppfb::detail {

// Scratch buffers for one tridiagonal Crank-Nicolson solve.
struct CnWorkspace {
    std::vector<double> sub, diag, sup, rhs, tmp;

    void resize(int n) {
        sub.assign(n, 0.0);
        diag.assign(n, 0.0);
        sup.assign(n, 0.0);
        rhs.assign(n, 0.0);
        tmp.assign(n, 0.0);
    }
};

// In-place Thomas solve; diag/rhs are overwritten, result lands in rhs.
inline void thomas_solve(std::vector<double>& sub, std::vector<double>& diag,
                         std::vector<double>& sup, std::vector<double>& rhs) {
    const int n = static_cast<int>(diag.size());
    if (std::abs(diag[0]) < 1e-300) fail(ErrorCode::Numerical, "tridiagonal solve hit a zero pivot");
    for (int i = 1; i < n; ++i) {
        const double m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        if (std::abs(diag[i]) < 1e-300) fail(ErrorCode::Numerical, "tridiagonal solve hit a zero pivot");
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (int i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

// One theta step for v_t = D v_xx + c(x) v_x + r(x) v + src(x):
//   (I - theta dt L) v_new = (I + (1-theta) dt L) v_old + dt*src
// with L v = D v'' + c v' + r v. theta = 1/2 is Crank-Nicolson, theta = 1 is
// backward Euler (used as an L-stable startup smoother). Dirichlet rows are
// pinned to zero; Neumann walls use second-order ghost reflection (the
// centered drift term vanishes there since v_x = 0). `drift`, `react`, `src`
// may be empty spans.
inline void cn_step(const Mesh1D& mesh, BcTag bc, std::span<const double> v,
                    std::span<double> out, double dt, double diffusion,
                    std::span<const double> drift, std::span<const double> react,
                    std::span<const double> src, CnWorkspace& ws, double theta = 0.5) {
    const int n = mesh.nodes();
    const double dx = mesh.dx();
    const double ax = diffusion / (dx * dx);
    ws.resize(n);

    const bool ld = left_dirichlet(bc);
    const bool rd = right_dirichlet(bc);

    auto drift_at = [&](int j) { return drift.empty() ? 0.0 : drift[j]; };
    auto react_at = [&](int j) { return react.empty() ? 0.0 : react[j]; };
    auto src_at = [&](int j) { return src.empty() ? 0.0 : src[j]; };

    for (int j = 0; j < n; ++j) {
        if ((j == 0 && ld) || (j == n - 1 && rd)) {
            ws.sub[j] = 0.0;
            ws.diag[j] = 1.0;
            ws.sup[j] = 0.0;
            ws.rhs[j] = 0.0;
            continue;
        }
        double lo, di, hi, lv; // L v at node j and its stencil weights
        if (j == 0) { // Neumann wall, ghost v[-1] = v[1]
            lo = 0.0;
            di = -2.0 * ax + react_at(0);
            hi = 2.0 * ax;
            lv = di * v[0] + hi * v[1];
        } else if (j == n - 1) { // Neumann wall, ghost v[n] = v[n-2]
            lo = 2.0 * ax;
            di = -2.0 * ax + react_at(n - 1);
            hi = 0.0;
            lv = lo * v[n - 2] + di * v[n - 1];
        } else {
            const double ad = drift_at(j) / (2.0 * dx);
            lo = ax - ad;
            di = -2.0 * ax + react_at(j);
            hi = ax + ad;
            lv = lo * v[j - 1] + di * v[j] + hi * v[j + 1];
        }
        ws.sub[j] = -theta * dt * lo;
        ws.diag[j] = 1.0 - theta * dt * di;
        ws.sup[j] = -theta * dt * hi;
        ws.rhs[j] = v[j] + (1.0 - theta) * dt * lv + dt * src_at(j);
    }

    thomas_solve(ws.sub, ws.diag, ws.sup, ws.rhs);
    for (int j = 0; j < n; ++j) out[j] = ws.rhs[j];
    if (ld) out[0] = 0.0;
    if (rd) out[n - 1] = 0.0;
}

} // namespace kppfb::detail
