#include "eiko/locus.hpp"

#include <cmath>
#include <limits>

#include "eiko/util.hpp"

namespace eiko::locus {

namespace {

struct Jet {
    double rx, ry, rz;  // d(Re f)
    double ix, iy, iz;  // d(Im f)
};

Jet fd_jacobian(const std::function<Complex(const Event&)>& f, const Event& e, double h) {
    Jet j{};
    Event p = e, m = e;
    p.x += h; m.x -= h;
    Complex gx = (f(p) - f(m)) / (2.0 * h);
    p = m = e;
    p.y += h; m.y -= h;
    Complex gy = (f(p) - f(m)) / (2.0 * h);
    p = m = e;
    p.z += h; m.z -= h;
    Complex gz = (f(p) - f(m)) / (2.0 * h);
    j.rx = gx.real(); j.ix = gx.imag();
    j.ry = gy.real(); j.iy = gy.imag();
    j.rz = gz.real(); j.iz = gz.imag();
    return j;
}

bool sign_change(double a, double b) { return (a < 0 && b > 0) || (a > 0 && b < 0); }

}  // namespace

SingularLocus extract_zero_locus(const std::function<Complex(const Event&)>& f,
                                 const roots::GridSpec& slice,
                                 const std::function<bool(const Event&)>& validate,
                                 const ExtractOptions& opts) {
    SingularLocus out;
    out.t = slice.t;
    out.res = slice.res;

    const int nx = slice.n[0], ny = slice.n[1], nz = slice.n[2];
    std::vector<Complex> corner(slice.size());
    util::parallel_for(slice.size(), [&](std::size_t idx) {
        corner[idx] = f(slice.point(idx));
    });

    auto corner_at = [&](int i, int j, int k) { return corner[slice.index(i, j, k)]; };

    const double fd_h = 1e-5 * slice.res;
    const double clamp = opts.step_clamp * slice.res;

    for (int k = 0; k + 1 < nz; ++k)
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i + 1 < nx; ++i) {
                // both Re f and Im f must change sign among the 8 corners
                double rmin = std::numeric_limits<double>::infinity(), rmax = -rmin;
                double imin = rmin, imax = -rmin;
                bool finite = true;
                for (int c = 0; c < 8; ++c) {
                    Complex v = corner_at(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
                    if (!is_finite(v)) {
                        finite = false;
                        break;
                    }
                    rmin = std::min(rmin, v.real());
                    rmax = std::max(rmax, v.real());
                    imin = std::min(imin, v.imag());
                    imax = std::max(imax, v.imag());
                }
                if (!finite) continue;
                if (!(sign_change(rmin, rmax) && sign_change(imin, imax))) continue;

                Event p = slice.point(i, j, k);
                const Event cell0 = p;
                p.x += 0.5 * slice.res;
                p.y += 0.5 * slice.res;
                p.z += 0.5 * slice.res;

                // Gauss-Newton on (Re f, Im f): minimal-norm step of the
                // underdetermined 2x3 system.
                bool ok = false;
                double resid = 0.0;
                for (int it = 0; it < opts.max_refine; ++it) {
                    Complex v;
                    try {
                        v = f(p);
                    } catch (const Error&) {
                        break;
                    }
                    resid = std::abs(v);
                    if (resid <= opts.accept_tol) {
                        ok = true;
                        break;
                    }
                    Jet jac;
                    try {
                        jac = fd_jacobian(f, p, fd_h);
                    } catch (const Error&) {
                        break;
                    }
                    // JJt (2x2), rhs = (Re v, Im v)
                    double a = jac.rx * jac.rx + jac.ry * jac.ry + jac.rz * jac.rz;
                    double b = jac.rx * jac.ix + jac.ry * jac.iy + jac.rz * jac.iz;
                    double d = jac.ix * jac.ix + jac.iy * jac.iy + jac.iz * jac.iz;
                    double det = a * d - b * b;
                    if (!(std::abs(det) > 1e-300)) break;
                    double l1 = (d * v.real() - b * v.imag()) / det;
                    double l2 = (-b * v.real() + a * v.imag()) / det;
                    double sx = jac.rx * l1 + jac.ix * l2;
                    double sy = jac.ry * l1 + jac.iy * l2;
                    double sz = jac.rz * l1 + jac.iz * l2;
                    double sn = std::sqrt(sx * sx + sy * sy + sz * sz);
                    if (sn > clamp) {
                        sx *= clamp / sn;
                        sy *= clamp / sn;
                        sz *= clamp / sn;
                    }
                    p.x -= sx;
                    p.y -= sy;
                    p.z -= sz;
                    // keep the refinement near its cell
                    double leash = 2.0 * slice.res;
                    p.x = std::clamp(p.x, cell0.x - leash, cell0.x + slice.res + leash);
                    p.y = std::clamp(p.y, cell0.y - leash, cell0.y + slice.res + leash);
                    p.z = std::clamp(p.z, cell0.z - leash, cell0.z + slice.res + leash);
                }
                if (!ok) continue;
                if (validate && !validate(p)) continue;
                out.points.push_back({p.x, p.y, p.z, resid});
            }
    return out;
}

double max_distance_to_set(const std::vector<SingularLocus::Point>& from,
                           const std::function<double(double, double, double)>& dist_to_set) {
    double m = 0.0;
    for (const auto& p : from) m = std::max(m, dist_to_set(p.x, p.y, p.z));
    return m;
}

}  // namespace eiko::locus
