#include "eiko/fields.hpp"

#include <cmath>
#include <vector>

#include "eiko/util.hpp"

namespace eiko::em {

using dsl::EvalContext;
using dsl::GenFun;

ComplexFieldVector to_vector(const EMSpinor& f, double norm) {
    ComplexFieldVector v;
    const Complex mi(0.0, -1.0);
    v.fx = norm * (f.f00 - f.f11);
    v.fy = norm * mi * (f.f00 + f.f11);
    v.fz = norm * (-2.0) * f.f01;
    return v;
}

EMField::EMField(const GenFun& pi, const dsl::Params& params, const Event& seed_point,
                 const Complex& seed_g)
    : cong_(pi, params), seed_point_(seed_point), seed_g_(seed_g) {
    // Verify the seed is on the constraint.
    Complex pv = dsl::eval(pi, EvalContext::at(to_null_coords(seed_point), seed_g, params));
    if (std::abs(pv) > 1e-6 * (1.0 + std::abs(seed_g)))
        throw PreconditionError("EMField: seed value does not satisfy the constraint");

    GenFun pa[2] = {cong_.pi_b0, cong_.pi_b1};
    const GenFun& q = cong_.q;
    // index pairs (0,0), (0,1), (1,1)
    const int ia[3] = {0, 0, 1};
    const int ib[3] = {0, 1, 1};
    for (int k = 0; k < 3; ++k) {
        GenFun pab = dsl::d_partial(pa[ia[k]], ib[k] == 0 ? dsl::Sym::B0 : dsl::Sym::B1);
        GenFun t = dsl::d_total_dG(pa[ia[k]] * pa[ib[k]] / q);
        f_ast_[k] = (pab - t) / q;
    }
}

Complex EMField::branch_at(const Event& e) const {
    return roots::continue_along(cong_.pi, cong_.params, seed_point_, seed_g_, e);
}

EMSpinor EMField::spinor_at(const Event& e, std::optional<Complex> hint) const {
    Complex g = hint ? cong_.g_at(e, *hint) : branch_at(e);
    NullCoords nc = to_null_coords(e);
    EvalContext ctx = EvalContext::at(nc, g, cong_.params);
    Complex qv = dsl::eval(cong_.q, ctx);
    double scale = 1.0 + std::abs(g);
    if (auto poly = roots::polynomialize(cong_.pi, nc, cong_.params)) {
        roots::PolyC dq = poly->derivative();
        scale = 1.0 + dq.max_coeff() * std::pow(1.0 + std::abs(g), std::max(dq.degree(), 0));
    }
    if (std::abs(qv) <= 1e-10 * scale)
        throw SingularPointError("em_spinor: Q vanishes (field is singular here)");
    EMSpinor f;
    f.f00 = dsl::eval(f_ast_[0], ctx);
    f.f01 = dsl::eval(f_ast_[1], ctx);
    f.f11 = dsl::eval(f_ast_[2], ctx);
    return f;
}

ComplexFieldVector EMField::vector_at(const Event& e, std::optional<Complex> hint) const {
    return to_vector(spinor_at(e, hint));
}

// ----------------------------------------------------- Gauss-Legendre ------

namespace {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int k = 0; k < n; ++k) {
        double t = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double step = p1 / dp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        x[k] = t;
        w[k] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace

double EMField::flux_once(const Event& center, double radius, int order) const {
    std::vector<double> ct, wt;
    gauss_legendre(order, ct, wt);
    const int nphi = 2 * order;
    const double dphi = 2.0 * M_PI / nphi;

    // March the branch over the sphere: rows from the first node, each row
    // seeded from the previous row's first node.
    util::KahanSum acc;
    Complex row_start_g = 0.0;
    for (int i = 0; i < order; ++i) {
        double c = ct[i];
        double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        Complex g_prev = 0.0;
        for (int j = 0; j < nphi; ++j) {
            double phi = j * dphi;
            Event p{center.x + radius * s * std::cos(phi),
                    center.y + radius * s * std::sin(phi), center.z + radius * c,
                    center.t};
            Complex g;
            if (i == 0 && j == 0) {
                g = branch_at(p);
            } else {
                Complex hint = (j == 0) ? row_start_g : g_prev;
                try {
                    g = cong_.g_at(p, hint);
                } catch (const SingularPointError&) {
                    g = roots::continue_along(cong_.pi, cong_.params, seed_point_, seed_g_, p);
                }
            }
            if (j == 0) row_start_g = g;
            g_prev = g;

            ComplexFieldVector f = to_vector(spinor_at(p, g));
            double nx = s * std::cos(phi), ny = s * std::sin(phi), nz = c;
            double flux_density =
                f.fx.real() * nx + f.fy.real() * ny + f.fz.real() * nz;
            acc.add(wt[i] * dphi * flux_density);
        }
    }
    return radius * radius * acc.value() / (4.0 * M_PI);
}

FluxResult EMField::charge(const Event& center, double radius, int order) const {
    if (order < 4) throw InvalidInputError("charge: quadrature order too small");
    FluxResult r;
    r.radius = radius;
    r.order = 2 * order;
    double q1 = flux_once(center, radius, order);
    double q2 = flux_once(center, radius, 2 * order);
    r.q = q2;
    r.err = std::abs(q2 - q1);
    return r;
}

// ------------------------------------------------------ Maxwell residual ---

namespace {

struct VecDerivs {
    Complex dx[3], dy[3], dz[3], dt[3];
};

VecDerivs fd_derivs(const std::function<ComplexFieldVector(const Event&)>& field,
                    const Event& e, double h) {
    auto sample = [&](double ax, double ay, double az, double at) {
        Event p{e.x + ax, e.y + ay, e.z + az, e.t + at};
        ComplexFieldVector f = field(p);
        return std::array<Complex, 3>{f.fx, f.fy, f.fz};
    };
    VecDerivs d;
    auto diff = [&](Complex out[3], double ax, double ay, double az, double at) {
        auto fp = sample(ax, ay, az, at);
        auto fm = sample(-ax, -ay, -az, -at);
        for (int k = 0; k < 3; ++k) out[k] = (fp[k] - fm[k]) / (2.0 * h);
    };
    diff(d.dx, h, 0, 0, 0);
    diff(d.dy, 0, h, 0, 0);
    diff(d.dz, 0, 0, h, 0);
    diff(d.dt, 0, 0, 0, h);
    return d;
}

}  // namespace

std::pair<Complex, std::array<Complex, 3>> maxwell_residual(
    const std::function<ComplexFieldVector(const Event&)>& field, const Event& e,
    double h) {
    // Richardson: D = (4 D_{h/2} - D_h) / 3 kills the h^2 term.
    VecDerivs a = fd_derivs(field, e, h);
    VecDerivs b = fd_derivs(field, e, 0.5 * h);
    auto rich = [](const Complex& coarse, const Complex& fine) {
        return (4.0 * fine - coarse) / 3.0;
    };

    Complex divf = rich(a.dx[0] + a.dy[1] + a.dz[2], b.dx[0] + b.dy[1] + b.dz[2]);
    const Complex iunit(0.0, 1.0);
    std::array<Complex, 3> curl_minus_idt;
    Complex curl_a[3] = {a.dy[2] - a.dz[1], a.dz[0] - a.dx[2], a.dx[1] - a.dy[0]};
    Complex curl_b[3] = {b.dy[2] - b.dz[1], b.dz[0] - b.dx[2], b.dx[1] - b.dy[0]};
    for (int k = 0; k < 3; ++k)
        curl_minus_idt[k] = rich(curl_a[k] - iunit * a.dt[k], curl_b[k] - iunit * b.dt[k]);
    return {divf, curl_minus_idt};
}

}  // namespace eiko::em
