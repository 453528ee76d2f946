#include "eiko/cauchy.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "eiko/roots.hpp"
#include "eiko/verify.hpp"

namespace eiko::cauchy {

using dsl::GenFun;
using dsl::Params;

// ---------------------------------------------------------- InitialData ----

namespace {

bool mentions_twistor_vars(const dsl::NodePtr& p) {
    if (!p) return false;
    if (p->kind == dsl::Node::Variable) return true;
    return mentions_twistor_vars(p->a) || mentions_twistor_vars(p->b);
}

}  // namespace

InitialData InitialData::closed_form(const GenFun& expr, const Params& params, double t0) {
    if (mentions_twistor_vars(expr.root()))
        throw InvalidInputError(
            "initial data must be a function of x, y, z, t only (no twistor variables)");
    InitialData d;
    d.t0 = t0;
    d.s = [expr, params](const Event& e) {
        Params p = params;
        p["x"] = Complex(e.x);
        p["y"] = Complex(e.y);
        p["z"] = Complex(e.z);
        p["t"] = Complex(e.t);
        return dsl::eval(expr, dsl::EvalContext::at(NullCoords{}, 0.0, p));
    };
    return d;
}

InitialData InitialData::closed_form(const std::string& expr_text, const Params& params,
                                     double t0) {
    return closed_form(GenFun::parse(expr_text), params, t0);
}

InitialData InitialData::sampled_grid(const std::vector<Complex>& values, const double lo[3],
                                      const double hi[3], double res, double t0) {
    roots::GridSpec grid = roots::GridSpec::box3(lo, hi, res, t0);
    if (values.size() != grid.size())
        throw InvalidInputError("sampled_grid: value count does not match the lattice");
    if (grid.n[0] < 4 || grid.n[1] < 4 || grid.n[2] < 4)
        throw InvalidInputError("sampled_grid: need at least 4 points per axis");

    InitialData d;
    d.t0 = t0;
    d.s = [values, grid](const Event& e) -> Complex {
        // cubic Lagrange interpolation per axis on a 4^3 neighborhood
        const double coords[3] = {e.x, e.y, e.z};
        int base[3];
        double frac[3];
        for (int ax = 0; ax < 3; ++ax) {
            double s = (coords[ax] - grid.lo[ax]) / grid.res;
            int i = int(std::floor(s)) - 1;
            i = std::clamp(i, 0, grid.n[ax] - 4);
            base[ax] = i;
            frac[ax] = s - i;  // in [~1, ~2] inside the stencil
        }
        auto lagrange4 = [](double t, const Complex v[4]) {
            Complex r = 0.0;
            static const double nodes[4] = {0, 1, 2, 3};
            for (int a = 0; a < 4; ++a) {
                double lk = 1.0;
                for (int b = 0; b < 4; ++b)
                    if (b != a) lk *= (t - nodes[b]) / (nodes[a] - nodes[b]);
                r += lk * v[a];
            }
            return r;
        };
        Complex plane[4], line[4], vals[4];
        for (int kz = 0; kz < 4; ++kz) {
            for (int ky = 0; ky < 4; ++ky) {
                for (int kx = 0; kx < 4; ++kx)
                    vals[kx] = values[grid.index(base[0] + kx, base[1] + ky, base[2] + kz)];
                line[ky] = lagrange4(frac[0], vals);
            }
            plane[kz] = lagrange4(frac[1], line);
        }
        return lagrange4(frac[2], plane);
    };
    return d;
}

// ------------------------------------------------------------- extract_G ---

Complex extract_G(const InitialData& data, const Event& point, const ExtractOptions& opts) {
    Event e = point;
    e.t = data.t0;
    double h = opts.h > 0 ? opts.h
                          : 1e-5 * (1.0 + std::max({std::abs(e.x), std::abs(e.y),
                                                    std::abs(e.z), std::abs(e.t)}));
    verify::FourGradient g = verify::fd_gradient(data.s, e, h);
    Complex du = g.du(), dv = g.dv(), dw = g.dw(), dwbar = g.dwbar();
    double mag = std::max({std::abs(du), std::abs(dv), std::abs(dw), std::abs(dwbar)});
    if (mag <= opts.stationary_tol)
        throw SingularPointError("extract_G: stationary point (zero gradient)");

    // rank-1 factorization test: du dv - dw dwbar must vanish
    Complex det = du * dv - dw * dwbar;
    if (std::abs(det) > opts.det_tol * mag * mag)
        throw NotEikonalDataError("extract_G: gradient does not factorize (det " +
                                  std::to_string(std::abs(det) / (mag * mag)) +
                                  " relative)");

    double den_scale = 1e-9 * mag;
    bool have_u = std::abs(du) > den_scale;
    bool have_wbar = std::abs(dwbar) > den_scale;
    if (!have_u && !have_wbar)
        throw SingularPointError(
            "extract_G: both ratio denominators vanish (psi0' = 0 patch)");
    if (std::abs(du) >= std::abs(dwbar)) return dw / du;
    return dv / dwbar;
}

// -------------------------------------------------------------- classify ---

namespace {

// 4th-order centered first derivative of fn along axis; the rank test needs
// more accuracy than the second-order stencil delivers.
template <typename F>
auto fd4(const F& fn, double h) -> decltype(fn(0.0)) {
    auto f1 = fn(h), f2 = fn(2.0 * h);
    auto fm1 = fn(-h), fm2 = fn(-2.0 * h);
    return (8.0 * (f1 - fm1) - (f2 - fm2)) / (12.0 * h);
}

struct TwistorTriple {
    Complex g, b0, b1;
};

TwistorTriple triple_at(const InitialData& data, const Event& p, const ExtractOptions& eo) {
    TwistorTriple t;
    t.g = extract_G(data, p, eo);
    Event pt = p;
    pt.t = data.t0;
    NullCoords nc = to_null_coords(pt);
    t.b0 = nc.w * t.g + nc.u;
    t.b1 = nc.v * t.g + nc.wbar;
    return t;
}

}  // namespace

Classification classify(const InitialData& data, const std::vector<Event>& samples,
                        const ClassifyOptions& opts) {
    Classification out{};
    out.cls = SolutionClass::Degenerate;
    out.samples_total = int(samples.size());
    if (samples.empty()) throw InvalidInputError("classify: empty sample set");

    for (const Event& sample : samples) {
        double h = opts.jac_step * (1.0 + std::max({std::abs(sample.x), std::abs(sample.y),
                                                    std::abs(sample.z)}));
        Eigen::Matrix3cd jac;
        bool valid = true;
        bool stationary = false;
        for (int axis = 0; axis < 3 && valid; ++axis) {
            auto probe = [&](double d) {
                Event p = sample;
                (axis == 0 ? p.x : axis == 1 ? p.y : p.z) += d;
                TwistorTriple t = triple_at(data, p, opts.extract);
                return Eigen::Vector3cd(t.g, t.b0, t.b1);
            };
            try {
                jac.col(axis) = fd4(probe, h);
            } catch (const SingularPointError&) {
                stationary = true;
                valid = false;
            } catch (const Error&) {
                valid = false;
            }
        }
        if (!valid) {
            if (stationary) ++out.degenerate_votes;
            continue;
        }
        ++out.samples_valid;
        Eigen::JacobiSVD<Eigen::Matrix3cd> svd(jac);
        double s1 = svd.singularValues()(0);
        double s3 = svd.singularValues()(2);
        double ratio = s1 > 0 ? s3 / s1 : 0.0;
        out.sigma_ratios.push_back(ratio);
        if (s1 < 1e-12)
            ++out.degenerate_votes;
        else if (ratio < opts.rank_tol)
            ++out.rank2_votes;
        else
            ++out.rank3_votes;
    }

    int considered = out.samples_valid + out.degenerate_votes;
    if (considered < int(opts.min_valid * out.samples_total))
        throw InconclusiveError("classify: too few valid samples (" +
                                std::to_string(considered) + " of " +
                                std::to_string(out.samples_total) + ")");

    int need = int(std::ceil(opts.agreement * considered));
    if (out.rank3_votes >= need)
        out.cls = SolutionClass::ClassI;
    else if (out.rank2_votes >= need)
        out.cls = SolutionClass::ClassII;
    else if (out.degenerate_votes >= need)
        out.cls = SolutionClass::Degenerate;
    else
        throw InconclusiveError("classify: no class reaches the agreement threshold");
    return out;
}

// --------------------------------------------------------- evolve_class2 ---

RayEvolveResult evolve_class2(const InitialData& data, const Event& target,
                              const EvolveOptions& opts) {
    if (target.t < data.t0)
        throw PreconditionError("evolve_class2: target time is before the slice");

    const double dt_total = target.t - data.t0;

    // residual of (x0, y0, z0, tau): ray from the slice point must hit the
    // target in space and time
    auto residual = [&](const Eigen::Vector4d& p, Complex& g_out) {
        Event src{p(0), p(1), p(2), data.t0};
        Complex g = extract_G(data, src, opts.extract);
        g_out = g;
        RayDirection k = ray_direction(g);
        double tau = p(3);
        Eigen::Vector4d r;
        r(0) = src.x + tau * k.dx() - target.x;
        r(1) = src.y + tau * k.dy() - target.y;
        r(2) = src.z + tau * k.dz() - target.z;
        r(3) = data.t0 + tau * k.dt() - target.t;
        return r;
    };

    // deterministic restart offsets, scaled by the elapsed time
    static const double jitter[9][3] = {
        {0, 0, 0},      {1, 0, 0},  {-1, 0, 0}, {0, 1, 0},  {0, -1, 0},
        {0, 0, 1},      {0, 0, -1}, {1, 1, -1}, {-1, -1, 1}};

    const double scale = 1.0 + std::max({std::abs(target.x), std::abs(target.y),
                                         std::abs(target.z), std::abs(target.t)});

    for (int attempt = 0; attempt <= opts.restarts; ++attempt) {
        Eigen::Vector4d p(target.x + jitter[attempt][0] * dt_total,
                          target.y + jitter[attempt][1] * dt_total,
                          target.z + jitter[attempt][2] * dt_total,
                          dt_total);
        bool failed = false;
        for (int it = 0; it < opts.max_iter; ++it) {
            Complex g;
            Eigen::Vector4d r;
            try {
                r = residual(p, g);
            } catch (const Error&) {
                failed = true;
                break;
            }
            if (r.norm() <= opts.tol * scale) {
                if (p(3) < -1e-9) {
                    failed = true;  // ray pointing backwards
                    break;
                }
                RayEvolveResult res;
                res.g = g;
                res.source = Event{p(0), p(1), p(2), data.t0};
                res.tau = p(3);
                if (opts.pi) {
                    Complex pv = dsl::eval(
                        *opts.pi, dsl::EvalContext::at(to_null_coords(target), g,
                                                       opts.pi_params));
                    if (std::abs(pv) > 1e-6 * (1.0 + std::abs(g)))
                        throw NoRayFoundError(
                            "evolve_class2: evolved value violates the constraint");
                }
                return res;
            }
            // finite-difference Jacobian in the four real unknowns
            Eigen::Matrix4d jac;
            double hstep = 1e-6 * (1.0 + p.head<3>().norm() + std::abs(p(3)));
            try {
                for (int c = 0; c < 4; ++c) {
                    Eigen::Vector4d pp = p, pm = p;
                    pp(c) += hstep;
                    pm(c) -= hstep;
                    Complex gtmp;
                    jac.col(c) = (residual(pp, gtmp) - residual(pm, gtmp)) / (2.0 * hstep);
                }
            } catch (const Error&) {
                failed = true;
                break;
            }
            Eigen::FullPivLU<Eigen::Matrix4d> lu(jac);
            if (!lu.isInvertible()) {
                failed = true;
                break;
            }
            Eigen::Vector4d step = lu.solve(r);
            double max_step = 2.0 * (1.0 + dt_total) * scale;
            if (step.norm() > max_step) step *= max_step / step.norm();
            p -= step;
        }
        (void)failed;
    }
    throw NoRayFoundError("evolve_class2: Newton did not converge from any seed "
                          "(caustic crossing suspected)");
}

}  // namespace eiko::cauchy
