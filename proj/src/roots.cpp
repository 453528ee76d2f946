#include "eiko/roots.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <deque>

namespace eiko::roots {

using dsl::GenFun;
using dsl::Node;
using dsl::NodePtr;
using dsl::Params;
using dsl::Sym;

// ---------------------------------------------------------------- PolyC ----

bool PolyC::is_zero() const {
    for (const Complex& z : c)
        if (z != 0.0) return false;
    return true;
}

double PolyC::max_coeff() const {
    double m = 0.0;
    for (const Complex& z : c) m = std::max(m, std::abs(z));
    return m;
}

Complex PolyC::eval(const Complex& z) const {
    Complex r = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) r = r * z + c[k];
    return r;
}

PolyC PolyC::derivative() const {
    PolyC d;
    if (c.size() <= 1) {
        d.c = {Complex(0.0)};
        return d;
    }
    d.c.resize(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d.c[k - 1] = double(k) * c[k];
    return d;
}

void PolyC::trim(double rel) {
    double m = max_coeff();
    double thresh = rel * m;
    while (c.size() > 1 && std::abs(c.back()) <= thresh) c.pop_back();
    if (c.empty()) c = {Complex(0.0)};
}

void PolyC::trim_exact() {
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    if (c.empty()) c = {Complex(0.0)};
}

PolyC PolyC::add(const PolyC& a, const PolyC& b) {
    PolyC r;
    r.c.resize(std::max(a.c.size(), b.c.size()), Complex(0.0));
    for (std::size_t k = 0; k < a.c.size(); ++k) r.c[k] += a.c[k];
    for (std::size_t k = 0; k < b.c.size(); ++k) r.c[k] += b.c[k];
    r.trim_exact();
    return r;
}

PolyC PolyC::sub(const PolyC& a, const PolyC& b) {
    PolyC r;
    r.c.resize(std::max(a.c.size(), b.c.size()), Complex(0.0));
    for (std::size_t k = 0; k < a.c.size(); ++k) r.c[k] += a.c[k];
    for (std::size_t k = 0; k < b.c.size(); ++k) r.c[k] -= b.c[k];
    r.trim_exact();
    return r;
}

PolyC PolyC::mul(const PolyC& a, const PolyC& b) {
    PolyC r;
    if (a.is_zero() || b.is_zero()) {
        r.c = {Complex(0.0)};
        return r;
    }
    r.c.assign(a.c.size() + b.c.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    r.trim_exact();
    return r;
}

PolyC PolyC::scale(const PolyC& a, const Complex& s) {
    PolyC r = a;
    for (Complex& z : r.c) z *= s;
    r.trim_exact();
    return r;
}

PolyC PolyC::power(const PolyC& a, int n) {
    PolyC r(std::vector<Complex>{Complex(1.0)});
    PolyC x = a;
    while (n) {
        if (n & 1) r = mul(r, x);
        x = mul(x, x);
        n >>= 1;
    }
    return r;
}

// ---------------------------------------------------------- rationalize ----

namespace {

constexpr int kMaxPolyDegree = 256;

bool depends_on_g(const NodePtr& p) {
    if (!p) return false;
    if (p->kind == Node::Variable)
        return p->sym == Sym::G || p->sym == Sym::B0 || p->sym == Sym::B1;
    return depends_on_g(p->a) || depends_on_g(p->b);
}

struct RatBuilder {
    const NullCoords& nc;
    const Params& params;

    std::optional<RatPoly> run(const NodePtr& p) {
        switch (p->kind) {
            case Node::Constant:
                return constant(p->value);
            case Node::Parameter: {
                auto it = params.find(p->name);
                if (it == params.end()) throw UnboundParameterError(p->name);
                return constant(it->second);
            }
            case Node::Variable:
                switch (p->sym) {
                    case Sym::G: return linear(0.0, 1.0);
                    case Sym::B0: return linear(nc.u, nc.w);
                    case Sym::B1: return linear(nc.wbar, nc.v);
                    case Sym::U: return constant(nc.u);
                    case Sym::V: return constant(nc.v);
                    case Sym::W: return constant(nc.w);
                    case Sym::Wbar: return constant(nc.wbar);
                }
                return std::nullopt;
            case Node::Add: return combine(p, +1);
            case Node::Sub: return combine(p, -1);
            case Node::Mul: {
                auto a = run(p->a), b = run(p->b);
                if (!a || !b) return std::nullopt;
                return guard({PolyC::mul(a->num, b->num), PolyC::mul(a->den, b->den)});
            }
            case Node::Div: {
                auto a = run(p->a), b = run(p->b);
                if (!a || !b) return std::nullopt;
                if (b->num.is_zero())
                    throw PoleError("identically zero denominator");
                return guard({PolyC::mul(a->num, b->den), PolyC::mul(a->den, b->num)});
            }
            case Node::Neg: {
                auto a = run(p->a);
                if (!a) return std::nullopt;
                return RatPoly{PolyC::scale(a->num, -1.0), a->den};
            }
            case Node::Pow: {
                auto a = run(p->a);
                if (!a) return std::nullopt;
                int e = p->exponent;
                if (e < 0) {
                    if (a->num.is_zero()) throw PoleError("identically zero denominator");
                    std::swap(a->num, a->den);
                    e = -e;
                }
                return guard({PolyC::power(a->num, e), PolyC::power(a->den, e)});
            }
            case Node::Call: {
                // Transcendental of a G-independent subtree is a constant at
                // this point; otherwise f is not rational in G.
                if (depends_on_g(p)) return std::nullopt;
                dsl::EvalContext ctx = dsl::EvalContext::at(nc, 0.0, params);
                return constant(dsl::eval(dsl::GenFun(p), ctx));
            }
        }
        return std::nullopt;
    }

  private:
    static RatPoly constant(const Complex& v) {
        return {PolyC(std::vector<Complex>{v}), PolyC(std::vector<Complex>{Complex(1.0)})};
    }
    static RatPoly linear(const Complex& c0, const Complex& c1) {
        PolyC num(std::vector<Complex>{c0, c1});
        num.trim_exact();
        return {num, PolyC(std::vector<Complex>{Complex(1.0)})};
    }
    std::optional<RatPoly> combine(const NodePtr& p, int sign) {
        auto a = run(p->a), b = run(p->b);
        if (!a || !b) return std::nullopt;
        PolyC cross_a = PolyC::mul(a->num, b->den);
        PolyC cross_b = PolyC::mul(b->num, a->den);
        PolyC num = sign > 0 ? PolyC::add(cross_a, cross_b) : PolyC::sub(cross_a, cross_b);
        return guard({std::move(num), PolyC::mul(a->den, b->den)});
    }
    static std::optional<RatPoly> guard(RatPoly r) {
        if (r.num.degree() > kMaxPolyDegree || r.den.degree() > kMaxPolyDegree)
            return std::nullopt;
        return r;
    }
};

}  // namespace

std::optional<RatPoly> rationalize(const GenFun& f, const NullCoords& nc,
                                   const Params& params) {
    if (f.empty()) throw InvalidInputError("rationalize: empty function");
    RatBuilder b{nc, params};
    return b.run(f.root());
}

std::optional<PolyC> polynomialize(const GenFun& f, const NullCoords& nc,
                                   const Params& params) {
    auto r = rationalize(f, nc, params);
    if (!r) return std::nullopt;
    PolyC num = std::move(r->num);
    num.trim();
    return num;
}

// ------------------------------------------------------------ all_roots ----

int RootSet::nearest(const Complex& z) const {
    int best = -1;
    double bd = 0.0;
    for (std::size_t k = 0; k < roots.size(); ++k) {
        double d = std::abs(roots[k].z - z);
        if (best < 0 || d < bd) {
            best = int(k);
            bd = d;
        }
    }
    return best;
}

namespace {

void sort_roots(std::vector<RootSet::Root>& rs) {
    std::sort(rs.begin(), rs.end(), [](const RootSet::Root& a, const RootSet::Root& b) {
        double ma = std::abs(a.z), mb = std::abs(b.z);
        if (ma != mb) return ma < mb;
        return std::arg(a.z) < std::arg(b.z);
    });
}

Complex polish_newton(const PolyC& p, const PolyC& dp, Complex z, int iters) {
    double best = std::abs(p.eval(z));
    Complex bestz = z;
    for (int k = 0; k < iters; ++k) {
        Complex d = dp.eval(z);
        if (d == 0.0) break;
        Complex step = p.eval(z) / d;
        z -= step;
        double r = std::abs(p.eval(z));
        if (r < best) {
            best = r;
            bestz = z;
        }
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
    }
    return bestz;
}

std::vector<Complex> companion_eigenvalues(const std::vector<Complex>& monic_low_to_high) {
    // monic: highest coefficient 1, not stored; vector holds c0..c_{n-1}
    const int n = int(monic_low_to_high.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int r = 1; r < n; ++r) m(r, r - 1) = 1.0;
    for (int r = 0; r < n; ++r) m(r, n - 1) = -monic_low_to_high[r];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/false);
    std::vector<Complex> out(n);
    for (int k = 0; k < n; ++k) out[k] = es.eigenvalues()(k);
    return out;
}

}  // namespace

RootSet all_roots(const PolyC& p_in) {
    RootSet rs;
    PolyC p = p_in;
    p.trim();
    if (p.is_zero()) {
        rs.status = RootStatus::IdenticallyZero;
        return rs;
    }
    if (p.degree() == 0) {
        rs.status = RootStatus::NoRoots;
        return rs;
    }

    const int n = p.degree();
    const double cmax = p.max_coeff();

    std::vector<Complex> monic(n);
    for (int k = 0; k < n; ++k) monic[k] = p.c[k] / p.c[n];
    std::vector<Complex> eig = companion_eigenvalues(monic);

    PolyC dp = p.derivative();
    std::vector<RootSet::Root> raw;
    raw.reserve(n);
    for (Complex z : eig) {
        RootSet::Root r;
        r.z = polish_newton(p, dp, z, 6);
        if (std::abs(r.z) > 1e8) {
            // Recover large roots in the reciprocal chart: roots of the
            // reversed polynomial near zero.
            PolyC rev;
            rev.c.assign(p.c.rbegin(), p.c.rend());
            PolyC drev = rev.derivative();
            Complex h = polish_newton(rev, drev, 1.0 / r.z, 8);
            if (h != 0.0 && std::abs(rev.eval(h)) <= std::abs(p.eval(r.z))) {
                r.z = 1.0 / h;
                r.from_reciprocal = true;
            }
        }
        r.residual = std::abs(p.eval(r.z));
        raw.push_back(r);
    }

    // Cluster near-coincident roots into multiplicity groups.
    std::vector<bool> used(raw.size(), false);
    std::vector<RootSet::Root> grouped;
    for (std::size_t a = 0; a < raw.size(); ++a) {
        if (used[a]) continue;
        std::vector<std::size_t> cluster{a};
        used[a] = true;
        for (std::size_t b = a + 1; b < raw.size(); ++b) {
            if (used[b]) continue;
            double tol = 1e-7 * (1.0 + std::abs(raw[a].z));
            if (std::abs(raw[b].z - raw[a].z) < tol) {
                cluster.push_back(b);
                used[b] = true;
            }
        }
        RootSet::Root g;
        Complex mean = 0.0;
        bool recip = false;
        for (std::size_t idx : cluster) {
            mean += raw[idx].z;
            recip = recip || raw[idx].from_reciprocal;
        }
        g.z = mean / double(cluster.size());
        g.multiplicity = int(cluster.size());
        g.residual = std::abs(p.eval(g.z));
        g.from_reciprocal = recip;
        grouped.push_back(g);
    }

    // Residual sanity bound per root (documented invariant).
    for (RootSet::Root& r : grouped) {
        double bound = 1e-12 * cmax * std::pow(1.0 + std::abs(r.z), n);
        if (r.residual > bound) {
            r.z = polish_newton(p, dp, r.z, 30);
            r.residual = std::abs(p.eval(r.z));
        }
    }

    sort_roots(grouped);
    rs.roots = std::move(grouped);
    return rs;
}

// --------------------------------------------------------- newton_roots ----

RootSet newton_roots(const std::function<Complex(Complex)>& f,
                     const std::function<Complex(Complex)>& fprime,
                     const std::vector<Complex>& seeds, const NewtonOptions& opts) {
    RootSet rs;
    int dropped = 0;
    for (Complex z0 : seeds) {
        Complex z = z0;
        bool converged = false;
        for (int it = 0; it < opts.max_iter; ++it) {
            Complex d = fprime(z);
            if (d == 0.0 || !is_finite(d)) break;
            Complex step = f(z) / d;
            z -= step;
            if (!is_finite(z) || std::abs(z) > opts.divergence_bound) break;
            if (std::abs(step) <= opts.tol * (1.0 + std::abs(z))) {
                double scale = 1.0 + std::abs(fprime(z)) * (1.0 + std::abs(z));
                if (std::abs(f(z)) <= opts.tol * scale) converged = true;
                break;
            }
        }
        if (!converged) {
            ++dropped;
            continue;
        }
        bool dup = false;
        for (const RootSet::Root& r : rs.roots)
            if (std::abs(r.z - z) <= opts.dedup * (1.0 + std::abs(z))) {
                dup = true;
                break;
            }
        if (!dup) {
            RootSet::Root r;
            r.z = z;
            r.residual = std::abs(f(z));
            rs.roots.push_back(r);
        }
    }
    if (dropped)
        rs.diagnostic = std::to_string(dropped) + " of " + std::to_string(seeds.size()) +
                        " seeds did not converge";
    sort_roots(rs.roots);
    return rs;
}

// ------------------------------------------------------------ resultant ----

Complex resultant(const std::vector<Complex>& p, const std::vector<Complex>& q) {
    const int m = int(p.size()) - 1;
    const int n = int(q.size()) - 1;
    if (m < 0 || n < 0) return 0.0;

    auto normalized = [](const std::vector<Complex>& c) {
        double mx = 0.0;
        for (const Complex& z : c) mx = std::max(mx, std::abs(z));
        std::vector<Complex> out = c;
        if (mx > 0.0)
            for (Complex& z : out) z /= mx;
        return out;
    };
    std::vector<Complex> pn = normalized(p), qn = normalized(q);

    if (m == 0 && n == 0) return 1.0;
    if (m == 0) {
        Complex r = 1.0;
        for (int k = 0; k < n; ++k) r *= pn[0];
        return r;
    }
    if (n == 0) {
        Complex r = 1.0;
        for (int k = 0; k < m; ++k) r *= qn[0];
        return r;
    }

    const int sz = m + n;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(sz, sz);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) s(r, r + k) = pn[m - k];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) s(n + r, r + k) = qn[n - k];
    return s.partialPivLu().determinant();
}

// ------------------------------------------------------------- roots_at ----

RootSet roots_at(const GenFun& f, const NullCoords& nc, const Params& params,
                 std::optional<Complex> hint) {
    auto poly = polynomialize(f, nc, params);
    if (poly) return all_roots(*poly);

    // Newton fallback for non-rational equations, seeded on circles around
    // the hint (or the origin).
    Complex center = hint.value_or(Complex(0.0));
    dsl::GenFun df = dsl::d_total_dG(f);
    auto fe = [&](Complex z) { return dsl::eval(f, dsl::EvalContext::at(nc, z, params)); };
    auto fp = [&](Complex z) { return dsl::eval(df, dsl::EvalContext::at(nc, z, params)); };
    std::vector<Complex> seeds;
    seeds.push_back(center);
    for (double radius : {0.5, 1.0, 2.0}) {
        double r = radius * (1.0 + std::abs(center));
        for (int k = 0; k < 8; ++k) {
            double phi = 2.0 * M_PI * k / 8.0;
            seeds.push_back(center + Complex(r * std::cos(phi), r * std::sin(phi)));
        }
    }
    return newton_roots(fe, fp, seeds);
}

// ---------------------------------------------------------------- grids ----

GridSpec GridSpec::box(double lo, double hi, double res, double t) {
    const double l[3] = {lo, lo, lo};
    const double h[3] = {hi, hi, hi};
    return box3(l, h, res, t);
}

GridSpec GridSpec::box3(const double lo[3], const double hi[3], double res, double t) {
    if (res <= 0.0) throw InvalidInputError("grid resolution must be positive");
    GridSpec g;
    g.res = res;
    g.t = t;
    for (int d = 0; d < 3; ++d) {
        if (hi[d] < lo[d]) throw InvalidInputError("grid box is empty");
        g.lo[d] = lo[d];
        g.hi[d] = hi[d];
        g.n[d] = int(std::floor((hi[d] - lo[d]) / res + 1e-9)) + 1;
    }
    return g;
}

std::optional<std::size_t> GridSpec::nearest_index(const Event& e) const {
    const double coords[3] = {e.x, e.y, e.z};
    int idx[3];
    for (int d = 0; d < 3; ++d) {
        int i = int(std::lround((coords[d] - lo[d]) / res));
        if (i < 0 || i >= n[d]) return std::nullopt;
        idx[d] = i;
    }
    return index(idx[0], idx[1], idx[2]);
}

const char* to_string(CellFlag f) {
    switch (f) {
        case CellFlag::Ok: return "ok";
        case CellFlag::NearBranch: return "near-branch";
        case CellFlag::Singular: return "singular";
        case CellFlag::NoRoot: return "no-root";
        case CellFlag::Reciprocal: return "reciprocal";
        case CellFlag::Unvisited: return "unvisited";
    }
    return "?";
}

std::size_t BranchedField::count(CellFlag f) const {
    std::size_t c = 0;
    for (CellFlag x : flag)
        if (x == f) ++c;
    return c;
}

// --------------------------------------------------------- track_branch ----

namespace {

double local_root_spacing(const RootSet& rs) {
    if (rs.roots.size() < 2) return std::numeric_limits<double>::infinity();
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < rs.roots.size(); ++a)
        for (std::size_t b = a + 1; b < rs.roots.size(); ++b)
            m = std::min(m, std::abs(rs.roots[a].z - rs.roots[b].z));
    return m;
}

struct Selection {
    int index = -1;
    CellFlag flag = CellFlag::NoRoot;
};

Selection select_root(const RootSet& rs, const Complex& ref, const TrackOptions& opts) {
    Selection s;
    if (rs.roots.empty()) {
        s.flag = CellFlag::NoRoot;
        return s;
    }
    s.index = rs.nearest(ref);
    double d1 = std::abs(rs.roots[s.index].z - ref);
    double spacing = local_root_spacing(rs);
    if (d1 > opts.jump_factor * spacing) {
        s.index = -1;
        s.flag = CellFlag::Singular;
        return s;
    }
    s.flag = CellFlag::Ok;
    if (rs.roots.size() >= 2) {
        double d2 = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < rs.roots.size(); ++k) {
            if (int(k) == s.index) continue;
            d2 = std::min(d2, std::abs(rs.roots[k].z - ref));
        }
        if (d2 < opts.near_branch_ratio * d1) s.flag = CellFlag::NearBranch;
    }
    if (std::abs(rs.roots[s.index].z) > opts.gmax) s.flag = CellFlag::Reciprocal;
    return s;
}

}  // namespace

BranchedField track_branch(const GenFun& f, const Params& params, const GridSpec& grid,
                           const Event& seed_point, const Complex& seed_g,
                           const TrackOptions& opts) {
    BranchedField bf;
    bf.grid = grid;
    const std::size_t total = grid.size();
    bf.g.assign(total, Complex(0.0));
    bf.flag.assign(total, CellFlag::Unvisited);
    bf.nroots.assign(total, 0);
    bf.parent.assign(total, -1);
    bf.branch_index.assign(total, -1);

    auto seed_idx = grid.nearest_index(Event{seed_point.x, seed_point.y, seed_point.z, grid.t});
    if (!seed_idx) throw PreconditionError("seed point outside the grid box");

    Event se = grid.point(*seed_idx);
    RootSet seed_roots = roots_at(f, to_null_coords(se), params, seed_g);
    int si = seed_roots.nearest(seed_g);
    if (si < 0 || std::abs(seed_roots.roots[si].z - seed_g) >
                      opts.seed_tol * (1.0 + std::abs(seed_g)))
        throw PreconditionError("seed value is not a root of the equation at the seed point");

    bf.g[*seed_idx] = seed_roots.roots[si].z;
    bf.flag[*seed_idx] = CellFlag::Ok;
    bf.nroots[*seed_idx] = std::uint8_t(std::min<std::size_t>(seed_roots.roots.size(), 255));
    bf.branch_index[*seed_idx] = std::int8_t(si);

    // Breadth-first wavefronts; each layer is processed in ascending cell
    // index so the continuation is deterministic.
    std::vector<std::size_t> layer{*seed_idx};
    std::vector<std::size_t> next_layer;
    std::vector<bool> queued(total, false);
    queued[*seed_idx] = true;

    const int nx = grid.n[0], ny = grid.n[1], nz = grid.n[2];
    auto decompose = [&](std::size_t idx, int& i, int& j, int& k) {
        i = int(idx % nx);
        j = int((idx / nx) % ny);
        k = int(idx / (std::size_t(nx) * ny));
    };

    while (!layer.empty()) {
        next_layer.clear();
        for (std::size_t idx : layer) {
            if (!bf.ok(idx) && bf.flag[idx] != CellFlag::Reciprocal) continue;
            int i, j, k;
            decompose(idx, i, j, k);
            const int di[6] = {-1, 1, 0, 0, 0, 0};
            const int dj[6] = {0, 0, -1, 1, 0, 0};
            const int dk[6] = {0, 0, 0, 0, -1, 1};
            for (int d = 0; d < 6; ++d) {
                int ii = i + di[d], jj = j + dj[d], kk = k + dk[d];
                if (ii < 0 || ii >= nx || jj < 0 || jj >= ny || kk < 0 || kk >= nz) continue;
                std::size_t nidx = grid.index(ii, jj, kk);
                if (queued[nidx]) continue;
                queued[nidx] = true;
                bf.parent[nidx] = std::int32_t(idx);
                next_layer.push_back(nidx);
            }
        }
        std::sort(next_layer.begin(), next_layer.end());
        for (std::size_t nidx : next_layer) {
            std::size_t pidx = std::size_t(bf.parent[nidx]);
            Complex ref = bf.g[pidx];
            RootSet rs = roots_at(f, to_null_coords(bf.grid.point(nidx)), params, ref);
            bf.nroots[nidx] = std::uint8_t(std::min<std::size_t>(rs.roots.size(), 255));
            Selection sel = select_root(rs, ref, opts);
            bf.flag[nidx] = sel.flag;
            if (sel.index >= 0) {
                bf.g[nidx] = rs.roots[sel.index].z;
                bf.branch_index[nidx] = std::int8_t(sel.index);
            }
        }
        layer.swap(next_layer);
        // Cells flagged singular/no-root do not expand, which leaves holes;
        // their neighbors stay reachable from other directions because the
        // wavefront grows around them.
        std::vector<std::size_t> expandable;
        for (std::size_t idx : layer)
            if (bf.ok(idx) || bf.flag[idx] == CellFlag::Reciprocal) expandable.push_back(idx);
        layer.swap(expandable);
    }
    return bf;
}

// ------------------------------------------------------- continue_along ----

Complex continue_along(const GenFun& f, const Params& params, const Event& from,
                       const Complex& g_from, const Event& to, const TrackOptions& opts) {
    double lambda = 0.0;
    double step = 0.125;
    Complex g = g_from;
    Event cur = from;
    auto lerp = [&](double s) {
        return Event{from.x + s * (to.x - from.x), from.y + s * (to.y - from.y),
                     from.z + s * (to.z - from.z), from.t + s * (to.t - from.t)};
    };
    int guard = 0;
    while (lambda < 1.0) {
        if (++guard > 4000) throw SingularPointError("branch continuation stalled");
        double next = std::min(1.0, lambda + step);
        Event probe = lerp(next);
        RootSet rs = roots_at(f, to_null_coords(probe), params, g);
        Selection sel = select_root(rs, g, opts);
        if (sel.index < 0) {
            step *= 0.5;
            if (step < 1e-7)
                throw SingularPointError("branch continuation blocked near a singular cell");
            continue;
        }
        g = rs.roots[sel.index].z;
        cur = probe;
        lambda = next;
        if (step < 0.125) step *= 2.0;
    }
    (void)cur;
    return g;
}

// ---------------------------------------------------------- refine_root ----

Complex refine_root(const GenFun& f, const GenFun& df, const Params& params,
                    const NullCoords& nc, const Complex& hint, int max_iter) {
    Complex z = hint;
    for (int it = 0; it < max_iter; ++it) {
        Complex d = dsl::eval(df, dsl::EvalContext::at(nc, z, params));
        if (d == 0.0) throw SingularPointError("refine_root: vanishing derivative");
        Complex step = dsl::eval(f, dsl::EvalContext::at(nc, z, params)) / d;
        z -= step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) return z;
    }
    Complex residual = dsl::eval(f, dsl::EvalContext::at(nc, z, params));
    if (std::abs(residual) <= 1e-10 * (1.0 + std::abs(z))) return z;
    throw SingularPointError("refine_root: no convergence from hint");
}

}  // namespace eiko::roots
