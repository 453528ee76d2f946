#pragma once

// Holomorphic equation solving at fixed space-time points: reduction of
// rational generating functions to numerator polynomials, all-roots
// extraction via the companion matrix, a Newton fallback for transcendental
// functions, resultants, and branch continuation across grids.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eiko/core.hpp"
#include "eiko/genfun.hpp"

namespace eiko::roots {

/// Dense polynomial over C, coefficients low to high: c[0] + c[1] G + ...
struct PolyC {
    std::vector<Complex> c;

    PolyC() = default;
    explicit PolyC(std::vector<Complex> coeffs) : c(std::move(coeffs)) {}

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const;
    double max_coeff() const;

    Complex eval(const Complex& z) const;
    PolyC derivative() const;

    /// Drop trailing coefficients with |c_k| <= rel * max|c|.
    void trim(double rel = 1e-14);
    /// Drop trailing exact zeros only.
    void trim_exact();

    static PolyC add(const PolyC& a, const PolyC& b);
    static PolyC sub(const PolyC& a, const PolyC& b);
    static PolyC mul(const PolyC& a, const PolyC& b);
    static PolyC scale(const PolyC& a, const Complex& s);
    static PolyC power(const PolyC& a, int n);
};

/// Numerator/denominator pair; the function equals num/den wherever den != 0.
struct RatPoly {
    PolyC num, den;
};

/// Reduce f to a rational function of G at a fixed point: substitutes
/// B0 = w G + u, B1 = v G + wbar, binds parameters and coordinate symbols.
/// Returns nullopt when f contains sqrt/exp/log of a G-dependent subtree.
std::optional<RatPoly> rationalize(const dsl::GenFun& f, const NullCoords& nc,
                                   const dsl::Params& params);

/// Numerator polynomial of rationalize(f); trimmed. Roots of the numerator
/// that are not poles of f are exactly the zeros of f.
std::optional<PolyC> polynomialize(const dsl::GenFun& f, const NullCoords& nc,
                                   const dsl::Params& params);

enum class RootStatus { Ok, NoRoots, IdenticallyZero };

struct RootSet {
    struct Root {
        Complex z;
        int multiplicity = 1;
        double residual = 0.0;
        bool from_reciprocal = false;  // recovered in the H = 1/G chart
    };
    RootStatus status = RootStatus::Ok;
    std::vector<Root> roots;  // sorted by (|z|, arg z)
    std::string diagnostic;

    bool empty() const { return roots.empty(); }
    /// Index of the root nearest to z; -1 when empty.
    int nearest(const Complex& z) const;
};

/// All roots of p with multiplicity estimates, via companion-matrix
/// eigenvalues plus Newton polishing. Roots closer than 1e-7*(1+|z|) are
/// clustered into a single entry with multiplicity.
RootSet all_roots(const PolyC& p);

struct NewtonOptions {
    int max_iter = 100;
    double tol = 1e-12;
    double dedup = 1e-9;
    double divergence_bound = 1e12;
};

/// Newton iteration from each seed; converged roots deduplicated.
/// Non-convergent seeds are dropped (counted in the diagnostic).
RootSet newton_roots(const std::function<Complex(Complex)>& f,
                     const std::function<Complex(Complex)>& fprime,
                     const std::vector<Complex>& seeds,
                     const NewtonOptions& opts = {});

/// Resultant of two polynomials with the formal degrees given by the
/// coefficient vectors (no trimming), computed from the Sylvester matrix of
/// the max-normalized coefficients. Vanishes where the two polynomials have
/// a common root or simultaneously drop degree.
Complex resultant(const std::vector<Complex>& p, const std::vector<Complex>& q);

/// Roots of the generating equation f(G) = 0 at one point: polynomial route
/// when possible, otherwise Newton fallback seeded on circles around hint.
RootSet roots_at(const dsl::GenFun& f, const NullCoords& nc,
                 const dsl::Params& params,
                 std::optional<Complex> hint = std::nullopt);

// ------------------------------------------------------------------ grids --

/// Axis-aligned lattice in a fixed-time slice.
struct GridSpec {
    double lo[3] = {0, 0, 0};
    double hi[3] = {0, 0, 0};
    double res = 1.0;
    double t = 0.0;
    int n[3] = {1, 1, 1};

    static GridSpec box(double lo, double hi, double res, double t);
    static GridSpec box3(const double lo[3], const double hi[3], double res, double t);

    std::size_t size() const {
        return std::size_t(n[0]) * std::size_t(n[1]) * std::size_t(n[2]);
    }
    std::size_t index(int i, int j, int k) const {
        return (std::size_t(k) * n[1] + j) * n[0] + i;
    }
    Event point(int i, int j, int k) const {
        return Event{lo[0] + i * res, lo[1] + j * res, lo[2] + k * res, t};
    }
    Event point(std::size_t idx) const {
        int i = int(idx % n[0]);
        int j = int((idx / n[0]) % n[1]);
        int k = int(idx / (std::size_t(n[0]) * n[1]));
        return point(i, j, k);
    }
    /// Index of the lattice point nearest to e; nullopt outside the box.
    std::optional<std::size_t> nearest_index(const Event& e) const;
};

enum class CellFlag : std::uint8_t {
    Ok = 0,
    NearBranch,   // two nearest roots within 10x of each other
    Singular,     // no root within the jump threshold
    NoRoot,       // equation has no roots here
    Reciprocal,   // |G| beyond the chart bound; value from the 1/G chart
    Unvisited,
};

const char* to_string(CellFlag f);

/// Continuation-selected branch of the root multiset over a grid.
struct BranchedField {
    GridSpec grid;
    std::vector<Complex> g;           // selected branch value
    std::vector<CellFlag> flag;
    std::vector<std::uint8_t> nroots;       // root count at the cell
    std::vector<std::int32_t> parent;       // continuation parent cell, -1 seed
    std::vector<std::int8_t> branch_index;  // index into the sorted root list

    bool ok(std::size_t i) const {
        return flag[i] == CellFlag::Ok || flag[i] == CellFlag::NearBranch;
    }
    std::size_t count(CellFlag f) const;
};

struct TrackOptions {
    double jump_factor = 0.5;       // of the local root spacing
    double near_branch_ratio = 10;  // d2 < ratio * d1 flags the cell
    double gmax = 1e8;              // reciprocal-chart bound on |G|
    double seed_tol = 1e-6;         // acceptance for the seed root
};

/// Breadth-first branch continuation from a seed root over the grid. At each
/// frontier cell the root nearest to the parent's value is selected; visit
/// order is fixed, so the result is deterministic.
BranchedField track_branch(const dsl::GenFun& f, const dsl::Params& params,
                           const GridSpec& grid, const Event& seed_point,
                           const Complex& seed_g, const TrackOptions& opts = {});

/// Continue the branch along the straight segment from one event to another
/// with adaptive stepping. Throws SingularPointError when blocked.
Complex continue_along(const dsl::GenFun& f, const dsl::Params& params,
                       const Event& from, const Complex& g_from, const Event& to,
                       const TrackOptions& opts = {});

/// Newton-polish a single root of f near hint (uses df = total dG derivative).
Complex refine_root(const dsl::GenFun& f, const dsl::GenFun& df,
                    const dsl::Params& params, const NullCoords& nc,
                    const Complex& hint, int max_iter = 60);

}  // namespace eiko::roots
