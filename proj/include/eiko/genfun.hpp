#pragma once

// Holomorphic generating functions of the gauge-fixed twistor variables
// (G, B0, B1) with named complex parameters: parsing, printing, evaluation
// and symbolic differentiation.
//
// Grammar (whitespace insensitive):
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' ['-'] integer)?
//   base   := number | 'i' | identifier | '(' expr ')' | func '(' expr ')'
//   func   := 'sqrt' | 'exp' | 'log'
// Numbers are decimal with optional exponent. 'i' is the imaginary unit.
// Identifiers other than {G, B0, B1, i, u, v, w, wb} are free parameters.
// There is no conjugation operator: every function is holomorphic.
//
// The coordinate symbols u, v, w, wb are rejected in user input; they appear
// only in total-derivative outputs (the CoordGenFun variant) and evaluate
// from the context's null coordinates.

#include <map>
#include <memory>
#include <string>

#include "eiko/core.hpp"

namespace eiko::dsl {

enum class Sym { G, B0, B1, U, V, W, Wbar };
enum class Func { Sqrt, Exp, Log };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    enum Kind { Constant, Variable, Parameter, Add, Sub, Mul, Div, Neg, Pow, Call } kind;
    Complex value{};        // Constant
    Sym sym{};              // Variable
    std::string name;       // Parameter
    NodePtr a, b;           // operands
    int exponent = 0;       // Pow
    Func func{};            // Call
};

// Simplifying node constructors: constant folding plus 0/1 elimination.
// No canonical form is imposed beyond that.
NodePtr make_constant(const Complex& c);
NodePtr make_variable(Sym s);
NodePtr make_parameter(const std::string& name);
NodePtr make_add(NodePtr a, NodePtr b);
NodePtr make_sub(NodePtr a, NodePtr b);
NodePtr make_mul(NodePtr a, NodePtr b);
NodePtr make_div(NodePtr a, NodePtr b);
NodePtr make_neg(NodePtr a);
NodePtr make_pow(NodePtr a, int n);
NodePtr make_call(Func f, NodePtr a);

using Params = std::map<std::string, Complex>;

/// Evaluation point. B0 and B1 are never stored: they derive from the null
/// coordinates as B0 = w*G + u, B1 = v*G + wbar, unless an explicit twistor
/// triple is supplied (useful for testing partial derivatives).
struct EvalContext {
    NullCoords nc{};
    Complex g{};
    Params params;
    bool explicit_twistor = false;
    Complex b0{}, b1{};

    static EvalContext at(const NullCoords& nc, const Complex& g,
                          const Params& params = {}) {
        EvalContext c;
        c.nc = nc;
        c.g = g;
        c.params = params;
        return c;
    }
    static EvalContext twistor(const Complex& g, const Complex& b0,
                               const Complex& b1, const Params& params = {}) {
        EvalContext c;
        c.g = g;
        c.b0 = b0;
        c.b1 = b1;
        c.explicit_twistor = true;
        c.params = params;
        return c;
    }

    Complex b0_value() const {
        return explicit_twistor ? b0 : nc.w * g + nc.u;
    }
    Complex b1_value() const {
        return explicit_twistor ? b1 : nc.v * g + nc.wbar;
    }
};

struct EvalResult {
    Complex value;
    bool principal_branch = false;  // a sqrt/log principal value was taken
};

/// Parsed generating function. Immutable and freely shareable.
class GenFun {
  public:
    GenFun() = default;
    explicit GenFun(NodePtr root) : root_(std::move(root)) {}

    /// Parse user text. Coordinate symbols are rejected unless allow_coords.
    static GenFun parse(const std::string& text, bool allow_coords = false);

    const NodePtr& root() const { return root_; }
    bool empty() const { return !root_; }

    std::string str() const;
    bool has_coords() const;

  private:
    NodePtr root_;
};

/// GenFun whose tree may mention the coordinate symbols (derivative outputs).
using CoordGenFun = GenFun;

EvalResult eval_ex(const GenFun& f, const EvalContext& ctx);
Complex eval(const GenFun& f, const EvalContext& ctx);

/// Partial derivative holding the other twistor variables fixed.
/// var must be one of Sym::G, Sym::B0, Sym::B1.
GenFun d_partial(const GenFun& f, Sym var);

/// Total derivative along the incidence substitutions:
/// d/dG = @/@G + w @/@B0 + v @/@B1.
CoordGenFun d_total_dG(const GenFun& f);

bool structural_equal(const GenFun& f, const GenFun& g);

// Expression-building helpers (used by the field-strength pipeline).
GenFun constant(const Complex& c);
GenFun variable(Sym s);
GenFun operator+(const GenFun& a, const GenFun& b);
GenFun operator-(const GenFun& a, const GenFun& b);
GenFun operator*(const GenFun& a, const GenFun& b);
GenFun operator/(const GenFun& a, const GenFun& b);
GenFun operator-(const GenFun& a);
GenFun pow(const GenFun& a, int n);

}  // namespace eiko::dsl
