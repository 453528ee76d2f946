#include "eiko/genfun.hpp"

#include <cctype>
#include <cstdlib>
#include <utility>
#include <vector>

#include "eiko/util.hpp"

namespace eiko::dsl {

// ---------------------------------------------------------------- nodes ----

static NodePtr node(Node n) { return std::make_shared<const Node>(std::move(n)); }

static bool is_const(const NodePtr& p, const Complex& c) {
    return p->kind == Node::Constant && p->value == c;
}
static bool is_const(const NodePtr& p) { return p->kind == Node::Constant; }

NodePtr make_constant(const Complex& c) {
    Node n;
    n.kind = Node::Constant;
    n.value = c;
    return node(std::move(n));
}

NodePtr make_variable(Sym s) {
    Node n;
    n.kind = Node::Variable;
    n.sym = s;
    return node(std::move(n));
}

NodePtr make_parameter(const std::string& name) {
    Node n;
    n.kind = Node::Parameter;
    n.name = name;
    return node(std::move(n));
}

NodePtr make_add(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return make_constant(a->value + b->value);
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    Node n;
    n.kind = Node::Add;
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

NodePtr make_sub(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return make_constant(a->value - b->value);
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return make_neg(std::move(b));
    Node n;
    n.kind = Node::Sub;
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

NodePtr make_mul(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return make_constant(a->value * b->value);
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    Node n;
    n.kind = Node::Mul;
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

NodePtr make_div(NodePtr a, NodePtr b) {
    // Constant/constant folds only when the denominator is nonzero; a zero
    // denominator is kept so evaluation reports the pole.
    if (is_const(a) && is_const(b) && b->value != 0.0)
        return make_constant(a->value / b->value);
    if (is_const(b, 1.0)) return a;
    if (is_const(a, 0.0) && !is_const(b, 0.0)) return make_constant(0.0);
    Node n;
    n.kind = Node::Div;
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

NodePtr make_neg(NodePtr a) {
    if (is_const(a)) return make_constant(-a->value);
    if (a->kind == Node::Neg) return a->a;
    Node n;
    n.kind = Node::Neg;
    n.a = std::move(a);
    return node(std::move(n));
}

NodePtr make_pow(NodePtr a, int e) {
    if (e == 0) return make_constant(1.0);
    if (e == 1) return a;
    if (is_const(a)) {
        Complex base = a->value;
        if (e > 0 || base != 0.0) {
            Complex r = 1.0;
            Complex x = e > 0 ? base : 1.0 / base;
            int k = e > 0 ? e : -e;
            while (k) {
                if (k & 1) r *= x;
                x *= x;
                k >>= 1;
            }
            return make_constant(r);
        }
    }
    Node n;
    n.kind = Node::Pow;
    n.a = std::move(a);
    n.exponent = e;
    return node(std::move(n));
}

NodePtr make_call(Func f, NodePtr a) {
    Node n;
    n.kind = Node::Call;
    n.func = f;
    n.a = std::move(a);
    return node(std::move(n));
}

// ---------------------------------------------------------------- lexer ----

namespace {

struct Token {
    enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
    std::string text;
    double number = 0;
    int line = 1, col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& s) : s_(s) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_ws();
            Token t;
            t.line = line_;
            t.col = col_;
            if (pos_ >= s_.size()) {
                t.kind = Token::End;
                // Report end-of-input at the last consumed token's position.
                if (!out.empty()) {
                    t.line = out.back().line;
                    t.col = out.back().col;
                }
                out.push_back(t);
                return out;
            }
            char c = s_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                t.kind = Token::Number;
                t.text = lex_number();
                t.number = std::strtod(t.text.c_str(), nullptr);
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                t.kind = Token::Ident;
                t.text = lex_ident();
            } else {
                switch (c) {
                    case '+': t.kind = Token::Plus; break;
                    case '-': t.kind = Token::Minus; break;
                    case '*': t.kind = Token::Star; break;
                    case '/': t.kind = Token::Slash; break;
                    case '^': t.kind = Token::Caret; break;
                    case '(': t.kind = Token::LParen; break;
                    case ')': t.kind = Token::RParen; break;
                    default:
                        throw ParseError(std::string("unexpected character '") + c + "'",
                                         line_, col_);
                }
                t.text = c;
                bump();
            }
            out.push_back(t);
        }
    }

  private:
    void bump() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) bump();
    }
    std::string lex_number() {
        int line = line_, col = col_;
        std::size_t start = pos_;
        bool digits = false;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            digits = true;
            bump();
        }
        if (pos_ < s_.size() && s_[pos_] == '.') {
            bump();
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                digits = true;
                bump();
            }
        }
        if (!digits) throw ParseError("malformed number", line, col);
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t mark = pos_;
            bump();
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) bump();
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) bump();
            } else {
                // not an exponent after all (e.g. "2e" where e is an identifier)
                pos_ = mark;
            }
        }
        return s_.substr(start, pos_ - start);
    }
    std::string lex_ident() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            bump();
        return s_.substr(start, pos_ - start);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

// --------------------------------------------------------------- parser ----

class Parser {
  public:
    Parser(std::vector<Token> toks, bool allow_coords)
        : toks_(std::move(toks)), allow_coords_(allow_coords) {}

    NodePtr run() {
        NodePtr e = expr();
        if (peek().kind != Token::End)
            throw ParseError("unexpected '" + peek().text + "'", peek().line, peek().col);
        return e;
    }

  private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    bool accept(Token::Kind k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        bool neg = false;
        if (accept(Token::Minus))
            neg = true;
        else
            accept(Token::Plus);
        NodePtr e = term();
        if (neg) e = make_neg(std::move(e));
        while (true) {
            if (accept(Token::Plus))
                e = make_add(std::move(e), term());
            else if (accept(Token::Minus))
                e = make_sub(std::move(e), term());
            else
                return e;
        }
    }

    NodePtr term() {
        NodePtr e = factor();
        while (true) {
            if (accept(Token::Star))
                e = make_mul(std::move(e), factor());
            else if (accept(Token::Slash))
                e = make_div(std::move(e), factor());
            else
                return e;
        }
    }

    NodePtr factor() {
        NodePtr e = base();
        if (accept(Token::Caret)) {
            bool neg = accept(Token::Minus);
            const Token& t = peek();
            if (t.kind != Token::Number)
                throw ParseError("expected integer exponent", t.line, t.col);
            double d = t.number;
            long n = std::lround(d);
            if (static_cast<double>(n) != d)
                throw ParseError("exponent must be an integer", t.line, t.col);
            next();
            e = make_pow(std::move(e), static_cast<int>(neg ? -n : n));
        }
        return e;
    }

    NodePtr base() {
        const Token& t = peek();
        switch (t.kind) {
            case Token::Number:
                next();
                return make_constant(t.number);
            case Token::LParen: {
                next();
                NodePtr e = expr();
                if (!accept(Token::RParen))
                    throw ParseError("expected ')'", peek().line, peek().col);
                return e;
            }
            case Token::Ident:
                return ident();
            case Token::End:
                throw ParseError("unexpected end of input", t.line, t.col);
            default:
                throw ParseError("unexpected '" + t.text + "'", t.line, t.col);
        }
    }

    NodePtr ident() {
        const Token& t = next();
        const std::string& s = t.text;
        if (s == "i") return make_constant(Complex(0.0, 1.0));
        if (s == "G") return make_variable(Sym::G);
        if (s == "B0") return make_variable(Sym::B0);
        if (s == "B1") return make_variable(Sym::B1);
        if (s == "u" || s == "v" || s == "w" || s == "wb") {
            if (!allow_coords_)
                throw ParseError("coordinate symbol '" + s + "' is not allowed in input",
                                 t.line, t.col);
            if (s == "u") return make_variable(Sym::U);
            if (s == "v") return make_variable(Sym::V);
            if (s == "w") return make_variable(Sym::W);
            return make_variable(Sym::Wbar);
        }
        if (s == "sqrt" || s == "exp" || s == "log") {
            if (!accept(Token::LParen))
                throw ParseError("expected '(' after '" + s + "'", peek().line, peek().col);
            NodePtr arg = expr();
            if (!accept(Token::RParen))
                throw ParseError("expected ')'", peek().line, peek().col);
            Func f = s == "sqrt" ? Func::Sqrt : s == "exp" ? Func::Exp : Func::Log;
            return make_call(f, std::move(arg));
        }
        if (peek().kind == Token::LParen)
            throw ParseError("unknown function '" + s + "'", t.line, t.col);
        return make_parameter(s);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    bool allow_coords_;
};

// -------------------------------------------------------------- printer ----

// Precedence levels: sum 1, product 2, power 4, atom 5. A leading unary
// minus only parses at the start of an expression, so anything printed with
// one gets level 0 and is parenthesized in every nested position.
std::string print_node(const NodePtr& p, int parent_prec);

std::string print_constant(const Complex& c) {
    double re = c.real(), im = c.imag();
    auto num = [](double x) { return util::fmt17(x); };
    if (im == 0.0) return num(re);
    if (re == 0.0) {
        if (im == 1.0) return "i";
        if (im == -1.0) return "-i";
        return num(im) + "*i";
    }
    std::string s = "(" + num(re);
    if (im == 1.0)
        s += " + i";
    else if (im == -1.0)
        s += " - i";
    else if (im > 0 || std::isnan(im))
        s += " + " + num(im) + "*i";
    else
        s += " - " + num(-im) + "*i";
    return s + ")";
}

std::string print_node(const NodePtr& p, int parent_prec) {
    std::string s;
    int prec = 5;
    switch (p->kind) {
        case Node::Constant: {
            s = print_constant(p->value);
            if (s[0] == '-')
                prec = 0;  // leading minus: only valid expression-initially
            else if (s[0] != '(' && s.find('*') != std::string::npos)
                prec = 2;  // "2*i" form is textually a product
            break;
        }
        case Node::Variable:
            switch (p->sym) {
                case Sym::G: s = "G"; break;
                case Sym::B0: s = "B0"; break;
                case Sym::B1: s = "B1"; break;
                case Sym::U: s = "u"; break;
                case Sym::V: s = "v"; break;
                case Sym::W: s = "w"; break;
                case Sym::Wbar: s = "wb"; break;
            }
            break;
        case Node::Parameter:
            s = p->name;
            break;
        case Node::Add:
            s = print_node(p->a, 1) + " + " + print_node(p->b, 2);
            prec = 1;
            break;
        case Node::Sub:
            s = print_node(p->a, 1) + " - " + print_node(p->b, 2);
            prec = 1;
            break;
        case Node::Mul:
            s = print_node(p->a, 2) + "*" + print_node(p->b, 3);
            prec = 2;
            break;
        case Node::Div:
            s = print_node(p->a, 2) + "/" + print_node(p->b, 3);
            prec = 2;
            break;
        case Node::Neg:
            s = "-" + print_node(p->a, 2);
            prec = 0;
            break;
        case Node::Pow:
            s = print_node(p->a, 5) + "^" + std::to_string(p->exponent);
            prec = 4;
            break;
        case Node::Call: {
            const char* f = p->func == Func::Sqrt ? "sqrt" : p->func == Func::Exp ? "exp" : "log";
            s = std::string(f) + "(" + print_node(p->a, 0) + ")";
            break;
        }
    }
    if (prec < parent_prec) s = "(" + s + ")";
    return s;
}

}  // namespace

GenFun GenFun::parse(const std::string& text, bool allow_coords) {
    Lexer lex(text);
    Parser parser(lex.run(), allow_coords);
    return GenFun(parser.run());
}

std::string GenFun::str() const {
    if (!root_) return "";
    return print_node(root_, 0);
}

static bool has_coords_node(const NodePtr& p) {
    if (!p) return false;
    if (p->kind == Node::Variable)
        return p->sym == Sym::U || p->sym == Sym::V || p->sym == Sym::W || p->sym == Sym::Wbar;
    return has_coords_node(p->a) || has_coords_node(p->b);
}

bool GenFun::has_coords() const { return has_coords_node(root_); }

// ----------------------------------------------------------- evaluation ----

namespace {

Complex eval_node(const NodePtr& p, const EvalContext& ctx, bool& principal) {
    switch (p->kind) {
        case Node::Constant:
            return p->value;
        case Node::Variable:
            switch (p->sym) {
                case Sym::G: return ctx.g;
                case Sym::B0: return ctx.b0_value();
                case Sym::B1: return ctx.b1_value();
                case Sym::U: return ctx.nc.u;
                case Sym::V: return ctx.nc.v;
                case Sym::W: return ctx.nc.w;
                case Sym::Wbar: return ctx.nc.wbar;
            }
            return {};
        case Node::Parameter: {
            auto it = ctx.params.find(p->name);
            if (it == ctx.params.end()) throw UnboundParameterError(p->name);
            return it->second;
        }
        case Node::Add:
            return eval_node(p->a, ctx, principal) + eval_node(p->b, ctx, principal);
        case Node::Sub:
            return eval_node(p->a, ctx, principal) - eval_node(p->b, ctx, principal);
        case Node::Mul:
            return eval_node(p->a, ctx, principal) * eval_node(p->b, ctx, principal);
        case Node::Div: {
            Complex den = eval_node(p->b, ctx, principal);
            if (den == 0.0) throw PoleError(print_node(p, 0));
            return eval_node(p->a, ctx, principal) / den;
        }
        case Node::Neg:
            return -eval_node(p->a, ctx, principal);
        case Node::Pow: {
            Complex base = eval_node(p->a, ctx, principal);
            int e = p->exponent;
            if (e < 0) {
                if (base == 0.0) throw PoleError(print_node(p, 0));
                base = 1.0 / base;
                e = -e;
            }
            Complex r = 1.0;
            while (e) {
                if (e & 1) r *= base;
                base *= base;
                e >>= 1;
            }
            return r;
        }
        case Node::Call: {
            Complex arg = eval_node(p->a, ctx, principal);
            switch (p->func) {
                case Func::Sqrt:
                    principal = true;
                    return std::sqrt(arg);
                case Func::Exp:
                    return std::exp(arg);
                case Func::Log:
                    if (arg == 0.0) throw PoleError(print_node(p, 0));
                    principal = true;
                    return std::log(arg);
            }
            return {};
        }
    }
    return {};
}

}  // namespace

EvalResult eval_ex(const GenFun& f, const EvalContext& ctx) {
    if (f.empty()) throw InvalidInputError("eval: empty function");
    EvalResult r;
    r.value = eval_node(f.root(), ctx, r.principal_branch);
    return r;
}

Complex eval(const GenFun& f, const EvalContext& ctx) { return eval_ex(f, ctx).value; }

// -------------------------------------------------------- differentiation --

namespace {

NodePtr diff(const NodePtr& p, Sym var) {
    switch (p->kind) {
        case Node::Constant:
        case Node::Parameter:
            return make_constant(0.0);
        case Node::Variable:
            return make_constant(p->sym == var ? 1.0 : 0.0);
        case Node::Add:
            return make_add(diff(p->a, var), diff(p->b, var));
        case Node::Sub:
            return make_sub(diff(p->a, var), diff(p->b, var));
        case Node::Mul:
            return make_add(make_mul(diff(p->a, var), p->b),
                            make_mul(p->a, diff(p->b, var)));
        case Node::Div:
            return make_div(make_sub(make_mul(diff(p->a, var), p->b),
                                     make_mul(p->a, diff(p->b, var))),
                            make_pow(p->b, 2));
        case Node::Neg:
            return make_neg(diff(p->a, var));
        case Node::Pow:
            return make_mul(make_mul(make_constant(double(p->exponent)),
                                     make_pow(p->a, p->exponent - 1)),
                            diff(p->a, var));
        case Node::Call: {
            NodePtr da = diff(p->a, var);
            switch (p->func) {
                case Func::Sqrt:
                    return make_div(da, make_mul(make_constant(2.0),
                                                 make_call(Func::Sqrt, p->a)));
                case Func::Exp:
                    return make_mul(da, make_call(Func::Exp, p->a));
                case Func::Log:
                    return make_div(da, p->a);
            }
            return {};
        }
    }
    return {};
}

}  // namespace

GenFun d_partial(const GenFun& f, Sym var) {
    if (f.empty()) throw InvalidInputError("d_partial: empty function");
    if (var != Sym::G && var != Sym::B0 && var != Sym::B1)
        throw InvalidInputError("d_partial: var must be G, B0 or B1");
    return GenFun(diff(f.root(), var));
}

CoordGenFun d_total_dG(const GenFun& f) {
    if (f.empty()) throw InvalidInputError("d_total_dG: empty function");
    NodePtr dg = diff(f.root(), Sym::G);
    NodePtr db0 = diff(f.root(), Sym::B0);
    NodePtr db1 = diff(f.root(), Sym::B1);
    NodePtr total = make_add(dg, make_add(make_mul(make_variable(Sym::W), db0),
                                          make_mul(make_variable(Sym::V), db1)));
    return GenFun(total);
}

// ------------------------------------------------------------- equality ----

static bool equal_node(const NodePtr& p, const NodePtr& q) {
    if (p == q) return true;
    if (!p || !q) return false;
    if (p->kind != q->kind) return false;
    switch (p->kind) {
        case Node::Constant: return p->value == q->value;
        case Node::Variable: return p->sym == q->sym;
        case Node::Parameter: return p->name == q->name;
        case Node::Neg: return equal_node(p->a, q->a);
        case Node::Pow: return p->exponent == q->exponent && equal_node(p->a, q->a);
        case Node::Call: return p->func == q->func && equal_node(p->a, q->a);
        default: return equal_node(p->a, q->a) && equal_node(p->b, q->b);
    }
}

bool structural_equal(const GenFun& f, const GenFun& g) {
    return equal_node(f.root(), g.root());
}

// ------------------------------------------------------------- builders ----

GenFun constant(const Complex& c) { return GenFun(make_constant(c)); }
GenFun variable(Sym s) { return GenFun(make_variable(s)); }
GenFun operator+(const GenFun& a, const GenFun& b) { return GenFun(make_add(a.root(), b.root())); }
GenFun operator-(const GenFun& a, const GenFun& b) { return GenFun(make_sub(a.root(), b.root())); }
GenFun operator*(const GenFun& a, const GenFun& b) { return GenFun(make_mul(a.root(), b.root())); }
GenFun operator/(const GenFun& a, const GenFun& b) { return GenFun(make_div(a.root(), b.root())); }
GenFun operator-(const GenFun& a) { return GenFun(make_neg(a.root())); }
GenFun pow(const GenFun& a, int n) { return GenFun(make_pow(a.root(), n)); }

}  // namespace eiko::dsl
