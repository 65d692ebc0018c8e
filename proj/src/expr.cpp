#include "ringdyn/expr.hpp"

#include "ringdyn/errors.hpp"

#include <cmath>
#include <utility>

namespace ringdyn {

namespace {

RegistryPtr pick_registry(const Expr& a, const Expr& b) {
    if (a.registry() && b.registry() && a.registry() != b.registry())
        throw symalg_error("expr: operands belong to different registries");
    return a.registry() ? a.registry() : b.registry();
}

} // namespace

Expr Expr::zero(RegistryPtr reg) {
    Expr e;
    e.reg_ = std::move(reg);
    return e;
}

Expr Expr::constant(RegistryPtr reg, Rational c) {
    return from_poly(std::move(reg), Poly::constant(std::move(c)));
}

Expr Expr::variable(RegistryPtr reg, VariableId v) {
    return from_poly(std::move(reg), Poly::variable(v));
}

Expr Expr::from_poly(RegistryPtr reg, Poly num) {
    Expr e;
    e.reg_ = std::move(reg);
    e.num_ = std::move(num);
    return e;
}

Expr Expr::ratio(RegistryPtr reg, Poly num, Poly den) {
    if (den.is_zero()) throw symalg_error("expr: zero denominator");
    Expr e;
    e.reg_ = std::move(reg);
    if (num.is_zero()) return e;
    if (den.is_constant()) {
        e.num_ = num.scaled(Rational(1) / den.constant_value());
        return e;
    }
    Poly g = poly_gcd(num, den);
    if (!g.is_constant()) {
        num = poly_div_exact(num, g);
        den = poly_div_exact(den, g);
    }
    const Rational lc = den.leading().coeff;
    e.num_ = num.scaled(Rational(1) / lc);
    e.den_ = den.scaled(Rational(1) / lc);
    if (e.den_.is_constant()) e.den_ = Poly::constant(1);
    return e;
}

Rational Expr::constant_value() const {
    if (!is_constant()) throw symalg_error("expr: not a constant");
    if (num_.is_zero()) return Rational(0);
    return num_.constant_value() / den_.constant_value();
}

void Expr::collect_variables(std::set<VariableId>& out) const {
    num_.collect_variables(out);
    den_.collect_variables(out);
}

Expr Expr::operator-() const {
    Expr e = *this;
    e.num_ = -e.num_;
    return e;
}

Expr operator+(const Expr& a, const Expr& b) {
    RegistryPtr reg = pick_registry(a, b);
    if (a.is_zero()) { Expr e = b; return e; }
    if (b.is_zero()) { Expr e = a; return e; }
    // cross-cancel the denominators through their gcd
    Poly g = poly_gcd(a.den_, b.den_);
    if (g.is_constant()) {
        return Expr::ratio(std::move(reg), a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    Poly da = poly_div_exact(a.den_, g);
    Poly db = poly_div_exact(b.den_, g);
    return Expr::ratio(std::move(reg), a.num_ * db + b.num_ * da, a.den_ * db);
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
    RegistryPtr reg = pick_registry(a, b);
    if (a.is_zero() || b.is_zero()) return Expr::zero(std::move(reg));
    // cancel across before multiplying to limit swell
    Poly g1 = poly_gcd(a.num_, b.den_);
    Poly g2 = poly_gcd(b.num_, a.den_);
    const Poly na = g1.is_constant() ? a.num_ : poly_div_exact(a.num_, g1);
    const Poly db = g1.is_constant() ? b.den_ : poly_div_exact(b.den_, g1);
    const Poly nb = g2.is_constant() ? b.num_ : poly_div_exact(b.num_, g2);
    const Poly da = g2.is_constant() ? a.den_ : poly_div_exact(a.den_, g2);
    return Expr::ratio(std::move(reg), na * nb, da * db);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_zero()) throw symalg_error("expr: division by zero expression");
    Expr inv;
    inv = Expr::ratio(pick_registry(a, b), b.den_, b.num_);
    return a * inv;
}

Expr Expr::pow(int n) const {
    RegistryPtr reg = reg_;
    if (n == 0) return Expr::constant(std::move(reg), Rational(1));
    const bool invert = n < 0;
    unsigned e = static_cast<unsigned>(invert ? -static_cast<long>(n) : n);
    Expr out = Expr::ratio(reg, num_.pow(e), den_.pow(e));
    if (invert) return Expr::constant(std::move(reg), Rational(1)) / out;
    return out;
}

bool Expr::operator==(const Expr& other) const {
    return num_ == other.num_ && den_ == other.den_;
}

bool equals_zero(const Expr& e) { return e.is_zero(); }

// ------------------------------ differentiation ------------------------------

namespace {

// d(poly)/dv with the chain rule through opaque-function derivative symbols
Poly poly_derivative(const Poly& poly, VariableId v, const PhaseSpaceRegistry& reg) {
    const bool v_is_coordinate = reg.is_coordinate(v);
    const int v_component = v_is_coordinate ? reg.info(v).index : 0;
    const bool v_is_system_x = v_is_coordinate && reg.info(v).family == VarFamily::SystemX;

    std::map<Monomial, Rational, GrlexGreater> acc;
    for (const auto& term : poly.terms()) {
        for (std::size_t k = 0; k < term.mon.powers.size(); ++k) {
            const auto [w, e] = term.mon.powers[k];
            if (w == v) {
                // power rule
                Monomial rest = term.mon.divided_by(Monomial::variable(v, 1));
                acc[rest] += term.coeff * e;
            } else if (reg.is_function_deriv(w) && v_is_system_x) {
                // chain rule: D^a f depends on every system coordinate
                VariableId bumped = reg.bump_derivative(w, v_component);
                Monomial rest = term.mon.divided_by(Monomial::variable(w, 1));
                acc[rest * Monomial::variable(bumped, 1)] += term.coeff * e;
            }
        }
    }
    return Poly::from_map(std::move(acc));
}

} // namespace

Expr differentiate(const Expr& e, VariableId v) {
    const RegistryPtr& reg = e.registry();
    if (!reg) return e; // derivative of detached zero
    const VarKind kind = reg->info(v).kind;
    if (kind == VarKind::FunctionDeriv)
        throw symalg_error("differentiate: cannot differentiate with respect to a derivative symbol");
    const Poly dn = poly_derivative(e.num(), v, *reg);
    if (e.is_polynomial()) return Expr::ratio(reg, dn, e.den());
    const Poly dd = poly_derivative(e.den(), v, *reg);
    // (n' d - n d') / d^2
    return Expr::ratio(reg, dn * e.den() - e.num() * dd, e.den() * e.den());
}

// ------------------------------- substitution --------------------------------

namespace {

Expr substitute_poly(const Poly& poly, const std::map<VariableId, Expr>& bindings,
                     const RegistryPtr& reg) {
    Expr out = Expr::zero(reg);
    for (const auto& term : poly.terms()) {
        Expr t = Expr::constant(reg, term.coeff);
        for (const auto& [v, e] : term.mon.powers) {
            auto it = bindings.find(v);
            const Expr base = (it != bindings.end()) ? it->second : Expr::variable(reg, v);
            t = t * base.pow(e);
        }
        out = out + t;
    }
    return out;
}

} // namespace

Expr substitute(const Expr& e, const std::map<VariableId, Expr>& bindings) {
    const RegistryPtr& reg = e.registry();
    for (const auto& [v, repl] : bindings)
        if (repl.contains(v))
            throw symalg_error("substitute: self-referential binding for variable");
    const Expr num = substitute_poly(e.num(), bindings, reg);
    const Expr den = substitute_poly(e.den(), bindings, reg);
    if (den.is_zero()) throw symalg_error("substitute: denominator vanishes identically");
    return num / den;
}

// -------------------------------- evaluation ---------------------------------

namespace {

double evaluate_poly(const Poly& poly, const std::map<VariableId, double>& point,
                     const PhaseSpaceRegistry& reg) {
    double sum = 0.0;
    for (const auto& term : poly.terms()) {
        double val = to_double(term.coeff);
        for (const auto& [v, e] : term.mon.powers) {
            auto it = point.find(v);
            if (it == point.end())
                throw symalg_error("evaluate: unbound symbol '" + reg.name(v) + "'");
            val *= std::pow(it->second, e);
        }
        sum += val;
    }
    return sum;
}

} // namespace

double evaluate(const Expr& e, const std::map<VariableId, double>& point) {
    if (e.is_zero()) return 0.0;
    const RegistryPtr& reg = e.registry();
    const double n = evaluate_poly(e.num(), point, *reg);
    const double d = evaluate_poly(e.den(), point, *reg);
    if (d == 0.0) throw symalg_error("evaluate: denominator vanishes at the point");
    return n / d;
}

} // namespace ringdyn
