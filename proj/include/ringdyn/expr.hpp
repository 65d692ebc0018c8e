// expr.hpp — exact rational functions over phase-space variables
//
// Normal form: numerator and denominator share no nonconstant factor and the
// denominator is grlex-monic; zero is 0/1. Semantic equality is structural
// equality of normal forms. Values are immutable and thread-safe to share.

#pragma once

#include "ringdyn/poly.hpp"
#include "ringdyn/registry.hpp"

#include <map>
#include <set>
#include <string>

namespace ringdyn {

class Expr {
public:
    Expr() = default; // detached zero

    static Expr zero(RegistryPtr reg);
    static Expr constant(RegistryPtr reg, Rational c);
    static Expr integer(RegistryPtr reg, long n) { return constant(std::move(reg), Rational(n)); }
    static Expr variable(RegistryPtr reg, VariableId v);
    static Expr from_poly(RegistryPtr reg, Poly num);
    static Expr ratio(RegistryPtr reg, Poly num, Poly den); // normalizes; throws on zero den

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    const RegistryPtr& registry() const { return reg_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const;

    bool contains(VariableId v) const { return num_.contains(v) || den_.contains(v); }
    void collect_variables(std::set<VariableId>& out) const;

    Expr operator-() const;
    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b); // throws on zero divisor
    Expr pow(int n) const;

    bool operator==(const Expr& other) const;

private:
    Poly num_;
    Poly den_{Poly::constant(1)};
    RegistryPtr reg_;
};

// Exact zero decision on the normal form.
bool equals_zero(const Expr& e);

// Exact partial derivative; opaque-function symbols follow the chain rule.
Expr differentiate(const Expr& e, VariableId v);

// Simultaneous substitution followed by normalization. Bindings must not map
// a variable to an expression containing that same variable.
Expr substitute(const Expr& e, const std::map<VariableId, Expr>& bindings);

// IEEE-double evaluation; every occurring variable (including derivative
// symbols) must be bound; throws on a pole.
double evaluate(const Expr& e, const std::map<VariableId, double>& point);

} // namespace ringdyn
