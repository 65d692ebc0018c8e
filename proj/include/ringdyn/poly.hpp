// poly.hpp — sparse multivariate polynomials with exact rational coefficients
//
// Monomial order is graded lexicographic; variable precedence is the id
// order assigned by the registry (Q > P > x > p > bath > parameters >
// derivative symbols).

#pragma once

#include "ringdyn/rational.hpp"
#include "ringdyn/registry.hpp"

#include <functional>
#include <map>
#include <set>
#include <vector>

namespace ringdyn {

struct Monomial {
    // sorted by variable id ascending; exponents strictly positive
    std::vector<std::pair<VariableId, int>> powers;

    static Monomial one() { return {}; }
    static Monomial variable(VariableId v, int exp = 1);

    bool is_one() const { return powers.empty(); }
    int total_degree() const;
    int degree_of(VariableId v) const;
    bool contains(VariableId v) const { return degree_of(v) > 0; }

    bool divides(const Monomial& other) const;
    Monomial divided_by(const Monomial& divisor) const; // requires divisor.divides(*this)

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    bool operator==(const Monomial& other) const { return powers == other.powers; }
};

// a < b in graded lex
bool grlex_less(const Monomial& a, const Monomial& b);

struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return grlex_less(b, a); }
};

struct Term {
    Rational coeff;
    Monomial mon;
};

class Poly {
public:
    Poly() = default;
    static Poly zero() { return {}; }
    static Poly constant(Rational c);
    static Poly variable(VariableId v, int exp = 1);
    static Poly from_map(std::map<Monomial, Rational, GrlexGreater> acc);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    const Rational& constant_value() const; // requires is_constant(); zero poly -> 0
    const std::vector<Term>& terms() const { return terms_; }
    const Term& leading() const;
    int total_degree() const;
    int degree_in(VariableId v) const;
    bool contains(VariableId v) const;
    void collect_variables(std::set<VariableId>& out) const;

    Poly operator-() const;
    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly scaled(const Rational& c) const;
    Poly pow(unsigned n) const;

    bool operator==(const Poly& other) const { return equal(*this, other); }

    // Univariate view in v: result[k] is the coefficient polynomial of v^k.
    std::vector<Poly> coefficients_in(VariableId v) const;
    static Poly assemble(VariableId v, const std::vector<Poly>& coeffs);

private:
    static bool equal(const Poly& a, const Poly& b);
    std::vector<Term> terms_; // descending grlex, coefficients nonzero
};

// Normalized (grlex-monic) gcd; gcd(0,0) = 0.
Poly poly_gcd(const Poly& a, const Poly& b);

// Exact quotient; throws symalg_error if b does not divide a.
Poly poly_div_exact(const Poly& a, const Poly& b);

} // namespace ringdyn
