#include "ringdyn/poly.hpp"

#include "ringdyn/errors.hpp"

#include <algorithm>
#include <optional>
#include <random>

namespace ringdyn {

// ------------------------------- Monomial -----------------------------------

Monomial Monomial::variable(VariableId v, int exp) {
    Monomial m;
    if (exp < 0) throw symalg_error("monomial: negative exponent");
    if (exp > 0) m.powers.emplace_back(v, exp);
    return m;
}

int Monomial::total_degree() const {
    int d = 0;
    for (const auto& [v, e] : powers) d += e;
    return d;
}

int Monomial::degree_of(VariableId v) const {
    for (const auto& [w, e] : powers)
        if (w == v) return e;
    return 0;
}

bool Monomial::divides(const Monomial& other) const {
    std::size_t j = 0;
    for (const auto& [v, e] : powers) {
        while (j < other.powers.size() && other.powers[j].first < v) ++j;
        if (j == other.powers.size() || other.powers[j].first != v || other.powers[j].second < e)
            return false;
    }
    return true;
}

Monomial Monomial::divided_by(const Monomial& divisor) const {
    Monomial out;
    std::size_t j = 0;
    for (const auto& [v, e] : powers) {
        int sub = 0;
        while (j < divisor.powers.size() && divisor.powers[j].first < v) ++j;
        if (j < divisor.powers.size() && divisor.powers[j].first == v) sub = divisor.powers[j].second;
        if (sub > e) throw symalg_error("monomial: inexact division");
        if (e - sub > 0) out.powers.emplace_back(v, e - sub);
    }
    return out;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.powers.reserve(a.powers.size() + b.powers.size());
    std::size_t i = 0, j = 0;
    while (i < a.powers.size() || j < b.powers.size()) {
        if (j == b.powers.size() || (i < a.powers.size() && a.powers[i].first < b.powers[j].first)) {
            out.powers.push_back(a.powers[i++]);
        } else if (i == a.powers.size() || b.powers[j].first < a.powers[i].first) {
            out.powers.push_back(b.powers[j++]);
        } else {
            out.powers.emplace_back(a.powers[i].first, a.powers[i].second + b.powers[j].second);
            ++i;
            ++j;
        }
    }
    return out;
}

bool grlex_less(const Monomial& a, const Monomial& b) {
    const int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    // lex over ids ascending: at the first id where exponents differ,
    // the larger exponent wins (higher-precedence variables dominate)
    std::size_t i = 0, j = 0;
    while (i < a.powers.size() && j < b.powers.size()) {
        const auto& [va, ea] = a.powers[i];
        const auto& [vb, eb] = b.powers[j];
        if (va == vb) {
            if (ea != eb) return ea < eb;
            ++i;
            ++j;
        } else if (va < vb) {
            return false; // a has a higher-precedence variable b lacks
        } else {
            return true;
        }
    }
    if (i < a.powers.size()) return false;
    if (j < b.powers.size()) return true;
    return false;
}

// --------------------------------- Poly --------------------------------------

Poly Poly::constant(Rational c) {
    Poly p;
    if (c != 0) p.terms_.push_back({std::move(c), Monomial::one()});
    return p;
}

Poly Poly::variable(VariableId v, int exp) {
    if (exp == 0) return constant(1);
    Poly p;
    p.terms_.push_back({Rational(1), Monomial::variable(v, exp)});
    return p;
}

Poly Poly::from_map(std::map<Monomial, Rational, GrlexGreater> acc) {
    Poly p;
    p.terms_.reserve(acc.size());
    for (auto& [mon, coeff] : acc)
        if (coeff != 0) p.terms_.push_back({std::move(coeff), mon});
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mon.is_one());
}

const Rational& Poly::constant_value() const {
    static const Rational zero(0);
    if (terms_.empty()) return zero;
    if (!is_constant()) throw symalg_error("poly: not a constant");
    return terms_[0].coeff;
}

const Term& Poly::leading() const {
    if (terms_.empty()) throw symalg_error("poly: leading term of zero");
    return terms_[0];
}

int Poly::total_degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mon.total_degree());
    return d;
}

int Poly::degree_in(VariableId v) const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mon.degree_of(v));
    return d;
}

bool Poly::contains(VariableId v) const {
    for (const auto& t : terms_)
        if (t.mon.contains(v)) return true;
    return false;
}

void Poly::collect_variables(std::set<VariableId>& out) const {
    for (const auto& t : terms_)
        for (const auto& [v, e] : t.mon.powers) out.insert(v);
}

bool Poly::equal(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (!(a.terms_[i].mon == b.terms_[i].mon) || a.terms_[i].coeff != b.terms_[i].coeff)
            return false;
    return true;
}

Poly Poly::operator-() const {
    Poly out = *this;
    for (auto& t : out.terms_) t.coeff = -t.coeff;
    return out;
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly out;
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
        if (j == b.terms_.size() ||
            (i < a.terms_.size() && grlex_less(b.terms_[j].mon, a.terms_[i].mon))) {
            out.terms_.push_back(a.terms_[i++]);
        } else if (i == a.terms_.size() || grlex_less(a.terms_[i].mon, b.terms_[j].mon)) {
            out.terms_.push_back(b.terms_[j++]);
        } else {
            Rational c = a.terms_[i].coeff + b.terms_[j].coeff;
            if (c != 0) out.terms_.push_back({std::move(c), a.terms_[i].mon});
            ++i;
            ++j;
        }
    }
    return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly::zero();
    std::map<Monomial, Rational, GrlexGreater> acc;
    for (const auto& ta : a.terms_)
        for (const auto& tb : b.terms_)
            acc[ta.mon * tb.mon] += ta.coeff * tb.coeff;
    return Poly::from_map(std::move(acc));
}

Poly Poly::scaled(const Rational& c) const {
    if (c == 0) return zero();
    Poly out = *this;
    for (auto& t : out.terms_) t.coeff *= c;
    return out;
}

Poly Poly::pow(unsigned n) const {
    Poly result = constant(1);
    Poly base = *this;
    while (n) {
        if (n & 1u) result = result * base;
        base = base * base;
        n >>= 1u;
    }
    return result;
}

std::vector<Poly> Poly::coefficients_in(VariableId v) const {
    std::vector<Poly> out(static_cast<std::size_t>(degree_in(v)) + 1);
    for (const auto& t : terms_) {
        const int e = t.mon.degree_of(v);
        Poly piece;
        piece.terms_.push_back({t.coeff, t.mon.divided_by(Monomial::variable(v, e))});
        out[static_cast<std::size_t>(e)] = out[static_cast<std::size_t>(e)] + piece;
    }
    return out;
}

Poly Poly::assemble(VariableId v, const std::vector<Poly>& coeffs) {
    Poly out;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        out = out + coeffs[k] * Poly::variable(v, static_cast<int>(k));
    return out;
}

// ------------------------------ gcd machinery --------------------------------

namespace {

// variable shared by a and b minimizing min(deg_a, deg_b); a nonconstant gcd
// can only involve shared variables, so restricting to them is safe
std::optional<VariableId> main_variable(const Poly& a, const Poly& b) {
    std::set<VariableId> va, vb;
    a.collect_variables(va);
    b.collect_variables(vb);
    std::optional<VariableId> best;
    int best_deg = 0;
    for (VariableId v : va) {
        if (!vb.count(v)) continue;
        const int d = std::min(a.degree_in(v), b.degree_in(v));
        if (!best || d < best_deg) {
            best = v;
            best_deg = d;
        }
    }
    return best;
}

// exponent-wise minimum over all terms: the largest monomial dividing p
Monomial monomial_content(const Poly& p) {
    std::map<VariableId, int> mins;
    bool first = true;
    for (const auto& term : p.terms()) {
        if (first) {
            for (const auto& [v, e] : term.mon.powers) mins[v] = e;
            first = false;
        } else {
            for (auto it = mins.begin(); it != mins.end();) {
                const int e = term.mon.degree_of(it->first);
                if (e == 0) {
                    it = mins.erase(it);
                } else {
                    it->second = std::min(it->second, e);
                    ++it;
                }
            }
        }
        if (mins.empty()) break;
    }
    Monomial out;
    for (const auto& [v, e] : mins) out.powers.emplace_back(v, e);
    return out;
}

Monomial monomial_gcd(const Monomial& a, const Monomial& b) {
    Monomial out;
    for (const auto& [v, e] : a.powers) {
        const int eb = b.degree_of(v);
        if (eb > 0) out.powers.emplace_back(v, std::min(e, eb));
    }
    return out;
}

Poly divided_by_monomial(const Poly& p, const Monomial& m) {
    if (m.is_one()) return p;
    std::map<Monomial, Rational, GrlexGreater> acc;
    for (const auto& term : p.terms()) acc[term.mon.divided_by(m)] = term.coeff;
    return Poly::from_map(std::move(acc));
}

// ---- coprimality certificate via degree-preserving univariate projections ----

// dense univariate polynomial over Q; index = exponent
using UniPoly = std::vector<Rational>;

void uni_trim(UniPoly& u) {
    while (!u.empty() && u.back() == 0) u.pop_back();
}

int uni_degree(const UniPoly& u) { return static_cast<int>(u.size()) - 1; }

UniPoly uni_rem(UniPoly a, UniPoly b) {
    const Rational lead = b.back();
    for (auto& c : b) c /= lead;
    while (a.size() >= b.size()) {
        const Rational q = a.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
        uni_trim(a);
        if (a.empty()) break;
    }
    return a;
}

int uni_gcd_degree(UniPoly a, UniPoly b) {
    while (!b.empty()) {
        UniPoly r = uni_rem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    return uni_degree(a);
}

Rational rational_pow(Rational base, int e) {
    Rational out(1);
    while (e) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

// p viewed as univariate in v with every other variable evaluated at point
UniPoly project(const Poly& p, VariableId v, const std::map<VariableId, Rational>& point) {
    UniPoly out(static_cast<std::size_t>(p.degree_in(v)) + 1, Rational(0));
    for (const auto& term : p.terms()) {
        Rational val = term.coeff;
        int ev = 0;
        for (const auto& [w, e] : term.mon.powers) {
            if (w == v) {
                ev = e;
                continue;
            }
            val *= rational_pow(point.at(w), e);
        }
        out[static_cast<std::size_t>(ev)] += val;
    }
    uni_trim(out);
    return out;
}

// Sound fast test that gcd(a, b) is constant. For a common factor G, the
// leading v-coefficient of G divides that of a, so a degree-preserving
// projection (one keeping deg_v of a and b) also keeps deg_v of G; a constant
// projected gcd therefore proves deg_v G = 0. If that holds for every shared
// variable, G is constant. A "false" answer means unknown (unlucky point or a
// genuinely nontrivial gcd) and the caller falls back to the PRS.
bool certainly_coprime(const Poly& a, const Poly& b) {
    std::set<VariableId> va, vb;
    a.collect_variables(va);
    b.collect_variables(vb);
    std::vector<VariableId> shared;
    for (VariableId v : va)
        if (vb.count(v)) shared.push_back(v);
    if (shared.empty()) return true;
    std::set<VariableId> all = va;
    all.insert(vb.begin(), vb.end());

    std::mt19937 rng(0x0115eedu);
    std::uniform_int_distribution<int> dist(2, 173);
    for (int attempt = 0; attempt < 4; ++attempt) {
        std::map<VariableId, Rational> point;
        for (VariableId v : all) point[v] = Rational(dist(rng));
        bool degrees_preserved = true;
        for (VariableId v : shared) {
            const UniPoly ua = project(a, v, point);
            const UniPoly ub = project(b, v, point);
            if (uni_degree(ua) != a.degree_in(v) || uni_degree(ub) != b.degree_in(v)) {
                degrees_preserved = false; // retry with a fresh point
                break;
            }
            if (uni_gcd_degree(ua, ub) != 0) return false;
        }
        if (degrees_preserved) return true;
    }
    return false;
}

Poly monic(const Poly& p) {
    if (p.is_zero()) return p;
    return p.scaled(Rational(1) / p.leading().coeff);
}

// pseudo remainder of u by w, both viewed as univariate in v (deg u >= deg w)
Poly pseudo_rem(const Poly& u, const Poly& w, VariableId v) {
    auto uc = u.coefficients_in(v);
    auto wc = w.coefficients_in(v);
    const int dw = static_cast<int>(wc.size()) - 1;
    const Poly lw = wc.back();
    std::vector<Poly> r = uc;
    int dr = static_cast<int>(r.size()) - 1;
    while (dr >= dw) {
        // r = lw * r - lead(r) * v^(dr-dw) * w
        const Poly lead = r[static_cast<std::size_t>(dr)];
        if (lead.is_zero()) {
            --dr;
            r.pop_back();
            continue;
        }
        std::vector<Poly> nr(static_cast<std::size_t>(dr), Poly::zero());
        for (int i = 0; i < dr; ++i) nr[static_cast<std::size_t>(i)] = lw * r[static_cast<std::size_t>(i)];
        for (int i = 0; i <= dw - 1; ++i) {
            const int pos = dr - dw + i;
            nr[static_cast<std::size_t>(pos)] =
                nr[static_cast<std::size_t>(pos)] - lead * wc[static_cast<std::size_t>(i)];
        }
        r = std::move(nr);
        dr = static_cast<int>(r.size()) - 1;
        while (dr >= 0 && r[static_cast<std::size_t>(dr)].is_zero()) {
            r.pop_back();
            --dr;
        }
    }
    return Poly::assemble(v, r);
}

Poly gcd_rec(const Poly& a, const Poly& b);

// content of p with respect to v: gcd of its v-coefficient polynomials
Poly content_in(const Poly& p, VariableId v) {
    Poly c = Poly::zero();
    for (const auto& coeff : p.coefficients_in(v)) {
        if (coeff.is_zero()) continue;
        c = gcd_rec(c, coeff);
        if (c.is_constant() && !c.is_zero()) return Poly::constant(1);
    }
    return c;
}

Poly gcd_rec(const Poly& a, const Poly& b) {
    if (a.is_zero()) return monic(b);
    if (b.is_zero()) return monic(a);
    if (a.is_constant() || b.is_constant()) return Poly::constant(1);
    if (a == b) return monic(a);

    // peel off monomial contents: gcd(ma*a1, mb*b1) = gcd(ma,mb) * gcd(a1,b1)
    const Monomial ma = monomial_content(a);
    const Monomial mb = monomial_content(b);
    if (!ma.is_one() || !mb.is_one()) {
        const Poly inner = gcd_rec(divided_by_monomial(a, ma), divided_by_monomial(b, mb));
        std::map<Monomial, Rational, GrlexGreater> one;
        one[monomial_gcd(ma, mb)] = Rational(1);
        return monic(Poly::from_map(std::move(one)) * inner);
    }

    const auto mv = main_variable(a, b);
    if (!mv) return Poly::constant(1); // no shared variable -> coprime
    if (certainly_coprime(a, b)) return Poly::constant(1);
    const VariableId v = *mv;
    const Poly ca = content_in(a, v);
    const Poly cb = content_in(b, v);
    const Poly cont = gcd_rec(ca, cb);

    Poly u = poly_div_exact(a, ca);
    Poly w = poly_div_exact(b, cb);
    if (!u.contains(v) || !w.contains(v)) {
        // one side is free of v after content removal -> primitive parts coprime in v
        return monic(cont);
    }
    if (u.degree_in(v) < w.degree_in(v)) std::swap(u, w);
    while (!w.is_zero()) {
        Poly r = pseudo_rem(u, w, v);
        u = std::move(w);
        if (r.is_zero()) {
            w = Poly::zero();
        } else {
            w = poly_div_exact(r, content_in(r, v));
        }
    }
    if (!u.contains(v)) return monic(cont); // primitive parts coprime
    return monic(cont * poly_div_exact(u, content_in(u, v)));
}

} // namespace

Poly poly_gcd(const Poly& a, const Poly& b) { return gcd_rec(a, b); }

Poly poly_div_exact(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw symalg_error("poly: division by zero polynomial");
    if (a.is_zero()) return Poly::zero();
    Poly r = a;
    std::map<Monomial, Rational, GrlexGreater> q;
    const Term& lb = b.leading();
    while (!r.is_zero()) {
        const Term& lr = r.leading();
        if (!lb.mon.divides(lr.mon)) throw symalg_error("poly: inexact polynomial division");
        Monomial qm = lr.mon.divided_by(lb.mon);
        Rational qc = lr.coeff / lb.coeff;
        q[qm] += qc;
        Poly sub;
        {
            Poly single;
            std::map<Monomial, Rational, GrlexGreater> one;
            one[qm] = qc;
            single = Poly::from_map(std::move(one));
            sub = single * b;
        }
        r = r - sub;
    }
    return Poly::from_map(std::move(q));
}

} // namespace ringdyn
