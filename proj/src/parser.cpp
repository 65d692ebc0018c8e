#include "ringdyn/parser.hpp"

#include "ringdyn/errors.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <vector>

namespace ringdyn {

namespace {

enum class TokKind { Number, Identifier, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    TokKind kind;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= text_.size()) return {TokKind::End, "", start};
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return {TokKind::Number, std::string(text_.substr(start, pos_ - start)), start};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            return {TokKind::Identifier, std::string(text_.substr(start, pos_ - start)), start};
        }
        ++pos_;
        switch (c) {
            case '+': return {TokKind::Plus, "+", start};
            case '-': return {TokKind::Minus, "-", start};
            case '*': return {TokKind::Star, "*", start};
            case '/': return {TokKind::Slash, "/", start};
            case '^': return {TokKind::Caret, "^", start};
            case '(': return {TokKind::LParen, "(", start};
            case ')': return {TokKind::RParen, ")", start};
            case ',': return {TokKind::Comma, ",", start};
            default:
                throw parse_error(std::string("unexpected character '") + c + "'", start);
        }
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(std::string_view text, RegistryPtr reg)
        : lexer_(text), reg_(std::move(reg)) {
        advance();
    }

    Expr parse_all() {
        Expr e = parse_expr();
        expect(TokKind::End, "end of input");
        return e;
    }

private:
    void advance() { tok_ = lexer_.next(); }

    void expect(TokKind kind, const char* what) {
        if (tok_.kind != kind)
            throw parse_error(std::string("expected ") + what + ", got '" + tok_.text + "'", tok_.pos);
    }

    bool accept(TokKind kind) {
        if (tok_.kind != kind) return false;
        advance();
        return true;
    }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (accept(TokKind::Plus)) e = e + parse_term();
            else if (accept(TokKind::Minus)) e = e - parse_term();
            else return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        for (;;) {
            if (accept(TokKind::Star)) {
                e = e * parse_factor();
            } else if (tok_.kind == TokKind::Slash) {
                const std::size_t pos = tok_.pos;
                advance();
                Expr d = parse_factor();
                if (d.is_zero()) throw parse_error("division by zero", pos);
                e = e / d;
            } else {
                return e;
            }
        }
    }

    Expr parse_factor() {
        Expr e = parse_base();
        if (accept(TokKind::Caret)) {
            expect(TokKind::Number, "unsigned integer exponent");
            const int n = std::stoi(tok_.text);
            advance();
            e = e.pow(n);
        }
        return e;
    }

    Expr parse_base() {
        if (accept(TokKind::Minus)) return -parse_base();
        if (tok_.kind == TokKind::Number) {
            Rational value(tok_.text, 10);
            advance();
            return Expr::constant(reg_, std::move(value));
        }
        if (tok_.kind == TokKind::LParen) {
            advance();
            Expr e = parse_expr();
            expect(TokKind::RParen, "')'");
            advance();
            return e;
        }
        if (tok_.kind == TokKind::Identifier) {
            const std::string name = tok_.text;
            const std::size_t pos = tok_.pos;
            advance();
            if (tok_.kind == TokKind::LParen) return parse_call(name, pos);
            auto v = reg_->find(name);
            if (!v) throw parse_error("unknown identifier '" + name + "'", pos);
            return Expr::variable(reg_, *v);
        }
        throw parse_error("expected expression, got '" + tok_.text + "'", tok_.pos);
    }

    // dot(x,p) sugar and declared-function application
    Expr parse_call(const std::string& name, std::size_t pos) {
        expect(TokKind::LParen, "'('");
        advance();
        std::vector<std::string> args;
        if (tok_.kind != TokKind::RParen) {
            for (;;) {
                expect(TokKind::Identifier, "identifier argument");
                args.push_back(tok_.text);
                advance();
                if (!accept(TokKind::Comma)) break;
            }
        }
        expect(TokKind::RParen, "')'");
        advance();

        if (name == "dot") {
            if (args.size() != 2)
                throw parse_error("dot expects exactly two family arguments", pos);
            return expand_dot(args[0], args[1], pos);
        }
        if (reg_->has_function(name)) {
            // accept V(x) (family shorthand) or the explicit component list
            const auto& fn = reg_->function(name);
            bool ok = (args.size() == 1 && args[0] == "x");
            if (!ok && args.size() == fn.args.size()) {
                ok = true;
                for (std::size_t i = 0; i < args.size(); ++i) {
                    auto v = reg_->find(args[i]);
                    if (!v || *v != fn.args[i]) { ok = false; break; }
                }
            }
            if (!ok)
                throw parse_error("arity mismatch in call to '" + name + "'", pos);
            return Expr::variable(reg_, reg_->derivative_symbol(name, {}));
        }
        throw parse_error("unknown function '" + name + "'", pos);
    }

    Expr expand_dot(const std::string& fa, const std::string& fb, std::size_t pos) {
        auto family = [&](const std::string& f, int i) -> std::optional<VariableId> {
            if (f == "x") return reg_->x(i);
            if (f == "p") return reg_->p(i);
            return std::nullopt;
        };
        if (!family(fa, 1) || !family(fb, 1))
            throw parse_error("dot arguments must be the families x or p", pos);
        Expr sum = Expr::zero(reg_);
        for (int i = 1; i <= reg_->dimension(); ++i)
            sum = sum + Expr::variable(reg_, *family(fa, i)) * Expr::variable(reg_, *family(fb, i));
        return sum;
    }

    Lexer lexer_;
    RegistryPtr reg_;
    Token tok_{TokKind::End, "", 0};
};

// -------------------------------- printing -----------------------------------

std::string print_monomial(const Monomial& mon, const PhaseSpaceRegistry& reg) {
    std::string out;
    bool first = true;
    for (const auto& [v, e] : mon.powers) {
        if (!first) out += "*";
        first = false;
        out += reg.name(v);
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

std::string print_poly(const Poly& poly, const PhaseSpaceRegistry& reg) {
    if (poly.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& term : poly.terms()) {
        const bool negative = term.coeff < 0;
        const Rational mag = negative ? Rational(-term.coeff) : term.coeff;
        if (first) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        if (term.mon.is_one()) {
            out += to_string(mag);
        } else if (mag == 1) {
            out += print_monomial(term.mon, reg);
        } else {
            out += to_string(mag) + "*" + print_monomial(term.mon, reg);
        }
    }
    return out;
}

} // namespace

Expr parse(std::string_view text, RegistryPtr registry) {
    return Parser(text, std::move(registry)).parse_all();
}

std::string print(const Expr& e) {
    if (!e.registry()) return "0";
    const PhaseSpaceRegistry& reg = *e.registry();
    if (e.is_polynomial()) return print_poly(e.num(), reg);
    return "(" + print_poly(e.num(), reg) + ")/(" + print_poly(e.den(), reg) + ")";
}

} // namespace ringdyn
