#include "chc/parser.hpp"

#include <cctype>

namespace chc {

namespace {

// Minimal recursive-descent parser for solver models in Prolog format:
//   pred(A,B) :- ((A = B), (B >= 0)).
//   pred(A) :- (\+((A = true)); (B = true)).
struct MParser {
    const std::string& src;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit MParser(const std::string& s) : src(s) {}

    void advance() {
        if (pos < src.size()) {
            if (src[pos] == '\n') {
                line++;
                col = 1;
            } else {
                col++;
            }
            pos++;
        }
    }
    void skip_ws() {
        while (pos < src.size()) {
            if (src[pos] == '%') {
                while (pos < src.size() && src[pos] != '\n') advance();
            } else if (isspace((unsigned char)src[pos])) {
                advance();
            } else {
                break;
            }
        }
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(line, col, msg); }
    bool eof() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    bool eat_str(const std::string& s) {
        skip_ws();
        if (src.compare(pos, s.size(), s) == 0) {
            for (size_t i = 0; i < s.size(); i++) advance();
            return true;
        }
        return false;
    }
    std::string ident() {
        skip_ws();
        size_t start = pos;
        if (pos >= src.size() || !(isalpha((unsigned char)src[pos]) || src[pos] == '_'))
            fail("expected identifier");
        while (pos < src.size() && (isalnum((unsigned char)src[pos]) || src[pos] == '_'))
            advance();
        return src.substr(start, pos - start);
    }
    long long integer() {
        skip_ws();
        bool negative = eat('-');
        skip_ws();
        size_t start = pos;
        while (pos < src.size() && isdigit((unsigned char)src[pos])) advance();
        if (start == pos) fail("expected integer");
        long long v = std::stoll(src.substr(start, pos - start));
        return negative ? -v : v;
    }

    ExprPtr parse_expr() {
        ExprPtr e = parse_mul();
        while (true) {
            char c = peek();
            if (c == '+') {
                advance();
                e = Expr::add(e, parse_mul());
            } else if (c == '-') {
                advance();
                e = Expr::sub(e, parse_mul());
            } else {
                return e;
            }
        }
    }
    ExprPtr parse_mul() {
        ExprPtr e = parse_operand();
        while (peek() == '*') {
            advance();
            ExprPtr r = parse_operand();
            if (e->kind == Expr::Kind::Const)
                e = Expr::mul(e->value, r);
            else if (r->kind == Expr::Kind::Const)
                e = Expr::mul(r->value, e);
            else
                fail("nonlinear multiplication in model");
        }
        return e;
    }
    ExprPtr parse_operand() {
        char c = peek();
        if (c == '(') {
            advance();
            ExprPtr e = parse_expr();
            expect(')');
            return e;
        }
        if (c == '-' || isdigit((unsigned char)c)) return Expr::constant(integer());
        return Expr::variable(ident());
    }

    // one comparison; sides may be arithmetic or the literals true/false
    ModelFormula parse_cmp_from(ExprPtr lhs_or_null, TermPtr blhs) {
        skip_ws();
        CmpOp op;
        if (eat_str("=\\=")) {
            op = CmpOp::Ne;
        } else if (eat_str("=<")) {
            op = CmpOp::Le;
        } else if (eat_str(">=")) {
            op = CmpOp::Ge;
        } else if (eat_str("=")) {
            op = CmpOp::Eq;
        } else if (eat_str("<")) {
            op = CmpOp::Lt;
        } else if (eat_str(">")) {
            op = CmpOp::Gt;
        } else {
            fail("expected comparison operator");
        }
        ModelFormula f;
        f.kind = ModelFormula::Kind::Cmp;
        skip_ws();
        bool rhs_bool = src.compare(pos, 4, "true") == 0 || src.compare(pos, 5, "false") == 0;
        if (blhs || rhs_bool) {
            TermPtr l = blhs, r;
            if (!l) {
                if (!lhs_or_null || lhs_or_null->kind != Expr::Kind::Var)
                    fail("boolean comparison with non-variable side");
                l = Term::var(lhs_or_null->var, Sort::Bool);
            }
            if (rhs_bool) {
                r = Term::bool_const(eat_str("true") ? true : (eat_str("false"), false));
            } else {
                r = Term::var(ident(), Sort::Bool);
            }
            if (op != CmpOp::Eq && op != CmpOp::Ne) fail("ordering on booleans");
            f.cmp = Constraint::bool_cmp(op, l, r);
        } else {
            f.cmp = Constraint::int_cmp(op, lhs_or_null, parse_expr());
        }
        return f;
    }

    ModelFormula parse_unit() {
        skip_ws();
        if (eat_str("\\+")) {
            ModelFormula f;
            f.kind = ModelFormula::Kind::Not;
            expect('(');
            f.kids.push_back(parse_formula());
            expect(')');
            return f;
        }
        if (peek() == '(') {
            // parenthesized group: formula or the left operand of a comparison
            size_t save_pos = pos;
            int save_line = line, save_col = col;
            try {
                advance();
                ModelFormula inner = parse_formula();
                expect(')');
                skip_ws();
                if (pos < src.size() &&
                    (src[pos] == '=' || src[pos] == '<' || src[pos] == '>'))
                    throw ParseError(line, col, "expression, not formula");
                return inner;
            } catch (const ParseError&) {
                // it was a parenthesized arithmetic expression after all
                pos = save_pos;
                line = save_line;
                col = save_col;
                ExprPtr e = parse_expr();
                return parse_cmp_from(e, nullptr);
            }
        }
        if (eat_str("true")) {
            skip_ws();
            if (pos < src.size() && (src[pos] == '=' || src[pos] == '<' || src[pos] == '>'))
                return parse_cmp_from(nullptr, Term::bool_const(true));
            ModelFormula f;
            f.kind = ModelFormula::Kind::True;
            return f;
        }
        if (eat_str("false")) {
            skip_ws();
            if (pos < src.size() && (src[pos] == '=' || src[pos] == '<' || src[pos] == '>'))
                return parse_cmp_from(nullptr, Term::bool_const(false));
            ModelFormula f;
            f.kind = ModelFormula::Kind::False;
            return f;
        }
        ExprPtr e = parse_expr();
        return parse_cmp_from(e, nullptr);
    }

    ModelFormula parse_formula() {
        ModelFormula f = parse_unit();
        skip_ws();
        while (true) {
            if (eat(',')) {
                ModelFormula g = parse_unit();
                ModelFormula conj;
                conj.kind = ModelFormula::Kind::And;
                conj.kids = {std::move(f), std::move(g)};
                f = std::move(conj);
            } else if (eat(';')) {
                ModelFormula g = parse_unit();
                ModelFormula disj;
                disj.kind = ModelFormula::Kind::Or;
                disj.kids = {std::move(f), std::move(g)};
                f = std::move(disj);
            } else {
                return f;
            }
        }
    }
};

void collect_formula_vars(const ModelFormula& f, std::vector<std::pair<std::string, Sort>>& out) {
    switch (f.kind) {
        case ModelFormula::Kind::Cmp: constraint_vars(f.cmp, out); break;
        case ModelFormula::Kind::And:
        case ModelFormula::Kind::Or:
        case ModelFormula::Kind::Not:
            for (auto& k : f.kids) collect_formula_vars(k, out);
            break;
        default: break;
    }
}

}  // namespace

Model parse_model(const std::string& text) {
    MParser p(text);
    Model m;
    while (!p.eof()) {
        int line = p.line, col = p.col;
        std::string pred = p.ident();
        ModelEntry entry;
        if (p.peek() == '(') {
            p.advance();
            if (p.peek() != ')') {
                entry.params.push_back(p.ident());
                while (p.eat(',')) entry.params.push_back(p.ident());
            }
            p.expect(')');
        }
        if (p.eat_str(":-")) {
            entry.formula = p.parse_formula();
        } else {
            entry.formula.kind = ModelFormula::Kind::True;
        }
        p.expect('.');

        std::vector<std::pair<std::string, Sort>> used;
        collect_formula_vars(entry.formula, used);
        for (auto& [v, s] : used) {
            bool found = false;
            for (auto& q : entry.params) found |= (q == v);
            if (!found)
                throw ParseError(line, col, "model formula for " + pred +
                                                " uses out-of-scope variable " + v);
        }
        m.entries[pred] = std::move(entry);
    }
    return m;
}

std::string model_formula_to_string(const ModelFormula& f) {
    switch (f.kind) {
        case ModelFormula::Kind::True: return "true";
        case ModelFormula::Kind::False: return "false";
        case ModelFormula::Kind::Cmp: return "(" + constraint_to_string(f.cmp) + ")";
        case ModelFormula::Kind::Not: return "\\+(" + model_formula_to_string(f.kids[0]) + ")";
        case ModelFormula::Kind::And:
            return "(" + model_formula_to_string(f.kids[0]) + ", " +
                   model_formula_to_string(f.kids[1]) + ")";
        case ModelFormula::Kind::Or:
            return "(" + model_formula_to_string(f.kids[0]) + "; " +
                   model_formula_to_string(f.kids[1]) + ")";
    }
    return "?";
}

}  // namespace chc
