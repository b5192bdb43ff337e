#include "chc/parser.hpp"
#include "chc/subst.hpp"

#include <cassert>
#include <cctype>
#include <optional>

namespace chc {

namespace {

enum class Tok {
    End, PredName, VarName, Int, LParen, RParen, LBracket, RBracket,
    Bar, Comma, Dot, Semicolon, Turnstile, Plus, Minus, Star, NotOp,
    OpEq, OpNe, OpLe, OpLt, OpGe, OpGt,
};

struct Token {
    Tok kind;
    std::string text;
    long long value = 0;
    int line = 1, col = 1;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& s) : src(s) {}

    void advance(size_t n = 1) {
        for (size_t i = 0; i < n && pos < src.size(); i++, pos++) {
            if (src[pos] == '\n') {
                line++;
                col = 1;
            } else {
                col++;
            }
        }
    }

    void skip_ws() {
        while (pos < src.size()) {
            char c = src[pos];
            if (c == '%') {
                while (pos < src.size() && src[pos] != '\n') advance();
            } else if (isspace((unsigned char)c)) {
                advance();
            } else {
                break;
            }
        }
    }

    Token next() {
        skip_ws();
        Token t;
        t.line = line;
        t.col = col;
        if (pos >= src.size()) {
            t.kind = Tok::End;
            return t;
        }
        char c = src[pos];
        auto two = src.substr(pos, 2);
        auto three = src.substr(pos, 3);
        if (three == "=\\=") {
            t.kind = Tok::OpNe;
            advance(3);
            return t;
        }
        if (two == ":-") {
            t.kind = Tok::Turnstile;
            advance(2);
            return t;
        }
        if (two == "=<") {
            t.kind = Tok::OpLe;
            advance(2);
            return t;
        }
        if (two == ">=") {
            t.kind = Tok::OpGe;
            advance(2);
            return t;
        }
        if (two == "\\+") {
            t.kind = Tok::NotOp;
            advance(2);
            return t;
        }
        if (isdigit((unsigned char)c)) {
            size_t start = pos;
            while (pos < src.size() && isdigit((unsigned char)src[pos])) advance();
            t.kind = Tok::Int;
            t.text = src.substr(start, pos - start);
            t.value = std::stoll(t.text);
            return t;
        }
        if (isalpha((unsigned char)c) || c == '_') {
            size_t start = pos;
            while (pos < src.size() &&
                   (isalnum((unsigned char)src[pos]) || src[pos] == '_'))
                advance();
            t.text = src.substr(start, pos - start);
            t.kind = (isupper((unsigned char)c) || c == '_') ? Tok::VarName : Tok::PredName;
            return t;
        }
        switch (c) {
            case '(': t.kind = Tok::LParen; break;
            case ')': t.kind = Tok::RParen; break;
            case '[': t.kind = Tok::LBracket; break;
            case ']': t.kind = Tok::RBracket; break;
            case '|': t.kind = Tok::Bar; break;
            case ',': t.kind = Tok::Comma; break;
            case '.': t.kind = Tok::Dot; break;
            case ';': t.kind = Tok::Semicolon; break;
            case '=': t.kind = Tok::OpEq; break;
            case '<': t.kind = Tok::OpLt; break;
            case '>': t.kind = Tok::OpGt; break;
            case '+': t.kind = Tok::Plus; break;
            case '-': t.kind = Tok::Minus; break;
            case '*': t.kind = Tok::Star; break;
            default:
                throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        advance();
        return t;
    }
};

bool is_cmp(Tok k) {
    return k == Tok::OpEq || k == Tok::OpNe || k == Tok::OpLe || k == Tok::OpLt ||
           k == Tok::OpGe || k == Tok::OpGt;
}

CmpOp cmp_of(Tok k) {
    switch (k) {
        case Tok::OpEq: return CmpOp::Eq;
        case Tok::OpNe: return CmpOp::Ne;
        case Tok::OpLe: return CmpOp::Le;
        case Tok::OpLt: return CmpOp::Lt;
        case Tok::OpGe: return CmpOp::Ge;
        default: return CmpOp::Gt;
    }
}

// Raw (pre-sort-inference) syntax trees. A comparison side is either a term
// (possibly a list) or an arithmetic expression; a bare variable stays
// ambiguous until sorts are known.
struct RawTerm;
using RawTermPtr = std::shared_ptr<RawTerm>;
struct RawTerm {
    enum class Kind { Var, Int, True, False, Nil, Cons };
    Kind kind;
    std::string name;
    long long value = 0;
    RawTermPtr head, tail;
    int line = 1, col = 1;
};

struct RawSide {
    RawTermPtr term;  // set if the side is var/const/list
    ExprPtr expr;     // set if the side is a compound arithmetic expression
    int line = 1, col = 1;
};

struct RawAtom {
    std::string pred;
    std::vector<RawTermPtr> args;
    int line = 1, col = 1;
};

struct RawCmp {
    CmpOp op;
    RawSide lhs, rhs;
    int line = 1, col = 1;
};

using RawItem = std::variant<RawAtom, RawCmp>;

struct RawClause {
    std::optional<RawAtom> head;  // nullopt = false head
    std::vector<RawItem> body;
    int line = 1, col = 1;
};

struct Parser {
    Lexer lex;
    Token cur;

    explicit Parser(const std::string& s) : lex(s) { cur = lex.next(); }

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(cur.line, cur.col, msg);
    }
    Token eat() {
        Token t = cur;
        cur = lex.next();
        return t;
    }
    Token expect(Tok k, const char* what) {
        if (cur.kind != k) fail(std::string("expected ") + what);
        return eat();
    }

    RawTermPtr make_raw(RawTerm::Kind k, int line, int col) {
        auto r = std::make_shared<RawTerm>();
        r->kind = k;
        r->line = line;
        r->col = col;
        return r;
    }

    RawTermPtr parse_raw_term() {
        int line = cur.line, col = cur.col;
        switch (cur.kind) {
            case Tok::VarName: {
                auto r = make_raw(RawTerm::Kind::Var, line, col);
                r->name = eat().text;
                return r;
            }
            case Tok::Int: {
                auto r = make_raw(RawTerm::Kind::Int, line, col);
                r->value = eat().value;
                return r;
            }
            case Tok::Minus: {
                eat();
                if (cur.kind != Tok::Int) fail("expected integer after '-'");
                auto r = make_raw(RawTerm::Kind::Int, line, col);
                r->value = -eat().value;
                return r;
            }
            case Tok::PredName: {
                if (cur.text == "true" || cur.text == "false") {
                    auto r = make_raw(cur.text == "true" ? RawTerm::Kind::True
                                                         : RawTerm::Kind::False,
                                      line, col);
                    eat();
                    return r;
                }
                fail("unexpected name in term position: " + cur.text);
            }
            case Tok::LBracket: return parse_raw_list();
            default: fail("expected term");
        }
    }

    RawTermPtr parse_raw_list() {
        int line = cur.line, col = cur.col;
        expect(Tok::LBracket, "'['");
        if (cur.kind == Tok::RBracket) {
            eat();
            return make_raw(RawTerm::Kind::Nil, line, col);
        }
        std::vector<RawTermPtr> elems;
        elems.push_back(parse_raw_term());
        while (cur.kind == Tok::Comma) {
            eat();
            elems.push_back(parse_raw_term());
        }
        RawTermPtr tail;
        if (cur.kind == Tok::Bar) {
            eat();
            tail = parse_raw_term();
        } else {
            tail = make_raw(RawTerm::Kind::Nil, cur.line, cur.col);
        }
        expect(Tok::RBracket, "']'");
        for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
            auto c = make_raw(RawTerm::Kind::Cons, line, col);
            c->head = *it;
            c->tail = tail;
            tail = c;
        }
        return tail;
    }

    //  expr := multerm (('+'|'-') multerm)*
    //  multerm := INT '*' prim | prim ('*' INT)? | '-' prim | '(' expr ')'
    ExprPtr parse_expr() {
        ExprPtr e = parse_multerm();
        while (cur.kind == Tok::Plus || cur.kind == Tok::Minus) {
            bool plus = eat().kind == Tok::Plus;
            ExprPtr r = parse_multerm();
            e = plus ? Expr::add(e, r) : Expr::sub(e, r);
        }
        return e;
    }

    ExprPtr parse_multerm() {
        if (cur.kind == Tok::Minus) {
            eat();
            return Expr::neg(parse_multerm());
        }
        ExprPtr e = parse_prim();
        if (cur.kind == Tok::Star) {
            if (e->kind != Expr::Kind::Const)
                fail("multiplication is allowed by integer constants only");
            eat();
            ExprPtr r = parse_prim();
            return Expr::mul(e->value, r);
        }
        return e;
    }

    ExprPtr parse_prim() {
        switch (cur.kind) {
            case Tok::Int: return Expr::constant(eat().value);
            case Tok::VarName: return Expr::variable(eat().text);
            case Tok::LParen: {
                eat();
                ExprPtr e = parse_expr();
                expect(Tok::RParen, "')'");
                if (cur.kind == Tok::Star) {
                    eat();
                    Token c = expect(Tok::Int, "integer coefficient");
                    return Expr::mul(c.value, e);
                }
                return e;
            }
            default: fail("expected arithmetic operand");
        }
    }

    bool expr_is_single_var(const ExprPtr& e) { return e->kind == Expr::Kind::Var; }

    RawSide parse_side() {
        RawSide s;
        s.line = cur.line;
        s.col = cur.col;
        if (cur.kind == Tok::LBracket) {
            s.term = parse_raw_list();
            return s;
        }
        if (cur.kind == Tok::PredName && (cur.text == "true" || cur.text == "false")) {
            s.term = parse_raw_term();
            return s;
        }
        ExprPtr e = parse_expr();
        if (expr_is_single_var(e)) {
            auto r = make_raw(RawTerm::Kind::Var, s.line, s.col);
            r->name = e->var;
            s.term = r;
        } else if (e->kind == Expr::Kind::Const) {
            auto r = make_raw(RawTerm::Kind::Int, s.line, s.col);
            r->value = e->value;
            s.term = r;
        } else {
            s.expr = e;
        }
        return s;
    }

    RawAtom parse_atom_after_name(Token name) {
        RawAtom a;
        a.pred = name.text;
        a.line = name.line;
        a.col = name.col;
        if (cur.kind == Tok::LParen) {
            eat();
            a.args.push_back(parse_raw_term());
            while (cur.kind == Tok::Comma) {
                eat();
                a.args.push_back(parse_raw_term());
            }
            expect(Tok::RParen, "')'");
        }
        return a;
    }

    RawItem parse_body_item() {
        if (cur.kind == Tok::PredName && cur.text != "true" && cur.text != "false") {
            Token name = eat();
            return parse_atom_after_name(name);
        }
        RawCmp c;
        c.line = cur.line;
        c.col = cur.col;
        c.lhs = parse_side();
        if (!is_cmp(cur.kind)) fail("expected comparison operator");
        c.op = cmp_of(eat().kind);
        c.rhs = parse_side();
        return c;
    }

    RawClause parse_clause_raw() {
        RawClause cl;
        cl.line = cur.line;
        cl.col = cur.col;
        if (cur.kind == Tok::PredName && cur.text == "false") {
            eat();
            cl.head = std::nullopt;
        } else {
            Token name = expect(Tok::PredName, "predicate name");
            cl.head = parse_atom_after_name(name);
        }
        if (cur.kind == Tok::Turnstile) {
            eat();
            cl.body.push_back(parse_body_item());
            while (cur.kind == Tok::Comma) {
                eat();
                cl.body.push_back(parse_body_item());
            }
        }
        expect(Tok::Dot, "'.'");
        return cl;
    }
};

// --- sort inference and elaboration ---

struct Elaborator {
    const Program& prog;
    std::map<std::string, Sort> var_sorts;
    std::vector<std::pair<std::string, std::pair<int, int>>> pending;  // var, pos

    explicit Elaborator(const Program& p) : prog(p) {}

    void assign(const std::string& v, Sort s, int line, int col) {
        auto it = var_sorts.find(v);
        if (it == var_sorts.end()) {
            var_sorts[v] = s;
        } else if (it->second != s) {
            throw SortError(line, col, "variable " + v + " used both as " +
                                           sort_name(it->second) + " and " + sort_name(s));
        }
    }

    void infer_term(const RawTermPtr& t, Sort expect) {
        switch (t->kind) {
            case RawTerm::Kind::Var: assign(t->name, expect, t->line, t->col); break;
            case RawTerm::Kind::Int:
                if (expect != Sort::Int)
                    throw SortError(t->line, t->col, "integer constant used as " +
                                                         std::string(sort_name(expect)));
                break;
            case RawTerm::Kind::True:
            case RawTerm::Kind::False:
                if (expect != Sort::Bool)
                    throw SortError(t->line, t->col, "boolean constant used as " +
                                                         std::string(sort_name(expect)));
                break;
            case RawTerm::Kind::Nil:
            case RawTerm::Kind::Cons:
                if (expect != Sort::List)
                    throw SortError(t->line, t->col, "list term used as " +
                                                         std::string(sort_name(expect)));
                if (t->kind == RawTerm::Kind::Cons) {
                    infer_term(t->head, Sort::Int);
                    infer_term(t->tail, Sort::List);
                }
                break;
        }
    }

    void infer_atom(const RawAtom& a) {
        const PredDecl* d = prog.find_decl(a.pred);
        if (!d) throw UndeclaredPredicate(a.line, a.col, a.pred);
        if (d->arg_sorts.size() != a.args.size())
            throw ArityMismatch(a.line, a.col, a.pred);
        for (size_t i = 0; i < a.args.size(); i++) infer_term(a.args[i], d->arg_sorts[i]);
    }

    // first pass collected all atom-position sorts; comparisons then settle
    void infer_cmp_side(const RawSide& s, Sort expect) {
        if (s.term) {
            infer_term(s.term, expect);
        } else {
            if (expect != Sort::Int)
                throw SortError(s.line, s.col, "arithmetic expression used as " +
                                                   std::string(sort_name(expect)));
            std::vector<std::string> vs;
            expr_vars(s.expr, vs);
            for (auto& v : vs) assign(v, Sort::Int, s.line, s.col);
        }
    }

    std::optional<Sort> side_known_sort(const RawSide& s) {
        if (s.expr) return Sort::Int;
        switch (s.term->kind) {
            case RawTerm::Kind::Int: return Sort::Int;
            case RawTerm::Kind::True:
            case RawTerm::Kind::False: return Sort::Bool;
            case RawTerm::Kind::Nil:
            case RawTerm::Kind::Cons: return Sort::List;
            case RawTerm::Kind::Var: {
                auto it = var_sorts.find(s.term->name);
                if (it == var_sorts.end()) return std::nullopt;
                return it->second;
            }
        }
        return std::nullopt;
    }

    TermPtr build_term(const RawTermPtr& t) {
        switch (t->kind) {
            case RawTerm::Kind::Var: {
                auto it = var_sorts.find(t->name);
                Sort s = it == var_sorts.end() ? Sort::Int : it->second;
                return Term::var(t->name, s);
            }
            case RawTerm::Kind::Int: return Term::int_const(t->value);
            case RawTerm::Kind::True: return Term::bool_const(true);
            case RawTerm::Kind::False: return Term::bool_const(false);
            case RawTerm::Kind::Nil: return Term::nil();
            case RawTerm::Kind::Cons:
                return Term::cons(build_term(t->head), build_term(t->tail));
        }
        return nullptr;
    }

    ExprPtr side_expr(const RawSide& s) {
        if (s.expr) return s.expr;
        if (s.term->kind == RawTerm::Kind::Var) return Expr::variable(s.term->name);
        if (s.term->kind == RawTerm::Kind::Int) return Expr::constant(s.term->value);
        throw SortError(s.line, s.col, "expected arithmetic operand");
    }
};

}  // namespace

Program parse_program(const std::string& text) {
    Parser ps(text);
    Program prog;
    std::vector<RawClause> raw_clauses;

    while (ps.cur.kind != Tok::End) {
        if (ps.cur.kind == Tok::Turnstile) {
            // directive
            ps.eat();
            Token kw = ps.expect(Tok::PredName, "'pred' or 'mode'");
            if (kw.text == "pred") {
                Token name = ps.expect(Tok::PredName, "predicate name");
                PredDecl d;
                d.name = name.text;
                ps.expect(Tok::LParen, "'('");
                if (ps.cur.kind != Tok::RParen) {
                    while (true) {
                        Token s = ps.expect(Tok::PredName, "sort");
                        if (s.text == "int") {
                            d.arg_sorts.push_back(Sort::Int);
                        } else if (s.text == "bool") {
                            d.arg_sorts.push_back(Sort::Bool);
                        } else if (s.text == "list") {
                            ps.expect(Tok::LParen, "'('");
                            Token el = ps.expect(Tok::PredName, "'int'");
                            if (el.text != "int")
                                throw ParseError(el.line, el.col, "only list(int) is supported");
                            ps.expect(Tok::RParen, "')'");
                            d.arg_sorts.push_back(Sort::List);
                        } else {
                            throw ParseError(s.line, s.col, "unknown sort: " + s.text);
                        }
                        if (ps.cur.kind != Tok::Comma) break;
                        ps.eat();
                    }
                }
                ps.expect(Tok::RParen, "')'");
                ps.expect(Tok::Dot, "'.'");
                if (prog.find_decl(d.name))
                    throw ParseError(name.line, name.col,
                                     "duplicate declaration of " + d.name);
                prog.add_decl(std::move(d));
            } else if (kw.text == "mode") {
                Token name = ps.expect(Tok::PredName, "predicate name");
                PredDecl* d = prog.find_decl(name.text);
                if (!d) throw UndeclaredPredicate(name.line, name.col, name.text);
                std::vector<Mode> modes;
                ps.expect(Tok::LParen, "'('");
                if (ps.cur.kind != Tok::RParen) {
                    while (true) {
                        Token m = ps.expect(Tok::PredName, "'in' or 'out'");
                        if (m.text == "in")
                            modes.push_back(Mode::In);
                        else if (m.text == "out")
                            modes.push_back(Mode::Out);
                        else
                            throw ParseError(m.line, m.col, "expected in/out");
                        if (ps.cur.kind != Tok::Comma) break;
                        ps.eat();
                    }
                }
                ps.expect(Tok::RParen, "')'");
                ps.expect(Tok::Dot, "'.'");
                if (modes.size() != d->arg_sorts.size())
                    throw ArityMismatch(name.line, name.col, name.text);
                d->modes = modes;
                d->modes_declared = true;
            } else {
                throw ParseError(kw.line, kw.col, "unknown directive: " + kw.text);
            }
            continue;
        }
        raw_clauses.push_back(ps.parse_clause_raw());
    }

    for (auto& rc : raw_clauses) {
        Elaborator el(prog);
        if (rc.head) el.infer_atom(*rc.head);
        for (auto& it : rc.body)
            if (auto* a = std::get_if<RawAtom>(&it)) el.infer_atom(*a);

        // settle comparisons; a few passes let var sorts propagate
        std::vector<int> kind(rc.body.size(), -1);  // 0 int, 1 bool, 2 list
        for (int pass = 0; pass < 3; pass++) {
            for (size_t i = 0; i < rc.body.size(); i++) {
                auto* c = std::get_if<RawCmp>(&rc.body[i]);
                if (!c) continue;
                if (kind[i] >= 0) continue;
                auto ls = el.side_known_sort(c->lhs);
                auto rs = el.side_known_sort(c->rhs);
                Sort s;
                if (ls && rs && *ls != *rs)
                    throw SortError(c->line, c->col, "comparison between different sorts");
                if (ls)
                    s = *ls;
                else if (rs)
                    s = *rs;
                else if (pass < 2)
                    continue;  // try again once more vars are known
                else
                    s = Sort::Int;
                kind[i] = s == Sort::Int ? 0 : s == Sort::Bool ? 1 : 2;
                if (s != Sort::Int && c->op != CmpOp::Eq && c->op != CmpOp::Ne)
                    throw SortError(c->line, c->col,
                                    "ordering comparison on non-integer operands");
                el.infer_cmp_side(c->lhs, s);
                el.infer_cmp_side(c->rhs, s);
            }
        }

        Clause cl;
        if (rc.head) {
            Atom h;
            h.pred = rc.head->pred;
            for (auto& t : rc.head->args) h.args.push_back(el.build_term(t));
            cl.head = std::move(h);
        }
        std::vector<std::pair<TermPtr, TermPtr>> list_eqs;
        for (size_t i = 0; i < rc.body.size(); i++) {
            auto& it = rc.body[i];
            if (auto* a = std::get_if<RawAtom>(&it)) {
                Atom at;
                at.pred = a->pred;
                for (auto& t : a->args) at.args.push_back(el.build_term(t));
                cl.body.push_back(std::move(at));
            } else {
                auto& c = std::get<RawCmp>(it);
                if (kind[i] == 2) {
                    if (c.op != CmpOp::Eq)
                        throw SortError(c.line, c.col, "only = is defined on lists");
                    list_eqs.emplace_back(el.build_term(c.lhs.term),
                                          el.build_term(c.rhs.term));
                } else if (kind[i] == 1) {
                    cl.body.push_back(Constraint::bool_cmp(
                        c.op, el.build_term(c.lhs.term), el.build_term(c.rhs.term)));
                } else {
                    cl.body.push_back(Constraint::int_cmp(c.op, el.side_expr(c.lhs),
                                                          el.side_expr(c.rhs)));
                }
            }
        }
        // list equations are resolved away by unification
        if (!list_eqs.empty()) {
            Substitution s;
            for (auto& [l, r] : list_eqs) {
                auto u = unify(s.apply(l), s.apply(r));
                if (!u.ok())
                    throw SortError(rc.line, rc.col, "unsatisfiable list equation");
                s = s.compose(u.mgu);
            }
            cl = s.apply(cl);
        }
        prog.add_clause(std::move(cl));
    }
    return prog;
}

// Parses `head :- body.` against a program's declarations; the head
// predicate may be undeclared, its argument sorts inferred from the body.
// Used for definition lines in transformation scripts.
Clause parse_definition_clause(const std::string& text, const Program& p,
                               PredDecl* inferred) {
    Parser ps(text);
    RawClause rc = ps.parse_clause_raw();
    if (ps.cur.kind != Tok::End)
        throw ParseError(ps.cur.line, ps.cur.col, "trailing input after clause");
    if (!rc.head) throw ParseError(rc.line, rc.col, "definition clause needs a head");

    Elaborator el(p);
    for (auto& it : rc.body)
        if (auto* a = std::get_if<RawAtom>(&it)) el.infer_atom(*a);

    std::vector<int> kind(rc.body.size(), -1);
    for (int pass = 0; pass < 3; pass++) {
        for (size_t i = 0; i < rc.body.size(); i++) {
            auto* c = std::get_if<RawCmp>(&rc.body[i]);
            if (!c) continue;
            if (kind[i] >= 0) continue;
            auto ls = el.side_known_sort(c->lhs);
            auto rs = el.side_known_sort(c->rhs);
            Sort s;
            if (ls && rs && *ls != *rs)
                throw SortError(c->line, c->col, "comparison between different sorts");
            if (ls)
                s = *ls;
            else if (rs)
                s = *rs;
            else if (pass < 2)
                continue;
            else
                s = Sort::Int;
            kind[i] = s == Sort::Int ? 0 : s == Sort::Bool ? 1 : 2;
            el.infer_cmp_side(c->lhs, s);
            el.infer_cmp_side(c->rhs, s);
        }
    }

    Clause cl;
    Atom h;
    h.pred = rc.head->pred;
    for (auto& t : rc.head->args) {
        if (t->kind != RawTerm::Kind::Var)
            throw ParseError(t->line, t->col, "definition head arguments must be variables");
        h.args.push_back(el.build_term(t));
    }
    cl.head = std::move(h);
    for (size_t i = 0; i < rc.body.size(); i++) {
        auto& it = rc.body[i];
        if (auto* a = std::get_if<RawAtom>(&it)) {
            Atom at;
            at.pred = a->pred;
            for (auto& t : a->args) at.args.push_back(el.build_term(t));
            cl.body.push_back(std::move(at));
        } else {
            auto& c = std::get<RawCmp>(it);
            if (kind[i] == 2)
                throw SortError(c.line, c.col, "list equations not allowed in definitions");
            if (kind[i] == 1)
                cl.body.push_back(Constraint::bool_cmp(c.op, el.build_term(c.lhs.term),
                                                       el.build_term(c.rhs.term)));
            else
                cl.body.push_back(
                    Constraint::int_cmp(c.op, el.side_expr(c.lhs), el.side_expr(c.rhs)));
        }
    }
    if (inferred) {
        inferred->name = cl.head->pred;
        for (auto& t : cl.head->args) inferred->arg_sorts.push_back(t->var_sort);
    }
    return cl;
}

std::string print_program(const Program& p) { return program_to_string(p); }

// --- structural equality (ids ignored) ---

static bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Const: return a->value == b->value;
        case Expr::Kind::Var: return a->var == b->var;
        case Expr::Kind::Neg: return expr_equal(a->lhs, b->lhs);
        case Expr::Kind::Mul:
            return a->value == b->value && expr_equal(a->lhs, b->lhs);
        default:
            return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    }
}

static bool constraint_equal(const Constraint& a, const Constraint& b) {
    if (a.boolean != b.boolean || a.op != b.op) return false;
    if (a.boolean)
        return term_equal(a.blhs, b.blhs) && term_equal(a.brhs, b.brhs);
    return expr_equal(a.lhs, b.lhs) && expr_equal(a.rhs, b.rhs);
}

static bool clause_equal(const Clause& a, const Clause& b) {
    if (a.head.has_value() != b.head.has_value()) return false;
    if (a.head && !atom_equal(*a.head, *b.head)) return false;
    if (a.body.size() != b.body.size()) return false;
    for (size_t i = 0; i < a.body.size(); i++) {
        auto* ca = std::get_if<Constraint>(&a.body[i]);
        auto* cb = std::get_if<Constraint>(&b.body[i]);
        if ((ca == nullptr) != (cb == nullptr)) return false;
        if (ca) {
            if (!constraint_equal(*ca, *cb)) return false;
        } else if (!atom_equal(std::get<Atom>(a.body[i]), std::get<Atom>(b.body[i]))) {
            return false;
        }
    }
    return true;
}

bool program_equal(const Program& a, const Program& b) {
    if (a.decls.size() != b.decls.size() || a.clauses.size() != b.clauses.size())
        return false;
    for (size_t i = 0; i < a.decls.size(); i++) {
        auto& da = a.decls[i];
        auto& db = b.decls[i];
        if (da.name != db.name || da.arg_sorts != db.arg_sorts || da.modes != db.modes)
            return false;
    }
    for (size_t i = 0; i < a.clauses.size(); i++)
        if (!clause_equal(a.clauses[i], b.clauses[i])) return false;
    return true;
}

}  // namespace chc
