#include "chc/linform.hpp"

#include <sstream>
#include <stdexcept>

namespace chc {

LinForm& LinForm::add(const LinForm& o, long long factor) {
    for (auto& [v, c] : o.coeffs) {
        long long n = coeffs[v] + factor * c;
        if (n == 0)
            coeffs.erase(v);
        else
            coeffs[v] = n;
    }
    constant += factor * o.constant;
    return *this;
}

bool LinForm::operator<(const LinForm& o) const {
    if (constant != o.constant) return constant < o.constant;
    return std::lexicographical_compare(
        coeffs.begin(), coeffs.end(), o.coeffs.begin(), o.coeffs.end());
}

static void lin_rec(const ExprPtr& e, long long factor, LinForm& out) {
    switch (e->kind) {
        case Expr::Kind::Const: out.constant += factor * e->value; break;
        case Expr::Kind::Var: {
            long long n = out.coeffs[e->var] + factor;
            if (n == 0)
                out.coeffs.erase(e->var);
            else
                out.coeffs[e->var] = n;
            break;
        }
        case Expr::Kind::Add:
            lin_rec(e->lhs, factor, out);
            lin_rec(e->rhs, factor, out);
            break;
        case Expr::Kind::Sub:
            lin_rec(e->lhs, factor, out);
            lin_rec(e->rhs, -factor, out);
            break;
        case Expr::Kind::Neg: lin_rec(e->lhs, -factor, out); break;
        case Expr::Kind::Mul: lin_rec(e->lhs, factor * e->value, out); break;
    }
}

LinForm lin_of_expr(const ExprPtr& e) {
    LinForm f;
    lin_rec(e, 1, f);
    return f;
}

ExprPtr expr_of_lin(const LinForm& f) {
    ExprPtr acc;
    for (auto& [v, c] : f.coeffs) {
        ExprPtr term = Expr::variable(v);
        if (c == -1)
            term = Expr::neg(term);
        else if (c != 1)
            term = Expr::mul(c, term);
        acc = acc ? Expr::add(acc, term) : term;
    }
    if (!acc) return Expr::constant(f.constant);
    if (f.constant > 0) acc = Expr::add(acc, Expr::constant(f.constant));
    if (f.constant < 0) acc = Expr::sub(acc, Expr::constant(-f.constant));
    return acc;
}

static void canonical_sign(LinForm& f) {
    if (f.coeffs.empty()) {
        if (f.constant < 0) f.constant = -f.constant;
        return;
    }
    if (f.coeffs.begin()->second < 0) {
        for (auto& [v, c] : f.coeffs) c = -c;
        f.constant = -f.constant;
    }
}

static std::string bool_key(const TermPtr& t) {
    if (t->kind == Term::Kind::Var) return t->name;
    return t->bval ? "#t" : "#f";
}

NormConstraint normalize(const Constraint& c) {
    NormConstraint n;
    if (c.boolean) {
        n.boolean = true;
        n.op = c.op == CmpOp::Eq ? NormOp::Eq : NormOp::Ne;
        n.b1 = bool_key(c.blhs);
        n.b2 = bool_key(c.brhs);
        if (n.b2 < n.b1) std::swap(n.b1, n.b2);
        return n;
    }
    LinForm l = lin_of_expr(c.lhs);
    LinForm r = lin_of_expr(c.rhs);
    switch (c.op) {
        case CmpOp::Eq:
        case CmpOp::Ne:
            n.op = c.op == CmpOp::Eq ? NormOp::Eq : NormOp::Ne;
            n.form = l;
            n.form.add(r, -1);
            canonical_sign(n.form);
            break;
        case CmpOp::Le:  // l - r <= 0
            n.op = NormOp::Le;
            n.form = l;
            n.form.add(r, -1);
            break;
        case CmpOp::Lt:  // l - r + 1 <= 0
            n.op = NormOp::Le;
            n.form = l;
            n.form.add(r, -1);
            n.form.constant += 1;
            break;
        case CmpOp::Ge:  // r - l <= 0
            n.op = NormOp::Le;
            n.form = r;
            n.form.add(l, -1);
            break;
        case CmpOp::Gt:  // r - l + 1 <= 0
            n.op = NormOp::Le;
            n.form = r;
            n.form.add(l, -1);
            n.form.constant += 1;
            break;
    }
    return n;
}

bool norm_trivially_true(const NormConstraint& n) {
    if (n.boolean) {
        bool ground = (n.b1 == "#t" || n.b1 == "#f") && (n.b2 == "#t" || n.b2 == "#f");
        if (n.b1 == n.b2) return n.op == NormOp::Eq;  // includes X = X
        if (ground) return n.op == NormOp::Ne;
        return false;
    }
    if (!n.form.is_constant()) return false;
    switch (n.op) {
        case NormOp::Eq: return n.form.constant == 0;
        case NormOp::Ne: return n.form.constant != 0;
        case NormOp::Le: return n.form.constant <= 0;
    }
    return false;
}

bool norm_trivially_false(const NormConstraint& n) {
    if (n.boolean) {
        bool ground = (n.b1 == "#t" || n.b1 == "#f") && (n.b2 == "#t" || n.b2 == "#f");
        if (n.b1 == n.b2) return n.op == NormOp::Ne;
        if (ground) return n.op == NormOp::Eq;
        return false;
    }
    if (!n.form.is_constant()) return false;
    switch (n.op) {
        case NormOp::Eq: return n.form.constant != 0;
        case NormOp::Ne: return n.form.constant == 0;
        case NormOp::Le: return n.form.constant > 0;
    }
    return false;
}

bool NormConstraint::operator<(const NormConstraint& o) const {
    if (boolean != o.boolean) return boolean < o.boolean;
    if (op != o.op) return op < o.op;
    if (boolean) {
        if (b1 != o.b1) return b1 < o.b1;
        return b2 < o.b2;
    }
    return form < o.form;
}

std::string norm_to_string(const NormConstraint& n) {
    std::ostringstream os;
    if (n.boolean) {
        os << n.b1 << (n.op == NormOp::Eq ? " = " : " != ") << n.b2;
        return os.str();
    }
    os << expr_to_string(expr_of_lin(n.form));
    switch (n.op) {
        case NormOp::Eq: os << " = 0"; break;
        case NormOp::Ne: os << " != 0"; break;
        case NormOp::Le: os << " <= 0"; break;
    }
    return os.str();
}

}  // namespace chc
