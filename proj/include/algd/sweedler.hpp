#pragma once

#include "algd/twist.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace algd {

// Parser and evaluator for tensor identities in Sweedler notation. The
// concrete syntax is one-to-one with the usual displays: "(x)R" and "(x)RF"
// are the tensor separators over the base and the twisted base, "_(1)" and
// "_(2)" are coproduct splits ("_(1F)" for the twisted coproduct), primes
// mark independent summation copies of the same cocycle, and "==" separates
// the two sides. Splits bind tighter than products, products tighter than
// tensors, tensors tighter than sums.

struct SyntaxError : std::runtime_error {
    int line, col;
    SyntaxError(int line_, int col_, const std::string& what)
        : std::runtime_error("syntax error at " + std::to_string(line_) + ":" + std::to_string(col_) +
                             ": " + what),
          line(line_), col(col_) {}
};

struct UnboundGenerator : std::runtime_error {
    explicit UnboundGenerator(const std::string& g) : std::runtime_error("unbound generator: " + g) {}
};

struct ArityMismatch : std::runtime_error {
    explicit ArityMismatch(const std::string& w) : std::runtime_error("arity mismatch: " + w) {}
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Sum, Tensor, Prod, Gen, Map, Split };
    Kind kind;

    std::vector<std::pair<Rational, ExprPtr>> terms;  // Sum
    std::vector<ExprPtr> legs;                        // Tensor
    bool twisted_tensor = false;
    Rational coef = Rational(1);                      // Prod
    std::vector<ExprPtr> factors;
    std::string name;                                 // Gen / Map
    ExprPtr arg;                                      // Map
    ExprPtr base;                                     // Split
    int leg = 0;
    bool twisted_split = false;
};

inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Sum: {
            if (a->terms.size() != b->terms.size()) return false;
            for (size_t i = 0; i < a->terms.size(); ++i)
                if (a->terms[i].first != b->terms[i].first ||
                    !expr_equal(a->terms[i].second, b->terms[i].second))
                    return false;
            return true;
        }
        case Expr::Kind::Tensor: {
            if (a->twisted_tensor != b->twisted_tensor || a->legs.size() != b->legs.size()) return false;
            for (size_t i = 0; i < a->legs.size(); ++i)
                if (!expr_equal(a->legs[i], b->legs[i])) return false;
            return true;
        }
        case Expr::Kind::Prod: {
            if (a->coef != b->coef || a->factors.size() != b->factors.size()) return false;
            for (size_t i = 0; i < a->factors.size(); ++i)
                if (!expr_equal(a->factors[i], b->factors[i])) return false;
            return true;
        }
        case Expr::Kind::Gen:
            return a->name == b->name;
        case Expr::Kind::Map:
            return a->name == b->name && expr_equal(a->arg, b->arg);
        case Expr::Kind::Split:
            return a->leg == b->leg && a->twisted_split == b->twisted_split && expr_equal(a->base, b->base);
    }
    return false;
}

struct Identity {
    ExprPtr lhs, rhs;
};

namespace dsl {

inline const std::set<std::string>& map_names() {
    static const std::set<std::string> m = {"S", "Sinv", "SF", "SFinv", "alpha", "beta",
                                            "alphaF", "betaF", "eps"};
    return m;
}

inline bool is_gen_name(const std::string& s) {
    if (s == "1" || s == "h" || s == "b" || s == "r" || s == "V" || s == "Vinv") return true;
    std::string stem = s;
    while (!stem.empty() && stem.back() == '\'') stem.pop_back();
    return stem == "F1" || stem == "F2" || stem == "Fbar1" || stem == "Fbar2";
}

struct Token {
    enum class Kind { Num, Ident, LParen, RParen, Star, Plus, Minus, TensorR, TensorRF, Sub, EqEq, End };
    Kind kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n')) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else
                ++col_;
            ++pos_;
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::Kind::End;
            tok_.text = "";
            return;
        }
        char c = src_[pos_];
        auto take = [&](size_t k, Token::Kind kind, std::string text) {
            pos_ += k;
            col_ += (int)k;
            tok_.kind = kind;
            tok_.text = std::move(text);
        };
        if (src_.compare(pos_, 5, "(x)RF") == 0) return take(5, Token::Kind::TensorRF, "(x)RF");
        if (src_.compare(pos_, 4, "(x)R") == 0) return take(4, Token::Kind::TensorR, "(x)R");
        if (src_.compare(pos_, 2, "_(") == 0) return take(2, Token::Kind::Sub, "_(");
        if (src_.compare(pos_, 2, "==") == 0) return take(2, Token::Kind::EqEq, "==");
        switch (c) {
            case '(': return take(1, Token::Kind::LParen, "(");
            case ')': return take(1, Token::Kind::RParen, ")");
            case '*': return take(1, Token::Kind::Star, "*");
            case '+': return take(1, Token::Kind::Plus, "+");
            case '-': return take(1, Token::Kind::Minus, "-");
            default: break;
        }
        if (c >= '0' && c <= '9') {
            size_t s = pos_;
            while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '/') {
                ++pos_;
                if (pos_ >= src_.size() || src_[pos_] < '0' || src_[pos_] > '9')
                    throw SyntaxError(line_, col_, "expected denominator digits");
                while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') ++pos_;
            }
            std::string text = src_.substr(s, pos_ - s);
            col_ += (int)(pos_ - s);
            tok_.kind = Token::Kind::Num;
            tok_.text = std::move(text);
            return;
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
            size_t s = pos_;
            while (pos_ < src_.size() &&
                   ((src_[pos_] >= 'a' && src_[pos_] <= 'z') || (src_[pos_] >= 'A' && src_[pos_] <= 'Z') ||
                    (src_[pos_] >= '0' && src_[pos_] <= '9')))
                ++pos_;
            while (pos_ < src_.size() && src_[pos_] == '\'') ++pos_;
            std::string text = src_.substr(s, pos_ - s);
            col_ += (int)(pos_ - s);
            tok_.kind = Token::Kind::Ident;
            tok_.text = std::move(text);
            return;
        }
        throw SyntaxError(line_, col_, std::string("unexpected character '") + c + "'");
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    Identity parse_identity() {
        ExprPtr lhs = parse_expr();
        expect(Token::Kind::EqEq, "'=='");
        ExprPtr rhs = parse_expr();
        if (lex_.peek().kind != Token::Kind::End)
            throw SyntaxError(lex_.peek().line, lex_.peek().col, "trailing input after identity");
        return {lhs, rhs};
    }

    ExprPtr parse_expr() {
        auto sum = std::make_shared<Expr>();
        sum->kind = Expr::Kind::Sum;
        sum->terms.emplace_back(Rational(1), parse_tensor());
        while (lex_.peek().kind == Token::Kind::Plus || lex_.peek().kind == Token::Kind::Minus) {
            bool minus = lex_.next().kind == Token::Kind::Minus;
            sum->terms.emplace_back(minus ? Rational(-1) : Rational(1), parse_tensor());
        }
        if (sum->terms.size() == 1 && sum->terms[0].first.is_one()) return sum->terms[0].second;
        return sum;
    }

private:
    ExprPtr parse_tensor() {
        ExprPtr first = parse_prod();
        if (lex_.peek().kind != Token::Kind::TensorR && lex_.peek().kind != Token::Kind::TensorRF)
            return first;
        auto t = std::make_shared<Expr>();
        t->kind = Expr::Kind::Tensor;
        t->twisted_tensor = lex_.peek().kind == Token::Kind::TensorRF;
        t->legs.push_back(first);
        while (lex_.peek().kind == Token::Kind::TensorR || lex_.peek().kind == Token::Kind::TensorRF) {
            bool tw = lex_.next().kind == Token::Kind::TensorRF;
            if (tw != t->twisted_tensor)
                throw SyntaxError(lex_.peek().line, lex_.peek().col, "mixed tensor base tags in one term");
            t->legs.push_back(parse_prod());
        }
        if (t->legs.size() > 3)
            throw SyntaxError(lex_.peek().line, lex_.peek().col, "tensor arity beyond 3 is not supported");
        return t;
    }

    ExprPtr parse_prod() {
        auto p = std::make_shared<Expr>();
        p->kind = Expr::Kind::Prod;
        if (lex_.peek().kind == Token::Kind::Num) {
            // scalar prefix only when followed by '*'; a bare "1" is the unit
            Token num = lex_.next();
            if (lex_.peek().kind == Token::Kind::Star) {
                lex_.next();
                p->coef = Rational::parse(num.text);
            } else if (num.text == "1") {
                auto g = std::make_shared<Expr>();
                g->kind = Expr::Kind::Gen;
                g->name = "1";
                p->factors.push_back(g);
            } else {
                throw SyntaxError(num.line, num.col, "bare rational; expected '*' or the unit '1'");
            }
        }
        if (p->factors.empty()) p->factors.push_back(parse_factor());
        while (lex_.peek().kind == Token::Kind::Star) {
            lex_.next();
            p->factors.push_back(parse_factor());
        }
        if (p->factors.size() == 1 && p->coef.is_one()) return p->factors[0];
        return p;
    }

    ExprPtr parse_factor() {
        ExprPtr f = parse_primary();
        while (lex_.peek().kind == Token::Kind::Sub) {
            Token sub = lex_.next();
            Token d = lex_.next();
            if (d.kind != Token::Kind::Num || (d.text != "1" && d.text != "2"))
                throw SyntaxError(d.line, d.col, "expected split index 1 or 2");
            bool tw = false;
            if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "F") {
                lex_.next();
                tw = true;
            }
            expect(Token::Kind::RParen, "')' closing split subscript");
            auto s = std::make_shared<Expr>();
            s->kind = Expr::Kind::Split;
            s->base = f;
            s->leg = d.text == "1" ? 1 : 2;
            s->twisted_split = tw;
            f = s;
            (void)sub;
        }
        return f;
    }

    ExprPtr parse_primary() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::LParen) {
            lex_.next();
            ExprPtr e = parse_expr();
            expect(Token::Kind::RParen, "')'");
            return e;
        }
        if (t.kind == Token::Kind::Num) {
            Token num = lex_.next();
            if (num.text == "1") {
                auto g = std::make_shared<Expr>();
                g->kind = Expr::Kind::Gen;
                g->name = "1";
                return g;
            }
            throw SyntaxError(num.line, num.col, "bare rational is not a factor");
        }
        if (t.kind == Token::Kind::Ident) {
            Token id = lex_.next();
            if (map_names().count(id.text)) {
                expect(Token::Kind::LParen, "'(' after map name");
                ExprPtr arg = parse_expr();
                expect(Token::Kind::RParen, "')'");
                auto m = std::make_shared<Expr>();
                m->kind = Expr::Kind::Map;
                m->name = id.text;
                m->arg = arg;
                return m;
            }
            if (is_gen_name(id.text)) {
                auto g = std::make_shared<Expr>();
                g->kind = Expr::Kind::Gen;
                g->name = id.text;
                return g;
            }
            throw SyntaxError(id.line, id.col, "unknown generator or map '" + id.text + "'");
        }
        throw SyntaxError(t.line, t.col, "expected a factor");
    }

    void expect(Token::Kind k, const std::string& what) {
        if (lex_.peek().kind != k)
            throw SyntaxError(lex_.peek().line, lex_.peek().col, "expected " + what);
        lex_.next();
    }

    Lexer lex_;
};

inline std::string print_expr(const ExprPtr& e);

inline std::string print_atom(const ExprPtr& e) {
    if (e->kind == Expr::Kind::Sum || e->kind == Expr::Kind::Tensor ||
        (e->kind == Expr::Kind::Prod))
        return "(" + print_expr(e) + ")";
    return print_expr(e);
}

inline std::string print_expr(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Sum: {
            std::string out;
            for (size_t i = 0; i < e->terms.size(); ++i) {
                Rational c = e->terms[i].first;
                std::string part = print_expr(e->terms[i].second);
                if (c == Rational(-1)) {
                    out += i == 0 ? "-" : " - ";
                } else if (i > 0) {
                    out += " + ";
                }
                if (c != Rational(1) && c != Rational(-1)) part = c.abs().str() + " * " + part;
                out += part;
            }
            return out;
        }
        case Expr::Kind::Tensor: {
            std::string sep = e->twisted_tensor ? " (x)RF " : " (x)R ";
            std::string out;
            for (size_t i = 0; i < e->legs.size(); ++i) {
                if (i) out += sep;
                const ExprPtr& leg = e->legs[i];
                out += (leg->kind == Expr::Kind::Sum || leg->kind == Expr::Kind::Tensor)
                           ? "(" + print_expr(leg) + ")"
                           : print_expr(leg);
            }
            return out;
        }
        case Expr::Kind::Prod: {
            std::string out;
            if (!e->coef.is_one()) out += e->coef.str() + " * ";
            for (size_t i = 0; i < e->factors.size(); ++i) {
                if (i) out += " * ";
                out += print_atom(e->factors[i]);
            }
            return out;
        }
        case Expr::Kind::Gen:
            return e->name;
        case Expr::Kind::Map:
            return e->name + "(" + print_expr(e->arg) + ")";
        case Expr::Kind::Split:
            return print_atom(e->base) + "_(" + std::to_string(e->leg) + (e->twisted_split ? "F" : "") +
                   ")";
    }
    return "";
}

}  // namespace dsl

inline Identity parse_identity(const std::string& text) { return dsl::Parser(text).parse_identity(); }
inline ExprPtr parse_expression(const std::string& text) {
    dsl::Parser p(text);
    return p.parse_expr();
}
inline std::string print_identity(const Identity& id) {
    return dsl::print_expr(id.lhs) + " == " + dsl::print_expr(id.rhs);
}

struct Binding {
    const BialgebroidInstance* B = nullptr;
    const AntipodePair* S = nullptr;
    const Cocycle* c = nullptr;
    const TwistedStructure* T = nullptr;
    std::map<std::string, Vec> fixed;  // optional fixed values for h, b, r
};

struct EvalOptions {
    bool validate_cocycle_lifts = false;  // perturb F / Fbar representatives
};

struct EvalOutcome {
    Verdict verdict = Verdict::pass;
    std::string detail;
};

namespace dsl {

enum class Space { H, R };

struct Value {
    Space space;
    Vec v;
};

// generator requirement scan
struct Needs {
    bool cocycle = false, antipode = false, twisted = false;
    std::set<std::string> freevars;
};

inline void scan(const ExprPtr& e, Needs& n) {
    switch (e->kind) {
        case Expr::Kind::Sum:
            for (const auto& [c, t] : e->terms) scan(t, n);
            break;
        case Expr::Kind::Tensor:
            if (e->twisted_tensor) n.twisted = true;
            for (const auto& l : e->legs) scan(l, n);
            break;
        case Expr::Kind::Prod:
            for (const auto& f : e->factors) scan(f, n);
            break;
        case Expr::Kind::Gen: {
            const std::string& g = e->name;
            if (g == "h" || g == "b" || g == "r") n.freevars.insert(g);
            if (g.rfind("F", 0) == 0) n.cocycle = true;  // F1, F2, Fbar1, Fbar2, primes
            if (g == "V" || g == "Vinv") n.twisted = true;
            break;
        }
        case Expr::Kind::Map: {
            if (e->name == "S" || e->name == "Sinv") n.antipode = true;
            if (e->name == "SF" || e->name == "SFinv" || e->name == "alphaF" || e->name == "betaF")
                n.twisted = true;
            scan(e->arg, n);
            break;
        }
        case Expr::Kind::Split:
            if (e->twisted_split) n.twisted = true;
            scan(e->base, n);
            break;
    }
}

struct FamilyKey {
    std::string family;  // "F" or "Fbar"
    int primes;
    bool operator<(const FamilyKey& o) const {
        return family != o.family ? family < o.family : primes < o.primes;
    }
    bool operator==(const FamilyKey& o) const { return family == o.family && primes == o.primes; }
};

struct SplitSite {
    ExprPtr base;
    bool twisted;
};

struct TermSites {
    std::vector<FamilyKey> families;
    std::vector<SplitSite> splits;  // in dependency (post) order
};

inline bool gen_family(const std::string& g, FamilyKey& key, int& leg) {
    std::string stem = g;
    int primes = 0;
    while (!stem.empty() && stem.back() == '\'') {
        stem.pop_back();
        ++primes;
    }
    if (stem == "F1" || stem == "F2") {
        key = {"F", primes};
        leg = stem == "F1" ? 1 : 2;
        return true;
    }
    if (stem == "Fbar1" || stem == "Fbar2") {
        key = {"Fbar", primes};
        leg = stem == "Fbar1" ? 1 : 2;
        return true;
    }
    return false;
}

inline void collect_sites(const ExprPtr& e, TermSites& s) {
    switch (e->kind) {
        case Expr::Kind::Sum:
            for (const auto& [c, t] : e->terms) collect_sites(t, s);
            break;
        case Expr::Kind::Tensor:
            for (const auto& l : e->legs) collect_sites(l, s);
            break;
        case Expr::Kind::Prod:
            for (const auto& f : e->factors) collect_sites(f, s);
            break;
        case Expr::Kind::Gen: {
            FamilyKey key;
            int leg;
            if (gen_family(e->name, key, leg)) {
                bool seen = false;
                for (const auto& k : s.families) seen |= k == key;
                if (!seen) s.families.push_back(key);
            }
            break;
        }
        case Expr::Kind::Map:
            collect_sites(e->arg, s);
            break;
        case Expr::Kind::Split: {
            collect_sites(e->base, s);  // inner sites first
            for (const auto& site : s.splits)
                if (site.twisted == e->twisted_split && expr_equal(site.base, e->base)) return;
            s.splits.push_back({e->base, e->twisted_split});
            break;
        }
    }
}

class Evaluator {
public:
    Evaluator(const Binding& b, const EvalOptions& opts) : b_(b), opts_(opts) {
        ctx_ = b.B->ctx.get();
        for (const auto& [k, v] : b.fixed) env_free_[k] = v;
    }

    // availability of everything the expression mentions
    std::string missing(const Needs& n) const {
        if (n.cocycle && !b_.c) return "no cocycle bound";
        if (n.antipode && !b_.S) return "no antipode bound";
        if (n.twisted && !(b_.T && b_.T->S_F && b_.T->V_F_inv)) return "no twisted structure bound";
        return "";
    }

    EvalOutcome evaluate_identity(const Identity& id) {
        Needs needs;
        scan(id.lhs, needs);
        scan(id.rhs, needs);
        std::string why = missing(needs);
        if (!why.empty()) return {Verdict::skipped, why};

        std::vector<std::string> vars(needs.freevars.begin(), needs.freevars.end());
        std::vector<int> dims;
        std::vector<std::string> iter;
        for (const auto& v : vars) {
            if (b_.fixed.count(v)) continue;
            iter.push_back(v);
            dims.push_back(v == "h" ? ctx_->n() : ctx_->R.dim);
        }
        std::vector<int> idx(iter.size(), 0);
        while (true) {
            env_free_.clear();
            for (const auto& [k, v] : b_.fixed) env_free_[k] = v;
            for (size_t i = 0; i < iter.size(); ++i)
                env_free_[iter[i]] =
                    unit_vec(iter[i] == "h" ? ctx_->n() : ctx_->R.dim, idx[i]);

            Value lhs = eval_side(id.lhs);
            Value rhs = eval_side(id.rhs);
            if (lhs.space != rhs.space || lhs.v.size() != rhs.v.size())
                throw ArityMismatch("sides live in different spaces");
            if (lhs.v != rhs.v) {
                std::string w = "witness";
                for (size_t i = 0; i < iter.size(); ++i)
                    w += " " + iter[i] + "=" + std::to_string(idx[i]);
                return {Verdict::fail, w};
            }

            size_t p = 0;
            while (p < idx.size() && ++idx[p] == dims[p]) idx[p++] = 0;
            if (p == idx.size()) break;
        }
        return {Verdict::pass, ""};
    }

    // evaluates one side: the reduced tensor value (or plain vector, arity 1)
    Value eval_side(const ExprPtr& e) {
        struct Acc {
            bool set = false;
            int arity = 1;
            bool twisted = false;
            Value val;
        } acc;
        auto add_term = [&](const Rational& coef, const ExprPtr& term) {
            int arity = 1;
            bool twisted = false;
            if (term->kind == Expr::Kind::Tensor) {
                arity = (int)term->legs.size();
                twisted = term->twisted_tensor;
            }
            Value v = eval_term(coef, term, arity, twisted);
            if (!acc.set) {
                acc = {true, arity, twisted, std::move(v)};
            } else {
                if (acc.arity != arity || acc.twisted != twisted || acc.val.space != v.space)
                    throw ArityMismatch("sum mixes tensor shapes");
                axpy(acc.val.v, Rational(1), v.v);
            }
        };
        if (e->kind == Expr::Kind::Sum)
            for (const auto& [c, t] : e->terms) add_term(c, t);
        else
            add_term(Rational(1), e);

        // end reduction in the tagged quotient
        const TensorContext* rctx = acc.twisted ? b_.T->twisted.ctx.get() : ctx_;
        if (acc.arity == 2) acc.val.v = rctx->reduce2(std::move(acc.val.v));
        if (acc.arity == 3) acc.val.v = rctx->reduce3(std::move(acc.val.v));
        return std::move(acc.val);
    }

private:
    Value eval_term(const Rational& coef, const ExprPtr& term, int arity, bool /*twisted*/) {
        TermSites sites;
        collect_sites(term, sites);
        std::sort(sites.families.begin(), sites.families.end());

        Value out;
        if (arity == 1) {
            out.space = Space::H;  // adjusted on first accumulation
            out.v.clear();
        } else {
            out.space = Space::H;
            out.v.assign(arity == 2 ? ctx_->n2() : ctx_->n3(), Rational());
        }
        bool first = true;

        env_fam_.clear();
        env_split_.clear();
        enumerate(0, sites, coef, term, arity, out, first);
        if (arity == 1 && out.v.empty()) out.v.assign(ctx_->n(), Rational());  // empty sum
        return out;
    }

    void enumerate(size_t site_idx, const TermSites& sites, const Rational& weight, const ExprPtr& term,
                   int arity, Value& out, bool& first) {
        if (weight.is_zero()) return;
        if (site_idx < sites.families.size()) {
            const FamilyKey& key = sites.families[site_idx];
            const Vec& lift = key.family == "F" ? b_.c->F : b_.c->Fbar;
            for (int g = 0; g < ctx_->n2(); ++g) {
                if (lift[g].is_zero()) continue;
                env_fam_[key] = {g / ctx_->n(), g % ctx_->n()};
                enumerate(site_idx + 1, sites, weight * lift[g], term, arity, out, first);
            }
            env_fam_.erase(key);
            return;
        }
        size_t split_idx = site_idx - sites.families.size();
        if (split_idx < sites.splits.size()) {
            const SplitSite& site = sites.splits[split_idx];
            Value base = eval_expr(site.base);
            if (base.space != Space::H) throw ArityMismatch("split of a base-algebra value");
            const BialgebroidInstance& inst = site.twisted ? b_.T->twisted : *b_.B;
            Vec w = inst.delta_of(base.v);
            size_t env_pos = env_split_.size();
            env_split_.push_back({site.base, site.twisted, 0, 0});
            for (int g = 0; g < ctx_->n2(); ++g) {
                if (w[g].is_zero()) continue;
                env_split_[env_pos].i = g / ctx_->n();
                env_split_[env_pos].j = g % ctx_->n();
                enumerate(site_idx + 1, sites, weight * w[g], term, arity, out, first);
            }
            env_split_.pop_back();
            return;
        }

        // all sites bound: evaluate the legs
        if (term->kind == Expr::Kind::Tensor) {
            std::vector<Value> legs;
            legs.reserve(term->legs.size());
            for (const auto& l : term->legs) {
                legs.push_back(eval_expr(l));
                if (legs.back().space != Space::H) throw ArityMismatch("tensor leg in the base algebra");
            }
            const int n = ctx_->n();
            if (arity == 2) {
                for (int i = 0; i < n; ++i) {
                    if (legs[0].v[i].is_zero()) continue;
                    Rational wi = weight * legs[0].v[i];
                    for (int j = 0; j < n; ++j)
                        if (!legs[1].v[j].is_zero()) out.v[ctx_->idx2(i, j)] += wi * legs[1].v[j];
                }
            } else {
                for (int i = 0; i < n; ++i) {
                    if (legs[0].v[i].is_zero()) continue;
                    for (int j = 0; j < n; ++j) {
                        if (legs[1].v[j].is_zero()) continue;
                        Rational wij = weight * legs[0].v[i] * legs[1].v[j];
                        for (int k = 0; k < n; ++k)
                            if (!legs[2].v[k].is_zero()) out.v[ctx_->idx3(i, j, k)] += wij * legs[2].v[k];
                    }
                }
            }
        } else {
            Value v = eval_expr(term);
            if (first || out.v.empty()) {
                out.space = v.space;
                out.v.assign(v.v.size(), Rational());
                first = false;
            }
            if (out.v.size() != v.v.size()) throw ArityMismatch("sum mixes spaces");
            axpy(out.v, weight, v.v);
        }
        first = false;
    }

    Value eval_expr(const ExprPtr& e) {
        switch (e->kind) {
            case Expr::Kind::Sum: {
                Value acc;
                bool got = false;
                for (const auto& [c, t] : e->terms) {
                    Value v = eval_expr(t);
                    if (!got) {
                        acc.space = v.space;
                        acc.v.assign(v.v.size(), Rational());
                        got = true;
                    } else if (acc.space != v.space) {
                        throw ArityMismatch("sum mixes spaces");
                    }
                    axpy(acc.v, c, v.v);
                }
                return acc;
            }
            case Expr::Kind::Tensor:
                throw ArityMismatch("tensor inside a product");
            case Expr::Kind::Prod: {
                Value acc = eval_expr(e->factors[0]);
                for (size_t i = 1; i < e->factors.size(); ++i) {
                    Value f = eval_expr(e->factors[i]);
                    if (acc.space != f.space) throw ArityMismatch("product mixes spaces");
                    acc.v = acc.space == Space::H ? ctx_->H.mul(acc.v, f.v) : ctx_->R.mul(acc.v, f.v);
                }
                if (!e->coef.is_one()) acc.v = scale(std::move(acc.v), e->coef);
                return acc;
            }
            case Expr::Kind::Gen: {
                const std::string& g = e->name;
                if (g == "1") return {Space::H, ctx_->unitH};
                if (g == "h") return {Space::H, env_free_.at("h")};
                if (g == "b" || g == "r") return {Space::R, env_free_.at(g)};
                if (g == "V") return {Space::H, b_.T->V_F};
                if (g == "Vinv") return {Space::H, *b_.T->V_F_inv};
                FamilyKey key;
                int leg;
                if (gen_family(g, key, leg)) {
                    auto it = env_fam_.find(key);
                    if (it == env_fam_.end()) throw UnboundGenerator(g);
                    return {Space::H, unit_vec(ctx_->n(), leg == 1 ? it->second.first : it->second.second)};
                }
                throw UnboundGenerator(g);
            }
            case Expr::Kind::Map: {
                Value a = eval_expr(e->arg);
                const std::string& m = e->name;
                if (m == "eps") {
                    if (a.space != Space::H) throw ArityMismatch("eps of a base value");
                    return {Space::R, b_.B->eps_of(a.v)};
                }
                if (m == "alpha" || m == "beta" || m == "alphaF" || m == "betaF") {
                    if (a.space != Space::R) throw ArityMismatch(m + " of a total-algebra value");
                    const Matrix& mat = m == "alpha"    ? ctx_->alpha
                                        : m == "beta"   ? ctx_->beta
                                        : m == "alphaF" ? b_.T->alpha_F
                                                        : b_.T->beta_F;
                    return {Space::H, mat.apply(a.v)};
                }
                if (a.space != Space::H) throw ArityMismatch(m + " of a base value");
                const Matrix& mat = m == "S"      ? b_.S->S
                                    : m == "Sinv" ? b_.S->S_inv
                                    : m == "SF"   ? b_.T->S_F->S
                                                  : b_.T->S_F->S_inv;
                return {Space::H, mat.apply(a.v)};
            }
            case Expr::Kind::Split: {
                for (auto it = env_split_.rbegin(); it != env_split_.rend(); ++it)
                    if (it->twisted == e->twisted_split && expr_equal(it->base, e->base))
                        return {Space::H, unit_vec(ctx_->n(), e->leg == 1 ? it->i : it->j)};
                throw UnboundGenerator("split " + print_expr(e));
            }
        }
        throw std::logic_error("unreachable");
    }

    struct BoundSplit {
        ExprPtr base;
        bool twisted;
        int i, j;
    };

    const Binding& b_;
    EvalOptions opts_;
    const TensorContext* ctx_;
    std::map<std::string, Vec> env_free_;
    std::map<FamilyKey, std::pair<int, int>> env_fam_;
    std::vector<BoundSplit> env_split_;
};

}  // namespace dsl

// Evaluates an equality over every assignment of its free variables.
// With validate_cocycle_lifts set, each side is recomputed with the cocycle
// representatives shifted by kernel spanning vectors and must not change.
inline EvalOutcome evaluate(const Identity& id, const Binding& b, const EvalOptions& opts = {}) {
    dsl::Evaluator ev(b, opts);
    EvalOutcome out = ev.evaluate_identity(id);
    if (out.verdict != Verdict::pass || !opts.validate_cocycle_lifts || !b.c) return out;

    dsl::Needs needs;
    dsl::scan(id.lhs, needs);
    dsl::scan(id.rhs, needs);
    if (!needs.cocycle) return out;

    auto run = [&](const Cocycle& c) {
        Binding shifted = b;
        shifted.c = &c;
        dsl::Evaluator ev2(shifted, EvalOptions{});
        return ev2.evaluate_identity(id);
    };
    for (const auto& u : b.B->ctx->I2().rows()) {
        Cocycle c2 = *b.c;
        for (const auto& [col, x] : u) c2.F[col] += x;
        c2.F = b.B->ctx->reduce2(c2.F);  // representative change within the class
        EvalOutcome o = run(c2);
        if (o.verdict != out.verdict)
            throw IllDefined("identity verdict depends on the F representative", to_dense(u, b.B->ctx->n2()));
    }
    if (b.T) {
        for (const auto& u : b.T->twisted.ctx->I2().rows()) {
            Cocycle c2 = *b.c;
            for (const auto& [col, x] : u) c2.Fbar[col] += x;
            EvalOutcome o = run(c2);
            if (o.verdict != out.verdict)
                throw IllDefined("identity verdict depends on the Fbar representative",
                                 to_dense(u, b.B->ctx->n2()));
        }
    }
    return out;
}

struct CorpusEntry {
    std::string name;
    std::string text;
};

struct MalformedCorpus : std::runtime_error {
    explicit MalformedCorpus(const std::string& w) : std::runtime_error("corpus: " + w) {}
};

// corpus file: "[name]" header lines, identity text until the next header,
// '#' comments and blank lines ignored
inline std::vector<CorpusEntry> parse_corpus(const std::string& text) {
    std::vector<CorpusEntry> out;
    size_t pos = 0;
    auto next_line = [&]() {
        size_t e = text.find('\n', pos);
        std::string line = text.substr(pos, e == std::string::npos ? std::string::npos : e - pos);
        pos = e == std::string::npos ? text.size() : e + 1;
        return line;
    };
    while (pos < text.size()) {
        std::string line = next_line();
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        if (line[a] != '[') throw MalformedCorpus("expected [name] header, got: " + line);
        size_t b = line.find(']', a);
        if (b == std::string::npos) throw MalformedCorpus("unterminated [name] header");
        CorpusEntry e;
        e.name = line.substr(a + 1, b - a - 1);
        std::string body;
        while (pos < text.size()) {
            size_t save = pos;
            std::string l = next_line();
            size_t c = l.find_first_not_of(" \t\r");
            if (c != std::string::npos && l[c] == '[') {
                pos = save;
                break;
            }
            if (c == std::string::npos || l[c] == '#') continue;
            body += l + "\n";
        }
        e.text = body;
        out.push_back(std::move(e));
    }
    return out;
}

inline Report run_corpus(const std::vector<CorpusEntry>& corpus, const Binding& b,
                         const EvalOptions& opts = {}) {
    Report rep;
    for (const auto& e : corpus) {
        Identity id = parse_identity(e.text);
        EvalOutcome o = evaluate(id, b, opts);
        rep.entries.push_back({e.name, o.verdict, o.detail});
    }
    return rep;
}

}  // namespace algd
