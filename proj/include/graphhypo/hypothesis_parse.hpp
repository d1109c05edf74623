#pragma once

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "graphhypo/hypothesis.hpp"

namespace graphhypo {

// Concrete hypothesis syntax:
//   AGG '(' EXPR '|' PATTERN ')' OP NUMBER
//   PATTERN := Clause ( '-'Type'->' | '<-'Type'-' Clause )*
//   Clause  := Type '[' mod (';' mod)* ']'        (empty bracket matches the type)
//   EXPR    := arithmetic over stepK.attr / edgeK.attr / numbers / mean(a, b)
// `Type.attr` is accepted as sugar for step1.attr in single-step hypotheses.

namespace dsl {

enum class Tok {
    Ident, Number, Quoted,
    LParen, RParen, LBracket, RBracket,
    Pipe, Semi, Comma, Dot,
    Plus, Minus, Star, Slash,
    Lt, Gt, Eq, Le, Ge, Ne,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    double number = 0.0;
    std::size_t pos = 0;
};

inline std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto push = [&](Tok k, std::size_t pos, std::string text = {}) {
        out.push_back(Token{k, std::move(text), 0.0, pos});
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
                ++i;
            push(Tok::Ident, start, std::string(src.substr(start, i - start)));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) ||
                                      src[i] == '.' || src[i] == 'e' || src[i] == 'E' ||
                                      ((src[i] == '+' || src[i] == '-') &&
                                       (src[i - 1] == 'e' || src[i - 1] == 'E'))))
                ++i;
            Token t{Tok::Number, std::string(src.substr(start, i - start)), 0.0, start};
            auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(),
                                           t.number);
            if (ec != std::errc() || p != t.text.data() + t.text.size())
                throw ParseError("bad number '" + t.text + "'", start);
            out.push_back(std::move(t));
            continue;
        }
        if (c == '\'') {
            ++i;
            std::string s;
            while (i < src.size() && src[i] != '\'') s += src[i++];
            if (i >= src.size()) throw ParseError("unterminated string literal", start);
            ++i;
            out.push_back(Token{Tok::Quoted, std::move(s), 0.0, start});
            continue;
        }
        ++i;
        switch (c) {
            case '(': push(Tok::LParen, start); break;
            case ')': push(Tok::RParen, start); break;
            case '[': push(Tok::LBracket, start); break;
            case ']': push(Tok::RBracket, start); break;
            case '|': push(Tok::Pipe, start); break;
            case ';': push(Tok::Semi, start); break;
            case ',': push(Tok::Comma, start); break;
            case '.': push(Tok::Dot, start); break;
            case '+': push(Tok::Plus, start); break;
            case '-': push(Tok::Minus, start); break;
            case '*': push(Tok::Star, start); break;
            case '/': push(Tok::Slash, start); break;
            case '=': push(Tok::Eq, start); break;
            case '>':
                if (i < src.size() && src[i] == '=') { ++i; push(Tok::Ge, start); }
                else push(Tok::Gt, start);
                break;
            case '<':
                if (i < src.size() && src[i] == '=') { ++i; push(Tok::Le, start); }
                else if (i < src.size() && src[i] == '>') { ++i; push(Tok::Ne, start); }
                else push(Tok::Lt, start);
                break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }
    push(Tok::End, src.size());
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    Hypothesis parse() {
        Hypothesis h;
        const Token& agg = expect(Tok::Ident, "aggregate (avg/min/max)");
        if (agg.text == "avg") h.agg = Agg::Avg;
        else if (agg.text == "min") h.agg = Agg::Min;
        else if (agg.text == "max") h.agg = Agg::Max;
        else throw ParseError("unknown aggregate '" + agg.text + "'", agg.pos);
        expect(Tok::LParen, "'('");

        // The pattern names step types that target references may use as
        // sugar, so locate and parse the pattern section first.
        std::size_t pipe = pos_;
        int depth = 0;
        while (toks_[pipe].kind != Tok::End &&
               !(toks_[pipe].kind == Tok::Pipe && depth == 0)) {
            if (toks_[pipe].kind == Tok::LParen) ++depth;
            if (toks_[pipe].kind == Tok::RParen) --depth;
            ++pipe;
        }
        if (toks_[pipe].kind != Tok::Pipe)
            throw ParseError("expected '|' between target and pattern", toks_[pipe].pos);

        std::size_t target_begin = pos_;
        pos_ = pipe + 1;
        h.pattern = parse_pattern();
        expect(Tok::RParen, "')'");
        std::size_t after_pattern = pos_;

        pos_ = target_begin;
        h.target = parse_expr(h.pattern);
        if (pos_ != pipe)
            throw ParseError("unexpected token in target expression", toks_[pos_].pos);

        pos_ = after_pattern;
        h.op = parse_pred_op();
        h.constant = parse_signed_number();
        expect(Tok::End, "end of input");
        return h;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind == k) { ++pos_; return true; }
        return false;
    }
    const Token& expect(Tok k, const std::string& what) {
        if (peek().kind != k)
            throw ParseError("expected " + what, peek().pos);
        return advance();
    }

    PathPattern parse_pattern() {
        PathPattern p;
        if (peek().kind == Tok::RParen)
            throw ParseError("empty pattern", peek().pos);
        p.steps.push_back(parse_clause());
        while (peek().kind == Tok::Minus || peek().kind == Tok::Lt) {
            EdgeClause link;
            if (accept(Tok::Minus)) {  // -Type->
                link.forward = true;
                link.type_name = expect(Tok::Ident, "edge type").text;
                expect(Tok::Minus, "'-'");
                expect(Tok::Gt, "'>'");
            } else {  // <-Type-
                expect(Tok::Lt, "'<'");
                expect(Tok::Minus, "'-'");
                link.forward = false;
                link.type_name = expect(Tok::Ident, "edge type").text;
                expect(Tok::Minus, "'-'");
            }
            p.links.push_back(std::move(link));
            p.steps.push_back(parse_clause());
        }
        return p;
    }

    NodeClause parse_clause() {
        NodeClause c;
        c.type_name = expect(Tok::Ident, "node type").text;
        expect(Tok::LBracket, "'['");
        if (!accept(Tok::RBracket)) {
            c.modifiers.push_back(parse_modifier());
            while (accept(Tok::Semi)) c.modifiers.push_back(parse_modifier());
            expect(Tok::RBracket, "']'");
        }
        return c;
    }

    Modifier parse_modifier() {
        Modifier m;
        m.attr = expect(Tok::Ident, "attribute name").text;
        switch (peek().kind) {
            case Tok::Eq: m.cmp = Cmp::Eq; break;
            case Tok::Ne: m.cmp = Cmp::Ne; break;
            case Tok::Gt: m.cmp = Cmp::Gt; break;
            case Tok::Lt: m.cmp = Cmp::Lt; break;
            case Tok::Ge: m.cmp = Cmp::Ge; break;
            case Tok::Le: m.cmp = Cmp::Le; break;
            default:
                throw ParseError("expected comparator after '" + m.attr + "'", peek().pos);
        }
        advance();
        if (peek().kind == Tok::Ident || peek().kind == Tok::Quoted) {
            m.value = advance().text;
        } else {
            m.value = parse_signed_number();
        }
        return m;
    }

    double parse_signed_number() {
        bool neg = accept(Tok::Minus);
        const Token& t = expect(Tok::Number, "number");
        return neg ? -t.number : t.number;
    }

    PredOp parse_pred_op() {
        switch (peek().kind) {
            case Tok::Eq: advance(); return PredOp::Eq;
            case Tok::Ne: advance(); return PredOp::Ne;
            case Tok::Gt: advance(); return PredOp::Gt;
            case Tok::Lt: advance(); return PredOp::Lt;
            default:
                throw ParseError("expected predicate operator (=, <>, >, <)", peek().pos);
        }
    }

    Expr parse_expr(const PathPattern& p) {
        Expr e = parse_term(p);
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            Expr out;
            out.kind = advance().kind == Tok::Plus ? Expr::Kind::Add : Expr::Kind::Sub;
            out.children.push_back(std::move(e));
            out.children.push_back(parse_term(p));
            e = std::move(out);
        }
        return e;
    }

    Expr parse_term(const PathPattern& p) {
        Expr e = parse_factor(p);
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            Expr out;
            out.kind = advance().kind == Tok::Star ? Expr::Kind::Mul : Expr::Kind::Div;
            out.children.push_back(std::move(e));
            out.children.push_back(parse_factor(p));
            e = std::move(out);
        }
        return e;
    }

    Expr parse_factor(const PathPattern& p) {
        if (accept(Tok::Minus)) {
            // Unary minus folds constants, otherwise 0 - x.
            Expr inner = parse_factor(p);
            if (inner.kind == Expr::Kind::Const) {
                inner.constant = -inner.constant;
                return inner;
            }
            Expr out;
            out.kind = Expr::Kind::Sub;
            Expr zero;
            zero.kind = Expr::Kind::Const;
            out.children.push_back(std::move(zero));
            out.children.push_back(std::move(inner));
            return out;
        }
        if (peek().kind == Tok::Number) {
            Expr e;
            e.kind = Expr::Kind::Const;
            e.constant = advance().number;
            return e;
        }
        if (accept(Tok::LParen)) {
            Expr e = parse_expr(p);
            expect(Tok::RParen, "')'");
            return e;
        }
        const Token& id = expect(Tok::Ident, "attribute reference, number, or mean(...)");
        if (id.text == "mean" && peek().kind == Tok::LParen) {
            advance();
            Expr e;
            e.kind = Expr::Kind::Mean;
            e.children.push_back(parse_expr(p));
            expect(Tok::Comma, "','");
            e.children.push_back(parse_expr(p));
            expect(Tok::RParen, "')'");
            return e;
        }
        expect(Tok::Dot, "'.'");
        const Token& attr = expect(Tok::Ident, "attribute name");
        return make_ref(id, attr.text, p);
    }

    Expr make_ref(const Token& qualifier, const std::string& attr, const PathPattern& p) {
        Expr e;
        e.attr = attr;
        std::size_t index = 0;
        if (ref_index(qualifier.text, "step", index)) {
            if (index == 0 || index > p.steps.size())
                throw ParseError("step reference out of range: " + qualifier.text,
                                 qualifier.pos);
            e.kind = Expr::Kind::NodeAttr;
            e.ref_index = index - 1;
            return e;
        }
        if (ref_index(qualifier.text, "edge", index)) {
            if (index == 0 || index > p.links.size())
                throw ParseError("edge reference out of range: " + qualifier.text,
                                 qualifier.pos);
            e.kind = Expr::Kind::EdgeAttr;
            e.ref_index = index - 1;
            return e;
        }
        // Type-name sugar, valid only for single-step patterns.
        if (p.steps.size() == 1 && p.steps[0].type_name == qualifier.text) {
            e.kind = Expr::Kind::NodeAttr;
            e.ref_index = 0;
            return e;
        }
        throw ParseError("unknown reference '" + qualifier.text +
                             "' (use stepK.attr or edgeK.attr)",
                         qualifier.pos);
    }

    static bool ref_index(const std::string& name, std::string_view prefix,
                          std::size_t& out) {
        if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0)
            return false;
        std::size_t value = 0;
        for (std::size_t i = prefix.size(); i < name.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
            value = value * 10 + std::size_t(name[i] - '0');
        }
        out = value;
        return true;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

inline std::string format_number(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

inline bool plain_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

inline void print_expr(const Expr& e, std::string& out, int parent_level) {
    auto binary = [&](const char* op, int level) {
        bool parens = level < parent_level;
        if (parens) out += '(';
        print_expr(e.children[0], out, level);
        out += ' ';
        out += op;
        out += ' ';
        // Right operand of -, / needs the next tighter level to re-parse
        // left-associatively.
        print_expr(e.children[1], out, level + 1);
        if (parens) out += ')';
    };
    switch (e.kind) {
        case Expr::Kind::Const: out += format_number(e.constant); break;
        case Expr::Kind::NodeAttr:
            out += "step" + std::to_string(e.ref_index + 1) + "." + e.attr;
            break;
        case Expr::Kind::EdgeAttr:
            out += "edge" + std::to_string(e.ref_index + 1) + "." + e.attr;
            break;
        case Expr::Kind::Add: binary("+", 1); break;
        case Expr::Kind::Sub: binary("-", 1); break;
        case Expr::Kind::Mul: binary("*", 2); break;
        case Expr::Kind::Div: binary("/", 2); break;
        case Expr::Kind::Mean:
            out += "mean(";
            print_expr(e.children[0], out, 0);
            out += ", ";
            print_expr(e.children[1], out, 0);
            out += ')';
            break;
    }
}

}  // namespace dsl

// Syntax-only parse; names stay unresolved until bind_hypothesis.
inline Hypothesis parse_hypothesis(std::string_view text) {
    return dsl::Parser(text).parse();
}

// Parse and bind against a schema (the operation the CLI uses).
inline Hypothesis parse_hypothesis(std::string_view text, const GraphSchema& schema,
                                   const AttributedGraph* g = nullptr) {
    Hypothesis h = dsl::Parser(text).parse();
    bind_hypothesis(h, schema, g);
    return h;
}

// Canonical form; parse(print(h)) == h and print is idempotent.
inline std::string print_hypothesis(const Hypothesis& h) {
    std::string out;
    out += agg_text(h.agg);
    out += '(';
    dsl::print_expr(h.target, out, 0);
    out += " | ";
    for (std::size_t i = 0; i < h.pattern.steps.size(); ++i) {
        if (i > 0) {
            const EdgeClause& link = h.pattern.links[i - 1];
            out += link.forward ? " -" + link.type_name + "-> "
                                : " <-" + link.type_name + "- ";
        }
        const NodeClause& c = h.pattern.steps[i];
        out += c.type_name;
        out += '[';
        for (std::size_t m = 0; m < c.modifiers.size(); ++m) {
            if (m > 0) out += ';';
            const Modifier& mod = c.modifiers[m];
            out += mod.attr;
            out += cmp_text(mod.cmp);
            if (std::holds_alternative<double>(mod.value)) {
                out += dsl::format_number(std::get<double>(mod.value));
            } else {
                const std::string& s = std::get<std::string>(mod.value);
                if (dsl::plain_identifier(s)) out += s;
                else { out += '\''; out += s; out += '\''; }
            }
        }
        out += ']';
    }
    out += ") ";
    out += pred_text(h.op);
    out += ' ';
    out += dsl::format_number(h.constant);
    return out;
}

}  // namespace graphhypo
