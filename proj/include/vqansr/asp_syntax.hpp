#pragma once

#include <cctype>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace vqansr {

// Validates the ASP-Core-2 fragment the emitter produces: facts, normal
// rules, constraints, cardinality-1 choice rules, weak constraints with
// cost tuples, #count assignment aggregates, comparisons, and #show.
// Also applies the usual safety condition: every variable of a head,
// negated literal, comparison, or cost tuple must be bound by a positive
// body atom (aggregate assignments bind their target).

class asp_syntax_error : public std::runtime_error {
  public:
    asp_syntax_error(const std::string& msg, int line)
        : std::runtime_error("asp syntax, line " + std::to_string(line) + ": " + msg) {}
};

namespace asp_detail {

struct Token {
    enum class Kind { ident, var, number, punct, end };
    Kind kind = Kind::end;
    std::string text;
    int line = 1;
};

inline std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1;
    std::size_t i = 0;
    const auto peek = [&](std::size_t k) { return i + k < src.size() ? src[i + k] : '\0'; };
    while (i < src.size()) {
        const char c = src[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '%') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        if (std::islower(static_cast<unsigned char>(c)) || c == '#') {
            std::size_t j = i + 1;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            out.push_back({Token::Kind::ident, src.substr(i, j - i), line});
            i = j;
            continue;
        }
        if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i + 1;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            out.push_back({Token::Kind::var, src.substr(i, j - i), line});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i + 1;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back({Token::Kind::number, src.substr(i, j - i), line});
            i = j;
            continue;
        }
        if ((c == ':' && (peek(1) == '-' || peek(1) == '~')) ||
            (c == '!' && peek(1) == '=') || (c == '<' && peek(1) == '=') ||
            (c == '>' && peek(1) == '=') || (c == '=' && peek(1) == '=')) {
            out.push_back({Token::Kind::punct, src.substr(i, 2), line});
            i += 2;
            continue;
        }
        if (std::string("(){};,.[]@<>=-:/").find(c) != std::string::npos) {
            out.push_back({Token::Kind::punct, std::string(1, c), line});
            ++i;
            continue;
        }
        throw asp_syntax_error(std::string("unexpected character '") + c + "'", line);
    }
    out.push_back({Token::Kind::end, "", line});
    return out;
}

class Parser {
  public:
    explicit Parser(const std::string& src) : toks_(lex(src)) {}

    void parse_program() {
        while (!at_end()) parse_statement();
    }

  private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    // Per-statement variable bookkeeping for the safety check.
    std::set<std::string> bound_;
    std::set<std::string> need_;

    const Token& cur() const { return toks_[pos_]; }
    bool at_end() const { return cur().kind == Token::Kind::end; }
    [[noreturn]] void fail(const std::string& msg) const { throw asp_syntax_error(msg, cur().line); }

    bool is_punct(const std::string& p) const {
        return cur().kind == Token::Kind::punct && cur().text == p;
    }
    bool is_ident(const std::string& name) const {
        return cur().kind == Token::Kind::ident && cur().text == name;
    }
    void advance() { ++pos_; }
    void expect_punct(const std::string& p) {
        if (!is_punct(p)) fail("expected '" + p + "', got '" + cur().text + "'");
        advance();
    }

    void note_var(const std::string& v, bool binding) {
        if (v == "_") return;
        if (binding)
            bound_.insert(v);
        else
            need_.insert(v);
    }

    void check_safety() {
        for (const auto& v : need_)
            if (!bound_.count(v)) fail("unsafe variable " + v);
        bound_.clear();
        need_.clear();
    }

    // term := number | - number | ident | var
    void parse_term(bool binding) {
        if (is_punct("-")) {
            advance();
            if (cur().kind != Token::Kind::number) fail("expected number after '-'");
            advance();
            return;
        }
        if (cur().kind == Token::Kind::number || cur().kind == Token::Kind::ident) {
            advance();
            return;
        }
        if (cur().kind == Token::Kind::var) {
            note_var(cur().text, binding);
            advance();
            return;
        }
        fail("expected term, got '" + cur().text + "'");
    }

    // atom := ident [ ( term {, term} ) ]
    void parse_atom(bool binding) {
        if (cur().kind != Token::Kind::ident || cur().text[0] == '#')
            fail("expected predicate name, got '" + cur().text + "'");
        advance();
        if (!is_punct("(")) return;
        advance();
        parse_term(binding);
        while (is_punct(",")) {
            advance();
            parse_term(binding);
        }
        expect_punct(")");
    }

    bool at_comparison_op() const {
        return is_punct("<") || is_punct(">") || is_punct("<=") || is_punct(">=") ||
               is_punct("!=") || is_punct("==") || is_punct("=");
    }

    // literal := not atom | atom | term cmp term | var = #count { var : atom }
    void parse_body_literal() {
        if (is_ident("not")) {
            advance();
            parse_atom(/*binding=*/false);
            return;
        }
        // Lookahead: a lone term followed by a comparison operator.
        const std::size_t save = pos_;
        if (cur().kind == Token::Kind::var || cur().kind == Token::Kind::number ||
            is_punct("-")) {
            // Could be comparison or aggregate assignment.
            if (cur().kind == Token::Kind::var) {
                const std::string lhs = cur().text;
                advance();
                if (is_punct("=") && toks_[pos_ + 1].kind == Token::Kind::ident &&
                    toks_[pos_ + 1].text == "#count") {
                    advance();  // =
                    advance();  // #count
                    parse_aggregate_body();
                    note_var(lhs, /*binding=*/true);
                    return;
                }
                pos_ = save;
            }
            parse_term(/*binding=*/false);
            if (!at_comparison_op()) fail("expected comparison operator");
            advance();
            parse_term(/*binding=*/false);
            return;
        }
        parse_atom(/*binding=*/true);
        if (at_comparison_op()) {
            // ident compared to a term (not produced by the emitter, but legal)
            advance();
            parse_term(/*binding=*/false);
        }
    }

    // { var : atom } after #count
    void parse_aggregate_body() {
        expect_punct("{");
        if (cur().kind != Token::Kind::var) fail("expected aggregate element variable");
        const std::string local = cur().text;
        advance();
        expect_punct(":");
        // The element variable is local to the aggregate; other variables in
        // the atom must be bound by the enclosing body.
        std::set<std::string> saved_need = std::move(need_);
        need_.clear();
        parse_atom(/*binding=*/false);
        std::set<std::string> inner = std::move(need_);
        inner.erase(local);
        need_ = std::move(saved_need);
        need_.insert(inner.begin(), inner.end());
        expect_punct("}");
    }

    void parse_body() {
        parse_body_literal();
        while (is_punct(",")) {
            advance();
            parse_body_literal();
        }
    }

    // [ term @ term , term {, term} ]
    void parse_cost_tuple() {
        expect_punct("[");
        parse_term(/*binding=*/false);
        expect_punct("@");
        parse_term(/*binding=*/false);
        while (is_punct(",")) {
            advance();
            parse_term(/*binding=*/false);
        }
        expect_punct("]");
    }

    void parse_statement() {
        // #show name/int.
        if (is_ident("#show")) {
            advance();
            if (cur().kind != Token::Kind::ident) fail("expected predicate in #show");
            advance();
            expect_punct("/");
            if (cur().kind != Token::Kind::number) fail("expected arity in #show");
            advance();
            expect_punct(".");
            return;
        }
        // weak constraint
        if (is_punct(":~")) {
            advance();
            parse_body();
            expect_punct(".");
            parse_cost_tuple();
            check_safety();
            return;
        }
        // constraint
        if (is_punct(":-")) {
            advance();
            parse_body();
            expect_punct(".");
            check_safety();
            return;
        }
        // choice rule: int { atom {; atom} } int [:- body] .
        if (cur().kind == Token::Kind::number) {
            advance();
            expect_punct("{");
            parse_atom(/*binding=*/false);
            while (is_punct(";")) {
                advance();
                parse_atom(/*binding=*/false);
            }
            expect_punct("}");
            if (cur().kind != Token::Kind::number) fail("expected upper bound of choice rule");
            advance();
            if (is_punct(":-")) {
                advance();
                parse_body();
            }
            expect_punct(".");
            check_safety();
            return;
        }
        // fact or normal rule
        parse_atom(/*binding=*/false);
        if (is_punct(":-")) {
            advance();
            parse_body();
        }
        expect_punct(".");
        check_safety();
    }
};

}  // namespace asp_detail

inline void check_asp_syntax(const std::string& text) {
    asp_detail::Parser parser(text);
    parser.parse_program();
}

inline bool is_valid_asp(const std::string& text, std::string* error = nullptr) {
    try {
        check_asp_syntax(text);
        return true;
    } catch (const asp_syntax_error& e) {
        if (error) *error = e.what();
        return false;
    }
}

}  // namespace vqansr
