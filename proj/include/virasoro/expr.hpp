#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "virasoro/pbw.hpp"

namespace virasoro {

struct ParseLimits {
    std::int64_t max_index = 1000000;   // |i| in e(i)
    std::uint32_t max_exponent = 64;
    std::size_t max_terms = 1u << 20;   // expansion guard
};

class SourceError : public std::runtime_error {
public:
    SourceError(std::string_view text, std::size_t offset, std::string expected,
                std::string found)
        : std::runtime_error(compose(text, offset, expected, found)),
          offset_(offset),
          expected_(std::move(expected)),
          found_(std::move(found)) {
        line_ = 1;
        column_ = 1;
        for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line_;
                column_ = 1;
            } else {
                ++column_;
            }
        }
    }

    std::size_t offset() const { return offset_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& expected() const { return expected_; }
    const std::string& found() const { return found_; }

private:
    static std::string compose(std::string_view text, std::size_t offset,
                               const std::string& expected, const std::string& found) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        return "parse error at line " + std::to_string(line) + ", column " +
               std::to_string(col) + " (offset " + std::to_string(offset) + "): expected " +
               expected + ", found " + found;
    }

    std::size_t offset_, line_ = 1, column_ = 1;
    std::string expected_, found_;
};

struct ExprNode {
    enum class Kind {
        sum,         // children: 2, left + right
        difference,  // children: 2, left - right
        product,     // children: 2, left * right (order is semantic)
        power,       // children: 1 base; exponent set
        generator,   // index set
        central,
        literal,     // value set
        negation,    // children: 1
        group        // children: 1, written parentheses
    };

    Kind kind;
    std::vector<ExprNode> children;
    std::int64_t index = 0;
    std::uint32_t exponent = 0;
    Rational value;
    std::size_t offset = 0;  // where this node began in the source
};

using ExprTree = ExprNode;

namespace detail {

struct Token {
    enum class Kind { lparen, rparen, plus, minus, star, caret, slash, e, c, integer, end };
    Kind kind;
    std::size_t offset;
    std::string digits;  // integer only

    std::string describe() const {
        switch (kind) {
            case Kind::lparen: return "'('";
            case Kind::rparen: return "')'";
            case Kind::plus: return "'+'";
            case Kind::minus: return "'-'";
            case Kind::star: return "'*'";
            case Kind::caret: return "'^'";
            case Kind::slash: return "'/'";
            case Kind::e: return "'e'";
            case Kind::c: return "'c'";
            case Kind::integer: return "integer '" + digits + "'";
            case Kind::end: return "end of input";
        }
        return "?";
    }
};

inline std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char ch = text[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        switch (ch) {
            case '(': out.push_back({Token::Kind::lparen, i, {}}); ++i; continue;
            case ')': out.push_back({Token::Kind::rparen, i, {}}); ++i; continue;
            case '+': out.push_back({Token::Kind::plus, i, {}}); ++i; continue;
            case '-': out.push_back({Token::Kind::minus, i, {}}); ++i; continue;
            case '*': out.push_back({Token::Kind::star, i, {}}); ++i; continue;
            case '^': out.push_back({Token::Kind::caret, i, {}}); ++i; continue;
            case '/': out.push_back({Token::Kind::slash, i, {}}); ++i; continue;
            case 'e': out.push_back({Token::Kind::e, i, {}}); ++i; continue;
            case 'c': out.push_back({Token::Kind::c, i, {}}); ++i; continue;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            out.push_back({Token::Kind::integer, start, std::string(text.substr(start, i - start))});
            continue;
        }
        throw SourceError(text, i, "a token from the expression grammar",
                          "'" + std::string(1, ch) + "'");
    }
    out.push_back({Token::Kind::end, text.size(), {}});
    return out;
}

class Parser {
public:
    Parser(std::string_view text, const ParseLimits& limits)
        : text_(text), limits_(limits), tokens_(lex(text)) {}

    ExprNode parse() {
        ExprNode root = parse_expr();
        expect_end();
        return root;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }
    bool at(Token::Kind k) const { return peek().kind == k; }

    [[noreturn]] void fail(const std::string& expected) const {
        throw SourceError(text_, peek().offset, expected, peek().describe());
    }

    void expect(Token::Kind k, const std::string& expected) {
        if (!at(k)) fail(expected);
        ++pos_;
    }

    void expect_end() {
        if (!at(Token::Kind::end)) fail("'+', '-', '*', or end of input");
    }

    ExprNode parse_expr() {
        ExprNode left = parse_term();
        while (at(Token::Kind::plus) || at(Token::Kind::minus)) {
            bool plus = at(Token::Kind::plus);
            std::size_t off = advance().offset;
            ExprNode right = parse_term();
            ExprNode parent;
            parent.kind = plus ? ExprNode::Kind::sum : ExprNode::Kind::difference;
            parent.offset = off;
            parent.children.push_back(std::move(left));
            parent.children.push_back(std::move(right));
            left = std::move(parent);
        }
        return left;
    }

    ExprNode parse_term() {
        ExprNode left = parse_factor();
        while (at(Token::Kind::star)) {
            std::size_t off = advance().offset;
            ExprNode right = parse_factor();
            ExprNode parent;
            parent.kind = ExprNode::Kind::product;
            parent.offset = off;
            parent.children.push_back(std::move(left));
            parent.children.push_back(std::move(right));
            left = std::move(parent);
        }
        return left;
    }

    // a power base must be e(i), c, or a parenthesized single atom
    static bool power_base_ok(const ExprNode& n) {
        switch (n.kind) {
            case ExprNode::Kind::generator:
            case ExprNode::Kind::central:
                return true;
            case ExprNode::Kind::group: {
                const ExprNode& inner = n.children.front();
                return inner.kind == ExprNode::Kind::generator ||
                       inner.kind == ExprNode::Kind::central ||
                       inner.kind == ExprNode::Kind::literal;
            }
            default:
                return false;
        }
    }

    ExprNode parse_factor() {
        // unary minus binds looser than '^': -e(2)^2 is -(e(2)^2)
        if (at(Token::Kind::minus)) {
            std::size_t off = advance().offset;
            ExprNode node;
            node.kind = ExprNode::Kind::negation;
            node.offset = off;
            node.children.push_back(parse_factor());
            return node;
        }
        ExprNode base = parse_atom();
        if (at(Token::Kind::caret)) {
            if (!power_base_ok(base))
                throw SourceError(text_, peek().offset,
                                  "a power base of e(i), c, or a parenthesized atom",
                                  peek().describe());
            std::size_t off = advance().offset;
            if (!at(Token::Kind::integer)) fail("a natural-number exponent");
            std::uint32_t exp = parse_bounded_nat(peek(), limits_.max_exponent, "exponent");
            advance();
            ExprNode node;
            node.kind = ExprNode::Kind::power;
            node.offset = off;
            node.exponent = exp;
            node.children.push_back(std::move(base));
            return node;
        }
        return base;
    }

    ExprNode parse_atom() {
        if (at(Token::Kind::e)) {
            std::size_t off = advance().offset;
            expect(Token::Kind::lparen, "'(' after 'e'");
            bool neg = false;
            if (at(Token::Kind::minus)) {
                neg = true;
                advance();
            }
            if (!at(Token::Kind::integer)) fail("a generator index");
            std::int64_t idx = parse_bounded_index(peek(), neg);
            advance();
            expect(Token::Kind::rparen, "')'");
            ExprNode node;
            node.kind = ExprNode::Kind::generator;
            node.offset = off;
            node.index = idx;
            return node;
        }
        if (at(Token::Kind::c)) {
            std::size_t off = advance().offset;
            ExprNode node;
            node.kind = ExprNode::Kind::central;
            node.offset = off;
            return node;
        }
        if (at(Token::Kind::integer)) {
            std::size_t off = peek().offset;
            Int num(advance().digits);
            Int den(1);
            if (at(Token::Kind::slash)) {
                advance();
                if (!at(Token::Kind::integer)) fail("a denominator");
                den = Int(peek().digits);
                if (den == 0)
                    throw SourceError(text_, peek().offset, "a nonzero denominator",
                                      peek().describe());
                advance();
            }
            ExprNode node;
            node.kind = ExprNode::Kind::literal;
            node.offset = off;
            node.value = make_rational(num, den);
            return node;
        }
        if (at(Token::Kind::lparen)) {
            std::size_t off = advance().offset;
            ExprNode inner = parse_expr();
            expect(Token::Kind::rparen, "')'");
            ExprNode node;
            node.kind = ExprNode::Kind::group;
            node.offset = off;
            node.children.push_back(std::move(inner));
            return node;
        }
        fail("'e', 'c', a rational, '(' or '-'");
    }

    std::uint32_t parse_bounded_nat(const Token& tok, std::uint32_t bound, const char* what) {
        Int v(tok.digits);
        if (v > bound)
            throw SourceError(text_, tok.offset,
                              std::string(what) + " no larger than " + std::to_string(bound),
                              tok.describe());
        return v.convert_to<std::uint32_t>();
    }

    std::int64_t parse_bounded_index(const Token& tok, bool negate) {
        Int v(tok.digits);
        if (v > limits_.max_index)
            throw SourceError(text_, tok.offset,
                              "a generator index with magnitude at most " +
                                  std::to_string(limits_.max_index),
                              tok.describe());
        std::int64_t out = v.convert_to<std::int64_t>();
        return negate ? -out : out;
    }

    std::string_view text_;
    ParseLimits limits_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline ExprTree parse(std::string_view text, const ParseLimits& limits = {}) {
    return detail::Parser(text, limits).parse();
}

namespace detail {

// flat multilinear expansion of a tree: each summand is a raw word
struct FlatTerm {
    Rational coeff;
    std::vector<std::int64_t> letters;
    std::uint32_t central_exp = 0;
};

inline void check_expansion(std::size_t n, const ParseLimits& limits) {
    if (n > limits.max_terms)
        throw DomainError("expression expands to more than " + std::to_string(limits.max_terms) +
                          " raw terms");
}

inline std::vector<FlatTerm> flatten(const ExprNode& n, const ParseLimits& limits) {
    switch (n.kind) {
        case ExprNode::Kind::generator:
            return {{Rational(1), {n.index}, 0}};
        case ExprNode::Kind::central:
            return {{Rational(1), {}, 1}};
        case ExprNode::Kind::literal:
            return {{n.value, {}, 0}};
        case ExprNode::Kind::group:
            return flatten(n.children.front(), limits);
        case ExprNode::Kind::negation: {
            auto out = flatten(n.children.front(), limits);
            for (auto& t : out) t.coeff = -t.coeff;
            return out;
        }
        case ExprNode::Kind::sum:
        case ExprNode::Kind::difference: {
            auto out = flatten(n.children[0], limits);
            auto rhs = flatten(n.children[1], limits);
            bool minus = n.kind == ExprNode::Kind::difference;
            for (auto& t : rhs) {
                if (minus) t.coeff = -t.coeff;
                out.push_back(std::move(t));
            }
            check_expansion(out.size(), limits);
            return out;
        }
        case ExprNode::Kind::product: {
            auto lhs = flatten(n.children[0], limits);
            auto rhs = flatten(n.children[1], limits);
            check_expansion(lhs.size() * rhs.size(), limits);
            std::vector<FlatTerm> out;
            out.reserve(lhs.size() * rhs.size());
            for (const auto& a : lhs)
                for (const auto& b : rhs) {
                    FlatTerm t;
                    t.coeff = a.coeff * b.coeff;
                    t.letters = a.letters;
                    t.letters.insert(t.letters.end(), b.letters.begin(), b.letters.end());
                    t.central_exp = a.central_exp + b.central_exp;
                    out.push_back(std::move(t));
                }
            return out;
        }
        case ExprNode::Kind::power: {
            auto base = flatten(n.children.front(), limits);
            std::vector<FlatTerm> out{{Rational(1), {}, 0}};
            for (std::uint32_t k = 0; k < n.exponent; ++k) {
                check_expansion(out.size() * base.size(), limits);
                std::vector<FlatTerm> next;
                next.reserve(out.size() * base.size());
                for (const auto& a : out)
                    for (const auto& b : base) {
                        FlatTerm t;
                        t.coeff = a.coeff * b.coeff;
                        t.letters = a.letters;
                        t.letters.insert(t.letters.end(), b.letters.begin(), b.letters.end());
                        t.central_exp = a.central_exp + b.central_exp;
                        next.push_back(std::move(t));
                    }
                out = std::move(next);
            }
            return out;
        }
    }
    throw std::logic_error("unhandled node kind");
}

}  // namespace detail

inline UEAElement to_element(const ExprTree& tree, const OrderSpec& order,
                             const StructureConstants& sc = {}, const ParseLimits& limits = {}) {
    std::vector<RawWord> words;
    for (auto& t : detail::flatten(tree, limits))
        words.push_back(RawWord{std::move(t.letters), t.central_exp, std::move(t.coeff)});
    return normal_form(words, order, sc);
}

inline UEAElement parse_element(std::string_view text, const OrderSpec& order,
                                const StructureConstants& sc = {},
                                const ParseLimits& limits = {}) {
    return to_element(parse(text, limits), order, sc, limits);
}

// ------------------------------------------------------------------- JSON --

class JsonError : public std::runtime_error {
public:
    JsonError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

namespace detail {

inline std::string json_rational(const Rational& r) {
    return Int(numerator(r)).str() + "/" + Int(denominator(r)).str();
}

}  // namespace detail

inline std::string to_json(const UEAElement& u) {
    nlohmann::json root;
    root["schema"] = 1;
    root["order"] = u.order().name;
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, co] : display_terms(u)) {
        nlohmann::json term;
        term["c"] = m.central_exp;
        term["coeff"] = detail::json_rational(co);
        nlohmann::json word = nlohmann::json::array();
        for (const auto& [idx, exp] : m.word) word.push_back({idx, exp});
        term["word"] = std::move(word);
        terms.push_back(std::move(term));
    }
    root["terms"] = std::move(terms);
    return root.dump();
}

inline UEAElement from_json(const std::string& text, const StructureConstants& sc = {}) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw JsonError("/", e.what());
    }
    if (!root.is_object()) throw JsonError("/", "expected an object");
    if (!root.contains("schema") || !root["schema"].is_number_integer() ||
        root["schema"].get<int>() != 1)
        throw JsonError("/schema", "expected the integer 1");
    if (!root.contains("order") || !root["order"].is_string())
        throw JsonError("/order", "expected an order name string");
    std::optional<OrderSpec> order = OrderSpec::from_name(root["order"].get<std::string>());
    if (!order)
        throw JsonError("/order", "unknown order name '" + root["order"].get<std::string>() + "'");
    if (!root.contains("terms") || !root["terms"].is_array())
        throw JsonError("/terms", "expected an array");

    std::vector<RawWord> words;
    std::size_t i = 0;
    for (const auto& term : root["terms"]) {
        const std::string path = "/terms/" + std::to_string(i++);
        if (!term.is_object()) throw JsonError(path, "expected an object");
        if (!term.contains("coeff") || !term["coeff"].is_string())
            throw JsonError(path + "/coeff", "expected a rational string");
        RawWord w;
        try {
            w.coeff = parse_rational(term["coeff"].get<std::string>());
        } catch (const std::exception& e) {
            throw JsonError(path + "/coeff", e.what());
        }
        if (term.contains("c")) {
            if (!term["c"].is_number_unsigned())
                throw JsonError(path + "/c", "expected a nonnegative integer");
            w.central_exp = term["c"].get<std::uint32_t>();
        }
        if (!term.contains("word") || !term["word"].is_array())
            throw JsonError(path + "/word", "expected an array of [index, exponent] pairs");
        std::size_t j = 0;
        for (const auto& pair : term["word"]) {
            const std::string ppath = path + "/word/" + std::to_string(j++);
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
                !pair[1].is_number_unsigned())
                throw JsonError(ppath, "expected an [index, exponent] pair");
            std::int64_t idx = pair[0].get<std::int64_t>();
            std::uint32_t exp = pair[1].get<std::uint32_t>();
            for (std::uint32_t k = 0; k < exp; ++k) w.letters.push_back(idx);
        }
        words.push_back(std::move(w));
    }
    return normal_form(words, *order, sc);
}

}  // namespace virasoro
