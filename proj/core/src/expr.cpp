#include "zx/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

#include "zx/angles.hpp"

namespace zx {

namespace {

struct Token {
    enum class Kind { kNumber, kIdent, kSymbol, kEnd };
    Kind kind = Kind::kEnd;
    std::string text;
    double number = 0.0;
    bool integral = false;
    std::size_t pos = 0;
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        Token t;
        t.pos = i;
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t j = i;
            bool dot = false;
            while (j < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[j])) ||
                    text[j] == '.')) {
                dot = dot || text[j] == '.';
                ++j;
            }
            t.kind = Token::Kind::kNumber;
            t.text = text.substr(i, j - i);
            t.number = std::stod(t.text);
            t.integral = !dot;
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) ||
                    text[j] == '_')) {
                ++j;
            }
            t.kind = Token::Kind::kIdent;
            t.text = text.substr(i, j - i);
            i = j;
        } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '(' ||
                   c == ')' || c == ',') {
            t.kind = Token::Kind::kSymbol;
            t.text = std::string(1, c);
            ++i;
        } else {
            throw std::runtime_error("angle expression '" + text +
                                     "': unexpected character '" +
                                     std::string(1, c) + "' at position " +
                                     std::to_string(i));
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.pos = text.size();
    out.push_back(end);
    return out;
}

struct CallSpec {
    int arity;
    std::function<double(const std::vector<double>&)> fn;
};

const std::map<std::string, CallSpec>& call_table() {
    static const std::map<std::string, CallSpec> table = {
        {"eu_b1", {3, [](const std::vector<double>& a) {
                       return eu_angles({a[0], a[1], a[2]}).beta1;
                   }}},
        {"eu_b2", {3, [](const std::vector<double>& a) {
                       return eu_angles({a[0], a[1], a[2]}).beta2;
                   }}},
        {"eu_b3", {3, [](const std::vector<double>& a) {
                       return eu_angles({a[0], a[1], a[2]}).beta3;
                   }}},
        {"eu_g", {3, [](const std::vector<double>& a) {
                      return eu_angles({a[0], a[1], a[2]}).gamma;
                  }}},
        {"eup_b1", {2, [](const std::vector<double>& a) {
                        return eu_prime_angles(a[0], a[1]).beta1;
                    }}},
        {"eup_b2", {2, [](const std::vector<double>& a) {
                        return eu_prime_angles(a[0], a[1]).beta2;
                    }}},
        {"eup_b3", {2, [](const std::vector<double>& a) {
                        return eu_prime_angles(a[0], a[1]).beta3;
                    }}},
        {"eup_g", {2, [](const std::vector<double>& a) {
                       return eu_prime_angles(a[0], a[1]).gamma;
                   }}},
        {"solve_branch", {3, [](const std::vector<double>& a) {
                              return solve_branch_angle(a[0], a[1], a[2]);
                          }}},
        {"atan_merge", {2, [](const std::vector<double>& a) {
                            return 2.0 * std::atan(std::tan(a[0] / 2.0) *
                                                   std::tan(a[1] / 2.0));
                        }}},
    };
    return table;
}

}  // namespace

class ExprParser {
  public:
    ExprParser(const std::string& text, AngleExpr& target)
        : text_(text), tokens_(tokenize(text)), target_(target) {}

    void run() {
        target_.text_ = text_;
        target_.root_ = parse_sum();
        if (!at_end()) fail("trailing input");
    }

  private:
    const std::string& text_;
    std::vector<Token> tokens_;
    std::size_t cursor_ = 0;
    AngleExpr& target_;

    using Node = AngleExpr::Node;
    using Kind = AngleExpr::Node::Kind;

    const Token& peek() const { return tokens_[cursor_]; }
    bool at_end() const { return peek().kind == Token::Kind::kEnd; }
    const Token& advance() { return tokens_[cursor_++]; }

    bool accept_symbol(char c) {
        if (peek().kind == Token::Kind::kSymbol && peek().text[0] == c) {
            ++cursor_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw std::runtime_error("angle expression '" + text_ + "': " +
                                 message + " at position " +
                                 std::to_string(peek().pos));
    }

    int add_node(Node n) {
        target_.nodes_.push_back(std::move(n));
        return static_cast<int>(target_.nodes_.size()) - 1;
    }

    int parse_sum() {
        int lhs = parse_term();
        while (peek().kind == Token::Kind::kSymbol &&
               (peek().text[0] == '+' || peek().text[0] == '-')) {
            const char op = advance().text[0];
            const int rhs = parse_term();
            Node n;
            n.kind = op == '+' ? Kind::kAdd : Kind::kSub;
            n.children = {lhs, rhs};
            lhs = add_node(std::move(n));
        }
        return lhs;
    }

    int parse_term() {
        if (accept_symbol('-')) {
            Node n;
            n.kind = Kind::kNeg;
            n.children = {parse_term()};
            return add_node(std::move(n));
        }
        int idx = parse_factor();
        while (accept_symbol('/')) {
            if (peek().kind != Token::Kind::kNumber || !peek().integral ||
                peek().number <= 0.0) {
                fail("expected a positive integer divisor");
            }
            const long long q = static_cast<long long>(advance().number);
            Node& node = target_.nodes_[static_cast<std::size_t>(idx)];
            if (node.kind == Kind::kRadians) {
                node.radians /= static_cast<double>(q);
            } else {
                node.den *= q;
            }
        }
        return idx;
    }

    int parse_factor() {
        long long coefficient = 1;
        bool have_coefficient = false;
        if (peek().kind == Token::Kind::kNumber) {
            const Token num = advance();
            const bool unit_follows =
                peek().kind == Token::Kind::kIdent ||
                (peek().kind == Token::Kind::kSymbol && peek().text[0] == '*');
            if (!unit_follows) {
                Node n;
                if (num.integral && num.number == 0.0) {
                    n.kind = Kind::kPiConst;
                    n.num = 0;
                } else {
                    n.kind = Kind::kRadians;
                    n.radians = num.number;
                }
                return add_node(std::move(n));
            }
            if (!num.integral) fail("coefficients must be integers");
            coefficient = static_cast<long long>(num.number);
            have_coefficient = true;
            accept_symbol('*');
        }
        if (peek().kind != Token::Kind::kIdent) {
            fail(have_coefficient ? "expected 'pi' or a parameter name"
                                  : "expected a term");
        }
        const Token ident = advance();
        if (ident.text == "pi") {
            Node n;
            n.kind = Kind::kPiConst;
            n.num = coefficient;
            return add_node(std::move(n));
        }
        if (accept_symbol('(')) {
            const auto it = call_table().find(ident.text);
            if (it == call_table().end()) {
                fail("unknown function '" + ident.text + "'");
            }
            Node n;
            n.kind = Kind::kCall;
            n.name = ident.text;
            n.num = coefficient;
            if (!accept_symbol(')')) {
                n.children.push_back(parse_sum());
                while (accept_symbol(',')) n.children.push_back(parse_sum());
                if (!accept_symbol(')')) fail("expected ')'");
            }
            if (static_cast<int>(n.children.size()) != it->second.arity) {
                fail("function '" + ident.text + "' expects " +
                     std::to_string(it->second.arity) + " arguments");
            }
            return add_node(std::move(n));
        }
        Node n;
        n.kind = Kind::kVar;
        n.name = ident.text;
        n.num = coefficient;
        return add_node(std::move(n));
    }
};

AngleExpr AngleExpr::parse(const std::string& text) {
    AngleExpr e;
    ExprParser(text, e).run();
    return e;
}

Phase AngleExpr::eval_node(int idx,
                           const std::map<std::string, Phase>& env) const {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    switch (n.kind) {
        case Node::Kind::kPiConst:
            return Phase::exact(n.num, n.den);
        case Node::Kind::kRadians:
            return Phase::radians(n.radians);
        case Node::Kind::kVar: {
            const auto it = env.find(n.name);
            if (it == env.end()) {
                throw std::runtime_error("angle expression '" + text_ +
                                         "': unbound parameter '" + n.name +
                                         "'");
            }
            return it->second.times(n.num, n.den);
        }
        case Node::Kind::kNeg:
            return -eval_node(n.children[0], env);
        case Node::Kind::kAdd:
            return eval_node(n.children[0], env) +
                   eval_node(n.children[1], env);
        case Node::Kind::kSub:
            return eval_node(n.children[0], env) -
                   eval_node(n.children[1], env);
        case Node::Kind::kCall: {
            std::vector<double> args;
            args.reserve(n.children.size());
            for (const int child : n.children) {
                args.push_back(eval_node(child, env).value());
            }
            const double r = call_table().at(n.name).fn(args);
            return Phase::radians(r).times(n.num, n.den);
        }
    }
    throw std::logic_error("angle expression: corrupt node");
}

Phase AngleExpr::eval(const std::map<std::string, Phase>& env) const {
    if (root_ < 0) return Phase::zero();
    return eval_node(root_, env);
}

std::vector<std::string> AngleExpr::variables() const {
    std::set<std::string> names;
    for (const Node& n : nodes_) {
        if (n.kind == Node::Kind::kVar) names.insert(n.name);
    }
    return {names.begin(), names.end()};
}

bool AngleExpr::has_calls() const {
    for (const Node& n : nodes_) {
        if (n.kind == Node::Kind::kCall) return true;
    }
    return false;
}

}  // namespace zx
