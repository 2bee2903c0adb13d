#include "vtel/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace vtel {

struct Expr::Node {
    enum Kind { Num, VarX, VarY, Neg, Add, Sub, Mul, Div, Pow, Call } kind = Num;
    double value = 0;
    std::string fn;
    std::vector<std::shared_ptr<const Node>> args;

    double eval(double x, double y) const {
        switch (kind) {
            case Num: return value;
            case VarX: return x;
            case VarY: return y;
            case Neg: return -args[0]->eval(x, y);
            case Add: return args[0]->eval(x, y) + args[1]->eval(x, y);
            case Sub: return args[0]->eval(x, y) - args[1]->eval(x, y);
            case Mul: return args[0]->eval(x, y) * args[1]->eval(x, y);
            case Div: return args[0]->eval(x, y) / args[1]->eval(x, y);
            case Pow: return std::pow(args[0]->eval(x, y), args[1]->eval(x, y));
            case Call: {
                double a = args[0]->eval(x, y);
                if (fn == "exp") return std::exp(a);
                if (fn == "log") return std::log(a);
                if (fn == "sqrt") return std::sqrt(a);
                if (fn == "sin") return std::sin(a);
                if (fn == "cos") return std::cos(a);
                if (fn == "abs") return std::abs(a);
                if (fn == "min") return std::min(a, args[1]->eval(x, y));
                if (fn == "max") return std::max(a, args[1]->eval(x, y));
            }
        }
        return NAN;
    }
};

namespace {

using NodeP = std::shared_ptr<const Expr::Node>;

struct Parser {
    const std::string& s;
    size_t i = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("expression '" + s + "': " + what + " at position " + std::to_string(i));
    }
    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    static NodeP make(Expr::Node::Kind k, std::vector<NodeP> a) {
        auto n = std::make_shared<Expr::Node>();
        n->kind = k;
        n->args = std::move(a);
        return n;
    }
    NodeP sum() {
        NodeP l = product();
        while (true) {
            if (eat('+'))
                l = make(Expr::Node::Add, {l, product()});
            else if (eat('-'))
                l = make(Expr::Node::Sub, {l, product()});
            else
                return l;
        }
    }
    NodeP product() {
        NodeP l = unary();
        while (true) {
            if (eat('*'))
                l = make(Expr::Node::Mul, {l, unary()});
            else if (eat('/'))
                l = make(Expr::Node::Div, {l, unary()});
            else
                return l;
        }
    }
    NodeP unary() {
        if (eat('-')) return make(Expr::Node::Neg, {unary()});
        if (eat('+')) return unary();
        NodeP b = atom();
        if (eat('^')) return make(Expr::Node::Pow, {b, unary()});  // right-associative
        return b;
    }
    NodeP atom() {
        skip();
        if (i >= s.size()) fail("unexpected end");
        if (eat('(')) {
            NodeP e = sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.') {
            const char* b = s.c_str() + i;
            char* e = nullptr;
            double v = std::strtod(b, &e);
            if (e == b) fail("bad number");
            i += size_t(e - b);
            auto n = std::make_shared<Expr::Node>();
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(s[i]))) {
            size_t st = i;
            while (i < s.size() && std::isalnum(static_cast<unsigned char>(s[i]))) ++i;
            std::string id = s.substr(st, i - st);
            auto n = std::make_shared<Expr::Node>();
            if (id == "x" || id == "t") {
                n->kind = Expr::Node::VarX;
                return n;
            }
            if (id == "y") {
                n->kind = Expr::Node::VarY;
                return n;
            }
            if (id == "pi") {
                n->value = M_PI;
                return n;
            }
            static const std::vector<std::string> one{"exp", "log", "sqrt", "sin", "cos", "abs"};
            bool two = id == "min" || id == "max";
            if (!two && std::find(one.begin(), one.end(), id) == one.end()) fail("unknown name '" + id + "'");
            if (!eat('(')) fail("expected '(' after " + id);
            n->kind = Expr::Node::Call;
            n->fn = id;
            n->args.push_back(sum());
            if (two) {
                if (!eat(',')) fail("expected ','");
                n->args.push_back(sum());
            }
            if (!eat(')')) fail("expected ')'");
            return n;
        }
        fail("unexpected character");
    }
};

}  // namespace

Expr::Expr(const std::string& text) : text_(text) {
    Parser p{text_};
    root_ = p.sum();
    p.skip();
    if (p.i != text_.size()) p.fail("trailing input");
}

double Expr::operator()(double x, double y) const { return root_->eval(x, y); }

}  // namespace vtel
