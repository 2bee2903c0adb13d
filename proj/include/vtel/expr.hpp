#pragma once
#include <memory>
#include <string>

namespace vtel {

// Arithmetic expressions in x, y (t is an alias of x) for CLI profiles:
// numbers, + − * / ^, parentheses, exp log sqrt sin cos abs min max.
class Expr {
public:
    explicit Expr(const std::string& text);
    double operator()(double x, double y = 0) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

}  // namespace vtel
