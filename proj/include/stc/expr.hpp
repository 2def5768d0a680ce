#pragma once

#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace stc {

// Minimal arithmetic expression parser for conformal factor specifications,
// e.g. "exp(0.2*x1) * (1 + 0.1*sin(x2))". Variables are x1, x2, ...
class Expr {
 public:
  using Fn = std::function<double(const std::vector<double>&)>;

  static Fn parse(const std::string& s) {
    Parser p{s, 0};
    Fn f = p.expr();
    p.skip();
    if (p.i != s.size()) throw std::invalid_argument("trailing input in expression");
    return f;
  }

 private:
  struct Parser {
    std::string s;
    size_t i;

    void skip() { while (i < s.size() && std::isspace((unsigned char)s[i])) ++i; }
    bool eat(char c) {
      skip();
      if (i < s.size() && s[i] == c) { ++i; return true; }
      return false;
    }

    Fn expr() {
      Fn lhs = term();
      while (true) {
        skip();
        if (eat('+')) { Fn rhs = term(); lhs = [lhs, rhs](const std::vector<double>& x) { return lhs(x) + rhs(x); }; }
        else if (eat('-')) { Fn rhs = term(); lhs = [lhs, rhs](const std::vector<double>& x) { return lhs(x) - rhs(x); }; }
        else return lhs;
      }
    }

    Fn term() {
      Fn lhs = factor();
      while (true) {
        skip();
        if (eat('*')) { Fn rhs = factor(); lhs = [lhs, rhs](const std::vector<double>& x) { return lhs(x) * rhs(x); }; }
        else if (eat('/')) { Fn rhs = factor(); lhs = [lhs, rhs](const std::vector<double>& x) { return lhs(x) / rhs(x); }; }
        else return lhs;
      }
    }

    Fn factor() {
      Fn base = unary();
      skip();
      if (eat('^')) {
        Fn e = factor();
        return [base, e](const std::vector<double>& x) { return std::pow(base(x), e(x)); };
      }
      return base;
    }

    Fn unary() {
      skip();
      if (eat('-')) {
        Fn f = unary();
        return [f](const std::vector<double>& x) { return -f(x); };
      }
      return primary();
    }

    Fn primary() {
      skip();
      if (i >= s.size()) throw std::invalid_argument("unexpected end of expression");
      char c = s[i];
      if (c == '(') {
        ++i;
        Fn f = expr();
        if (!eat(')')) throw std::invalid_argument("missing ')'");
        return f;
      }
      if (std::isdigit((unsigned char)c) || c == '.') {
        size_t j = i;
        while (j < s.size() && (std::isdigit((unsigned char)s[j]) || s[j] == '.' ||
                                s[j] == 'e' || s[j] == 'E' ||
                                ((s[j] == '+' || s[j] == '-') && (s[j - 1] == 'e' || s[j - 1] == 'E'))))
          ++j;
        double v = std::stod(s.substr(i, j - i));
        i = j;
        return [v](const std::vector<double>&) { return v; };
      }
      if (std::isalpha((unsigned char)c)) {
        size_t j = i;
        while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
        std::string name = s.substr(i, j - i);
        i = j;
        if (name.size() > 1 && name[0] == 'x') {
          int var = std::stoi(name.substr(1)) - 1;
          if (var < 0) throw std::invalid_argument("bad variable " + name);
          return [var](const std::vector<double>& x) {
            if (var >= int(x.size())) throw std::out_of_range("variable index beyond dimension");
            return x[var];
          };
        }
        if (name == "pi") return [](const std::vector<double>&) { return 3.14159265358979323846; };
        if (!eat('(')) throw std::invalid_argument("expected '(' after " + name);
        Fn arg = expr();
        if (!eat(')')) throw std::invalid_argument("missing ')'");
        double (*fp)(double) = nullptr;
        if (name == "exp") fp = std::exp;
        else if (name == "log") fp = std::log;
        else if (name == "sin") fp = std::sin;
        else if (name == "cos") fp = std::cos;
        else if (name == "tanh") fp = std::tanh;
        else if (name == "sqrt") fp = std::sqrt;
        else throw std::invalid_argument("unknown function " + name);
        return [fp, arg](const std::vector<double>& x) { return fp(arg(x)); };
      }
      throw std::invalid_argument(std::string("unexpected character '") + c + "'");
    }
  };
};

}  // namespace stc
