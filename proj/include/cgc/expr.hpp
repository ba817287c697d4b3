#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <numbers>

#include "core.hpp"

namespace cgc {

// Small complex expression language: + - * / ^, unary minus, parentheses,
// numbers, the constants i, pi, e, named variables, and elementary functions.
class Expr {
 public:
  using Vars = std::map<std::string, Cx>;

  static Expr parse(const std::string& src) {
    Parser p{src, 0};
    Expr e;
    e.root_ = p.expr();
    p.skip();
    if (p.pos != src.size()) throw ArgumentError("expression: unexpected '" + src.substr(p.pos) + "'");
    e.src_ = src;
    return e;
  }

  Cx operator()(const Vars& v) const { return eval(*root_, v); }
  const std::string& source() const { return src_; }

 private:
  struct Node {
    char op = 0;  // 'n' number, 'v' variable, 'f' function, 'u' negate, or a binary operator
    Cx value;
    std::string name;
    std::shared_ptr<Node> a, b;
  };
  using P = std::shared_ptr<Node>;

  struct Parser {
    const std::string& s;
    size_t pos;

    void skip() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
      skip();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    static P bin(char op, P a, P b) {
      auto n = std::make_shared<Node>();
      n->op = op, n->a = std::move(a), n->b = std::move(b);
      return n;
    }
    P expr() {
      P l = term();
      for (;;) {
        if (eat('+')) l = bin('+', l, term());
        else if (eat('-')) l = bin('-', l, term());
        else return l;
      }
    }
    P term() {
      P l = unary();
      for (;;) {
        if (eat('*')) l = bin('*', l, unary());
        else if (eat('/')) l = bin('/', l, unary());
        else return l;
      }
    }
    P unary() {
      if (eat('-')) {
        auto n = std::make_shared<Node>();
        n->op = 'u', n->a = unary();
        return n;
      }
      if (eat('+')) return unary();
      return power();
    }
    P power() {
      P base = atom();
      if (eat('^')) return bin('^', base, unary());
      return base;
    }
    P atom() {
      skip();
      if (pos >= s.size()) throw ArgumentError("expression: unexpected end");
      if (eat('(')) {
        P e = expr();
        if (!eat(')')) throw ArgumentError("expression: missing ')'");
        return e;
      }
      char c = s[pos];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        size_t used = 0;
        double v = std::stod(s.substr(pos), &used);
        pos += used;
        auto n = std::make_shared<Node>();
        n->op = 'n', n->value = v;
        return n;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t st = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        std::string id = s.substr(st, pos - st);
        auto n = std::make_shared<Node>();
        if (eat('(')) {
          n->op = 'f', n->name = id, n->a = expr();
          if (!eat(')')) throw ArgumentError("expression: missing ')' after " + id);
          return n;
        }
        if (id == "i") n->op = 'n', n->value = I1;
        else if (id == "pi") n->op = 'n', n->value = std::numbers::pi;
        else if (id == "e") n->op = 'n', n->value = std::numbers::e;
        else n->op = 'v', n->name = id;
        return n;
      }
      throw ArgumentError(std::string("expression: unexpected character '") + c + "'");
    }
  };

  static Cx eval(const Node& n, const Vars& v) {
    switch (n.op) {
      case 'n': return n.value;
      case 'v': {
        auto it = v.find(n.name);
        if (it == v.end()) throw ArgumentError("expression: unknown variable " + n.name);
        return it->second;
      }
      case 'u': return -eval(*n.a, v);
      case '+': return eval(*n.a, v) + eval(*n.b, v);
      case '-': return eval(*n.a, v) - eval(*n.b, v);
      case '*': return eval(*n.a, v) * eval(*n.b, v);
      case '/': return eval(*n.a, v) / eval(*n.b, v);
      case '^': {
        Cx b = eval(*n.a, v), p = eval(*n.b, v);
        if (p.imag() == 0.0 && p.real() == std::round(p.real()) && std::abs(p.real()) <= 64) {
          int k = static_cast<int>(p.real());
          Cx r = 1.0;
          for (int t = 0; t < std::abs(k); ++t) r *= b;
          return k < 0 ? 1.0 / r : r;
        }
        return std::pow(b, p);
      }
      case 'f': return call(n.name, eval(*n.a, v));
    }
    throw ArgumentError("expression: corrupt node");
  }

  static Cx call(const std::string& f, Cx a) {
    if (f == "sin") return std::sin(a);
    if (f == "cos") return std::cos(a);
    if (f == "tan") return std::tan(a);
    if (f == "exp") return std::exp(a);
    if (f == "log") return std::log(a);
    if (f == "sqrt") return std::sqrt(a);
    if (f == "sinh") return std::sinh(a);
    if (f == "cosh") return std::cosh(a);
    if (f == "tanh") return std::tanh(a);
    if (f == "conj") return std::conj(a);
    if (f == "re") return a.real();
    if (f == "im") return a.imag();
    if (f == "abs") return std::abs(a);
    throw ArgumentError("expression: unknown function " + f);
  }

  P root_;
  std::string src_;
};

}  // namespace cgc
