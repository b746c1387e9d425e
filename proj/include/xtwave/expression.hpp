#pragma once

#include <memory>
#include <string>

namespace xtwave {

/// Arithmetic expression in x, t with symbolic differentiation.
/// Grammar: + - * / ^, unary minus, sin cos exp, numbers, x, t, pi.
class Expr {
 public:
  struct Node;

  Expr();  // zero
  explicit Expr(double constant);
  static Expr var_x();
  static Expr var_t();

  static Expr parse(const std::string& text);

  double operator()(double x, double t) const;
  Expr diff_x() const;
  Expr diff_t() const;
  bool depends_on_t() const;

  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& a, const Expr& b);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr log(const Expr& a);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(int op, const Expr& a, const Expr& b);
  Expr diff(int var) const;
  std::shared_ptr<const Node> node_;
};

}  // namespace xtwave
