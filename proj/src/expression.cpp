#include "xtwave/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "xtwave/error.hpp"

namespace xtwave {

namespace {
enum Op : int { kConst, kX, kT, kAdd, kSub, kMul, kDiv, kNeg, kPow, kSin, kCos, kExp, kLog };
}  // namespace

struct Expr::Node {
  int op = kConst;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;
};

Expr Expr::make(int op, const Expr& a, const Expr& b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr::Expr() : Expr(0.0) {}

Expr::Expr(double c) {
  auto n = std::make_shared<Node>();
  n->value = c;
  node_ = std::move(n);
}

Expr Expr::var_x() { return make(kX, Expr(), Expr()); }
Expr Expr::var_t() { return make(kT, Expr(), Expr()); }

namespace {

bool is_const(const Expr::Node& n) { return n.op == kConst; }
bool is_value(const Expr::Node& n, double v) { return n.op == kConst && n.value == v; }

}  // namespace

// Builders fold constants and drop neutral elements so derivatives stay small.
Expr operator+(const Expr& a, const Expr& b) {
  if (is_value(*a.node_, 0.0)) return b;
  if (is_value(*b.node_, 0.0)) return a;
  if (is_const(*a.node_) && is_const(*b.node_)) return Expr(a.node_->value + b.node_->value);
  return Expr::make(kAdd, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (is_value(*b.node_, 0.0)) return a;
  if (is_value(*a.node_, 0.0)) return -b;
  if (is_const(*a.node_) && is_const(*b.node_)) return Expr(a.node_->value - b.node_->value);
  return Expr::make(kSub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (is_value(*a.node_, 0.0) || is_value(*b.node_, 0.0)) return Expr(0.0);
  if (is_value(*a.node_, 1.0)) return b;
  if (is_value(*b.node_, 1.0)) return a;
  if (is_const(*a.node_) && is_const(*b.node_)) return Expr(a.node_->value * b.node_->value);
  return Expr::make(kMul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (is_value(*a.node_, 0.0)) return Expr(0.0);
  if (is_value(*b.node_, 1.0)) return a;
  if (is_const(*a.node_) && is_const(*b.node_) && b.node_->value != 0.0)
    return Expr(a.node_->value / b.node_->value);
  return Expr::make(kDiv, a, b);
}

Expr operator-(const Expr& a) {
  if (is_const(*a.node_)) return Expr(-a.node_->value);
  if (a.node_->op == kNeg) return Expr(a.node_->a);
  return Expr::make(kNeg, a, Expr());
}

Expr pow(const Expr& a, const Expr& b) {
  if (is_value(*b.node_, 0.0)) return Expr(1.0);
  if (is_value(*b.node_, 1.0)) return a;
  if (is_const(*a.node_) && is_const(*b.node_)) return Expr(std::pow(a.node_->value, b.node_->value));
  return Expr::make(kPow, a, b);
}

Expr sin(const Expr& a) {
  if (is_const(*a.node_)) return Expr(std::sin(a.node_->value));
  return Expr::make(kSin, a, Expr());
}

Expr cos(const Expr& a) {
  if (is_const(*a.node_)) return Expr(std::cos(a.node_->value));
  return Expr::make(kCos, a, Expr());
}

Expr exp(const Expr& a) {
  if (is_const(*a.node_)) return Expr(std::exp(a.node_->value));
  return Expr::make(kExp, a, Expr());
}

Expr log(const Expr& a) {
  if (is_const(*a.node_) && a.node_->value > 0.0) return Expr(std::log(a.node_->value));
  return Expr::make(kLog, a, Expr());
}

namespace {

double eval(const Expr::Node& n, double x, double t) {
  switch (n.op) {
    case kConst: return n.value;
    case kX: return x;
    case kT: return t;
    case kAdd: return eval(*n.a, x, t) + eval(*n.b, x, t);
    case kSub: return eval(*n.a, x, t) - eval(*n.b, x, t);
    case kMul: return eval(*n.a, x, t) * eval(*n.b, x, t);
    case kDiv: return eval(*n.a, x, t) / eval(*n.b, x, t);
    case kNeg: return -eval(*n.a, x, t);
    case kPow: {
      const double e = eval(*n.b, x, t);
      const double base = eval(*n.a, x, t);
      return e == std::round(e) && std::abs(e) < 64 ? std::pow(base, static_cast<int>(e)) : std::pow(base, e);
    }
    case kSin: return std::sin(eval(*n.a, x, t));
    case kCos: return std::cos(eval(*n.a, x, t));
    case kExp: return std::exp(eval(*n.a, x, t));
    case kLog: return std::log(eval(*n.a, x, t));
  }
  return 0.0;
}

bool depends(const Expr::Node& n, int var) {
  if (n.op == var) return true;
  return (n.a && depends(*n.a, var)) || (n.b && depends(*n.b, var));
}

void print(const Expr::Node& n, std::ostream& os) {
  auto bin = [&](const char* sym) {
    os << '(';
    print(*n.a, os);
    os << ' ' << sym << ' ';
    print(*n.b, os);
    os << ')';
  };
  auto fn = [&](const char* name) {
    os << name << '(';
    print(*n.a, os);
    os << ')';
  };
  switch (n.op) {
    case kConst: {
      std::ostringstream v;
      v.precision(17);
      v << n.value;
      if (n.value < 0) os << '(' << v.str() << ')';
      else os << v.str();
      break;
    }
    case kX: os << 'x'; break;
    case kT: os << 't'; break;
    case kAdd: bin("+"); break;
    case kSub: bin("-"); break;
    case kMul: bin("*"); break;
    case kDiv: bin("/"); break;
    case kPow: bin("^"); break;
    case kNeg: os << "(-"; print(*n.a, os); os << ')'; break;
    case kSin: fn("sin"); break;
    case kCos: fn("cos"); break;
    case kExp: fn("exp"); break;
    case kLog: fn("log"); break;
  }
}

}  // namespace

double Expr::operator()(double x, double t) const { return eval(*node_, x, t); }

bool Expr::depends_on_t() const { return depends(*node_, kT); }

std::string Expr::str() const {
  std::ostringstream os;
  print(*node_, os);
  return os.str();
}

Expr Expr::diff(int var) const {
  const Node& n = *node_;
  const Expr a = n.a ? Expr(n.a) : Expr();
  const Expr b = n.b ? Expr(n.b) : Expr();
  switch (n.op) {
    case kConst: return Expr(0.0);
    case kX: return Expr(var == kX ? 1.0 : 0.0);
    case kT: return Expr(var == kT ? 1.0 : 0.0);
    case kAdd: return a.diff(var) + b.diff(var);
    case kSub: return a.diff(var) - b.diff(var);
    case kMul: return a.diff(var) * b + a * b.diff(var);
    case kDiv: return (a.diff(var) * b - a * b.diff(var)) / (b * b);
    case kNeg: return -a.diff(var);
    case kPow:
      if (!depends(*n.b, var)) return b * pow(a, b - Expr(1.0)) * a.diff(var);
      return *this * (b.diff(var) * log(a) + b * a.diff(var) / a);
    case kSin: return cos(a) * a.diff(var);
    case kCos: return -(sin(a) * a.diff(var));
    case kExp: return *this * a.diff(var);
    case kLog: return a.diff(var) / a;
  }
  return Expr(0.0);
}

Expr Expr::diff_x() const { return diff(kX); }
Expr Expr::diff_t() const { return diff(kT); }

// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Expr parse() {
    Expr e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, what + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (accept('+')) e = e + product();
      else if (accept('-')) e = e - product();
      else return e;
    }
  }

  Expr product() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) e = e * unary();
      else if (accept('/')) e = e / unary();
      else return e;
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  // Right associative; binds tighter than unary minus on its left.
  Expr power() {
    Expr base = primary();
    if (accept('^')) return pow(base, unary());
    return base;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return Expr(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "x") return Expr::var_x();
      if (id == "t") return Expr::var_t();
      if (id == "pi") return Expr(std::numbers::pi);
      if (id == "sin" || id == "cos" || id == "exp") {
        if (!accept('(')) fail("expected '(' after " + id);
        Expr arg = sum();
        if (!accept(')')) fail("expected ')'");
        if (id == "sin") return sin(arg);
        if (id == "cos") return cos(arg);
        return exp(arg);
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::parse(const std::string& text) { return Parser(text).parse(); }

}  // namespace xtwave
