#include "pde2ode/parser.hpp"

#include "pde2ode/algebra.hpp"
#include "pde2ode/error.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace pde2ode {
namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Ident;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        t.text.push_back(advance());
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < src_.size() &&
                                                        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      t.kind = Tok::Number;
      bool point = false;
      while (pos_ < src_.size()) {
        char d = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(d))) {
          t.text.push_back(advance());
        } else if (d == '.' && !point) {
          point = true;
          t.text.push_back(advance());
        } else {
          break;
        }
      }
      return t;
    }
    t.kind = Tok::Symbol;
    t.text.push_back(advance());
    return t;
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

  SystemSource parse_file() {
    SystemSource out;
    bool have_vars = false;
    bool have_funcs = false;
    while (cur_.kind != Tok::End) {
      if (cur_.kind != Tok::Ident) fail_expected("a statement keyword");
      std::string kw = cur_.text;
      if (kw == "vars") {
        if (have_vars) fail(ErrorCode::Syntax, "'vars' declared twice");
        bump();
        out.signature.indep_names = ident_list();
        have_vars = true;
        expect(";");
        sig_ = out.signature;
        check_names();
      } else if (kw == "funcs") {
        if (!have_vars) fail(ErrorCode::Syntax, "'funcs' before 'vars'");
        if (have_funcs) fail(ErrorCode::Syntax, "'funcs' declared twice");
        bump();
        parse_funcs(out.signature);
        have_funcs = true;
        expect(";");
        sig_ = out.signature;
        check_names();
      } else if (kw == "eq") {
        require_vars(have_vars);
        bump();
        RationalExpr lhs = expr();
        if (accept("=")) lhs -= expr();
        expect(";");
        out.equations.push_back(lhs.num());
        add_denominator(out, lhs.den());
      } else if (kw == "ineq") {
        require_vars(have_vars);
        bump();
        RationalExpr e = expr();
        expect(";");
        if (e.is_zero()) fail(ErrorCode::Syntax, "inequation is identically zero");
        add_denominator(out, e.num());
        add_denominator(out, e.den());
      } else if (kw == "option") {
        bump();
        std::string key = ident();
        expect("=");
        std::string value;
        while (cur_.kind != Tok::End && !(cur_.kind == Tok::Symbol && cur_.text == ";")) {
          value += cur_.text;
          bump();
        }
        expect(";");
        out.options[key] = value;
      } else {
        fail_expected("'vars', 'funcs', 'eq', 'ineq' or 'option'");
      }
    }
    if (!have_vars) fail(ErrorCode::Syntax, "missing 'vars' declaration");
    if (out.equations.empty()) fail(ErrorCode::Syntax, "no equations");
    return out;
  }

  RationalExpr parse_single(const Signature& sig) {
    sig_ = sig;
    RationalExpr e = expr();
    if (cur_.kind != Tok::End) fail_expected("end of expression");
    return e;
  }

 private:
  [[noreturn]] void fail(ErrorCode code, const std::string& msg) const {
    std::ostringstream os;
    os << cur_.line << ":" << cur_.col << ": " << msg;
    throw Error(code, os.str());
  }

  [[noreturn]] void fail_expected(const std::string& what) const {
    fail(ErrorCode::Syntax, "expected " + what + ", found " + describe(cur_));
  }

  void bump() { cur_ = lex_.next(); }

  bool is(const char* sym) const { return cur_.kind == Tok::Symbol && cur_.text == sym; }

  bool accept(const char* sym) {
    if (!is(sym)) return false;
    bump();
    return true;
  }

  void expect(const char* sym) {
    if (!accept(sym)) fail_expected(std::string("'") + sym + "'");
  }

  std::string ident() {
    if (cur_.kind != Tok::Ident) fail_expected("an identifier");
    std::string s = cur_.text;
    bump();
    return s;
  }

  std::vector<std::string> ident_list() {
    std::vector<std::string> names{ident()};
    while (accept(",")) names.push_back(ident());
    return names;
  }

  void require_vars(bool have) const {
    if (!have) fail(ErrorCode::Syntax, "statement before 'vars'");
  }

  void check_names() const {
    try {
      sig_.validate();
    } catch (const Error& e) {
      fail(ErrorCode::Syntax, e.what());
    }
    for (const auto& n : sig_.indep_names)
      if (n == "diff") fail(ErrorCode::Syntax, "'diff' is reserved");
    for (const auto& n : sig_.dep_names)
      if (n == "diff") fail(ErrorCode::Syntax, "'diff' is reserved");
  }

  void parse_funcs(Signature& sig) {
    do {
      std::string name = ident();
      expect("(");
      std::vector<std::string> args = ident_list();
      if (args != sig.indep_names)
        fail(ErrorCode::BadArity, "function '" + name + "' must take exactly the declared variables in order");
      expect(")");
      sig.dep_names.push_back(name);
    } while (accept(","));
  }

  void add_denominator(SystemSource& out, const DiffPolynomial& den) {
    if (den.is_constant()) return;
    static const TermOrder natural;
    for (const auto& [atom, e] : split_factors(den, natural).atoms) {
      (void)e;
      bool seen = false;
      for (const auto& q : out.inequations) seen = seen || q == atom;
      if (!seen) out.inequations.push_back(atom);
    }
  }

  RationalExpr expr() {
    RationalExpr acc = term();
    for (;;) {
      if (accept("+")) {
        acc += term();
      } else if (accept("-")) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  RationalExpr term() {
    RationalExpr acc = unary();
    for (;;) {
      if (accept("*")) {
        acc *= unary();
      } else if (is("/")) {
        bump();
        RationalExpr d = unary();
        if (d.is_zero()) fail(ErrorCode::Syntax, "division by zero");
        acc /= d;
      } else {
        return acc;
      }
    }
  }

  RationalExpr unary() {
    if (accept("-")) return -unary();
    if (accept("+")) return unary();
    return power();
  }

  RationalExpr power() {
    RationalExpr base = primary();
    if (accept("^")) {
      if (cur_.kind != Tok::Number || cur_.text.find('.') != std::string::npos)
        fail_expected("a nonnegative integer exponent");
      long e = std::stol(cur_.text);
      bump();
      RationalExpr r(1);
      for (long k = 0; k < e; ++k) r *= base;
      return r;
    }
    return base;
  }

  RationalExpr primary() {
    if (cur_.kind == Tok::Number) {
      Rational q = parse_rational(cur_.text);
      bump();
      return RationalExpr(q);
    }
    if (accept("(")) {
      RationalExpr e = expr();
      expect(")");
      return e;
    }
    if (cur_.kind != Tok::Ident) fail_expected("an expression");
    if (cur_.text == "diff") {
      bump();
      return diff_call();
    }
    std::string name = cur_.text;
    bump();
    if (int v = sig_.find_indep(name); v >= 0) {
      if (is("(")) fail(ErrorCode::BadArity, "'" + name + "' is a variable, not a function");
      return RationalExpr(DiffPolynomial::indep_var(v));
    }
    int dep = sig_.find_dep(name);
    if (dep < 0) fail(ErrorCode::UnknownSymbol, "unknown symbol '" + name + "'");
    if (accept("(")) {
      std::vector<std::string> args = ident_list();
      if (args != sig_.indep_names)
        fail(ErrorCode::BadArity, "'" + name + "' applied to the wrong arguments");
      expect(")");
    }
    return RationalExpr(DiffPolynomial::of(Derivative::function(dep, sig_.n_indep())));
  }

  RationalExpr diff_call() {
    expect("(");
    RationalExpr e = expr();
    while (accept(",")) {
      std::string var = ident();
      int v = sig_.find_indep(var);
      if (v < 0) {
        if (sig_.find_dep(var) >= 0) fail(ErrorCode::BadArity, "cannot differentiate with respect to function '" + var + "'");
        fail(ErrorCode::UnknownSymbol, "unknown variable '" + var + "'");
      }
      long times = 1;
      if (accept("$")) {
        if (cur_.kind != Tok::Number || cur_.text.find('.') != std::string::npos)
          fail_expected("a repetition count");
        times = std::stol(cur_.text);
        bump();
      }
      for (long k = 0; k < times; ++k) e = total_derivative(e, static_cast<std::size_t>(v));
    }
    expect(")");
    return e;
  }

  Lexer lex_;
  Token cur_;
  Signature sig_;
};

}  // namespace

SystemSource parse_system(std::string_view text) { return Parser(text).parse_file(); }

SystemSource load_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

RationalExpr parse_expression(std::string_view text, const Signature& sig) {
  return Parser(text).parse_single(sig);
}

}  // namespace pde2ode
