#include "folnd/parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace folnd {

VarId VarTable::intern(const std::string& name) {
  auto it = by_name_.find(name);
  if (it != by_name_.end()) return VarId{it->second};
  int idx;
  if (name.size() >= 2 && name[0] == 'v' &&
      std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit((unsigned char)c); })) {
    idx = std::stoi(name.substr(1));
    if (idx < 1) throw std::runtime_error("variable index must be positive: " + name);
  } else {
    while (by_index_.count(next_)) ++next_;
    idx = next_++;
  }
  if (by_index_.count(idx))
    throw std::runtime_error("name collision: " + name + " and " + by_index_[idx] +
                             " both denote v" + std::to_string(idx));
  by_name_[name] = idx;
  by_index_[idx] = name;
  return VarId{idx};
}

std::string VarTable::name_of(VarId v) const {
  auto it = by_index_.find(v.index);
  if (it != by_index_.end()) return it->second;
  return "v" + std::to_string(v.index);
}

ParseError::ParseError(const std::string& msg, size_t offset_, int line_, int col_)
    : std::runtime_error(msg + " at line " + std::to_string(line_) + ", column " +
                         std::to_string(col_)),
      offset(offset_), line(line_), col(col_) {}

namespace {

enum class Tok {
  End, Ident, Hole, LParen, RParen, Comma, Eq, Not, And, Or, Implies, Iff,
  Forall, Exists, In, Dot, True, False,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  size_t pos = 0;  // 0-based start offset
};

struct Lexer {
  const std::string& src;
  size_t i = 0;
  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg, size_t at) const {
    int line = 1, col = 1;
    for (size_t k = 0; k < at && k < src.size(); ++k) {
      if (src[k] == '\n') { ++line; col = 1; } else ++col;
    }
    throw ParseError(msg, at + 1, line, col);
  }

  Token next() {
    while (i < src.size() && std::isspace((unsigned char)src[i])) ++i;
    if (i >= src.size()) return {Tok::End, "", src.size()};
    size_t start = i;
    char c = src[i];
    auto one = [&](Tok k) { ++i; return Token{k, src.substr(start, 1), start}; };
    switch (c) {
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case ',': return one(Tok::Comma);
      case '.': return one(Tok::Dot);
      case '~': return one(Tok::Not);
      case '&': return one(Tok::And);
      case '|': return one(Tok::Or);
      case '=': return one(Tok::Eq);
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') { i += 2; return {Tok::Implies, "->", start}; }
        fail("expected '>' after '-'", i + 1);
      case '<':
        if (i + 2 < src.size() && src[i + 1] == '-' && src[i + 2] == '>') {
          i += 3;
          return {Tok::Iff, "<->", start};
        }
        fail("expected '->' after '<'", i + 1);
      default: break;
    }
    if (c == '_' || std::isalpha((unsigned char)c)) {
      while (i < src.size() && (src[i] == '_' || std::isalnum((unsigned char)src[i]))) ++i;
      std::string word = src.substr(start, i - start);
      if (word == "forall") return {Tok::Forall, word, start};
      if (word == "exists") return {Tok::Exists, word, start};
      if (word == "in") return {Tok::In, word, start};
      if (word == "true") return {Tok::True, word, start};
      if (word == "false") return {Tok::False, word, start};
      if (word[0] == '_') {
        if (word.size() < 2 ||
            !std::all_of(word.begin() + 1, word.end(), [](char ch) { return std::isdigit((unsigned char)ch); }))
          fail("bad hole name '" + word + "'", start);
        return {Tok::Hole, word, start};
      }
      return {Tok::Ident, word, start};
    }
    fail(std::string("unexpected character '") + c + "'", start);
  }
};

struct Parser {
  Lexer lex;
  Token cur;
  Signature* sig;        // null for template parsing
  VarTable* vars;        // null for template parsing
  bool infer = false;

  Parser(const std::string& s, Signature* sg, VarTable* vt, bool inf)
      : lex(s), sig(sg), vars(vt), infer(inf) {
    cur = lex.next();
  }

  [[noreturn]] void fail(const std::string& msg) { lex.fail(msg, cur.pos); }

  void advance() { cur = lex.next(); }

  void expect(Tok k, const std::string& what) {
    if (cur.kind != k) fail("expected " + what);
    advance();
  }

  FormulaPtr parse_all() {
    FormulaPtr f = parse_iff(false);
    if (cur.kind != Tok::End) fail("unexpected trailing input");
    return f;
  }

  // <-> is lowest; quantifier bodies extend maximally to the right.
  FormulaPtr parse_iff(bool no_quant) {
    FormulaPtr left = parse_implies(no_quant);
    while (cur.kind == Tok::Iff) {
      advance();
      left = f_iff(left, parse_implies(no_quant));
    }
    return left;
  }

  FormulaPtr parse_implies(bool no_quant) {
    FormulaPtr left = parse_or(no_quant);
    if (cur.kind == Tok::Implies) {
      advance();
      return f_implies(left, parse_implies(no_quant));  // right assoc
    }
    return left;
  }

  FormulaPtr parse_or(bool no_quant) {
    FormulaPtr left = parse_and(no_quant);
    while (cur.kind == Tok::Or) {
      advance();
      left = f_or(left, parse_and(no_quant));
    }
    return left;
  }

  FormulaPtr parse_and(bool no_quant) {
    FormulaPtr left = parse_unary(no_quant);
    while (cur.kind == Tok::And) {
      advance();
      left = f_and(left, parse_unary(no_quant));
    }
    return left;
  }

  FormulaPtr parse_unary(bool no_quant) {
    if (cur.kind == Tok::Not) {
      advance();
      return f_not(parse_unary(no_quant));
    }
    if (cur.kind == Tok::Forall || cur.kind == Tok::Exists) {
      if (no_quant) fail("quantifier not allowed in a guard without parentheses");
      return parse_quantifier();
    }
    return parse_atom(no_quant);
  }

  FormulaPtr parse_quantifier() {
    bool univ = cur.kind == Tok::Forall;
    advance();
    if (cur.kind != Tok::Ident) fail("expected a variable after quantifier");
    if (!vars) fail("quantifier not allowed in a boolean template");
    VarId x = vars->intern(cur.text);
    advance();
    FormulaPtr guard;
    if (cur.kind == Tok::In) {
      advance();
      guard = parse_iff(true);
    }
    expect(Tok::Dot, "'.'");
    FormulaPtr body = parse_iff(false);
    if (guard) return univ ? f_bforall(x, guard, body) : f_bexists(x, guard, body);
    return univ ? f_forall(x, body) : f_exists(x, body);
  }

  FormulaPtr parse_atom(bool no_quant) {
    switch (cur.kind) {
      case Tok::True: advance(); return f_true();
      case Tok::False: advance(); return f_false();
      case Tok::Hole: {
        int h = std::stoi(cur.text.substr(1));
        if (h < 1) fail("hole index must be positive");
        advance();
        return f_hole(h);
      }
      case Tok::LParen: {
        advance();
        FormulaPtr f = parse_iff(false);
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident: {
        std::string name = cur.text;
        size_t at = cur.pos;
        advance();
        if (cur.kind == Tok::LParen) return parse_pred(name, at);
        // bare identifier: a variable, so "x = y" or error
        if (!vars) fail("expected a hole or connective in a boolean template");
        VarId lhs = vars->intern(name);
        expect(Tok::Eq, "'=' after variable '" + name + "'");
        if (cur.kind != Tok::Ident) fail("expected a variable after '='");
        VarId rhs = vars->intern(cur.text);
        advance();
        (void)no_quant;
        return f_eq(lhs, rhs);
      }
      default:
        fail("expected a formula");
    }
  }

  FormulaPtr parse_pred(const std::string& name, size_t at) {
    if (!sig) fail("predicates not allowed in a boolean template");
    advance();  // past '('
    std::vector<VarId> args;
    if (cur.kind != Tok::RParen) {
      for (;;) {
        if (cur.kind != Tok::Ident) fail("expected a variable argument");
        args.push_back(vars->intern(cur.text));
        advance();
        if (cur.kind != Tok::Comma) break;
        advance();
      }
    }
    expect(Tok::RParen, "')'");
    if (!sig->declared(name)) {
      if (!infer) lex.fail("undeclared predicate '" + name + "'", at);
      sig->declare(name, (int)args.size());
    } else if (sig->arity(name) != (int)args.size()) {
      lex.fail("predicate '" + name + "' expects " + std::to_string(sig->arity(name)) +
               " arguments, got " + std::to_string(args.size()), at);
    }
    return f_pred(name, std::move(args));
  }
};

}  // namespace

FormulaPtr parse(const std::string& text, const Signature& sig, VarTable& vars) {
  Signature s = sig;
  Parser p(text, &s, &vars, false);
  return p.parse_all();
}

FormulaPtr parse_infer(const std::string& text, Signature& sig, VarTable& vars) {
  Parser p(text, &sig, &vars, true);
  return p.parse_all();
}

FormulaPtr parse_boolean_template(const std::string& text) {
  Parser p(text, nullptr, nullptr, false);
  FormulaPtr f = p.parse_all();
  int max_hole = 0;
  if (!is_boolean_template(f, max_hole))
    throw std::runtime_error("not a boolean template: holes must be _1.._n with every index used");
  return f;
}

namespace {

// Minimum precedence a child must reach to print without parentheses.
int node_prec(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::Iff: return 1;
    case Kind::Implies: return 2;
    case Kind::Or: return 3;
    case Kind::And: return 4;
    case Kind::Not: return 5;
    case Kind::Exists:
    case Kind::Forall:
    case Kind::BForall:
    case Kind::BExists:
      return 1;  // body extends maximally right
    default: return 6;
  }
}

void print_rec(std::ostringstream& out, const FormulaPtr& f, const VarTable& vars, int min_prec) {
  int prec = node_prec(f);
  bool paren = prec < min_prec;
  if (paren) out << '(';
  switch (f->kind) {
    case Kind::True: out << "true"; break;
    case Kind::False: out << "false"; break;
    case Kind::Hole: out << '_' << f->hole; break;
    case Kind::Pred:
      out << f->pred << '(';
      for (size_t i = 0; i < f->args.size(); ++i) {
        if (i) out << ", ";
        out << vars.name_of(f->args[i]);
      }
      out << ')';
      break;
    case Kind::Eq:
      out << vars.name_of(f->lhs) << " = " << vars.name_of(f->rhs);
      break;
    case Kind::Not:
      out << '~';
      print_rec(out, f->a, vars, 5);
      break;
    case Kind::And:
      print_rec(out, f->a, vars, 4);
      out << " & ";
      print_rec(out, f->b, vars, 5);
      break;
    case Kind::Or:
      print_rec(out, f->a, vars, 3);
      out << " | ";
      print_rec(out, f->b, vars, 4);
      break;
    case Kind::Implies:
      print_rec(out, f->a, vars, 3);
      out << " -> ";
      print_rec(out, f->b, vars, 2);
      break;
    case Kind::Iff:
      print_rec(out, f->a, vars, 2);
      out << " <-> ";
      print_rec(out, f->b, vars, 2);
      break;
    case Kind::Exists:
    case Kind::Forall:
      out << (f->kind == Kind::Forall ? "forall " : "exists ") << vars.name_of(f->var) << ". ";
      print_rec(out, f->a, vars, 1);
      break;
    case Kind::BForall:
    case Kind::BExists:
      out << (f->kind == Kind::BForall ? "forall " : "exists ") << vars.name_of(f->var) << " in ";
      print_rec(out, f->a, vars, 2);  // quantified guards need parens
      out << ". ";
      print_rec(out, f->b, vars, 1);
      break;
  }
  if (paren) out << ')';
}

}  // namespace

std::string print(const FormulaPtr& f, const VarTable& vars) {
  std::ostringstream out;
  print_rec(out, f, vars, 0);
  return out.str();
}

}  // namespace folnd
