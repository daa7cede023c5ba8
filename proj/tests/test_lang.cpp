#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "setsynth/ast.hpp"
#include "setsynth/parser.hpp"
#include "setsynth/pretty.hpp"
#include "setsynth/uniform.hpp"

using namespace setsynth;

TEST_CASE("parse coin") {
  Program p = parse_program("coin = 0 ? 1");
  const FuncDef* coin = p.find_function("coin");
  REQUIRE(coin != nullptr);
  CHECK(coin->arity == 0);
  REQUIRE(coin->rules.size() == 1);
  const ExprPtr& body = coin->rules[0].body;
  REQUIRE(body->kind == ExprKind::Choice);
  CHECK(body->args[0]->kind == ExprKind::Lit);
  CHECK(body->args[0]->lit == 0);
  CHECK(body->args[1]->lit == 1);
}

TEST_CASE("parse empty input") {
  Program p = parse_program("");
  CHECK(p.func_defs.empty());
  CHECK(p.data_decls.size() == prelude_decls().size());
}

TEST_CASE("parse not with two rules") {
  Program p = parse_program("not False = True\nnot True = False");
  const FuncDef* f = p.find_function("not");
  REQUIRE(f != nullptr);
  CHECK(f->arity == 1);
  CHECK(f->rules.size() == 2);
  CHECK_FALSE(f->rules[0].patterns[0].is_var);
  CHECK(f->rules[0].patterns[0].name == "False");
}

TEST_CASE("parse data declaration and list sugar") {
  Program p = parse_program(
      "data Tree = Leaf | Node Tree Tree\n"
      "xs = [1,2,3]\n"
      "t = Node Leaf (Node Leaf Leaf)");
  int arity = -1;
  REQUIRE(p.find_constructor("Node", &arity) != nullptr);
  CHECK(arity == 2);
  const FuncDef* xs = p.find_function("xs");
  REQUIRE(xs);
  const ExprPtr& body = xs->rules[0].body;
  REQUIRE(body->kind == ExprKind::ConApp);
  CHECK(body->name == ":");
  CHECK(body->args[0]->lit == 1);
}

TEST_CASE("zero-arity function references become applications") {
  Program p = parse_program("coin = 0 ? 1\ndouble x = x + x\nd = double coin");
  const FuncDef* d = p.find_function("d");
  REQUIRE(d);
  const ExprPtr& body = d->rules[0].body;
  REQUIRE(body->kind == ExprKind::FunApp);
  CHECK(body->name == "double");
  REQUIRE(body->args[0]->kind == ExprKind::FunApp);
  CHECK(body->args[0]->name == "coin");
}

TEST_CASE("parser diagnostics") {
  CHECK_THROWS_WITH_AS(parse_program("f = )"), doctest::Contains("expected expression"),
                       CompileError);
  CHECK_THROWS_WITH_AS(parse_program("f = 1\nf = 2\ng = f 3"),
                       doctest::Contains("expects 0 arguments"), CompileError);
  CHECK_THROWS_WITH_AS(parse_program("f = g"), doctest::Contains("unknown identifier"),
                       CompileError);
  CHECK_THROWS_WITH_AS(parse_program("data Bool = F | T"),
                       doctest::Contains("duplicate definition of type"), CompileError);
  CHECK_THROWS_WITH_AS(parse_program("f x = x x"), doctest::Contains("higher-order"),
                       CompileError);
  CHECK_THROWS_WITH_AS(parse_program("f x = x\ng = f"),
                       doctest::Contains("partial application"), CompileError);
  // error positions carry line/column
  try {
    parse_program("ok = 1\nbad = nope");
    FAIL("expected CompileError");
  } catch (const CompileError& e) {
    CHECK(e.diagnostic().line() == 2);
    CHECK(e.diagnostic().col() >= 7);
  }
}

TEST_CASE("set-function names resolve in program scope") {
  Program p = parse_program(
      "not False = True\n"
      "not True = False\n"
      "notf = notS failed");
  const FuncDef* notf = p.find_function("notf");
  REQUIRE(notf);
  CHECK(notf->rules[0].body->name == "notS");
  auto callee = resolve_callee(p, "notS");
  REQUIRE(callee);
  CHECK(callee->kind == Callee::Kind::SetFunction);
  CHECK(callee->def->name == "not");
  // plural names only resolve in entry scope
  CHECK_THROWS_AS(parse_program("f x = x\ng = fP 1"), CompileError);
  ExprPtr e = parse_entry_expr("fP 1", parse_program("f x = x"));
  CHECK(e->name == "fP");
}

TEST_CASE("pretty-print round trip") {
  const char* sources[] = {
      "coin = 0 ? 1",
      "not False = True\nnot True = False",
      "anyOf (x:xs) = x ? anyOf xs",
      "f x y = if x == 0 then y + 1 else f (x + 1) [y,2]\ng = f 1 2",
      "data Pair = P a b\nswap (P x y) = P y x",
      "h xs = h [] ? (1 ? 2 ? 3) + 4",
  };
  for (const char* src : sources) {
    CAPTURE(src);
    Program p1 = parse_program(src);
    std::string printed = pretty(p1);
    Program p2 = parse_program(printed);
    CHECK(ast_equal(p1, p2));
    // printing is a fixpoint
    CHECK(pretty(p2) == printed);
  }
}

TEST_CASE("uniformize anyOf adds failing Nil rule") {
  Program p = parse_program("anyOf (x:xs) = x ? anyOf xs");
  Program u = uniformize(p);
  const FuncDef* f = u.find_function("anyOf");
  REQUIRE(f);
  REQUIRE(f->rules.size() == 2);
  CHECK(f->rules[0].patterns[0].name == "[]");
  CHECK(f->rules[0].body->kind == ExprKind::Failed);
  CHECK(f->rules[1].patterns[0].name == ":");
  CHECK(validate_uniform(u).empty());
}

TEST_CASE("uniformize keeps uniform input unchanged") {
  Program p = parse_program("not False = True\nnot True = False");
  Program u = uniformize(p);
  CHECK(ast_equal(p, u));
}

TEST_CASE("uniformize is idempotent") {
  const char* sources[] = {
      "anyOf (x:xs) = x ? anyOf xs",
      "f x = 1\nf y = y\nf z = z + 2",
      "g [] y = y\ng (x:xs) y = x + g xs y",
      "h x (y:ys) = y\nh a b = 0",
  };
  for (const char* src : sources) {
    CAPTURE(src);
    Program u1 = uniformize(parse_program(src));
    Program u2 = uniformize(u1);
    CHECK(ast_equal(u1, u2));
    CHECK(validate_uniform(u1).empty());
  }
}

TEST_CASE("uniformize merges overlapping rules right-associatively") {
  Program u = uniformize(parse_program("f x = 1\nf y = y\nf z = z + 2"));
  const FuncDef* f = u.find_function("f");
  REQUIRE(f);
  REQUIRE(f->rules.size() == 1);
  const ExprPtr& b = f->rules[0].body;
  REQUIRE(b->kind == ExprKind::Choice);
  CHECK(b->args[0]->lit == 1);
  REQUIRE(b->args[1]->kind == ExprKind::Choice);
  CHECK(b->args[1]->args[0]->name == "x");
  CHECK(pretty(f->rules[0].body) == "1 ? x ? x + 2");
}

TEST_CASE("uniformize rejections") {
  CHECK_THROWS_WITH_AS(uniformize(parse_program("f x x = x")),
                       doctest::Contains("non-linear"), CompileError);
  CHECK_THROWS_WITH_AS(uniformize(parse_program("f [] [] = 1")),
                       doctest::Contains("more than one argument position"), CompileError);
  CHECK_THROWS_WITH_AS(uniformize(parse_program("f (x:[]) = x")),
                       doctest::Contains("nested pattern"), CompileError);
  CHECK_THROWS_WITH_AS(
      uniformize(parse_program("f [] = 1\nf (x:xs) = 2\nf True = 3")),
      doctest::Contains("different types"), CompileError);
}

TEST_CASE("validate_uniform diagnostics") {
  Program u = uniformize(parse_program("anyOf (x:xs) = x ? anyOf xs"));
  CHECK(validate_uniform(u).empty());

  // two rules for the same constructor
  Program p1 = parse_program("f [] = 1\nf [] = 2\nf (x:xs) = 3");
  auto d1 = validate_uniform(p1);
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].message.find("f") != std::string::npos);
  CHECK(d1[0].message.find("more than one rule") != std::string::npos);

  // repeated pattern variable
  Program p2 = parse_program("g x x = x");
  auto d2 = validate_uniform(p2);
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].message.find("non-linear") != std::string::npos);
}

TEST_CASE("mixed variable and constructor rules expand over all constructors") {
  Program u = uniformize(parse_program("f [] = 0\nf ys = 1"));
  const FuncDef* f = u.find_function("f");
  REQUIRE(f);
  REQUIRE(f->rules.size() == 2);
  // [] case combines both rules; (:) case only the variable rule
  CHECK(f->rules[0].body->kind == ExprKind::Choice);
  CHECK(f->rules[1].body->kind == ExprKind::Lit);
  CHECK(validate_uniform(u).empty());
}
