#include <functional>
#include <random>

#include "core/error.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "parser/domain_parser.hpp"
#include "parser/sexpr.hpp"

using namespace bcr;
using bcr::testing::kitchen_domain;
using bcr::testing::milk_domain;
using bcr::testing::task;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kIo;
}

const char* kProblemHead = "(define (problem p) (:domain milk) (:objects milk - item counter - surface)";

}  // namespace

TEST_CASE("sexpr reader") {
  auto e = parser::read_sexpr("; comment\n(a (b c) d)");
  CHECK(e.is_list);
  CHECK(e.items.size() == 3);
  CHECK(e.items[1].items[1].is_symbol("c"));
  CHECK(e.items[1].pos.line == 2);
  CHECK_THROWS_AS(parser::read_sexpr("(a b"), parser::ParseError);
  CHECK_THROWS_AS(parser::read_sexpr("(a) b"), parser::ParseError);
  CHECK_THROWS_AS(parser::read_sexpr(")"), parser::ParseError);
}

TEST_CASE("kitchen domain vocabulary") {
  const auto& d = kitchen_domain();
  CHECK(d.name == "kitchen");
  for (const char* s : {"grab", "put", "putin", "open", "close", "walk_to_object", "walk_to_room",
                        "scanroom", "toggle_on", "slice", "turnleft", "turnright", "moveforward",
                        "movebackward", "lookup", "lookdown"})
    CHECK_MESSAGE(d.schema(s) != nullptr, s);
  CHECK(d.schemas.size() == 16);
  CHECK(d.schema("scanroom")->repeatable);
  CHECK_FALSE(d.schema("grab")->repeatable);
  CHECK(d.schema("grab")->blocking_conditions.size() == 2);
}

TEST_CASE("domain errors") {
  CHECK(code_of([] { parser::parse_domain("(define (domain d))"); }) == ErrorCode::kValidation);
  try {
    parser::parse_domain("(define (domain d)\n  (:action grab :effects");
    FAIL("expected syntax error");
  } catch (const parser::ParseError& e) {
    CHECK(e.pos().line == 2);
    CHECK(e.code() == ErrorCode::kSyntax);
  }
  // Unknown keywords are rejected, not skipped.
  CHECK(code_of([] {
          parser::parse_domain(
              "(define (domain d) (:categories item) (:predicates (p ?x - item))"
              " (:action a :parameters (?x - item) :speed 3 :effects (((p ?x) true))))");
        }) == ErrorCode::kSyntax);
  // Empty resolution.
  CHECK(code_of([] {
          parser::parse_domain(
              "(define (domain d) (:categories item) (:predicates (p ?x - item))"
              " (:action a :parameters (?x - item) :effects (((p ?x) true))"
              " :blocked-when (:condition c :trigger (((p ?x) false)) :resolution ())))");
        }) == ErrorCode::kValidation);
}

TEST_CASE("problems") {
  CHECK(task("apple").goal == std::vector<Literal>{{{"Inside", {"apple_1", "fridge_1"}}, TruthValue::kTrue}});
  CHECK(task("milk").goal == std::vector<Literal>{{{"On", {"milk", "counter"}}, TruthValue::kTrue}});
  const auto& d = milk_domain();
  CHECK(code_of([&] {
          parser::parse_problem(std::string(kProblemHead) + " (:known) (:goal ((On unicorn counter) true)))", d);
        }) == ErrorCode::kUnknownInstance);
  CHECK(code_of([&] {
          parser::parse_problem(std::string(kProblemHead) + " (:known) (:goal ((Flies milk) true)))", d);
        }) == ErrorCode::kUnknownPredicate);
  CHECK(code_of([&] {
          parser::parse_problem(std::string(kProblemHead) + " (:known) (:goal ((On milk) true)))", d);
        }) == ErrorCode::kArityMismatch);
}

TEST_CASE("round trips") {
  for (const Domain* d : {&kitchen_domain(), &milk_domain()}) {
    const auto text = parser::render_domain(*d);
    CHECK(parser::parse_domain(text) == *d);
  }
  for (const char* t : {"coffee", "apple", "mug", "toast", "milk"}) {
    const auto p = task(t);
    const Domain& d = p.domain_name == "milk" ? milk_domain() : kitchen_domain();
    CHECK(parser::parse_problem(parser::render_problem(p), d) == p);
  }
}

TEST_CASE("action strings round-trip over every kitchen grounding") {
  const auto& d = kitchen_domain();
  const auto inst = declared_instances(d, task("toast"));
  const auto all = all_groundings(d, inst);
  CHECK(all.size() < 10000);
  for (const auto& a : all) {
    const auto s = parser::render_action(a);
    REQUIRE(parser::parse_action(s, d, inst) == a);
    REQUIRE(parser::render_action(parser::parse_action(s, d, inst)) == s);
  }
  CHECK(parser::render_action({"walk_to_object", {"fridge_1"}}) == "walk_to_object fridge_1");
  CHECK(parser::parse_action("open fridge_1", d, inst) == GroundedAction{"open", {"fridge_1"}});
  CHECK(code_of([&] { parser::parse_action("grab", d, inst); }) == ErrorCode::kArityMismatch);
  CHECK(code_of([&] { parser::parse_action("fly mug_1", d, inst); }) == ErrorCode::kUnknownSchema);
  CHECK(code_of([&] { parser::parse_action("grab unicorn", d, inst); }) == ErrorCode::kUnknownInstance);
}

TEST_CASE("arbitrary bytes never crash the reader") {
  std::mt19937_64 rng(7);
  const std::string alphabet = "()(); \n\t:?-abc";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const int n = static_cast<int>(rng() % 40);
    for (int k = 0; k < n; ++k)
      s += (rng() % 4 == 0) ? static_cast<char>(rng() % 256) : alphabet[rng() % alphabet.size()];
    try {
      parser::parse_domain(s);
    } catch (const parser::ParseError& e) {
      CHECK(e.pos().line >= 1);
      CHECK(e.pos().column >= 1);
    } catch (const Error&) {
    }
  }
}
