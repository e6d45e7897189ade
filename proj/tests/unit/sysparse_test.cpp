#include <random>

#include "doctest.h"
#include "random_systems.hpp"
#include "slin/system.hpp"

using namespace slin;

namespace {

ParseError parse_failure(std::string_view text) {
  try {
    parse_system(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error for: " << text);
  throw std::logic_error("unreachable");
}

const char* const kExample1 =
    "vars: x1 x2 x3 x4 x5\n"
    "x1' = x2\n"
    "x2' = -x1\n"
    "x3' = x2^2\n"
    "x4' = x3 + x1*x2^2\n"
    "x5' = -x5 + x3^2 + x1^2*x2\n";

}  // namespace

TEST_CASE("parse the five-variable example") {
  const PolySystem sys = parse_system(kExample1);
  REQUIRE(sys.dimension() == 5);
  CHECK(sys.vars->names() == std::vector<std::string>{"x1", "x2", "x3", "x4", "x5"});
  CHECK(sys.rhs[4].str() == "-x5 + x3^2 + x1^2*x2");
  CHECK(sys.rhs[3] == parse_polynomial("x3 + x1*x2^2", sys.vars));
  CHECK(render_system(sys) == kExample1);
}

TEST_CASE("grammar features") {
  const auto sys = parse_system(
      "# leading comment\n"
      "\n"
      "vars: x y   # trailing comment\n"
      "y' = (x - 1/2)^2 * 3 - -y\n"
      "x' = 1485/2 / 5 * x^0\n");
  CHECK(sys.rhs[0].str() == "297/2");
  CHECK(sys.rhs[1] == parse_polynomial("3*x^2 - 3*x + 3/4 + y", sys.vars));
  CHECK(parse_system("vars: x\nx' = 0\n").rhs[0].is_zero());
  CHECK(render_system(parse_system("vars: x\nx' = 0\n")) == "vars: x\nx' = 0\n");
  CHECK(parse_polynomial("-x^2", make_space({"x"})).str() == "-x^2");
}

TEST_CASE("error kinds carry positions") {
  auto e = parse_failure("vars: x\nx' = 1/x\n");
  CHECK(e.kind() == ParseErrorKind::kNonPolynomial);
  CHECK(e.line() == 2);
  CHECK(e.column() == 7);

  e = parse_failure("vars: x\nx' = x + z\n");
  CHECK(e.kind() == ParseErrorKind::kUndeclaredVariable);
  CHECK(e.line() == 2);
  CHECK(e.column() == 10);

  CHECK(parse_failure("vars: x x\nx' = 1\n").kind() == ParseErrorKind::kDuplicateVariable);
  CHECK(parse_failure("vars: x\nx' = 1\nx' = 2\n").kind() == ParseErrorKind::kDuplicateEquation);
  e = parse_failure("vars: x y\nx' = 1\n");
  CHECK(e.kind() == ParseErrorKind::kMissingEquation);
  CHECK(e.reason().find('y') != std::string::npos);
  CHECK(parse_failure("vars: x\nx' = x^-1\n").kind() == ParseErrorKind::kNonPolynomial);
  CHECK(parse_failure("vars: x\nx' = x^(1/2)\n").kind() == ParseErrorKind::kNonPolynomial);
  CHECK(parse_failure("vars: x\nx' = 2x\n").kind() == ParseErrorKind::kSyntax);
  CHECK(parse_failure("vars: x\nx' = 0.5*x\n").kind() == ParseErrorKind::kSyntax);
  CHECK(parse_failure("vars: x\nx' = (x\n").kind() == ParseErrorKind::kSyntax);
  CHECK(parse_failure("vars: x\nx' = x/0\n").kind() == ParseErrorKind::kNonPolynomial);
  CHECK(parse_failure("x' = x\n").kind() == ParseErrorKind::kSyntax);
  CHECK(parse_failure("").kind() == ParseErrorKind::kSyntax);

  e = parse_failure("vars: x\n\nx' = x +\n");
  CHECK(e.line() == 3);
  const std::string what = e.what();
  CHECK(what.rfind("3:", 0) == 0);
}

TEST_CASE("render contains the motivating equation") {
  const auto sys = parse_system("vars: x y\nx' = -x + y^2\ny' = -y\n");
  CHECK(render_system(sys).find("x' = -x + y^2\n") != std::string::npos);
}

TEST_CASE("property: parse after render is the identity") {
  testing::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(testing::uniform_int(rng, 1, 5));
    const auto space = make_space(testing::numbered_names(n, trial % 2 ? "v" : "state_"));
    std::vector<Polynomial> rhs;
    for (std::size_t i = 0; i < n; ++i) rhs.push_back(testing::random_polynomial(rng, space, 6, 4));
    const PolySystem sys(space, rhs);
    const std::string text = render_system(sys);
    const PolySystem back = parse_system(text);
    REQUIRE(back.vars->names() == space->names());
    for (std::size_t i = 0; i < n; ++i) CHECK(back.rhs[i] == sys.rhs[i]);
    CHECK(render_system(back) == text);
  }
}
