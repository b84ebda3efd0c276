#include <doctest.h>

#include <set>
#include <sstream>

#include "helpers.hpp"

using namespace nnquad;
using testing::Rng;

namespace {

Clause cl(std::initializer_list<int> lits) {
    std::vector<Literal> v;
    for (int l : lits) v.push_back({std::abs(l), l < 0});
    return Clause(v);
}

// Independent evaluator over DIMACS-style integer clauses.
bool eval_ints(const std::vector<std::vector<int>>& cs, std::uint64_t bits) {
    for (const auto& c : cs) {
        bool any = false;
        for (int l : c) any |= (((bits >> (std::abs(l) - 1)) & 1) == 1) == (l > 0);
        if (!any) return false;
    }
    return true;
}

std::vector<std::vector<int>> to_ints(const Formula& f) {
    std::vector<std::vector<int>> out;
    for (const auto& c : f.clauses()) {
        out.emplace_back();
        for (const auto& l : c.literals()) out.back().push_back(l.negated ? -l.var : l.var);
    }
    return out;
}

std::set<std::vector<int>> clause_set(const Formula& f) {
    auto v = to_ints(f);
    for (auto& c : v) std::sort(c.begin(), c.end());
    return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("interpretation of the introductory formula") {
    // (x1 or (x2 and not x3)) or (not x1 and x3) fails only at 000.
    const Formula f(3, {cl({1, 2, 3})});
    CHECK(f.interpret({false, true, true}));
    for (std::uint64_t b = 0; b < 8; ++b) {
        const bool x1 = b & 1, x2 = b & 2, x3 = b & 4;
        const bool direct = (x1 || (x2 && !x3)) || (!x1 && x3);
        CHECK(f.interpret(assignment_from_bits(b, 3)) == direct);
    }
}

TEST_CASE("trivial formulas") {
    const Formula empty(3, {});
    for (std::uint64_t b = 0; b < 8; ++b) CHECK(empty.interpret(assignment_from_bits(b, 3)));
    CHECK(count_models(empty) == 8);

    const Formula contra(1, {cl({1}), cl({-1})});
    CHECK_FALSE(brute_force_sat(contra));
    CHECK(count_models(contra) == 0);

    const Formula unit(1, {cl({1})});
    CHECK(brute_force_sat(unit));
    CHECK(count_models(unit) == 1);
    CHECK(unit.interpret({true}));
}

TEST_CASE("clauses normalise their literals") {
    const Clause c = cl({3, -1, 3});
    CHECK(c.size() == 2);
    CHECK(c.variables() == std::vector<int>{1, 3});
    // Complementary literals make an always-true clause.
    const Formula taut(2, {cl({1, -1})});
    CHECK(count_models(taut) == 4);
    CHECK_THROWS_AS(Clause({}), InputError);
    CHECK_THROWS_AS(Formula(2, {cl({3})}), InputError);
    // Duplicate clauses collapse.
    CHECK(Formula(2, {cl({1, 2}), cl({2, 1})}).num_clauses() == 1);
}

TEST_CASE("model counts agree with an independent evaluator") {
    Rng g(11);
    for (int t = 0; t < 50; ++t) {
        const Formula f = testing::random_cnf(g, 6, 3, 12);
        const auto ints = to_ints(f);
        std::uint64_t count = 0;
        for (std::uint64_t b = 0; b < 64; ++b) {
            const bool e = eval_ints(ints, b);
            count += e;
            CHECK(f.interpret(assignment_from_bits(b, 6)) == e);
        }
        CHECK(count_models(f) == count);
        CHECK(brute_force_sat(f) == (count > 0));
    }
    CHECK_THROWS_AS(count_models(Formula(31, {})), BudgetError);
}

TEST_CASE("DIMACS parsing") {
    const Formula f = parse_dimacs_string("p cnf 1 1\n1 0\n");
    CHECK(f.num_vars() == 1);
    REQUIRE(f.num_clauses() == 1);
    CHECK(f.clauses()[0] == cl({1}));

    const Formula g = parse_dimacs_string("c comment\np cnf 3 2\n1 -2\n 0 3\n0\n%\n0\n");
    CHECK(clause_set(g) == std::set<std::vector<int>>{{-2, 1}, {3}});

    CHECK_THROWS_AS(parse_dimacs_string("p cnf 2 1\n3 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs_string("p cnf 2\n1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs_string("p cnf 2 1\n1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs_string("1 0\np cnf 1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs_string("p cnf 2 2\n1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs_string("p cnf 2 1\n1 x 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs_string("p cnf 2 1\np cnf 2 1\n1 0\n"), ParseError);
    try {
        parse_dimacs_string("p cnf 2 1\n\n3 0\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.location.find(":3") != std::string::npos);
    }
    CHECK_THROWS_AS(load_dimacs("/nonexistent.cnf"), ParseError);
}

TEST_CASE("emit and parse round trip") {
    Rng g(12);
    for (int t = 0; t < 200; ++t) {
        const Formula f = testing::random_cnf(g, testing::uniform_int(g, 1, 8), 3, 10);
        const Formula back = parse_dimacs_string(emit_dimacs(f));
        CHECK(back.num_vars() == f.num_vars());
        CHECK(clause_set(back) == clause_set(f));
        CHECK(emit_dimacs(parse_dimacs_string(emit_dimacs(back))) == emit_dimacs(back));
    }
}

TEST_CASE("random formulas") {
    const Formula f = random_formula(4, 3, 5, 1);
    CHECK(f.num_vars() == 4);
    CHECK(f.num_clauses() == 5);
    CHECK(f.max_clause_size() <= 3);
    for (const auto& c : f.clauses()) CHECK(c.variables().size() == c.size());
    CHECK(emit_dimacs(random_formula(4, 3, 5, 1)) == emit_dimacs(f));
    CHECK(emit_dimacs(random_formula(4, 3, 5, 2)) != emit_dimacs(f));

    // 2 variables, clauses of size <= 1: x1, -x1, x2, -x2.
    CHECK(clause_space_size(2, 1) == 4);
    // Sum over j <= k of C(n, j) 2^j.
    CHECK(clause_space_size(4, 3) == 8 + 24 + 32);
    CHECK(random_formula(2, 1, 4, 3).num_clauses() == 4);
    CHECK_THROWS_AS(random_formula(2, 1, 5, 3), InputError);
}

TEST_CASE("exhaustive corpus") {
    // n = 1, k = 1: clauses x1, -x1; subsets of size <= 2.
    CHECK(exhaustive_formulas(1, 1, 2).size() == 4);
    // n = 2, k = 2: 8 clauses; subsets of size <= 2.
    CHECK(exhaustive_formulas(2, 2, 2).size() == 1 + 8 + 28);
    CHECK_THROWS_AS(exhaustive_formulas(5, 2, 1), BudgetError);
}
