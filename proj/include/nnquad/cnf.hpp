#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nnquad/error.hpp"

namespace nnquad {

// Variable index is 1-based; negated means the literal is 1 - x.
struct Literal {
    int var = 1;
    bool negated = false;

    bool eval(const std::vector<bool>& x) const { return x[var - 1] != negated; }
    auto operator<=>(const Literal&) const = default;
};

// Disjunction of literals; stored sorted and without repeats, never empty.
class Clause {
public:
    explicit Clause(std::vector<Literal> lits);
    const std::vector<Literal>& literals() const { return lits_; }
    std::size_t size() const { return lits_.size(); }
    bool eval(const std::vector<bool>& x) const;
    // Distinct variables, ascending.
    std::vector<int> variables() const;
    auto operator<=>(const Clause&) const = default;

private:
    std::vector<Literal> lits_;
};

// Conjunction of clauses over variables 1..n.
class Formula {
public:
    Formula(int n, std::vector<Clause> clauses);
    int num_vars() const { return n_; }
    const std::vector<Clause>& clauses() const { return clauses_; }
    std::size_t num_clauses() const { return clauses_.size(); }
    // Largest clause size.
    int max_clause_size() const;
    bool interpret(const std::vector<bool>& x) const;

private:
    int n_;
    std::vector<Clause> clauses_;
};

// Assignment with bit i (LSB first) giving x_{i+1}.
std::vector<bool> assignment_from_bits(std::uint64_t bits, int n);

bool brute_force_sat(const Formula& f);
std::uint64_t count_models(const Formula& f);

Formula parse_dimacs(std::istream& in, const std::string& source = "<dimacs>");
Formula parse_dimacs_string(const std::string& text);
Formula load_dimacs(const std::string& path);
std::string emit_dimacs(const Formula& f);

// Number of distinct clauses with between 1 and k literals on distinct variables.
std::uint64_t clause_space_size(int n, int k);

// m distinct clauses, each with 1..k literals on distinct variables.
Formula random_formula(int n, int k, std::size_t m, std::uint64_t seed);

// Every formula over n variables with at most max_clauses clauses of size <= k.
std::vector<Formula> exhaustive_formulas(int n, int k, int max_clauses);

}  // namespace nnquad
