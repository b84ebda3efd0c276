#include "nnquad/cnf.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace nnquad {

Clause::Clause(std::vector<Literal> lits) : lits_(std::move(lits)) {
    if (lits_.empty()) throw InputError("clause must contain at least one literal");
    for (const auto& l : lits_)
        if (l.var < 1) throw InputError("literal variable index must be >= 1");
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
}

bool Clause::eval(const std::vector<bool>& x) const {
    return std::any_of(lits_.begin(), lits_.end(), [&](const Literal& l) { return l.eval(x); });
}

std::vector<int> Clause::variables() const {
    std::vector<int> v;
    for (const auto& l : lits_)
        if (v.empty() || v.back() != l.var) v.push_back(l.var);
    return v;
}

Formula::Formula(int n, std::vector<Clause> clauses) : n_(n) {
    if (n < 1) throw InputError("formula needs at least one variable");
    std::set<Clause> seen;
    for (auto& c : clauses) {
        for (const auto& l : c.literals())
            if (l.var > n)
                throw InputError("literal x" + std::to_string(l.var) + " exceeds n = " + std::to_string(n));
        if (seen.insert(c).second) clauses_.push_back(std::move(c));
    }
}

int Formula::max_clause_size() const {
    std::size_t k = 0;
    for (const auto& c : clauses_) k = std::max(k, c.size());
    return static_cast<int>(k);
}

bool Formula::interpret(const std::vector<bool>& x) const {
    if (static_cast<int>(x.size()) != n_) throw InputError("assignment length != number of variables");
    return std::all_of(clauses_.begin(), clauses_.end(), [&](const Clause& c) { return c.eval(x); });
}

std::vector<bool> assignment_from_bits(std::uint64_t bits, int n) {
    std::vector<bool> x(n);
    for (int i = 0; i < n; ++i) x[i] = (bits >> i) & 1u;
    return x;
}

namespace {

void check_enumerable(const Formula& f) {
    if (f.num_vars() > 30) throw BudgetError("brute-force enumeration limited to n <= 30");
}

}  // namespace

bool brute_force_sat(const Formula& f) {
    check_enumerable(f);
    const std::uint64_t total = std::uint64_t{1} << f.num_vars();
    for (std::uint64_t b = 0; b < total; ++b)
        if (f.interpret(assignment_from_bits(b, f.num_vars()))) return true;
    return false;
}

std::uint64_t count_models(const Formula& f) {
    check_enumerable(f);
    const std::uint64_t total = std::uint64_t{1} << f.num_vars();
    std::uint64_t c = 0;
    for (std::uint64_t b = 0; b < total; ++b) c += f.interpret(assignment_from_bits(b, f.num_vars()));
    return c;
}

Formula parse_dimacs(std::istream& in, const std::string& source) {
    std::string line;
    int lineno = 0;
    long n = -1, m = -1;
    std::vector<Clause> clauses;
    std::vector<Literal> current;
    int current_line = 0;
    auto where = [&](int ln) { return source + ":" + std::to_string(ln); };
    bool done = false;
    while (!done && std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") continue;
        if (tok == "%") break;  // SATLIB trailer
        if (tok == "p") {
            std::string fmt, extra;
            if (n >= 0) throw ParseError(where(lineno), "duplicate problem line");
            if (!(ls >> fmt >> n >> m) || fmt != "cnf" || n < 1 || m < 0 || (ls >> extra))
                throw ParseError(where(lineno), "malformed header, expected 'p cnf <vars> <clauses>'");
            continue;
        }
        if (n < 0) throw ParseError(where(lineno), "clause before the 'p cnf' header");
        ls.clear();
        ls.str(line);
        while (ls >> tok) {
            long v = 0;
            std::size_t used = 0;
            try {
                v = std::stol(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) throw ParseError(where(lineno), "invalid literal '" + tok + "'");
            if (v == 0) {
                if (current.empty()) throw ParseError(where(lineno), "empty clause");
                clauses.emplace_back(std::move(current));
                current.clear();
                continue;
            }
            if (std::labs(v) > n)
                throw ParseError(where(lineno), "variable " + std::to_string(std::labs(v)) + " exceeds declared n = " +
                                                    std::to_string(n));
            if (current.empty()) current_line = lineno;
            current.push_back({static_cast<int>(std::labs(v)), v < 0});
        }
    }
    if (n < 0) throw ParseError(where(lineno), "missing 'p cnf' header");
    if (!current.empty()) throw ParseError(where(current_line), "clause is missing its terminating 0");
    if (static_cast<long>(clauses.size()) != m)
        throw ParseError(where(lineno), "header declares " + std::to_string(m) + " clauses, found " +
                                            std::to_string(clauses.size()));
    return Formula(static_cast<int>(n), std::move(clauses));
}

Formula parse_dimacs_string(const std::string& text) {
    std::istringstream in(text);
    return parse_dimacs(in);
}

Formula load_dimacs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open file");
    return parse_dimacs(in, path);
}

std::string emit_dimacs(const Formula& f) {
    std::ostringstream out;
    out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
    for (const auto& c : f.clauses()) {
        for (const auto& l : c.literals()) out << (l.negated ? -l.var : l.var) << ' ';
        out << "0\n";
    }
    return out.str();
}

namespace {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

// All clauses with 1..k literals on distinct variables out of 1..n.
std::vector<Clause> all_clauses(int n, int k) {
    std::vector<Clause> out;
    const int kk = std::min(k, n);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        const int size = __builtin_popcount(mask);
        if (size > kk) continue;
        std::vector<int> vars;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1u) vars.push_back(i + 1);
        for (std::uint32_t signs = 0; signs < (1u << size); ++signs) {
            std::vector<Literal> lits;
            for (int j = 0; j < size; ++j) lits.push_back({vars[j], static_cast<bool>(signs >> j & 1u)});
            out.emplace_back(std::move(lits));
        }
    }
    return out;
}

}  // namespace

std::uint64_t clause_space_size(int n, int k) {
    std::uint64_t s = 0;
    for (int j = 1; j <= std::min(k, n); ++j) s += binomial(n, j) << j;
    return s;
}

Formula random_formula(int n, int k, std::size_t m, std::uint64_t seed) {
    if (n < 1 || k < 1) throw InputError("random_formula: n and k must be positive");
    const std::uint64_t space = clause_space_size(n, k);
    if (m > space)
        throw InputError("random_formula: m = " + std::to_string(m) + " exceeds the " + std::to_string(space) +
                         " distinct clauses available");
    std::mt19937_64 rng(seed);
    std::vector<Clause> chosen;
    if (n <= 16 && 2 * m > space) {
        auto all = all_clauses(n, k);
        std::shuffle(all.begin(), all.end(), rng);
        chosen.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(m));
        return Formula(n, std::move(chosen));
    }
    std::set<Clause> seen;
    std::uniform_int_distribution<int> size_d(1, std::min(k, n));
    std::vector<int> vars(n);
    for (int i = 0; i < n; ++i) vars[i] = i + 1;
    while (chosen.size() < m) {
        const int size = size_d(rng);
        for (int j = 0; j < size; ++j) std::swap(vars[j], vars[std::uniform_int_distribution<int>(j, n - 1)(rng)]);
        std::vector<Literal> lits;
        for (int j = 0; j < size; ++j) lits.push_back({vars[j], static_cast<bool>(rng() & 1u)});
        Clause c(std::move(lits));
        if (seen.insert(c).second) chosen.push_back(std::move(c));
    }
    return Formula(n, std::move(chosen));
}

std::vector<Formula> exhaustive_formulas(int n, int k, int max_clauses) {
    if (n > 4) throw BudgetError("exhaustive_formulas limited to n <= 4");
    const auto all = all_clauses(n, k);
    std::vector<Formula> out;
    std::vector<std::size_t> idx;
    // Enumerate index subsets of size 0..max_clauses in lexicographic order.
    auto rec = [&](auto&& self, std::size_t start) -> void {
        std::vector<Clause> cs;
        for (auto i : idx) cs.push_back(all[i]);
        out.emplace_back(n, std::move(cs));
        if (static_cast<int>(idx.size()) == max_clauses) return;
        for (std::size_t i = start; i < all.size(); ++i) {
            idx.push_back(i);
            self(self, i + 1);
            idx.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace nnquad
