#include "nnquad/sobol.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nnquad/error.hpp"

#ifndef NNQUAD_DATA_DIR
#define NNQUAD_DATA_DIR "data"
#endif

namespace nnquad {

DirectionNumbers load_direction_numbers(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open direction-number file");
    std::vector<DirectionEntry> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long dim;
        DirectionEntry e;
        if (!(ls >> dim >> e.s >> e.a) || e.s < 1 || e.s > SobolSequence::bits)
            throw ParseError(path + ":" + std::to_string(lineno), "expected 'd s a m_1 ... m_s'");
        if (dim != static_cast<long>(entries.size()) + 2)
            throw ParseError(path + ":" + std::to_string(lineno), "dimensions must be listed in order starting at 2");
        for (int k = 0; k < e.s; ++k) {
            std::uint32_t mk;
            if (!(ls >> mk)) throw ParseError(path + ":" + std::to_string(lineno), "too few m values");
            if (mk % 2 == 0 || mk >= (std::uint64_t{1} << (k + 1)))
                throw ParseError(path + ":" + std::to_string(lineno), "m_" + std::to_string(k + 1) + " must be odd and < 2^" +
                                                                           std::to_string(k + 1));
            e.m.push_back(mk);
        }
        entries.push_back(std::move(e));
    }
    if (entries.empty()) throw ParseError(path, "no direction numbers found");
    return DirectionNumbers(std::move(entries));
}

std::string default_direction_path() {
    namespace fs = std::filesystem;
    const char* env = std::getenv("NNQUAD_DATA");
    fs::path p = env && *env ? fs::path(env) : fs::path(NNQUAD_DATA_DIR);
    if (fs::is_directory(p)) p /= "sobol_directions.txt";
    return p.string();
}

const DirectionNumbers& default_direction_numbers() {
    static const DirectionNumbers dn = load_direction_numbers(default_direction_path());
    return dn;
}

SobolSequence::SobolSequence(int dim, const DirectionNumbers& dn, bool include_origin)
    : dim_(dim), origin_pending_(include_origin), v_(bits * dim), x_(dim, 0) {
    if (dim < 1) throw InputError("Sobol dimension must be >= 1");
    if (dim > dn.max_dim())
        throw InputError("Sobol dimension " + std::to_string(dim) + " exceeds the " + std::to_string(dn.max_dim()) +
                         " dimensions in the direction-number data");
    for (int k = 0; k < bits; ++k) v_[k * dim] = std::uint32_t{1} << (bits - 1 - k);
    for (int j = 1; j < dim; ++j) {
        const auto& e = dn.entry(j + 1);
        const int s = e.s;
        std::vector<std::uint32_t> v(bits);
        for (int k = 0; k < std::min(s, bits); ++k) v[k] = e.m[k] << (bits - 1 - k);
        for (int k = s; k < bits; ++k) {
            std::uint32_t val = v[k - s] ^ (v[k - s] >> s);
            for (int i = 1; i < s; ++i)
                if ((e.a >> (s - 1 - i)) & 1u) val ^= v[k - i];
            v[k] = val;
        }
        for (int k = 0; k < bits; ++k) v_[k * dim + j] = v[k];
    }
}

void SobolSequence::next(double* out) {
    if (origin_pending_) {
        origin_pending_ = false;
        std::fill(out, out + dim_, 0.0);
        return;
    }
    if (index_ + 1 >= (std::uint64_t{1} << bits)) throw InputError("Sobol sequence exhausted (2^32 points)");
    // Bit to flip: trailing ones of the previous index.
    const int c = __builtin_ctzll(~index_);
    const std::uint32_t* v = &v_[static_cast<std::size_t>(c) * dim_];
    for (int j = 0; j < dim_; ++j) {
        x_[j] ^= v[j];
        out[j] = static_cast<double>(x_[j]) * 0x1p-32;
    }
    ++index_;
}

Eigen::MatrixXd SobolSequence::take(std::size_t n) {
    Eigen::MatrixXd pts(dim_, static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) next(pts.col(static_cast<Eigen::Index>(i)).data());
    return pts;
}

}  // namespace nnquad
