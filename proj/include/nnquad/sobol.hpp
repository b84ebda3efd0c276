#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nnquad {

// Primitive polynomial data for one dimension (Joe-Kuo layout: s, a, m_1..m_s).
struct DirectionEntry {
    int s = 0;
    std::uint32_t a = 0;
    std::vector<std::uint32_t> m;
};

class DirectionNumbers {
public:
    // Entry j describes dimension j + 2; dimension 1 is implicit.
    explicit DirectionNumbers(std::vector<DirectionEntry> entries) : entries_(std::move(entries)) {}
    int max_dim() const { return static_cast<int>(entries_.size()) + 1; }
    const DirectionEntry& entry(int dim) const { return entries_.at(static_cast<std::size_t>(dim - 2)); }

private:
    std::vector<DirectionEntry> entries_;
};

DirectionNumbers load_direction_numbers(const std::string& path);
// Path from NNQUAD_DATA (file or directory) or the bundled data file.
std::string default_direction_path();
const DirectionNumbers& default_direction_numbers();

// Unscrambled Sobol points in Gray-code order. With include_origin the first point is 0, so every
// prefix of length 2^k is a full digital net; otherwise the sequence starts at index 1.
class SobolSequence {
public:
    static constexpr int bits = 32;

    explicit SobolSequence(int dim, const DirectionNumbers& dn = default_direction_numbers(),
                           bool include_origin = true);

    int dim() const { return dim_; }
    std::uint64_t index() const { return index_; }
    void next(double* out);
    // Next n points as columns of a dim x n matrix.
    Eigen::MatrixXd take(std::size_t n);

private:
    int dim_;
    std::uint64_t index_ = 0;  // Gray-code index of the last point
    bool origin_pending_ = false;
    std::vector<std::uint32_t> v_;  // bits x dim direction integers
    std::vector<std::uint32_t> x_;
};

}  // namespace nnquad
