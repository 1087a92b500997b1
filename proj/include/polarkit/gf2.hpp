#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polarkit {

using Bits = std::vector<std::uint8_t>;

/// Dense matrix over GF(2), rows packed into 64-bit words (bit c of a row is
/// column c). Kernels are square; rectangular matrices appear as span checks.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t n);
    // One string of '0'/'1' per row.
    static BitMatrix from_rows(std::span<const std::string> rows);
    static BitMatrix from_rows(std::initializer_list<std::string_view> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    bool get(std::size_t r, std::size_t c) const noexcept { return (words_[r * stride_ + c / 64] >> (c % 64)) & 1U; }
    void set(std::size_t r, std::size_t c, bool value) noexcept;
    std::size_t row_weight(std::size_t r) const noexcept;

    // Row r as a mask; requires cols() <= 64.
    std::uint64_t row_mask(std::size_t r) const noexcept { return words_[r * stride_]; }
    std::span<const std::uint64_t> row_words(std::size_t r) const noexcept { return {words_.data() + r * stride_, stride_}; }

    std::vector<std::string> row_strings() const;

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Column j of the permuted matrix is column mapping[j] of the original.
struct ColumnPermutation {
    std::vector<std::size_t> mapping;

    friend bool operator==(const ColumnPermutation&, const ColumnPermutation&) = default;
};

BitMatrix permute_columns(const BitMatrix& g, const ColumnPermutation& sigma);

std::size_t gf2_rank(const BitMatrix& m);
bool is_invertible(const BitMatrix& m);

/// Column permutation sigma with (G sigma)_{ii} = 1 for all i: a perfect
/// matching of rows to columns through 1-entries. Returns the
/// lexicographically smallest such mapping. Throws PreconditionError for a
/// singular G.
ColumnPermutation unit_diagonalize(const BitMatrix& g);

/// Peels rows off the bottom of the unit-diagonalized kernel: a residual
/// last row of weight >= 2 means the kernel polarizes; a weight-1 row is
/// removed together with its column. Reaching a single row means the
/// kernel is a column permutation of an upper-triangular matrix.
bool is_polarizing(const BitMatrix& g);

struct ReductionWeight {
    std::size_t index;  // 0-based row / synthesized-channel index
    std::size_t weight; // residual row weight k >= 2

    friend bool operator==(const ReductionWeight&, const ReductionWeight&) = default;
};

// First row (from the bottom) whose residual weight is at least 2; the
// synthesized channel at that index is equivalent to k copies of W.
// Throws PreconditionError for non-polarizing or singular kernels.
ReductionWeight last_reduction_weight(const BitMatrix& g);

struct OpCounter {
    std::uint64_t ops = 0;
};

/// x = u (G_1 (x) G_2 (x) ... (x) G_n) over GF(2) without forming the
/// Kronecker product. Index digits are most-significant-first, digit t
/// belonging to kernel t. An empty kernel list is the identity on 1 bit.
Bits kron_encode(std::span<const BitMatrix> kernels, std::span<const std::uint8_t> u, OpCounter* counter = nullptr);
Bits kron_encode(const BitMatrix& g, std::size_t levels, std::span<const std::uint8_t> u, OpCounter* counter = nullptr);

BitMatrix kron_product(const BitMatrix& a, const BitMatrix& b);
// Explicit G^(x)n; the result is capped at 4096 rows.
BitMatrix kron_power(const BitMatrix& g, std::size_t levels);

// Row vector times matrix.
Bits multiply(std::span<const std::uint8_t> u, const BitMatrix& m);

/// With u_0..u_{i-1} known and u_i..u_{l-1} unknown, is u_i determined by
/// the codeword coordinates in `unerased`? Equivalently: is e_1 in the span
/// of the columns G[i.., j] for j in `unerased`?
bool is_recoverable(const BitMatrix& g, std::size_t i, std::span<const std::size_t> unerased);
// Same, with `unerased` as a column bitmask; requires cols() <= 64.
bool is_recoverable(const BitMatrix& g, std::size_t i, std::uint64_t unerased);

}  // namespace polarkit
