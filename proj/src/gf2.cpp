#include "polarkit/gf2.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <optional>

#include "polarkit/error.hpp"

namespace polarkit {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

// Incremental GF(2) basis over vectors of `words` 64-bit words, kept in
// echelon form keyed by each vector's lowest set bit.
class SpanBasis {
public:
    explicit SpanBasis(std::size_t words) : words_(words) {}

    void reduce(std::vector<std::uint64_t>& v) const
    {
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            const std::size_t p = pivots_[k];
            if ((v[p / 64] >> (p % 64)) & 1U)
                for (std::size_t w = 0; w < words_; ++w)
                    v[w] ^= basis_[k][w];
        }
    }

    void insert(std::vector<std::uint64_t> v)
    {
        reduce(v);
        for (std::size_t w = 0; w < words_; ++w)
            if (v[w]) {
                const std::size_t p = w * 64 + static_cast<std::size_t>(std::countr_zero(v[w]));
                // Clear the new pivot from existing vectors to keep reduce() single-pass.
                for (auto& b : basis_)
                    if ((b[p / 64] >> (p % 64)) & 1U)
                        for (std::size_t x = 0; x < words_; ++x)
                            b[x] ^= v[x];
                basis_.push_back(std::move(v));
                pivots_.push_back(p);
                return;
            }
    }

    bool contains(std::vector<std::uint64_t> v) const
    {
        reduce(v);
        return std::all_of(v.begin(), v.end(), [](std::uint64_t w) { return w == 0; });
    }

private:
    std::size_t words_;
    std::vector<std::vector<std::uint64_t>> basis_;
    std::vector<std::size_t> pivots_;
};

// Can rows [first, n) be matched to distinct unused columns through 1-entries?
bool completes_matching(const BitMatrix& g, std::size_t first, const std::vector<bool>& used)
{
    const std::size_t n = g.rows();
    std::vector<std::size_t> owner(n, n);  // column -> row, n = free
    std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t r, std::vector<bool>& seen) {
        for (std::size_t c = 0; c < n; ++c) {
            if (!g.get(r, c) || used[c] || seen[c])
                continue;
            seen[c] = true;
            if (owner[c] == n || augment(owner[c], seen)) {
                owner[c] = r;
                return true;
            }
        }
        return false;
    };
    for (std::size_t r = first; r < n; ++r) {
        std::vector<bool> seen(n, false);
        if (!augment(r, seen))
            return false;
    }
    return true;
}

void require_kernel(const BitMatrix& g)
{
    if (!g.square() || g.rows() < 1)
        throw InvalidArgument("kernel must be a non-empty square matrix");
    if (g.rows() > 64)
        throw InvalidArgument("kernels larger than 64x64 are not supported");
}

}  // namespace

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), words_(rows * stride_, 0)
{
    if (rows == 0 || cols == 0)
        throw InvalidArgument("matrix dimensions must be positive");
}

BitMatrix BitMatrix::identity(std::size_t n)
{
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i, true);
    return m;
}

BitMatrix BitMatrix::from_rows(std::span<const std::string> rows)
{
    if (rows.empty() || rows.front().empty())
        throw InvalidArgument("matrix needs at least one non-empty row");
    BitMatrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols())
            throw InvalidArgument("matrix rows have unequal lengths");
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const char ch = rows[r][c];
            if (ch != '0' && ch != '1')
                throw InvalidArgument(std::string("matrix entries must be 0 or 1, got '") + ch + "'");
            m.set(r, c, ch == '1');
        }
    }
    return m;
}

BitMatrix BitMatrix::from_rows(std::initializer_list<std::string_view> rows)
{
    std::vector<std::string> copy(rows.begin(), rows.end());
    return from_rows(std::span<const std::string>(copy));
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) noexcept
{
    std::uint64_t& w = words_[r * stride_ + c / 64];
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    w = value ? (w | bit) : (w & ~bit);
}

std::size_t BitMatrix::row_weight(std::size_t r) const noexcept
{
    std::size_t weight = 0;
    for (std::uint64_t w : row_words(r))
        weight += static_cast<std::size_t>(std::popcount(w));
    return weight;
}

std::vector<std::string> BitMatrix::row_strings() const
{
    std::vector<std::string> out(rows_, std::string(cols_, '0'));
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (get(r, c))
                out[r][c] = '1';
    return out;
}

BitMatrix permute_columns(const BitMatrix& g, const ColumnPermutation& sigma)
{
    if (sigma.mapping.size() != g.cols())
        throw InvalidArgument("column permutation size does not match matrix");
    BitMatrix out(g.rows(), g.cols());
    for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c)
            out.set(r, c, g.get(r, sigma.mapping[c]));
    return out;
}

std::size_t gf2_rank(const BitMatrix& m)
{
    const std::size_t words = m.row_words(0).size();
    SpanBasis basis(words);
    std::size_t rank = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::vector<std::uint64_t> row(m.row_words(r).begin(), m.row_words(r).end());
        if (!basis.contains(row)) {
            basis.insert(std::move(row));
            ++rank;
        }
    }
    return rank;
}

bool is_invertible(const BitMatrix& m)
{
    return m.square() && gf2_rank(m) == m.rows();
}

ColumnPermutation unit_diagonalize(const BitMatrix& g)
{
    if (!is_invertible(g))
        throw PreconditionError("kernel is not invertible over GF(2)");
    const std::size_t n = g.rows();
    std::vector<bool> used(n, false);
    ColumnPermutation sigma{std::vector<std::size_t>(n)};
    for (std::size_t r = 0; r < n; ++r) {
        bool placed = false;
        for (std::size_t c = 0; c < n && !placed; ++c) {
            if (!g.get(r, c) || used[c])
                continue;
            used[c] = true;
            if (completes_matching(g, r + 1, used)) {
                sigma.mapping[r] = c;
                placed = true;
            } else {
                used[c] = false;
            }
        }
        if (!placed)
            throw PreconditionError("no unit-diagonal column permutation exists");
    }
    return sigma;
}

namespace {

// Shared bottom-up reduction; returns the first residual row with weight >= 2.
std::optional<ReductionWeight> reduce_from_bottom(const BitMatrix& g)
{
    require_kernel(g);
    const BitMatrix diag = permute_columns(g, unit_diagonalize(g));
    const std::size_t n = diag.rows();
    std::uint64_t active = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    for (std::size_t r = n; r-- > 1;) {
        const std::uint64_t residual = diag.row_mask(r) & active;
        const auto weight = static_cast<std::size_t>(std::popcount(residual));
        if (weight >= 2)
            return ReductionWeight{r, weight};
        active &= ~residual;
    }
    return std::nullopt;
}

}  // namespace

bool is_polarizing(const BitMatrix& g)
{
    return reduce_from_bottom(g).has_value();
}

ReductionWeight last_reduction_weight(const BitMatrix& g)
{
    auto found = reduce_from_bottom(g);
    if (!found)
        throw PreconditionError("kernel is not polarizing");
    return *found;
}

Bits kron_encode(std::span<const BitMatrix> kernels, std::span<const std::uint8_t> u, OpCounter* counter)
{
    std::size_t n = 1;
    for (const auto& g : kernels) {
        require_kernel(g);
        n *= g.rows();
    }
    if (u.size() != n)
        throw InvalidArgument("input length " + std::to_string(u.size()) + " does not match blocklength " + std::to_string(n));

    Bits x(u.begin(), u.end());
    std::size_t stride = n;
    for (const auto& g : kernels) {
        const std::size_t l = g.rows();
        const std::size_t block = stride;
        stride /= l;
        for (std::size_t start = 0; start < n; start += block)
            for (std::size_t b = 0; b < stride; ++b) {
                std::uint64_t out = 0;
                for (std::size_t a = 0; a < l; ++a)
                    if (x[start + a * stride + b])
                        out ^= g.row_mask(a);
                for (std::size_t a = 0; a < l; ++a)
                    x[start + a * stride + b] = static_cast<std::uint8_t>((out >> a) & 1U);
                if (counter)
                    counter->ops += 2 * l;
            }
    }
    return x;
}

Bits kron_encode(const BitMatrix& g, std::size_t levels, std::span<const std::uint8_t> u, OpCounter* counter)
{
    std::vector<BitMatrix> kernels(levels, g);
    return kron_encode(kernels, u, counter);
}

BitMatrix kron_product(const BitMatrix& a, const BitMatrix& b)
{
    BitMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t r1 = 0; r1 < a.rows(); ++r1)
        for (std::size_t c1 = 0; c1 < a.cols(); ++c1) {
            if (!a.get(r1, c1))
                continue;
            for (std::size_t r2 = 0; r2 < b.rows(); ++r2)
                for (std::size_t c2 = 0; c2 < b.cols(); ++c2)
                    if (b.get(r2, c2))
                        out.set(r1 * b.rows() + r2, c1 * b.cols() + c2, true);
        }
    return out;
}

BitMatrix kron_power(const BitMatrix& g, std::size_t levels)
{
    constexpr std::size_t kCap = 4096;
    std::size_t size = 1;
    for (std::size_t t = 0; t < levels; ++t) {
        size *= g.rows();
        if (size > kCap)
            throw CapacityError("Kronecker power exceeds 4096 rows");
    }
    BitMatrix out = BitMatrix::identity(1);
    for (std::size_t t = 0; t < levels; ++t)
        out = kron_product(out, g);
    return out;
}

Bits multiply(std::span<const std::uint8_t> u, const BitMatrix& m)
{
    if (u.size() != m.rows())
        throw InvalidArgument("vector length does not match matrix rows");
    std::vector<std::uint64_t> acc(m.row_words(0).size(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (u[r]) {
            const auto row = m.row_words(r);
            for (std::size_t w = 0; w < acc.size(); ++w)
                acc[w] ^= row[w];
        }
    Bits x(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c)
        x[c] = static_cast<std::uint8_t>((acc[c / 64] >> (c % 64)) & 1U);
    return x;
}

bool is_recoverable(const BitMatrix& g, std::size_t i, std::span<const std::size_t> unerased)
{
    if (i >= g.rows())
        throw InvalidArgument("channel index out of range");
    const std::size_t height = g.rows() - i;
    const std::size_t words = words_for(height);
    SpanBasis basis(words);
    for (std::size_t c : unerased) {
        if (c >= g.cols())
            throw InvalidArgument("column index out of range");
        std::vector<std::uint64_t> column(words, 0);
        for (std::size_t r = 0; r < height; ++r)
            if (g.get(i + r, c))
                column[r / 64] |= std::uint64_t{1} << (r % 64);
        basis.insert(std::move(column));
    }
    std::vector<std::uint64_t> target(words, 0);
    target[0] = 1;
    return basis.contains(std::move(target));
}

bool is_recoverable(const BitMatrix& g, std::size_t i, std::uint64_t unerased)
{
    if (g.cols() > 64)
        throw InvalidArgument("mask form of is_recoverable needs at most 64 columns");
    std::vector<std::size_t> columns;
    for (std::size_t c = 0; c < g.cols(); ++c)
        if ((unerased >> c) & 1U)
            columns.push_back(c);
    return is_recoverable(g, i, columns);
}

}  // namespace polarkit
